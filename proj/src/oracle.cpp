#include "raipp/oracle.hpp"

#include <stdexcept>

namespace raipp {

bool check_eps_subgradient(const ProblemOracle& oracle, double lambda,
                           const Vec& z_minus, const Vec& z, const Vec& w,
                           double eps, const std::vector<Vec>& samples) {
  if (eps < 0.0) throw std::invalid_argument("eps must be nonnegative");
  const double base =
      lambda * oracle.phi(z) + 0.5 * (z - z_minus).squaredNorm();
  if (base == kInf) throw std::invalid_argument("z outside dom h");
  for (const Vec& u : samples) {
    const double hu = oracle.nonsmooth_value(u);
    if (hu == kInf) continue;  // vacuous at +inf
    const double lhs =
        lambda * (oracle.smooth_value(u) + hu) +
        0.5 * (u - z_minus).squaredNorm();
    const double rhs = base + w.dot(u - z) - eps;
    // absolute + relative slack for float cancellation
    if (lhs < rhs - 1e-10 * (1.0 + std::abs(rhs))) return false;
  }
  return true;
}

}  // namespace raipp
