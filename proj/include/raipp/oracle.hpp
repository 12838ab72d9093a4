#ifndef RAIPP_ORACLE_HPP
#define RAIPP_ORACLE_HPP

#include <functional>
#include <limits>
#include <vector>

#include "raipp/point.hpp"

namespace raipp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Composite objective phi = g + h given as callable oracles.
//
// smooth_*      : g value / gradient, defined on dom h.
// nonsmooth_value: h, may return +inf outside dom h.
// nonsmooth_prox : u -> argmin_x { h(x) + ||x - u||^2 / (2 s) }.
// (m, M)        : lower / upper curvature of g, M >= m > 0.
struct ProblemOracle {
  std::function<double(const Vec&)> smooth_value;
  std::function<Vec(const Vec&)> smooth_grad;
  std::function<double(const Vec&)> nonsmooth_value;
  std::function<Vec(const Vec&, double)> nonsmooth_prox;
  double m = 0.0;
  double M = 0.0;

  double phi(const Vec& z) const {
    double h = nonsmooth_value(z);
    if (h == kInf) return kInf;
    return smooth_value(z) + h;
  }
};

// The oracle for lambda * phi. Prox of lambda*h with stepsize s equals
// prox of h with stepsize lambda*s, so scaling stays exact.
inline ProblemOracle scale_oracle(const ProblemOracle& base, double lambda) {
  ProblemOracle out;
  out.smooth_value = [&base, lambda](const Vec& z) {
    return lambda * base.smooth_value(z);
  };
  out.smooth_grad = [&base, lambda](const Vec& z) -> Vec {
    Vec g = base.smooth_grad(z);
    g *= lambda;
    return g;
  };
  out.nonsmooth_value = [&base, lambda](const Vec& z) {
    double h = base.nonsmooth_value(z);
    return h == kInf ? kInf : lambda * h;
  };
  out.nonsmooth_prox = [&base, lambda](const Vec& u, double s) -> Vec {
    return base.nonsmooth_prox(u, lambda * s);
  };
  out.m = lambda * base.m;
  out.M = lambda * base.M;
  return out;
}

// Sampled necessary-condition test for w being an eps-subgradient of
// lambda*phi + ||. - z_minus||^2/2 at z: checks
//   lambda*phi(u) + ||u - z_minus||^2/2
//     >= lambda*phi(z) + ||z - z_minus||^2/2 + <w, u - z> - eps
// for every sampled u.  Not a proof, only a falsifier.
bool check_eps_subgradient(const ProblemOracle& oracle, double lambda,
                           const Vec& z_minus, const Vec& z, const Vec& w,
                           double eps, const std::vector<Vec>& samples);

}  // namespace raipp

#endif  // RAIPP_ORACLE_HPP
