#include "raipp/params.hpp"

#include <stdexcept>

namespace raipp {

void SolverParams::validate() const {
  if (!(theta1 > 2.0)) throw std::invalid_argument("theta1 must exceed 2");
  if (!(theta2 > 0.0)) throw std::invalid_argument("theta2 must be positive");
  if (!(xi >= 1.0)) throw std::invalid_argument("xi must be at least 1");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (!(rho_bar > 0.0)) throw std::invalid_argument("rho_bar must be positive");
}

SolverParams SolverParams::from_sigma(double sigma, double rho_bar) {
  auto [t1, t2] = gipp_to_gd(sigma);
  SolverParams p;
  p.theta1 = t1;
  p.theta2 = t2;
  p.xi = 1.0;
  p.tau = 0.2;
  p.rho_bar = rho_bar;
  return p;
}

std::pair<double, double> gipp_to_gd(double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0))
    throw std::invalid_argument("sigma must lie in (0,1)");
  return {2.0 / (1.0 - sigma), sigma / 2.0};
}

}  // namespace raipp
