#ifndef RAIPP_PARAMS_HPP
#define RAIPP_PARAMS_HPP

#include <cstdint>
#include <utility>

namespace raipp {

// Scalar parameters shared by the inner and outer solvers.
// Requirements: theta1 > 2, theta2 > 0, xi >= 1, tau > 0.
struct SolverParams {
  double theta1 = 2.0 / 0.7;  // from sigma = 0.3
  double theta2 = 0.15;
  double xi = 1.0;
  double tau = 0.2;
  double rho_bar = 1e-7;
  long max_outer = 2'000'000;
  long max_inner_total = 200'000'000;
  // Store (z, w, v) in every trace record.  Replay-style verification
  // needs them; penalty stages with millions of accepted iterations turn
  // them off and keep scalar records only.
  bool record_vectors = true;

  void validate() const;  // throws std::invalid_argument

  // The benchmark defaults (xi, theta1, theta2, tau) = (1, 2/(1-sigma),
  // sigma/2, 1/5).
  static SolverParams from_sigma(double sigma, double rho_bar = 1e-7);
};

// Converts the GIPP relaxation parameter sigma in (0,1) into the GD pair
// (theta1, theta2) = (2/(1-sigma), sigma/2).
std::pair<double, double> gipp_to_gd(double sigma);

}  // namespace raipp

#endif  // RAIPP_PARAMS_HPP
