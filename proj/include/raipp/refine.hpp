#ifndef RAIPP_REFINE_HPP
#define RAIPP_REFINE_HPP

#include "raipp/oracle.hpp"
#include "raipp/params.hpp"
#include "raipp/point.hpp"

namespace raipp {

// Refined stationarity certificate: v_r belongs to grad g(z_r) + dh(z_r)
// by construction and lambda*||v_r|| <= ||w + z_minus - z|| +
// 2*sqrt(2*(lambda*M+1)*delta_r).
struct RefineOutput {
  Vec z_r;
  Vec v_r;
  double delta_r = 0.0;
  double lambda = 0.0;
  // Magnitude of the model values whose difference produced delta_r; the
  // cancellation noise of delta_r is proportional to it.
  double value_scale = 0.0;
};

// Constructive refinement.  With M_lam = lambda*M + 1 and
// grad_glam(z) = lambda*grad g(z) + (z - z_minus) - w, computes
//   z_r = prox_h(z - grad_glam(z)/M_lam, lambda/M_lam),
//   v_r = [ (w + z_minus - z) + M_lam (z - z_r) ] / lambda
//         + grad g(z_r) - grad g(z),
//   delta_r = (g_lam + h_lam)(z) - (g_lam + h_lam)(z_r)
// where g_lam = lambda*g + ||. - z_minus||^2/2 - <w, .> and h_lam = lambda*h.
// Tiny negative delta_r from cancellation is clamped to zero.  Throws
// std::invalid_argument on lambda <= 0 or h(z) = +inf.
RefineOutput refine(const ProblemOracle& oracle, double lambda,
                    const Vec& z_minus, const Vec& z, const Vec& w);

// Evaluation of the two GD-scheme acceptance inequalities for one outer
// iteration, with the stored sides for reporting.
struct GdCheckResult {
  bool descent_ok = false;  // ||w+z_prev-z||^2 <= theta1*lambda*(phi(z_prev)-phi(z))
  bool gap_ok = false;      // delta <= theta2*||w+z_prev-z||^2
  double descent_lhs = 0.0;
  double descent_rhs = 0.0;
  double gap_lhs = 0.0;
  double gap_rhs = 0.0;
};

GdCheckResult check_gd_conditions(const ProblemOracle& oracle,
                                  const SolverParams& params, double lambda_k,
                                  const Vec& z_prev, const Vec& z_k,
                                  const Vec& w_k, double delta_k);

}  // namespace raipp

#endif  // RAIPP_REFINE_HPP
