#ifndef RAIPP_RACG_HPP
#define RAIPP_RACG_HPP

#include <functional>

#include "raipp/oracle.hpp"
#include "raipp/point.hpp"

namespace raipp {

// Oracle for psi = psi_s + psi_n, the strongly regularized objective the
// accelerated loop minimizes.
struct PsiOracle {
  std::function<double(const Vec&)> smooth_value;     // psi^(s)
  std::function<Vec(const Vec&)> smooth_grad;
  std::function<double(const Vec&)> nonsmooth_value;  // psi^(n)
  std::function<Vec(const Vec&, double)> prox;        // prox of psi^(n)
};

// State of the accelerated composite gradient recursion.
struct AcgState {
  double A = 0.0;       // A_j
  Vec x;                // x_j
  Vec y;                // y_j
  Vec y0;               // anchor (= x_0)
  Vec x_tilde;          // x~_{j-1} of the latest step
  AffineFunction gamma; // Gamma_j, running convex combination of minorants
  Vec u;                // u_j = (y0 - y_j)/A_j
  double eta = 0.0;     // eta_j = max(eta_hat_j, 0)
  double eta_hat = 0.0;
  double psi_x = 0.0;   // psi(x_j), cached for the termination tests
  long j = 0;
  double L = 0.0;       // = M~ + 1

  static AcgState initial(const Vec& x0, double L);
};

// One accelerated step: updates A_j by
// A_j = A_{j-1} + (1 + sqrt(1 + 4 L A_{j-1}))/(2L), forms the convex
// combination point and minorant, takes one prox step for y_j and sets
// x_j, u_j, eta_j.
AcgState acg_step(const AcgState& state, const PsiOracle& psi);

// In-place variant reusing the state's buffers; racg_run sits on it, the
// copying overload above wraps it.
void acg_step_inplace(AcgState& state, const PsiOracle& psi);

enum class AcgStatus { Success, Failure, InternalError };

// Stored sides of the four per-iteration tests at the final iterate.
struct AcgCheckValues {
  double fail_combined_lhs = 0.0;  // ||A u + x - x0||^2 + 2 A eta
  double fail_combined_rhs = 0.0;  // xi ||x - x0||^2
  double fail_lower_lhs = 0.0;     // psi(x) + <u, x0 - x> - eta
  double fail_lower_rhs = 0.0;     // psi(x0)
  double succ_gap_lhs = 0.0;       // eta
  double succ_gap_rhs = 0.0;       // theta2 ||x0 - x + u||^2
  double succ_descent_lhs = 0.0;   // ||x0 - x + u||^2
  double succ_descent_rhs = 0.0;   // theta1 [phi~(x0) - phi~(x)]
  bool near_boundary = false;      // a failure test was decided within float slack
};

struct AcgResult {
  AcgStatus status = AcgStatus::InternalError;
  Vec x;
  Vec u;
  double eta = 0.0;
  long iterations = 0;
  AcgCheckValues checks;
  // min over j of A_j * 4L / j^2; >= 1 certifies the quadratic growth bound.
  double min_aj_margin = 0.0;
};

struct AcgInputs {
  std::function<double(const Vec&)> smooth_value;     // phi~^(s)
  std::function<Vec(const Vec&)> smooth_grad;
  std::function<double(const Vec&)> nonsmooth_value;  // phi~^(n)
  std::function<Vec(const Vec&, double)> prox;
  double M_tilde = 0.0;
};

struct AcgOptions {
  double xi = 1.0;
  double theta1 = 2.0 / 0.7;
  double theta2 = 0.15;
  // Called once per iteration with (j, A_j, checks).
  std::function<void(long, double, const AcgCheckValues&)> callback;
};

// Worst-case iteration count of the relaxed ACG loop:
// max( ceil(2*sqrt(2(1+xi)L*theta1)(sqrt(theta1)+sqrt(theta1-2))/(theta1-2)),
//      ceil(2*sqrt(2(1+xi)L)(1+sqrt(2*theta2))/sqrt(2*theta2)) ).
// Throws std::invalid_argument on parameter-domain violations and
// std::overflow_error if the bound is not representable.
long acg_iteration_bound(double L, double xi, double theta1, double theta2);

// Runs the relaxed ACG loop on phi~ = phi~^(s) + phi~^(n) anchored at x0.
// Returns Failure as soon as one of the two relaxation tests is violated,
// Success once both termination tests hold, and InternalError if neither
// happens within the worst-case bound (which would indicate a bug).
AcgResult racg_run(const AcgInputs& inputs, const Vec& x0,
                   const AcgOptions& opts);

}  // namespace raipp

#endif  // RAIPP_RACG_HPP
