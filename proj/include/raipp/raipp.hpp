#ifndef RAIPP_RAIPP_HPP
#define RAIPP_RAIPP_HPP

#include <functional>

#include "raipp/oracle.hpp"
#include "raipp/params.hpp"
#include "raipp/racg.hpp"
#include "raipp/refine.hpp"
#include "raipp/trace.hpp"

namespace raipp {

enum class StepsizeVariant {
  Constant,         // lambda fixed below 1/m, never halves in practice
  HalvingOnly,      // starts at lambda0 >= 1/m, halves on rejection
  HalvingDoubling,  // additionally doubles while no halving has occurred
};

struct StepsizePolicy {
  StepsizeVariant variant = StepsizeVariant::HalvingOnly;
  double lambda0 = 1.0;
  long doubling_inner_threshold = 250;

  static StepsizePolicy aippc(double m) {
    return {StepsizeVariant::Constant, 0.9 / m};
  }
  static StepsizePolicy aippv1(double lambda0 = 1.0) {
    return {StepsizeVariant::HalvingOnly, lambda0};
  }
  static StepsizePolicy aippv2(double m, long threshold = 250) {
    return {StepsizeVariant::HalvingDoubling, 1.0 / (5.0 * m), threshold};
  }
};

enum class ResidualNorm {
  Raw,                    // ||v|| <= rho_bar
  RelativeToInitialGrad,  // ||v|| / (||grad g(z0)|| + 1) <= rho_bar
};

using OuterCallback =
    std::function<void(long k, double lambda, long inner, double v_norm,
                       double phi)>;

// Number of stepsize halvings after which lambda is at or below 1/(2m):
// ceil(log2(2*m*lambda0)), clamped at 0.
long halving_budget(double m, double lambda0);

// Soft worst-case total of inner iterations assembled from the failed-call
// and successful-call estimates; a sanity ceiling for tests, not a budget.
double inner_complexity_estimate(const ProblemOracle& oracle,
                                 const SolverParams& params, double lambda0,
                                 double phi_gap, double rho_abs);

// The adaptive outer loop.  Each outer iteration runs the relaxed ACG
// solver on the proximal subproblem with stepsize lambda; a failed call or
// a refinement gap above theta2*||w + z_prev - z||^2 halves lambda and
// retries.  Accepted triples are traced; termination is success on
// ||v_k|| <= rho (step 3) or failure on ||w_k + z_{k-1} - z_k|| <=
// tau*lambda_k*rho (step 4), where rho is rho_bar under the selected
// residual normalization.
SolveOutcome raipp_solve(const ProblemOracle& oracle, const Vec& z0,
                         const SolverParams& params,
                         const StepsizePolicy& policy,
                         ResidualNorm norm = ResidualNorm::Raw,
                         const OuterCallback& callback = nullptr);

}  // namespace raipp

#endif  // RAIPP_RAIPP_HPP
