#include "raipp/raipp.hpp"

#include <cmath>
#include <stdexcept>

namespace raipp {

long halving_budget(double m, double lambda0) {
  if (!(m > 0.0 && lambda0 > 0.0))
    throw std::invalid_argument("m and lambda0 must be positive");
  const double v = std::ceil(std::log2(2.0 * m * lambda0));
  return v > 0.0 ? static_cast<long>(v) : 0;
}

double inner_complexity_estimate(const ProblemOracle& oracle,
                                 const SolverParams& params, double lambda0,
                                 double phi_gap, double rho_abs) {
  if (phi_gap < 0.0) throw std::invalid_argument("phi_gap must be nonnegative");
  const double m = oracle.m, M = oracle.M;
  // Per-call constant: each ACG call takes at most c*sqrt(L) iterations.
  const double c1 = 2.0 * std::sqrt(2.0 * (1.0 + params.xi) * params.theta1) *
                    (std::sqrt(params.theta1) + std::sqrt(params.theta1 - 2.0)) /
                    (params.theta1 - 2.0);
  const double c2 = 2.0 * std::sqrt(2.0 * (1.0 + params.xi)) *
                    (1.0 + std::sqrt(2.0 * params.theta2)) /
                    std::sqrt(2.0 * params.theta2);
  const double c = std::max(c1, c2);
  // Rejected calls: geometric sum over the halving sequence.
  const double ti_f =
      c * std::sqrt(2.0 * (M + m) * lambda0) / (std::sqrt(2.0) - 1.0);
  // Accepted calls until the step-4 criterion triggers.
  const double tr = params.tau * rho_abs;
  const double ti_s = params.theta1 * c * std::sqrt(2.0 * M * m + 4.0 * m * m) *
                          phi_gap / (tr * tr) +
                      c * std::sqrt((M + 2.0 * m) * lambda0);
  return ti_f + ti_s + 1.0;
}

SolveOutcome raipp_solve(const ProblemOracle& oracle, const Vec& z0,
                         const SolverParams& params,
                         const StepsizePolicy& policy, ResidualNorm norm,
                         const OuterCallback& callback) {
  params.validate();
  if (!(oracle.M >= oracle.m && oracle.m > 0.0))
    throw std::invalid_argument("curvature pair must satisfy M >= m > 0");
  if (oracle.nonsmooth_value(z0) == kInf)
    throw std::invalid_argument("z0 outside dom h");
  if (policy.variant == StepsizeVariant::HalvingOnly &&
      policy.lambda0 * oracle.m < 1.0)
    throw std::invalid_argument("HalvingOnly requires lambda0 >= 1/m");

  const double rho_scale =
      norm == ResidualNorm::RelativeToInitialGrad
          ? oracle.smooth_grad(z0).norm() + 1.0
          : 1.0;
  const double rho = params.rho_bar * rho_scale;

  SolveOutcome out;
  out.trace.z0 = z0;
  out.trace.phi0 = oracle.phi(z0);

  double lambda = policy.lambda0;
  bool ever_halved = false;
  // Safety net against a halving loop that never accepts.  Doublings raise
  // lambda above lambda0, and unwinding them legitimately takes one
  // halving apiece, so the cap grows with the accumulated doublings.
  long total_doublings = 0;
  const long budget_cap = halving_budget(oracle.m, policy.lambda0) + 8;

  Vec z_prev = z0;
  // The scaled oracle and its derived quantities depend only on lambda,
  // which changes rarely (never, for the constant-stepsize variant), so
  // they are rebuilt lazily instead of once per inner call.
  double lambda_built = -1.0;
  ProblemOracle scaled;
  AcgInputs inputs;
  long call_bound = 0;
  const AcgOptions acg_opts{params.xi, params.theta1, params.theta2, nullptr};

  for (long k = 1; k <= params.max_outer; ++k) {
    int halvings = 0, doublings = 0;
    long inner_this = 0;
    AcgResult acg;
    RefineOutput ref;
    double w_move = 0.0;

    for (;;) {
      if (halvings > budget_cap + total_doublings)
        throw std::runtime_error("raipp: halving cap exceeded");
      if (lambda != lambda_built) {
        scaled = scale_oracle(oracle, lambda);
        inputs = AcgInputs{scaled.smooth_value, scaled.smooth_grad,
                           scaled.nonsmooth_value, scaled.nonsmooth_prox,
                           oracle.M * lambda};
        call_bound = acg_iteration_bound(inputs.M_tilde + 1.0, params.xi,
                                         params.theta1, params.theta2);
        lambda_built = lambda;
      }
      acg = racg_run(inputs, z_prev, acg_opts);
      inner_this += acg.iterations;
      out.total_inner_iterations += acg.iterations;
      if (out.total_inner_iterations > params.max_inner_total) {
        out.status = SolveStatus::IterationBudgetExhausted;
        if (!out.trace.records.empty()) return out;
        throw std::runtime_error("raipp: inner budget exhausted before any accepted step");
      }
      if (acg.status == AcgStatus::InternalError)
        throw std::runtime_error("raipp: inner solver exceeded its bound");
      if (acg.status == AcgStatus::Failure) {
        lambda /= 2.0;
        ++halvings;
        ever_halved = true;
        continue;
      }
      ref = refine(oracle, lambda, z_prev, acg.x, acg.u);
      w_move = (acg.u + z_prev - acg.x).norm();
      // Rejection threshold carries a noise floor on delta_r's scale so
      // cancellation noise near stationarity cannot trigger halvings.
      if (ref.delta_r > params.theta2 * w_move * w_move * (1.0 + 1e-12) +
                            1e-13 * ref.value_scale) {
        lambda /= 2.0;
        ++halvings;
        ever_halved = true;
        continue;
      }
      break;
    }

    TraceRecord rec;
    rec.k = k;
    rec.lambda = lambda;
    if (params.record_vectors) {
      rec.z = acg.x;
      rec.w = acg.u;
      rec.v = ref.v_r;
    }
    rec.delta = ref.delta_r;
    rec.phi = oracle.phi(acg.x);
    rec.w_move_norm = w_move;
    rec.inner_iterations = inner_this;
    rec.last_call_iterations = acg.iterations;
    rec.halvings = halvings;
    rec.inner_bound = call_bound;
    rec.aj_growth_ok = acg.min_aj_margin >= 1.0 - 1e-12;

    const double v_norm = ref.v_r.norm();
    const bool success = v_norm <= rho;
    // The step-4 threshold uses the raw target; the residual normalization
    // applies to the step-3 test only.
    const bool step4 =
        !success && w_move <= params.tau * lambda * params.rho_bar;

    // Doubling happens at the end of the iteration, after the step 3/4
    // decisions, and only while no halving has ever occurred.
    if (!success && !step4 &&
        policy.variant == StepsizeVariant::HalvingDoubling && !ever_halved &&
        acg.iterations < policy.doubling_inner_threshold) {
      lambda *= 2.0;
      doublings = 1;
      ++total_doublings;
    }
    rec.doublings = doublings;
    out.trace.append(std::move(rec));
    if (callback) callback(k, lambda, inner_this, v_norm, out.trace.records.back().phi);

    if (success || step4) {
      out.status = success ? SolveStatus::SuccessStationary
                           : SolveStatus::FailureStep4;
      out.final = std::move(ref);
      return out;
    }
    z_prev = acg.x;
  }
  out.status = SolveStatus::IterationBudgetExhausted;
  return out;
}

}  // namespace raipp
