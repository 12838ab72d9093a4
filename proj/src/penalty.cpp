#include "raipp/penalty.hpp"

#include <chrono>
#include <memory>
#include <stdexcept>

#include "raipp/ag.hpp"

namespace raipp {

ProblemOracle penalized_oracle(const ProblemOracle& f_oracle,
                               const SymOpSet& A_op, const Vec& b, double c,
                               double L_f, double A_norm) {
  if (!(c > 0.0)) throw std::invalid_argument("penalty weight must be positive");
  auto ops = std::make_shared<SymOpSet>(A_op);
  auto rhs = std::make_shared<Vec>(b);
  ProblemOracle o;
  o.smooth_value = [f = f_oracle.smooth_value, ops, rhs, c](const Vec& z) {
    return f(z) + 0.5 * c * (ops->apply(z) - *rhs).squaredNorm();
  };
  o.smooth_grad = [g = f_oracle.smooth_grad, ops, rhs, c](const Vec& z) -> Vec {
    return g(z) + c * ops->adjoint(ops->apply(z) - *rhs);
  };
  o.nonsmooth_value = f_oracle.nonsmooth_value;
  o.nonsmooth_prox = f_oracle.nonsmooth_prox;
  o.m = L_f;
  o.M = L_f + c * A_norm * A_norm;
  return o;
}

namespace {

// The penalized objective of an LC instance is a quadratic, so for
// moderate n the sparse-operator traversals in penalized_oracle can be
// collapsed into one dense n^2 x n^2 matvec per gradient (about 6x
// cheaper at desk scale, and the stages take millions of iterations).
ProblemOracle penalized_dense(const LcInstance& inst, double c,
                              const ProblemOracle& f_oracle) {
  Vec wB(inst.B.count());
  for (Eigen::Index i = 0; i < inst.B.count(); ++i)
    wB[i] = -inst.alpha * inst.D[i] * inst.D[i];
  auto Hf = std::make_shared<Mat>(inst.B.weighted_gram(wB));
  auto H = std::make_shared<Mat>(
      *Hf + inst.A.weighted_gram(Vec::Constant(inst.A.count(), c)));
  auto q = std::make_shared<Vec>(-c * inst.A.adjoint(inst.b));
  auto ops = std::make_shared<SymOpSet>(inst.A);
  auto rhs = std::make_shared<Vec>(inst.b);
  ProblemOracle o;
  // The value keeps the residual form: expanding (c/2)||A z - b||^2 into
  // quadratic-form terms cancels catastrophically near feasibility, which
  // poisons the inner solver's objective-difference tests.
  o.smooth_value = [Hf, ops, rhs, c](const Vec& z) {
    return 0.5 * z.dot(*Hf * z) +
           0.5 * c * (ops->apply(z) - *rhs).squaredNorm();
  };
  o.smooth_grad = [H, q](const Vec& z) -> Vec { return *H * z + *q; };
  o.nonsmooth_value = f_oracle.nonsmooth_value;
  o.nonsmooth_prox = f_oracle.nonsmooth_prox;
  o.m = inst.L_f;
  o.M = inst.L_f + c * inst.A_norm * inst.A_norm;
  return o;
}

}  // namespace

PenaltyReport penalty_solve(const LcInstance& inst,
                            const PenaltyConfig& config) {
  const auto t_start = std::chrono::steady_clock::now();
  config.params.validate();
  // Stage traces are summarized per stage; per-iteration vectors would
  // cost gigabytes across the millions of accepted steps the small-step
  // variants take.
  SolverParams stage_params = config.params;
  stage_params.record_vectors = false;
  const double a2 = inst.A_norm * inst.A_norm;
  const double c0 =
      config.c0 > 0.0 ? config.c0 : (1e3 - 1.0) * inst.L_f / a2;

  const ProblemOracle f = lc_f_oracle(inst);
  const double b_scale = 1.0 + inst.b.norm();

  PenaltyReport report;
  report.z = inst.z0;
  double c = c0;
  for (long stage = 1; stage <= config.max_stages; ++stage) {
    const ProblemOracle pen =
        inst.n * inst.n <= 1024
            ? penalized_dense(inst, c, f)
            : penalized_oracle(f, inst.A, inst.b, c, inst.L_f, inst.A_norm);

    SolveOutcome outcome;
    switch (config.inner_method) {
      case InnerMethod::AG:
        outcome = ag_solve(pen, report.z, config.rho_bar, config.ag_max_iters,
                           ResidualNorm::RelativeToInitialGrad, nullptr,
                           /*trace_stride=*/1024);
        break;
      case InnerMethod::AIPPc:
        outcome = raipp_solve(pen, report.z, stage_params,
                              StepsizePolicy::aippc(pen.m),
                              ResidualNorm::RelativeToInitialGrad);
        break;
      case InnerMethod::AIPPv1:
        outcome = raipp_solve(pen, report.z, stage_params,
                              StepsizePolicy::aippv1(),
                              ResidualNorm::RelativeToInitialGrad);
        break;
      case InnerMethod::AIPPv2:
        outcome = raipp_solve(pen, report.z, stage_params,
                              StepsizePolicy::aippv2(pen.m),
                              ResidualNorm::RelativeToInitialGrad);
        break;
    }

    // Warm start: the next stage starts from this stage's refined point.
    report.z = outcome.final.z_r;
    report.v = outcome.final.v_r;
    report.total_inner_iterations += outcome.total_inner_iterations;

    PenaltyStage rec;
    rec.c = c;
    rec.status = outcome.status;
    rec.feasibility = (inst.A.apply(report.z) - inst.b).norm() / b_scale;
    rec.residual = stationarity_residual(
        report.v, pen.smooth_grad(outcome.trace.z0).norm());
    rec.inner_iterations = outcome.total_inner_iterations;
    rec.outer_iterations = static_cast<long>(outcome.trace.records.size());
    rec.objective = f.smooth_value(report.z);
    report.stages.push_back(rec);

    if (rec.feasibility <= config.eta_bar) {
      report.feasible = true;
      break;
    }
    c *= config.growth;
  }
  report.objective = f.smooth_value(report.z);
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return report;
}

}  // namespace raipp
