#include "raipp/ag.hpp"

#include <cmath>
#include <stdexcept>

namespace raipp {

SolveOutcome ag_solve(const ProblemOracle& oracle, const Vec& z0,
                      double rho_bar, long max_iters, ResidualNorm norm,
                      const OuterCallback& callback, long trace_stride) {
  if (!(rho_bar > 0.0)) throw std::invalid_argument("rho_bar must be positive");
  if (trace_stride < 1) throw std::invalid_argument("trace_stride must be >= 1");
  if (oracle.nonsmooth_value(z0) == kInf)
    throw std::invalid_argument("z0 outside dom h");

  const double beta = 1.0 / (2.0 * oracle.M);
  const double rho_scale =
      norm == ResidualNorm::RelativeToInitialGrad
          ? oracle.smooth_grad(z0).norm() + 1.0
          : 1.0;
  const double rho = rho_bar * rho_scale;

  SolveOutcome out;
  out.trace.z0 = z0;
  out.trace.phi0 = oracle.phi(z0);

  Vec x = z0;      // the accelerated sequence
  Vec x_ag = z0;   // the aggregated sequence carrying the certificate
  Vec x_md(z0.size()), grad_md(z0.size());
  for (long k = 1; k <= max_iters; ++k) {
    const double alpha = 2.0 / (static_cast<double>(k) + 1.0);
    const double lam = (1.0 + 0.25 * alpha) * beta;
    x_md = (1.0 - alpha) * x_ag + alpha * x;
    grad_md = oracle.smooth_grad(x_md);
    x = oracle.nonsmooth_prox(x - lam * grad_md, lam);
    x_ag = oracle.nonsmooth_prox(x_md - beta * grad_md, beta);

    out.total_inner_iterations = k;

    // The certificate is valid at any iterate, so it only has to be
    // formed when we might stop or record; skipping it elsewhere saves a
    // gradient call per iteration.
    const bool check = (k - 1) % 16 == 0 || (k - 1) % trace_stride == 0 ||
                       k == max_iters;
    if (!check) continue;

    // (x_md - x_ag)/beta - grad_md is a subgradient of h at x_ag; adding
    // grad g(x_ag) certifies the inclusion at x_ag exactly.
    Vec v = (x_md - x_ag) / beta - grad_md + oracle.smooth_grad(x_ag);
    const double v_norm = v.norm();

    const bool success = v_norm <= rho;
    // Scalar-only trace, and only every stride-th iteration: per-iteration
    // vectors (or millions of scalar records) would dominate memory over
    // the gradient steps this method takes.
    if (success || k == max_iters || (k - 1) % trace_stride == 0) {
      TraceRecord rec;
      rec.k = k;
      rec.lambda = beta;
      rec.v_norm = v_norm;
      rec.phi = oracle.phi(x_ag);
      rec.w_move_norm = (x_md - x_ag).norm();
      rec.inner_iterations = 1;
      out.trace.append(std::move(rec));
      if (callback) callback(k, beta, 1, v_norm, out.trace.records.back().phi);
    }

    if (success) {
      out.status = SolveStatus::SuccessStationary;
      out.final = RefineOutput{x_ag, std::move(v), 0.0, beta};
      return out;
    }
  }
  out.status = SolveStatus::IterationBudgetExhausted;
  out.final = RefineOutput{x_ag, Vec(), 0.0, beta};
  return out;
}

}  // namespace raipp
