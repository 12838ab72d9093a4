#include "raipp/trace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace raipp {

void SolverTrace::append(TraceRecord rec) {
  const double step_alpha = rec.w_move_norm / rec.lambda;
  if (rec.v.size() > 0) rec.v_norm = rec.v.norm();
  const double step_beta = rec.v_norm;
  if (records.empty()) {
    rec.Lambda = rec.lambda;
    rec.alpha = step_alpha;
    rec.beta = step_beta;
  } else {
    const TraceRecord& last = records.back();
    rec.Lambda = last.Lambda + rec.lambda;
    rec.alpha = std::min(last.alpha, step_alpha);
    rec.beta = std::min(last.beta, step_beta);
  }
  records.push_back(std::move(rec));
}

GdDiagnostics gd_diagnostics(const SolverTrace& trace,
                             const ProblemOracle& oracle,
                             const SolverParams& params,
                             double phi_star_lower) {
  if (trace.records.empty()) throw std::invalid_argument("empty trace");
  GdDiagnostics d;
  const std::size_t K = trace.records.size();
  d.alpha.reserve(K);
  d.beta.reserve(K);
  d.Lambda.reserve(K);
  d.bound_a.reserve(K);
  d.bound_b.reserve(K);
  const double gap = trace.phi0 - phi_star_lower;
  double lam_max = 0.0;
  for (const TraceRecord& rec : trace.records) {
    lam_max = std::max(lam_max, rec.lambda);
    d.alpha.push_back(rec.alpha);
    d.beta.push_back(rec.beta);
    d.Lambda.push_back(rec.Lambda);
    const double ratio = params.theta1 * gap / rec.Lambda;
    d.bound_a.push_back(ratio);
    const double amp =
        1.0 + 2.0 * std::sqrt(2.0 * params.theta2 * (lam_max * oracle.M + 1.0));
    d.bound_b.push_back(amp * amp * ratio);
  }
  return d;
}

}  // namespace raipp
