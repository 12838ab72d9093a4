#ifndef RAIPP_TRACE_HPP
#define RAIPP_TRACE_HPP

#include <vector>

#include "raipp/oracle.hpp"
#include "raipp/params.hpp"
#include "raipp/point.hpp"
#include "raipp/refine.hpp"

namespace raipp {

// One accepted outer iteration of a GD-scheme instance.
struct TraceRecord {
  long k = 0;
  double lambda = 0.0;
  Vec z;  // z_k (may be empty when a solver traces scalars only)
  Vec w;  // w_k
  Vec v;  // v_k
  double v_norm = 0.0;           // ||v_k||, kept even when v is not stored
  double delta = 0.0;            // Delta_k
  double phi = 0.0;              // phi(z_k)
  double w_move_norm = 0.0;      // ||w_k + z_{k-1} - z_k||
  long inner_iterations = 0;     // ACG iterations spent on this step (all calls)
  long last_call_iterations = 0; // iterations of the accepting ACG call
  int halvings = 0;
  int doublings = 0;
  long inner_bound = 0;          // worst-case ACG bound for the accepting call
  bool aj_growth_ok = true;      // A_j >= j^2/(4L) held throughout
  // Running quantities, updated on append:
  double Lambda = 0.0;           // sum of lambda_i
  double alpha = 0.0;            // min_i ||w_i + z_{i-1} - z_i|| / lambda_i
  double beta = 0.0;             // min_i ||v_i||
};

struct SolverTrace {
  Vec z0;
  double phi0 = 0.0;
  std::vector<TraceRecord> records;

  // Appends rec after filling its running Lambda/alpha/beta fields.
  void append(TraceRecord rec);
  const Vec& z_prev(std::size_t idx) const {  // z_{k-1} for records[idx]
    return idx == 0 ? z0 : records[idx - 1].z;
  }
};

enum class SolveStatus {
  SuccessStationary,
  FailureStep4,
  IterationBudgetExhausted,
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::IterationBudgetExhausted;
  RefineOutput final;
  SolverTrace trace;
  long total_inner_iterations = 0;
};

// Per-k diagnostics and the theoretical decay bounds:
//   alpha_k^2 <= theta1 * (phi(z0) - phi_star) / Lambda_k
//   beta_k^2  <= (1 + 2*sqrt(2*theta2*(lam_max*M + 1)))^2 * that same ratio
// with lam_max = max_i lambda_i.
struct GdDiagnostics {
  std::vector<double> alpha, beta, Lambda, bound_a, bound_b;
};

GdDiagnostics gd_diagnostics(const SolverTrace& trace,
                             const ProblemOracle& oracle,
                             const SolverParams& params,
                             double phi_star_lower);

}  // namespace raipp

#endif  // RAIPP_TRACE_HPP
