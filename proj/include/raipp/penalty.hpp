#ifndef RAIPP_PENALTY_HPP
#define RAIPP_PENALTY_HPP

#include <functional>
#include <vector>

#include "raipp/oracle.hpp"
#include "raipp/params.hpp"
#include "raipp/problems.hpp"
#include "raipp/raipp.hpp"
#include "raipp/trace.hpp"

namespace raipp {

enum class InnerMethod { AG, AIPPc, AIPPv1, AIPPv2 };

struct PenaltyConfig {
  InnerMethod inner_method = InnerMethod::AIPPv2;
  double c0 = 0.0;        // <= 0 means the default (10^3 - 1) L_f / ||A||^2
  double growth = 2.0;    // c_k = c0 * growth^{k-1}
  double rho_bar = 1e-7;
  double eta_bar = 1e-4;  // feasibility tolerance on ||A(z)-b||/(1+||b||)
  long max_stages = 40;
  SolverParams params = SolverParams::from_sigma(1e-3);
  long ag_max_iters = 50'000'000;
};

struct PenaltyStage {
  double c = 0.0;
  SolveStatus status = SolveStatus::IterationBudgetExhausted;
  double feasibility = 0.0;  // ||A(z)-b|| / (1 + ||b||) at the stage result
  double residual = 0.0;     // relative stationarity residual achieved
  long inner_iterations = 0;
  long outer_iterations = 0;
  double objective = 0.0;    // f(z) at the stage result
};

struct PenaltyReport {
  bool feasible = false;  // terminated with feasibility <= eta_bar
  std::vector<PenaltyStage> stages;
  Vec z;
  Vec v;
  long total_inner_iterations = 0;
  double objective = 0.0;  // f(z)
  double wall_time_s = 0.0;
};

// Oracle of the penalized objective f + (c/2)||A(z) - b||^2 with
// curvature (m, M) = (L_f, L_f + c * A_norm^2); the nonsmooth part is
// inherited from `f_oracle`.
ProblemOracle penalized_oracle(const ProblemOracle& f_oracle,
                               const SymOpSet& A_op, const Vec& b, double c,
                               double L_f, double A_norm);

// Quadratic penalty driver: solves the stage-k penalized subproblem to the
// relative rho_bar stationarity with the configured inner method,
// warm-starting each stage from the previous stage's result, and stops once
// the feasibility measure drops to eta_bar.
PenaltyReport penalty_solve(const LcInstance& inst, const PenaltyConfig& config);

}  // namespace raipp

#endif  // RAIPP_PENALTY_HPP
