#ifndef RAIPP_AG_HPP
#define RAIPP_AG_HPP

#include "raipp/oracle.hpp"
#include "raipp/raipp.hpp"
#include "raipp/trace.hpp"

namespace raipp {

// Accelerated gradient baseline for nonconvex composite problems.
// Standard two-prox scheme with alpha_k = 2/(k+1), beta_k = 1/(2M) and
// lambda_k = (1 + alpha_k/4) beta_k.  The certificate at the aggregated
// iterate x_ag is
//   v = (x_md - x_ag)/beta - grad g(x_md) + grad g(x_ag)
// which lies in grad g(x_ag) + dh(x_ag) exactly, so termination uses the
// same residual test as the proximal methods.
//
// trace_stride keeps every stride-th iteration (plus the final one) in the
// trace; penalty stages run AG for tens of millions of iterations where a
// full record would exhaust memory.
SolveOutcome ag_solve(const ProblemOracle& oracle, const Vec& z0,
                      double rho_bar, long max_iters,
                      ResidualNorm norm = ResidualNorm::Raw,
                      const OuterCallback& callback = nullptr,
                      long trace_stride = 1);

}  // namespace raipp

#endif  // RAIPP_AG_HPP
