#include "raipp/racg.hpp"

#include <cmath>
#include <stdexcept>

namespace raipp {

namespace {

// lhs <= rhs up to a relative slack plus an explicit noise floor.  The
// floor must scale with the oracle values entering the test: a constant
// absolute term would decide the tests spuriously once the iterates are
// near stationarity and every compared quantity is tiny.
bool leq_slack(double lhs, double rhs, double noise) {
  return lhs <= rhs + 1e-12 * std::abs(rhs) + noise;
}

bool near_boundary(double lhs, double rhs) {
  return std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs) + std::abs(rhs));
}

}  // namespace

AcgState AcgState::initial(const Vec& x0, double L) {
  AcgState s;
  s.A = 0.0;
  s.x = x0;
  s.y = x0;
  s.y0 = x0;
  s.x_tilde = x0;
  s.gamma = AffineFunction{Vec::Zero(x0.size()), 0.0};
  s.u = Vec::Zero(x0.size());
  s.j = 0;
  s.L = L;
  return s;
}

AcgState acg_step(const AcgState& state, const PsiOracle& psi) {
  AcgState next = state;
  acg_step_inplace(next, psi);
  return next;
}

void acg_step_inplace(AcgState& s, const PsiOracle& psi) {
  const double L = s.L;
  const double a = (1.0 + std::sqrt(1.0 + 4.0 * L * s.A)) / (2.0 * L);
  const double A_new = s.A + a;
  const double w_old = s.A / A_new;
  const double w_new = a / A_new;

  s.x_tilde = w_old * s.x + w_new * s.y;
  const AffineFunction tangent = affine_minorant(
      psi.smooth_value(s.x_tilde), psi.smooth_grad(s.x_tilde), s.x_tilde);
  s.gamma.grad = w_old * s.gamma.grad + w_new * tangent.grad;
  s.gamma.offset = w_old * s.gamma.offset + w_new * tangent.offset;

  // argmin { Gamma(y) + psi^(n)(y) + ||y - y0||^2 / (2 A) }
  s.y = psi.prox(s.y0 - A_new * s.gamma.grad, A_new);
  s.x = w_old * s.x + w_new * s.y;
  s.u = (s.y0 - s.y) / A_new;
  s.psi_x = psi.smooth_value(s.x) + psi.nonsmooth_value(s.x);
  s.eta_hat = s.psi_x - s.gamma(s.y) - psi.nonsmooth_value(s.y) -
              s.u.dot(s.x - s.y);
  s.eta = std::max(s.eta_hat, 0.0);
  s.A = A_new;
  s.j += 1;
}

long acg_iteration_bound(double L, double xi, double theta1, double theta2) {
  if (!(L > 0.0)) throw std::invalid_argument("L must be positive");
  if (!(xi >= 1.0)) throw std::invalid_argument("xi must be at least 1");
  if (!(theta1 > 2.0)) throw std::invalid_argument("theta1 must exceed 2");
  if (!(theta2 > 0.0)) throw std::invalid_argument("theta2 must be positive");
  const double first = 2.0 * std::sqrt(2.0 * (1.0 + xi) * L * theta1) *
                       (std::sqrt(theta1) + std::sqrt(theta1 - 2.0)) /
                       (theta1 - 2.0);
  const double second = 2.0 * std::sqrt(2.0 * (1.0 + xi) * L) *
                        (1.0 + std::sqrt(2.0 * theta2)) /
                        std::sqrt(2.0 * theta2);
  const double bound = std::max(std::ceil(first), std::ceil(second));
  if (!(bound < 9.0e18)) throw std::overflow_error("iteration bound overflow");
  return static_cast<long>(bound);
}

AcgResult racg_run(const AcgInputs& inputs, const Vec& x0,
                   const AcgOptions& opts) {
  const double L = inputs.M_tilde + 1.0;
  const long bound = acg_iteration_bound(L, opts.xi, opts.theta1, opts.theta2);
  if (inputs.nonsmooth_value(x0) == kInf)
    throw std::invalid_argument("x0 outside dom phi~^(n)");

  PsiOracle psi;
  psi.smooth_value = [&inputs, &x0](const Vec& z) {
    return inputs.smooth_value(z) + 0.5 * (z - x0).squaredNorm();
  };
  psi.smooth_grad = [&inputs, &x0](const Vec& z) -> Vec {
    Vec g = inputs.smooth_grad(z);
    g += z - x0;
    return g;
  };
  psi.nonsmooth_value = inputs.nonsmooth_value;
  psi.prox = inputs.prox;

  const double phi_tilde_x0 =
      inputs.smooth_value(x0) + inputs.nonsmooth_value(x0);
  const double psi_x0 = phi_tilde_x0;  // the anchor term vanishes at x0

  AcgState state = AcgState::initial(x0, L);
  AcgResult res;
  res.min_aj_margin = kInf;

  for (long j = 1; j <= bound; ++j) {
    acg_step_inplace(state, psi);
    res.min_aj_margin =
        std::min(res.min_aj_margin,
                 state.A * 4.0 * L / (static_cast<double>(j) * j));

    AcgCheckValues& c = res.checks;
    const double move_sq = (x0 - state.x + state.u).squaredNorm();
    c.fail_combined_lhs = (state.A * state.u + state.x - x0).squaredNorm() +
                          2.0 * state.A * state.eta;
    c.fail_combined_rhs = opts.xi * (state.x - x0).squaredNorm();
    c.fail_lower_lhs = state.psi_x + state.u.dot(x0 - state.x) - state.eta;
    c.fail_lower_rhs = psi_x0;
    c.succ_gap_lhs = state.eta;
    c.succ_gap_rhs = opts.theta2 * move_sq;
    c.succ_descent_lhs = move_sq;
    const double phi_tilde_xj =
        state.psi_x - 0.5 * (state.x - x0).squaredNorm();
    c.succ_descent_rhs = opts.theta1 * (phi_tilde_x0 - phi_tilde_xj);
    c.near_boundary = near_boundary(c.fail_combined_lhs, c.fail_combined_rhs) ||
                      near_boundary(c.fail_lower_rhs, c.fail_lower_lhs);

    if (opts.callback) opts.callback(j, state.A, c);

    res.eta = state.eta;
    res.iterations = j;

    // Cancellation noise of the value-difference quantities (eta and the
    // phi~ descent) is proportional to the magnitudes evaluated.
    const double noise =
        1e-13 * (std::abs(psi_x0) + std::abs(state.psi_x));

    if (!leq_slack(c.fail_combined_lhs, c.fail_combined_rhs,
                   (1.0 + 2.0 * state.A) * noise) ||
        !leq_slack(c.fail_lower_lhs, c.fail_lower_rhs, 2.0 * noise)) {
      res.status = AcgStatus::Failure;
      res.x = std::move(state.x);
      res.u = std::move(state.u);
      return res;
    }
    if (leq_slack(c.succ_gap_lhs, c.succ_gap_rhs, noise) &&
        leq_slack(c.succ_descent_lhs, c.succ_descent_rhs,
                  opts.theta1 * noise)) {
      res.status = AcgStatus::Success;
      res.x = std::move(state.x);
      res.u = std::move(state.u);
      return res;
    }
  }
  // Termination within the bound is guaranteed in exact arithmetic.
  res.status = AcgStatus::InternalError;
  res.x = std::move(state.x);
  res.u = std::move(state.u);
  return res;
}

}  // namespace raipp
