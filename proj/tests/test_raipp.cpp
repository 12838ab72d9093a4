#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "raipp/oracle.hpp"
#include "raipp/raipp.hpp"
#include "raipp/refine.hpp"
#include "raipp/rng.hpp"
#include "test_helpers.hpp"

using namespace raipp;

TEST_CASE("halving_budget") {
  CHECK(halving_budget(1.0, 1.0) == 1);
  CHECK(halving_budget(2.0, 1.0 / 4.0) == 0);  // lambda0 = 1/(2m)
  CHECK(halving_budget(1.0, 8.0) == 4);
  CHECK_THROWS_AS(halving_budget(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(halving_budget(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("stationary start succeeds at the first outer iteration") {
  ProblemOracle o =
      test::quadratic_oracle(Mat::Identity(3, 3), Vec::Zero(3), 1.0, 1.0);
  SolverParams p = SolverParams::from_sigma(0.3);
  SolveOutcome out = raipp_solve(o, Vec::Zero(3), p, StepsizePolicy::aippv1());
  CHECK(out.status == SolveStatus::SuccessStationary);
  CHECK(out.trace.records.size() == 1);
  CHECK(out.final.v_r.norm() <= p.rho_bar);
}

TEST_CASE("AIPPv1 on a convex quadratic obeys the stepsize floor and budget") {
  ProblemOracle o =
      test::quadratic_oracle(Mat::Identity(2, 2), Vec::Zero(2), 1.0, 1.0);
  SolverParams p = SolverParams::from_sigma(0.3);
  SolveOutcome out =
      raipp_solve(o, test::e1(2), p, StepsizePolicy::aippv1(1.0));
  REQUIRE(out.status == SolveStatus::SuccessStationary);
  long total_halvings = 0;
  for (const TraceRecord& rec : out.trace.records) {
    CHECK(rec.lambda >= 0.5 - 1e-15);  // 1/(2m)
    total_halvings += rec.halvings;
  }
  CHECK(total_halvings <= halving_budget(o.m, 1.0));
}

TEST_CASE("HalvingOnly rejects lambda0 below 1/m") {
  ProblemOracle o =
      test::quadratic_oracle(Mat::Identity(2, 2), Vec::Zero(2), 2.0, 2.0);
  SolverParams p = SolverParams::from_sigma(0.3);
  CHECK_THROWS_AS(
      raipp_solve(o, test::e1(2), p, StepsizePolicy::aippv1(0.25)),
      std::invalid_argument);
}

TEST_CASE("nonconvex 1-D problem with AIPPv2") {
  // g(z) = z^2/2 - cos z on [-2, 2]; g'' = 1 + cos z lies in [0, 2], so
  // (m, M) = (2, 2) is a valid (loose) curvature pair.
  ProblemOracle o;
  o.smooth_value = [](const Vec& z) {
    return 0.5 * z[0] * z[0] - std::cos(z[0]);
  };
  o.smooth_grad = [](const Vec& z) -> Vec {
    return test::scalar(z[0] + std::sin(z[0]));
  };
  o.m = 2.0;
  o.M = 2.0;
  test::add_box(o, -2.0, 2.0);

  // Curvature pair validated against central differences first.
  rng::Stream stream(41, "cosfd");
  for (int t = 0; t < 10; ++t) {
    Vec z = test::scalar(stream.uniform(-2.0, 2.0));
    const double fd = (o.smooth_value(test::scalar(z[0] + 1e-5)) -
                       o.smooth_value(test::scalar(z[0] - 1e-5))) /
                      2e-5;
    REQUIRE(std::abs(fd - o.smooth_grad(z)[0]) <= 1e-8);
  }

  SolverParams p = SolverParams::from_sigma(0.3);
  SolveOutcome out =
      raipp_solve(o, test::scalar(1.7), p, StepsizePolicy::aippv2(o.m));
  REQUIRE(out.status == SolveStatus::SuccessStationary);
  // Independent stationarity recheck: v_r - g'(z_r) must be a subgradient
  // of the box indicator at z_r.
  const Vec& zr = out.final.z_r;
  const double xi = out.final.v_r[0] - o.smooth_grad(zr)[0];
  for (int i = -20; i <= 20; ++i) {
    const double x = 0.1 * i;
    CHECK(0.0 >= xi * (x - zr[0]) - 1e-9);
  }
  CHECK(out.final.v_r.norm() <= p.rho_bar);
}

TEST_CASE("constant policy never halves") {
  rng::Stream stream(43, "aippc");
  for (int t = 0; t < 10; ++t) {
    const Eigen::Index n = 2 + (t % 3);
    ProblemOracle o = test::quadratic_oracle(
        test::random_spd_like(n, -1.0, 5.0, stream), Vec::Zero(n), 1.0, 5.0);
    test::add_box(o, -2.0, 2.0);
    Vec z0(n);
    for (Eigen::Index i = 0; i < n; ++i) z0[i] = stream.uniform(-1.0, 1.0);
    SolverParams p = SolverParams::from_sigma(0.3);
    p.rho_bar = 1e-6;
    SolveOutcome out = raipp_solve(o, z0, p, StepsizePolicy::aippc(o.m));
    for (const TraceRecord& rec : out.trace.records) {
      CHECK(rec.halvings == 0);
      CHECK(rec.lambda == doctest::Approx(0.9 / o.m));
    }
  }
}

TEST_CASE("accepted triples pass the GD conditions and phi decreases") {
  rng::Stream stream(47, "gd_replay");
  ProblemOracle o = test::quadratic_oracle(
      test::random_spd_like(4, -2.0, 6.0, stream), Vec::Zero(4), 2.0, 6.0);
  test::add_box(o, -2.0, 2.0);
  Vec z0(4);
  for (Eigen::Index i = 0; i < 4; ++i) z0[i] = stream.uniform(-1.5, 1.5);
  SolverParams p = SolverParams::from_sigma(0.3);
  SolveOutcome out = raipp_solve(o, z0, p, StepsizePolicy::aippv1());
  REQUIRE(out.status == SolveStatus::SuccessStationary);
  double last_phi = out.trace.phi0;
  for (std::size_t i = 0; i < out.trace.records.size(); ++i) {
    const TraceRecord& rec = out.trace.records[i];
    GdCheckResult gd = check_gd_conditions(o, p, rec.lambda,
                                           out.trace.z_prev(i), rec.z, rec.w,
                                           rec.delta);
    CHECK(gd.descent_ok);
    CHECK(gd.gap_ok);
    CHECK(rec.phi <= last_phi + 1e-10 * (1.0 + std::abs(last_phi)));
    last_phi = rec.phi;
  }

  // The descent-scheme diagnostic bounds, anchored at the final objective
  // value, must hold at every k.
  GdDiagnostics d = gd_diagnostics(out.trace, o, p,
                                   out.trace.records.back().phi);
  for (std::size_t i = 0; i < d.alpha.size(); ++i) {
    CHECK(d.alpha[i] * d.alpha[i] <= d.bound_a[i] + 1e-10);
    CHECK(d.beta[i] * d.beta[i] <= d.bound_b[i] + 1e-10);
  }
}

TEST_CASE("inner_complexity_estimate") {
  ProblemOracle o =
      test::quadratic_oracle(Mat::Identity(2, 2), Vec::Zero(2), 1.0, 4.0);
  SolverParams p = SolverParams::from_sigma(0.3);

  SUBCASE("zero gap reduces to the sqrt(M lambda0) + 1 term") {
    const double with_gap = inner_complexity_estimate(o, p, 1.0, 5.0, 1e-7);
    const double no_gap = inner_complexity_estimate(o, p, 1.0, 0.0, 1e-7);
    CHECK(no_gap < with_gap);
    // The remaining terms depend on lambda0 and M only; quadruple the gap
    // and the difference scales linearly.
    const double with_4gap = inner_complexity_estimate(o, p, 1.0, 20.0, 1e-7);
    CHECK(with_4gap - no_gap ==
          doctest::Approx(4.0 * (with_gap - no_gap)).epsilon(1e-9));
  }
  SUBCASE("doubling M scales the dominant term by about sqrt(2)") {
    ProblemOracle o2 = o;
    o2.M = 2.0 * o.M;
    const double big = 1e8;  // gap so large the sqrt(M m) term dominates
    const double r = inner_complexity_estimate(o2, p, 1.0, big, 1e-7) /
                     inner_complexity_estimate(o, p, 1.0, big, 1e-7);
    CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(0.15));
  }
  SUBCASE("actual inner iterations stay below the assembled bound") {
    Vec z0 = test::e1(2);
    SolverParams loose = p;
    loose.rho_bar = 1e-5;
    SolveOutcome out = raipp_solve(o, z0, loose, StepsizePolicy::aippv1());
    REQUIRE(out.status == SolveStatus::SuccessStationary);
    const double gap = out.trace.phi0 - out.trace.records.back().phi;
    CHECK(double(out.total_inner_iterations) <=
          inner_complexity_estimate(o, loose, 1.0, gap, loose.rho_bar));
  }
  SUBCASE("rejects negative gap") {
    CHECK_THROWS_AS(inner_complexity_estimate(o, p, 1.0, -1.0, 1e-7),
                    std::invalid_argument);
  }
}

TEST_CASE("min residual is nonincreasing along the trace") {
  rng::Stream stream(53, "beta_mono");
  ProblemOracle o = test::quadratic_oracle(
      test::random_spd_like(3, -1.5, 4.0, stream), Vec::Zero(3), 1.5, 4.0);
  test::add_box(o, -2.0, 2.0);
  Vec z0(3);
  for (Eigen::Index i = 0; i < 3; ++i) z0[i] = stream.uniform(-1.0, 1.0);
  SolveOutcome out = raipp_solve(o, z0, SolverParams::from_sigma(0.3),
                                 StepsizePolicy::aippc(o.m));
  double best = kInf;
  for (const TraceRecord& rec : out.trace.records) {
    CHECK(rec.beta <= best + 1e-15);
    best = std::min(best, rec.v_norm);
    CHECK(rec.beta == doctest::Approx(best));
  }
}
