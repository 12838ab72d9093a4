#include <doctest.h>

#include <cmath>

#include "raipp/numerics.hpp"
#include "raipp/penalty.hpp"
#include "raipp/problems.hpp"
#include "raipp/rng.hpp"
#include "test_helpers.hpp"

using namespace raipp;

namespace {

// A 1-D "operator set" acting as the identity on a scalar variable.
SymOpSet identity_op_1d() {
  SymOpSet ops;
  ops.n = 1;
  CooSymMat m;
  m.entries.push_back({0, 0, 1.0});
  ops.mats.push_back(m);
  return ops;
}

}  // namespace

TEST_CASE("penalized_oracle") {
  SUBCASE("1-D hand example: f = 0, A = id, b = 0, c = 2") {
    ProblemOracle f;
    f.smooth_value = [](const Vec&) { return 0.0; };
    f.smooth_grad = [](const Vec& z) -> Vec { return Vec::Zero(z.size()); };
    f.nonsmooth_value = [](const Vec&) { return 0.0; };
    f.nonsmooth_prox = [](const Vec& u, double) -> Vec { return u; };
    f.m = 1e-12;
    f.M = 1e-12;

    SymOpSet A = identity_op_1d();
    ProblemOracle g = penalized_oracle(f, A, Vec::Zero(1), 2.0, 1e-12, 1.0);
    const Vec z = test::scalar(1.5);
    CHECK(g.smooth_value(z) == doctest::Approx(z[0] * z[0]).epsilon(1e-12));
    CHECK(g.smooth_grad(z)[0] == doctest::Approx(2.0 * z[0]).epsilon(1e-12));
    CHECK(g.M == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(g.m == doctest::Approx(1e-12));
  }

  SUBCASE("vanishing c recovers the unpenalized oracle") {
    LcInstance inst = gen_lc_instance(4, 3, 1.0, 5.0, 21);
    ProblemOracle f = lc_f_oracle(inst);
    ProblemOracle g =
        penalized_oracle(f, inst.A, inst.b, 1e-300, inst.L_f, inst.A_norm);
    const Vec z = inst.z0;
    CHECK(g.smooth_value(z) == doctest::Approx(f.smooth_value(z)).epsilon(1e-12));
    CHECK((g.smooth_grad(z) - f.smooth_grad(z)).norm() <=
          1e-12 * (1.0 + f.smooth_grad(z).norm()));
    CHECK(g.M == doctest::Approx(inst.L_f).epsilon(1e-12));
  }

  SUBCASE("gradient matches finite differences on a random instance") {
    LcInstance inst = gen_lc_instance(5, 4, 0.8, 10.0, 23);
    ProblemOracle f = lc_f_oracle(inst);
    ProblemOracle g =
        penalized_oracle(f, inst.A, inst.b, 7.0, inst.L_f, inst.A_norm);
    rng::Stream stream(97, "penfd");
    for (int t = 0; t < 5; ++t) {
      Mat X(4, 4);
      for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 4; ++j) X(i, j) = stream.uniform(-1.0, 1.0);
      Vec z = sym_flatten(spectraplex_project(X));
      CHECK(fd_gradient_check(g.smooth_value, g.smooth_grad(z), z, 1e-5) <=
            1e-6);
    }
  }

  SUBCASE("stage-1 curvature ratio is 1000 with the default c0") {
    LcInstance inst = gen_lc_instance(4, 3, 1.0, 10.0, 25);
    ProblemOracle f = lc_f_oracle(inst);
    const double c0 =
        (1e3 - 1.0) * inst.L_f / (inst.A_norm * inst.A_norm);
    ProblemOracle g =
        penalized_oracle(f, inst.A, inst.b, c0, inst.L_f, inst.A_norm);
    CHECK(g.M / g.m == doctest::Approx(1000.0).epsilon(1e-9));
  }
}

TEST_CASE("penalty stage schedule follows c0 * growth^(k-1)") {
  LcInstance inst = gen_lc_instance(5, 4, 1.0, 10.0, 27);
  PenaltyConfig cfg;
  cfg.inner_method = InnerMethod::AIPPv1;
  cfg.c0 = 3.0;
  cfg.growth = 2.0;
  cfg.rho_bar = 1e-4;   // loose: only the schedule matters here
  cfg.eta_bar = 1e-30;  // unreachable, so all stages run
  cfg.max_stages = 3;
  PenaltyReport rep = penalty_solve(inst, cfg);
  CHECK_FALSE(rep.feasible);
  REQUIRE(rep.stages.size() == 3);
  CHECK(rep.stages[0].c == doctest::Approx(3.0));
  CHECK(rep.stages[1].c == doctest::Approx(6.0));
  CHECK(rep.stages[2].c == doctest::Approx(12.0));
}

TEST_CASE("tiny penalty run reaches feasibility, verified independently") {
  LcInstance inst = gen_lc_instance(5, 4, 1.0, 10.0, 29);
  PenaltyConfig cfg;
  cfg.inner_method = InnerMethod::AIPPv2;
  PenaltyReport rep = penalty_solve(inst, cfg);
  REQUIRE(rep.feasible);
  const double feas =
      (inst.A.apply(rep.z) - inst.b).norm() / (1.0 + inst.b.norm());
  CHECK(feas <= 1e-4);
  CHECK(feas == doctest::Approx(rep.stages.back().feasibility).epsilon(1e-12));
  CHECK(rep.total_inner_iterations > 0);

  // Stage residuals met the relative target.
  for (const PenaltyStage& st : rep.stages)
    CHECK(st.residual <= cfg.rho_bar * (1.0 + 1e-10));
}

TEST_CASE("warm starts chain stages bit-for-bit") {
  // Running two stages in one call must equal running stage 1 alone and
  // then restarting the driver from its result with the stage-2 penalty.
  LcInstance inst = gen_lc_instance(5, 4, 1.0, 10.0, 31);
  PenaltyConfig cfg;
  cfg.inner_method = InnerMethod::AIPPv1;
  cfg.c0 = 5.0;
  cfg.rho_bar = 1e-5;
  cfg.eta_bar = 1e-30;
  cfg.max_stages = 2;
  PenaltyReport two = penalty_solve(inst, cfg);
  REQUIRE(two.stages.size() == 2);

  PenaltyConfig first = cfg;
  first.max_stages = 1;
  PenaltyReport one = penalty_solve(inst, first);
  REQUIRE(one.stages.size() == 1);
  CHECK(one.stages[0].objective == two.stages[0].objective);
  CHECK(one.stages[0].inner_iterations == two.stages[0].inner_iterations);

  LcInstance warm = inst;
  warm.z0 = one.z;
  PenaltyConfig second = cfg;
  second.c0 = 10.0;  // stage-2 value of the original schedule
  second.max_stages = 1;
  PenaltyReport rest = penalty_solve(warm, second);
  REQUIRE(rest.stages.size() == 1);
  CHECK(rest.stages[0].c == doctest::Approx(two.stages[1].c));
  CHECK(rest.stages[0].inner_iterations == two.stages[1].inner_iterations);
  CHECK((rest.z.array() == two.z.array()).all());
}
