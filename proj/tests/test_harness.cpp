#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "cdsc/harness.hpp"

using namespace cdsc;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.model = or_gate_model(3, 0.6);
  spec.algorithm = Algorithm::Ic;
  spec.sample_sizes = {200.0, 2000.0};
  spec.trials = 25;
  spec.base_seed = 314;
  spec.tester.epsilon = 0.18;
  return spec;
}

ErrorCurve synthetic(std::initializer_list<std::pair<double, double>> pts) {
  ErrorCurve c;
  for (const auto& [m, err] : pts) {
    ErrorPoint p;
    p.m = m;
    p.error_rate = err;
    c.points.push_back(p);
  }
  return c;
}

}  // namespace

TEST_CASE("experiment results do not depend on the worker count") {
  ExperimentSpec one = small_spec();
  one.workers = 1;
  ExperimentSpec many = small_spec();
  many.workers = 4;
  const ErrorCurve a = error_rate_experiment(one);
  const ErrorCurve b = error_rate_experiment(many);
  const ErrorCurve c = error_rate_experiment(many);
  REQUIRE(a.points.size() == 2);
  for (std::size_t k = 0; k < a.points.size(); ++k) {
    CHECK(a.points[k].failures == b.points[k].failures);
    CHECK(b.points[k].failures == c.points[k].failures);
    CHECK(a.points[k].trials == 25);
    CHECK(a.points[k].error_rate ==
          doctest::Approx(a.points[k].failures / 25.0).epsilon(1e-15));
    const double p = a.points[k].error_rate;
    CHECK(a.points[k].ci_halfwidth ==
          doctest::Approx(1.96 * std::sqrt(p * (1 - p) / 25.0)).epsilon(1e-12));
  }
}

TEST_CASE("error decays with the per-test budget") {
  ExperimentSpec spec = small_spec();
  spec.sample_sizes = {150.0, 30000.0};
  spec.trials = 30;
  const ErrorCurve curve = error_rate_experiment(spec);
  CHECK(curve.points[1].error_rate <= curve.points[0].error_rate + 0.15);
  CHECK(curve.points[1].error_rate <= 0.2);
}

TEST_CASE("experiment validation") {
  ExperimentSpec spec = small_spec();
  spec.trials = 0;
  CHECK_THROWS_AS(error_rate_experiment(spec), InvalidParameter);
  spec = small_spec();
  spec.sample_sizes.clear();
  CHECK_THROWS_AS(error_rate_experiment(spec), InvalidParameter);
  spec = small_spec();
  spec.sample_sizes = {0.0};
  CHECK_THROWS_AS(error_rate_experiment(spec), InvalidParameter);
}

TEST_CASE("theoretical curve inverts the planner") {
  const double q1 = planner_q1(3, 2, 0.1, Algorithm::Ic);
  // alpha * m_expected is invariant in alpha for the exact plan
  TesterConfig config;
  config.epsilon = 0.1;
  CHECK(q1 == doctest::Approx(0.3 * budget_ic({2, 2, 2}, 0.3, 0.1, config).m_expected)
                  .epsilon(1e-9));

  const auto alphas =
      theoretical_curve(3, 2, 0.1, 1.0, {1.0, q1 / 0.05, 2.0 * q1 / 0.05}, Algorithm::Ic);
  CHECK(alphas[0] == 1.0);  // clipped
  CHECK(alphas[1] == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(alphas[2] == doctest::Approx(0.025).epsilon(1e-12));

  // doubling c_prime doubles the unclipped predictions
  const auto twice =
      theoretical_curve(3, 2, 0.1, 2.0, {q1 / 0.05}, Algorithm::Ic);
  CHECK(twice[0] == doctest::Approx(0.1).epsilon(1e-12));

  const double q1_pc = planner_q1(6, 2, 0.1, Algorithm::Pc, 1);
  CHECK(q1_pc ==
        doctest::Approx(0.5 * bound_sparsity(6, 2, 0.5, 0.1, 1, config)).epsilon(1e-12));

  ErrorCurve curve = synthetic({{10.0, 1.0}, {100.0, 0.5}});
  attach_theoretical(curve, 3, 2, 0.1, 1.0, Algorithm::Ic);
  CHECK(curve.points[0].theoretical_alpha == 1.0);
  CHECK(curve.points[1].theoretical_alpha ==
        doctest::Approx(std::min(1.0, q1 / 100.0)).epsilon(1e-12));
}

TEST_CASE("calibration finds the half-error crossing") {
  const double q1 = 1000.0;

  // crossing between the grid points, interpolated in log m
  const ErrorCurve mid = synthetic({{100.0, 0.9}, {1000.0, 0.1}});
  const double expect_mid = 0.5 * std::pow(10.0, 2.5) / q1;
  CHECK(calibrate_c_prime(mid, q1) == doctest::Approx(expect_mid).epsilon(1e-12));

  // crossing exactly on a grid point
  const ErrorCurve exact = synthetic({{100.0, 0.8}, {400.0, 0.5}, {1600.0, 0.2}});
  CHECK(calibrate_c_prime(exact, q1) == doctest::Approx(0.5 * 400.0 / q1).epsilon(1e-9));

  // whole curve below one half: clamp to the left edge
  const ErrorCurve low = synthetic({{100.0, 0.3}, {1000.0, 0.1}});
  CHECK(calibrate_c_prime(low, q1) == doctest::Approx(0.5 * 100.0 / q1).epsilon(1e-12));

  // whole curve above one half: clamp to the right edge
  const ErrorCurve high = synthetic({{100.0, 0.9}, {1000.0, 0.7}});
  CHECK(calibrate_c_prime(high, q1) == doctest::Approx(0.5 * 1000.0 / q1).epsilon(1e-12));

  CHECK_THROWS_AS(calibrate_c_prime(ErrorCurve{}, q1), InvalidParameter);
  CHECK_THROWS_AS(calibrate_c_prime(mid, 0.0), InvalidParameter);
}

TEST_CASE("worst-case to sparse comparison grows with n") {
  TesterConfig config;
  config.epsilon = 0.1;
  const auto rows = budget_comparison(3, 8, 2, 0.05, 0.1, 1, config);
  REQUIRE(rows.size() == 6);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].n == 3 + static_cast<int>(k));
    CHECK(rows[k].m_ic == bound_uniform(rows[k].n, 2, 0.05, 0.1, config));
    CHECK(rows[k].m_pc ==
          bound_sparsity(rows[k].n, 2, 0.05, 0.1, std::min(1, rows[k].n - 2), config));
    CHECK(rows[k].ratio == doctest::Approx(rows[k].m_ic / rows[k].m_pc).epsilon(1e-15));
    if (k > 0) {
      CHECK(rows[k].m_ic > rows[k - 1].m_ic);
      CHECK(rows[k].ratio >= rows[k - 1].ratio - 1e-12);
    }
  }
  CHECK_THROWS_AS(budget_comparison(2, 5, 2, 0.05, 0.1, 1, config), InvalidParameter);
}

TEST_CASE("weakest dependent distance on the or-gate") {
  CHECK(weakest_dependent_tv(or_gate_model(3, 0.6)) ==
        doctest::Approx(0.18).epsilon(1e-12));

  // three isolated coins have no dependent triple
  BayesNet flat;
  flat.dag.nodes = {{"X1", 2}, {"X2", 2}, {"X3", 2}};
  flat.cpts = {{{0.5, 0.5}}, {{0.5, 0.5}}, {{0.5, 0.5}}};
  CHECK_THROWS_AS(weakest_dependent_tv(flat), InvalidParameter);
}

TEST_CASE("worker resolution respects the environment cap") {
  CHECK(resolve_workers(3) >= 1);
  setenv("CDSC_THREADS", "2", 1);
  CHECK(resolve_workers(8) == 2);
  CHECK(resolve_workers(1) == 1);
  CHECK(resolve_workers(0) <= 2);
  unsetenv("CDSC_THREADS");
  CHECK(resolve_workers(5) == 5);
}
