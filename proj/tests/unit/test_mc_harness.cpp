#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "dnlsgauge/error.hpp"
#include "dnlsgauge/functionals.hpp"
#include "dnlsgauge/mc_harness.hpp"
#include "oracles.hpp"

using namespace dnlsgauge;

namespace {

MeasureSpec spec(double s, int N, std::optional<double> R = std::nullopt) {
  MeasureSpec m;
  m.s = s;
  m.cutoff = N;
  m.radius = R;
  m.master_seed = 123;
  return m;
}

}  // namespace

TEST_CASE("statistic names round trip") {
  for (auto k : {StatisticKind::FN, StatisticKind::FDiff, StatisticKind::Divergence, StatisticKind::LStat,
                 StatisticKind::XTotal, StatisticKind::YTotal})
    CHECK(parse_statistic_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_statistic_kind("nope"), Error);
  Statistic st{StatisticKind::FDiff, 8, 4, 0.0, 1};
  CHECK(st.name() == "f_diff:N=8:M=4");
}

TEST_CASE("statistic evaluation dispatches to the functionals") {
  auto m = spec(1.0, 6);
  auto u = oracle::random_u(6, 2);
  CHECK(Statistic{StatisticKind::FN}.evaluate(u, m) == f_n(u, 6, 1.0).value);
  CHECK(Statistic{StatisticKind::FN, 3}.evaluate(u, m) == f_n(u, 3, 1.0).value);
  CHECK(Statistic{StatisticKind::FDiff, 6, 2}.evaluate(u, m) == f_n(u, 6, 1.0).value - f_n(u, 2, 1.0).value);
  CHECK(Statistic{StatisticKind::Divergence}.evaluate(u, m) == divergence(u, 6));
  CHECK(Statistic{StatisticKind::LStat, 0, 0, 0.5, 2}.evaluate(u, m) == lp_stats(u, 6, 1.0, 0.5, 2).l_stat);
  CHECK(Statistic{StatisticKind::YTotal}.evaluate(u, m) == lp_stats(u, 6, 1.0, 0.0, 1).y_total);
}

TEST_CASE("parallel_for covers every index once and reports the lowest failure") {
  for (unsigned w : {1u, 3u, 8u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(1000, w, [&](std::uint64_t i) { hits[i]++; });
    bool ok = true;
    for (auto& h : hits) ok &= (h.load() == 1);
    CHECK(ok);
  }
  parallel_for(0, 2, [](std::uint64_t) { throw std::runtime_error("never"); });
  for (unsigned w : {1u, 4u}) {
    try {
      parallel_for(500, w, [](std::uint64_t i) {
        if (i == 77 || i == 300) throw std::runtime_error("fail " + std::to_string(i));
      });
      FAIL("expected throw");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "fail 77");
    }
  }
}

TEST_CASE("sample_values is independent of the worker count") {
  auto m = spec(1.0, 8);
  auto f = [](const SpectralFunction& u) { return f_n(u, 8, 1.0).value; };
  auto a = sample_values(m, 300, {1, 0}, f);
  auto b = sample_values(m, 300, {4, 0}, f);
  CHECK(a == b);
  auto c = sample_values(m, 300, {1, 1}, f);
  CHECK(a != c);
}

TEST_CASE("mean estimate") {
  auto e = mean_estimate({1.0, 2.0, 3.0, 4.0});
  CHECK(e.value == 2.5);
  CHECK(e.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(e.n_samples == 4);
  CHECK(mean_estimate({}).n_samples == 0);
  CHECK(mean_estimate({7.0}).std_error == 0.0);
}

TEST_CASE("moment estimates") {
  auto m = spec(1.0, 6);
  Statistic st{StatisticKind::Divergence};
  auto pm = estimate_power_mean(st, 2.0, m, 2000);
  auto mo = estimate_moment(st, 2.0, m, 2000);
  CHECK(mo.value == doctest::Approx(std::sqrt(pm.value)));
  CHECK(mo.std_error == doctest::Approx(pm.std_error / (2.0 * mo.value)));
  CHECK(pm.n_samples == 2000);
  CHECK_THROWS_AS(estimate_moment(st, 0.5, m, 2000), Error);
  CHECK_THROWS_AS(estimate_moment(st, 2.0, m, 50), Error);
  // E div^2 in closed form: 4 sum_n (H_{N+n}-H_{N-n})^2 Var(|u(-n)|^2 - |u(n)|^2), Var|g|^2 v = v^2
  double exact = 0.0;
  for (int n = 1; n <= 6; ++n) {
    double w = 0.0;
    for (int k = 6 - n + 1; k <= 6 + n; ++k) w += 1.0 / k;
    const double v = pair_variance(n, 1.0);
    exact += 4.0 * w * w * 2.0 * v * v;
  }
  CHECK(std::abs(pm.value - exact) < 4.0 * pm.std_error);
}

TEST_CASE("Clopper-Pearson bounds") {
  auto ci = clopper_pearson(0, 10);
  CHECK(ci.lo == 0.0);
  CHECK(ci.hi == doctest::Approx(0.30849710).epsilon(1e-6));
  auto all = clopper_pearson(10, 10);
  CHECK(all.hi == 1.0);
  CHECK(all.lo == doctest::Approx(0.69150290).epsilon(1e-6));
  auto mid = clopper_pearson(5, 10);
  CHECK(mid.lo == doctest::Approx(0.18708603).epsilon(1e-6));
  CHECK(mid.hi == doctest::Approx(0.81291397).epsilon(1e-6));
  CHECK_THROWS_AS(clopper_pearson(11, 10), Error);
  CHECK_THROWS_AS(clopper_pearson(0, 0), Error);
  CHECK_THROWS_AS(clopper_pearson(1, 10, 1.0), Error);
}

TEST_CASE("tail curves") {
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  auto tc = tail_curve_from_values(v, {0.5, 50.0, 100.0, 200.0});
  CHECK(tc.counts == std::vector<std::uint64_t>{100, 51, 1, 0});
  CHECK(tc.log_survival[0] == 0.0);
  CHECK(tc.log_survival[1] == doctest::Approx(std::log(0.51)));
  CHECK(std::isinf(tc.log_survival[3]));
  CHECK(tc.log_survival[3] < 0);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(tc.log_cp_lo[i] <= tc.log_survival[i]);
    CHECK(tc.log_survival[i] <= tc.log_cp_hi[i]);
  }
  CHECK(std::isfinite(tc.log_cp_hi[3]));
  CHECK_THROWS_AS(tail_curve_from_values(v, {2.0, 1.0}), Error);
  CHECK_THROWS_AS(tail_curve_from_values({}, {1.0}), Error);
  CHECK_THROWS_AS(tail_curve(Statistic{}, spec(1.0, 4), {1.0}, 100), Error);
}

TEST_CASE("test sets") {
  auto u = SpectralFunction::from_modes(2, {{0, 0.5}, {1, Complex(0.3, 1.0)}});
  TestSet all;
  CHECK(all.contains(u, 2, 1.0));
  CHECK(all.describe() == "everything");
  TestSet ball{TestSet::Kind::SobolevBall, std::sqrt(1.09) + 1e-12};
  CHECK(ball.contains(u, 2, 1.0));
  ball.radius = 1.0;
  CHECK(!ball.contains(u, 2, 1.0));
  TestSet half{TestSet::Kind::HalfSpace, 0.0, 1, 0.3};
  CHECK(half.contains(u, 2, 1.0));
  half.level = 0.31;
  CHECK(!half.contains(u, 2, 1.0));
  TestSet linf{TestSet::Kind::LinfGridBall, 0.5 + std::sqrt(1.09) + 1e-9};
  CHECK(linf.contains(u, 2, 1.0));
  linf.radius = 1.0;
  CHECK(!linf.contains(u, 2, 1.0));
  CHECK(half.describe().find("halfspace") == 0);
}

TEST_CASE("pushforward identity at small N") {
  auto m = spec(1.0, 3, 1.0);
  FlowOptions o;
  o.step_count = 16;
  auto zero = pushforward_check(TestSet{}, 0.0, m, 500, o);
  CHECK(zero.z_score == 0.0);
  CHECK(zero.lhs.value == 1.0);
  CHECK(zero.rhs.value == 1.0);
  auto half = pushforward_check(TestSet{TestSet::Kind::HalfSpace, 0.0, 1, 0.0}, 0.3, m, 4000, o);
  CHECK(std::abs(half.z_score) < 4.0);
  auto full = pushforward_check(TestSet{}, 0.3, m, 4000, o);
  CHECK(std::abs(full.rhs.value - 1.0) < 4.0 * full.rhs.std_error);
  CHECK_THROWS_AS(pushforward_check(TestSet{}, 0.3, m, 0, o), Error);
}

TEST_CASE("log jacobian weight vanishes at alpha = 0") {
  auto m = spec(1.0, 4);
  auto u = oracle::random_u(4, 1);
  CHECK(log_jacobian_weight(u, 0.0, m, FlowOptions{}) == 0.0);
}

TEST_CASE("rate fit and R*") {
  std::vector<double> x{1, 2, 4, 8}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -0.75));
  auto f = rate_fit(x, y);
  CHECK(f.slope == doctest::Approx(-0.75));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.slope_stderr < 1e-12);
  CHECK_THROWS_AS(rate_fit({1, 2}, {1, 2}), Error);
  CHECK_THROWS_AS(rate_fit({1, 2, 3}, {1, -2, 3}), Error);
  CHECK_THROWS_AS(rate_fit({1, 1, 1}, {1, 2, 3}), Error);
  CHECK_THROWS_AS(rate_fit({1, 2, 3}, {1, 2}), Error);
  CHECK(r_star(1.0, 1.0) == 1.0);
  CHECK(r_star(2.0, 1.0) == doctest::Approx(4.0));
  CHECK(r_star(0.5, 1.5) == doctest::Approx(0.5));
  CHECK_THROWS_AS(r_star(1.0, 0.5), Error);
  CHECK_THROWS_AS(r_star(0.0, 1.0), Error);
}
