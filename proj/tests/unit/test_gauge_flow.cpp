#include <doctest.h>

#include <cmath>

#include "dnlsgauge/error.hpp"
#include "dnlsgauge/functionals.hpp"
#include "dnlsgauge/gauge_flow.hpp"
#include "oracles.hpp"

using namespace dnlsgauge;

namespace {

FlowOptions steps(int n, bool traj = false) {
  FlowOptions o;
  o.step_count = n;
  o.store_trajectory = traj;
  return o;
}

}  // namespace

TEST_CASE("recommended step count") {
  CHECK(recommended_step_count(0.0, 1.0) == 1);
  CHECK(recommended_step_count(0.5, 1.0) == 32);
  CHECK(recommended_step_count(-0.5, 0.5) == 32);
  CHECK(recommended_step_count(0.5, 2.0) == 128);
  CHECK_THROWS_AS(recommended_step_count(NAN, 1.0), Error);
}

TEST_CASE("flow options validation") {
  FlowOptions o;
  CHECK_NOTHROW(o.validate());
  o.step_count = 0;
  CHECK_THROWS_AS(o.validate(), Error);
  o.step_count = 4;
  o.oversample_factor = 3;
  CHECK_THROWS_AS(o.validate(), Error);
  auto u = oracle::fixed_u(2);
  CHECK_THROWS_AS(gauge_truncated(u, 0.1, 2, o), Error);
  CHECK_THROWS_AS(gauge_truncated(u, 0.1, -1, steps(4)), Error);
  CHECK_THROWS_AS(gauge_truncated(u, INFINITY, 2, steps(4)), Error);
  CHECK_THROWS_AS(gauge_exact(u, NAN, FlowOptions{}), Error);
}

TEST_CASE("vector field matches the oracle flow derivative") {
  auto u = oracle::fixed_u(3);
  auto v = gauge_vector_field(u, 3);
  const double h = 1e-5;
  auto p = oracle::truncated_flow_rk45(u, h, 3);
  auto m = oracle::truncated_flow_rk45(u, -h, 3);
  for (int n = -3; n <= 3; ++n) {
    const Complex fd = (p[n] - m[n]) / (2 * h);
    CHECK(std::abs(v[n] - fd) < 1e-8);
  }
}

TEST_CASE("truncated flow agrees with adaptive integration") {
  for (unsigned seed : {3u, 4u}) {
    auto u = oracle::random_u(4, seed);
    for (double a : {0.4, -0.3}) {
      auto r = gauge_truncated(u, a, 4, steps(256));
      auto o = oracle::truncated_flow_rk45(u, a, 4);
      CHECK(l2_distance(r.final_state, o) < 1e-9);
    }
  }
}

TEST_CASE("single mode is a pure phase rotation and potential vanishes") {
  auto u = SpectralFunction::from_modes(2, {{1, Complex(0.6, 0.8)}});
  auto r = gauge_truncated(u, 0.7, 2, steps(8));
  CHECK(l2_distance(r.final_state, u) < 1e-15);
  CHECK(r.divergence_integral == doctest::Approx(0.7 * divergence(u, 2)).epsilon(1e-12));
  auto e = gauge_exact(u, 0.7, FlowOptions{});
  CHECK(e.value == u);
  CHECK(e.tail_mass == 0.0);
}

TEST_CASE("tail above N is frozen and cutoff grows to max(N, cutoff)") {
  auto u = oracle::fixed_u(5);
  auto r = gauge_truncated(u, 0.5, 3, steps(32));
  CHECK(r.final_state.cutoff() == 5);
  for (int n : {-5, -4, 4, 5}) CHECK(r.final_state[n] == u[n]);
  auto w = gauge_truncated(oracle::fixed_u(2), 0.5, 4, steps(32));
  CHECK(w.final_state.cutoff() == 4);
}

TEST_CASE("mass conservation, alpha = 0 identity, reversibility") {
  for (unsigned seed = 10; seed < 15; ++seed) {
    auto u = oracle::random_u(6, seed);
    auto r = gauge_truncated(u, 0.5, 6, steps(64));
    CHECK(r.l2_drift < 1e-10);
    auto id = gauge_truncated(u, 0.0, 6, steps(4));
    CHECK(id.final_state == u);
    CHECK(id.divergence_integral == 0.0);
    auto back = gauge_truncated(r.final_state, -0.5, 6, steps(64)).final_state;
    CHECK(l2_distance(back, u) < 1e-8);
  }
  auto zero = gauge_truncated(SpectralFunction(3), 1.0, 3, steps(4));
  CHECK(zero.l2_drift == 0.0);
}

TEST_CASE("group law") {
  auto u = oracle::random_u(8, 21);
  CHECK(group_defect(u, 0.1, 0.2, 8, steps(128)) < 1e-9);
  CHECK(group_defect(u, 0.3, -0.3, 8, steps(128)) < 1e-9);
}

TEST_CASE("trajectory order along the integration direction") {
  auto u = oracle::fixed_u(2);
  auto r = gauge_truncated(u, -0.4, 2, steps(4, true));
  REQUIRE(r.trajectory.size() == 5);
  CHECK(r.trajectory.front().alpha == 0.0);
  CHECK(r.trajectory.front().state == u);
  CHECK(r.trajectory[1].alpha == doctest::Approx(-0.1));
  CHECK(r.trajectory.back().alpha == doctest::Approx(-0.4));
  CHECK(r.trajectory.back().state == r.final_state);
  CHECK(gauge_truncated(u, 0.4, 2, steps(4)).trajectory.empty());
}

TEST_CASE("divergence integral: Simpson variants agree with a fine reference") {
  auto u = oracle::random_u(3, 5);
  const double ref = gauge_truncated(u, 0.3, 3, steps(512)).divergence_integral;
  for (int n : {1, 2, 3, 5, 8, 33}) {
    const double tol = n == 1 ? 1e-2 : (n < 8 ? 1e-4 : 1e-8);
    CHECK(std::abs(gauge_truncated(u, 0.3, 3, steps(n)).divergence_integral - ref) < tol * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("gauge_exact reproduces the Bessel expansion") {
  // |1 + e^{ix}|^2 = 2 + 2cos x, potential 2 sin x, so G_{0.3} u = e^{0.6 i sin x}(1 + e^{ix})
  auto u = SpectralFunction::from_modes(1, {{0, 1.0}, {1, 1.0}});
  FlowOptions o;
  o.oversample_factor = 4;
  CHECK_THROWS_AS(gauge_exact(u, 0.3, o), Error);
  o.oversample_factor = 16;
  auto e = gauge_exact(u, 0.3, o);
  CHECK(e.output_cutoff == e.value.cutoff());
  CHECK(e.tail_mass < 1e-10 * std::sqrt(2.0));
  const double expected[] = {-0.0040681863405819555, 0.039265440007479495, -0.24303589134807405,
                             0.625303875433295,      1.1987058515611264,   0.33036608477975743,
                             0.04806475342420388,    0.00473112707614243};
  for (int n = -3; n <= 4; ++n) CHECK(std::abs(e.value[n] - expected[n + 3]) < 1e-13);
}

TEST_CASE("gauge_exact preserves modulus and mass, matches truncated flow for large N") {
  auto u = oracle::random_u(4, 9, 0.5);
  FlowOptions o;
  o.oversample_factor = 8;
  auto e = gauge_exact(u, 0.4, o);
  CHECK(std::abs(l2_norm_sq(e.value) - l2_norm_sq(u)) < 1e-12);
  const int G = 4 * (2 * e.value.cutoff() + 1);
  auto ve = evaluate(e.value, G);
  auto vu = evaluate(u, G);
  for (std::size_t k = 0; k < ve.size(); ++k) CHECK(std::abs(std::abs(ve[k]) - std::abs(vu[k])) < 1e-10);
  // truncated flows converge to the exact one as N grows
  o.step_count = 128;
  const double d8 = flow_discrepancy(u, 0.4, 8, o);
  const double d24 = flow_discrepancy(u, 0.4, 24, o);
  CHECK(d24 < d8);
  CHECK(d24 < 1e-3);
}

TEST_CASE("gauge_exact with alpha = 0 is the identity") {
  auto u = oracle::fixed_u(3);
  auto e = gauge_exact(u, 0.0, FlowOptions{});
  CHECK(e.value == u);
  CHECK(e.output_cutoff == 3);
}
