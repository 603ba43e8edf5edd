#include <doctest.h>

#include <cmath>

#include "dnlsgauge/error.hpp"
#include "dnlsgauge/functionals.hpp"
#include "dnlsgauge/gauge_flow.hpp"
#include "oracles.hpp"

using namespace dnlsgauge;

namespace {

bool rel_close(double a, double b, double rel, double abs_floor = 0.0) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + abs_floor;
}

}  // namespace

TEST_CASE("f_n frozen values") {
  auto u = oracle::fixed_u(3);
  CHECK(rel_close(f_n(u, 3, 0.8).value, 0.12626443547118266, 1e-13));
  CHECK(rel_close(f_n(u, 3, 1.5).value, 0.5529507638888893, 1e-13));
  CHECK(rel_close(f_n(u, 2, 1.0).value, 0.06113333333333334, 1e-13));
}

TEST_CASE("f_n trivial cases") {
  CHECK(f_n(SpectralFunction(4), 4, 1.0).value == 0.0);
  CHECK(f_n(SpectralFunction::from_modes(3, {{2, 1.0}}), 3, 1.0).value == 0.0);
  CHECK(f_n(oracle::fixed_u(3), 0, 1.0).value == 0.0);
  // u = 1 + e^{ix}: only (n1, m1) in {(0,1),(1,0)}; m1 = 0 drops out
  // term n1=0, m1=1, p=1: 1 * 1 * A(1) = 1, value 2 Re = 2
  auto u = SpectralFunction::from_modes(1, {{0, 1.0}, {1, 1.0}});
  CHECK(f_n(u, 1, 1.0).value == doctest::Approx(2.0));
  CHECK_THROWS_AS(f_n(u, -1, 1.0), Error);
  CHECK_THROWS_AS(f_n(u, 1, 0.0), Error);
  CHECK_THROWS_AS(f_n(u, 1, NAN), Error);
  // N above the cutoff reads zeros
  CHECK(f_n(u, 5, 1.0).value == doctest::Approx(2.0));
}

TEST_CASE("f_n equals the cubic oracle and is real") {
  for (unsigned seed = 1; seed <= 6; ++seed) {
    auto u = oracle::random_u(7, seed);
    for (double s : {0.6, 1.0, 1.5}) {
      CHECK(rel_close(f_n(u, 7, s).value, oracle::f_n_cubic(u, 7, s), 1e-12, 1e-14));
      const auto parts = oracle::f_n_complex_parts(u, 7, s);
      const Complex sum = parts[0] + parts[1];
      CHECK(std::abs(sum.imag()) <= 1e-12 * (std::abs(parts[0]) + 1.0));
      CHECK(rel_close(2.0 * parts[0].real(), sum.real(), 1e-12, 1e-14));
    }
  }
}

TEST_CASE("f_n is the derivative of the Hdot^s norm along the exact flow") {
  for (unsigned seed = 30; seed < 33; ++seed) {
    auto u = oracle::random_u(5, seed, 0.7);
    for (double s : {0.6, 1.0, 1.5}) {
      const double h = 1e-4;
      const int G = 16 * 11;
      const double fd =
          (oracle::exact_flow_hdot_sq(u, h, s, G) - oracle::exact_flow_hdot_sq(u, -h, s, G)) / (2 * h);
      CHECK(rel_close(f_n(u, 5, s).value, fd, 1e-6, 1e-10));
    }
  }
}

TEST_CASE("f_n is invariant under phase rotation and conjugate-reflection flips its sign") {
  auto u = oracle::random_u(6, 77);
  const double f = f_n(u, 6, 1.2).value;
  CHECK(rel_close(f_n(Complex(std::cos(0.9), std::sin(0.9)) * u, 6, 1.2).value, f, 1e-12));
  // v(n) = conj u(-n) is the complex conjugate function; the flow direction reverses
  std::vector<Complex> c;
  for (int n = -6; n <= 6; ++n) c.push_back(std::conj(u[-n]));
  CHECK(rel_close(f_n(SpectralFunction(6, c), 6, 1.2).value, -f, 1e-12, 1e-14));
}

TEST_CASE("f_split frozen exact split") {
  auto u = oracle::fixed_u(3);
  auto r = f_split(u, 3, 0.8, 1e-14);
  REQUIRE(r.split);
  CHECK(rel_close(r.split->f_geq, 0.09846796741169712, 1e-12));
  CHECK(std::abs(r.split->f_less - 0.02779646805948553) <= 1e-14 + r.truncation_error_bound);
  CHECK(r.series_terms >= 1);
  CHECK(r.value == f_n(u, 3, 0.8).value);
}

TEST_CASE("f_split identity and bound") {
  for (unsigned seed = 40; seed < 46; ++seed) {
    auto u = oracle::random_u(8, seed);
    for (double s : {0.7, 1.3, 2.0}) {
      const double tol = 1e-10;
      auto r = f_split(u, 8, s, tol);
      REQUIRE(r.split);
      CHECK(r.truncation_error_bound <= tol);
      CHECK(std::abs(r.split->f_less + r.split->f_geq - r.value) <= tol + 1e-9);
    }
  }
}

TEST_CASE("f_split exact for integer s once K >= s") {
  auto u = oracle::random_u(6, 3);
  auto r = f_split(u, 6, 2.0, 1e-3);
  CHECK(r.truncation_error_bound == 0.0);
  CHECK(r.series_terms == 2);
  CHECK(std::abs(r.split->f_less + r.split->f_geq - r.value) < 1e-12);
}

TEST_CASE("f_split errors") {
  auto u = oracle::random_u(6, 3);
  CHECK_THROWS_AS(f_split(u, 6, 1.0, 0.0), Error);
  CHECK_THROWS_AS(f_split(u, 6, 1.0, 1e-10, 0), Error);
  try {
    (void)f_split(u, 6, 0.5, 1e-30, 2);
    FAIL("expected limit");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Limit);
  }
  // no low region: nothing to expand
  auto one = SpectralFunction::from_modes(2, {{0, 1.0}, {1, 1.0}});
  auto r = f_split(one, 2, 1.0, 1e-10);
  CHECK(r.split->f_less == 0.0);
  CHECK(r.split->f_geq == doctest::Approx(2.0));
}

TEST_CASE("divergence frozen values and forms") {
  auto u = oracle::fixed_u(3);
  CHECK(rel_close(divergence(u, 3), -0.21369444444444446, 1e-13));
  CHECK(rel_close(divergence(u, 2), -0.1611111111111111, 1e-13));
  // single mode u(1) = 1: 2 (0 - 1) (H_2 - H_0) ... with N = 1: H_2 - H_0 = 3/2
  CHECK(divergence(SpectralFunction::from_modes(1, {{1, 1.0}}), 1) == doctest::Approx(-3.0));
  CHECK(divergence(SpectralFunction::from_modes(2, {{0, 5.0}}), 2) == 0.0);
  CHECK_THROWS_AS(divergence(u, -1), Error);
}

TEST_CASE("divergence: both forms agree, reflection antisymmetry") {
  for (unsigned seed = 50; seed < 60; ++seed) {
    auto u = oracle::random_u(12, seed, 3.0);
    const double a = divergence_closed_form(u, 12);
    const double b = divergence_double_sum(u, 12);
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
    std::vector<Complex> c;
    for (int n = -12; n <= 12; ++n) c.push_back(u[-n]);
    CHECK(divergence(SpectralFunction(12, c), 12) == doctest::Approx(-a).epsilon(1e-12));
  }
}

TEST_CASE("jacobian log det against finite-difference determinant") {
  auto u = oracle::random_u(2, 8);
  FlowOptions o;
  o.step_count = 128;
  const double ld = jacobian_log_det(u, 0.2, 2, o);
  const double det = oracle::jacobian_det_fd(u, 0.2, 2, 128);
  CHECK(rel_close(std::exp(ld), det, 1e-6));
  CHECK(jacobian_log_det(u, 0.0, 2, o) == 0.0);
}

TEST_CASE("lp_stats") {
  auto u = SpectralFunction::from_modes(5, {{0, 1.0}, {-1, 2.0}, {2, Complex(3, 4)}, {5, 1.0}, {-5, 1.0}});
  auto st = lp_stats(u, 5, 1.0, 0.5, 2);
  REQUIRE(st.x_blocks.size() == 4);
  CHECK(st.x_blocks[0] == doctest::Approx(std::sqrt(5.0)));
  CHECK(st.y_blocks[0] == doctest::Approx(3.0));
  CHECK(st.x_blocks[1] == doctest::Approx(std::pow(2.0, 0.5) * 5.0));
  CHECK(st.x_blocks[2] == 0.0);
  CHECK(st.x_blocks[3] == doctest::Approx(std::pow(2.0, 1.5) * std::sqrt(2.0)));
  CHECK(st.y_blocks[3] == doctest::Approx(2.0));
  double xs = 0, ys = 0;
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(st.x_blocks[j] >= 0.0);
    xs += st.x_blocks[j];
    ys += st.y_blocks[j];
  }
  CHECK(st.x_total == doctest::Approx(xs));
  CHECK(st.y_total == doctest::Approx(ys));
  // one-sided: n = 2 gives sqrt(2)*5, n = 5 gives sqrt(5); n = -5 ignored
  CHECK(st.l_stat == doctest::Approx(std::sqrt(2.0) * 5.0));
  CHECK(lp_stats(u, 5, 1.0, 0.5, 6).l_stat == 0.0);
  CHECK_THROWS_AS(lp_stats(u, 5, 1.0, 1.0, 2), Error);
  CHECK_THROWS_AS(lp_stats(u, 5, 1.0, -0.1, 2), Error);
  CHECK_THROWS_AS(lp_stats(u, 5, 1.0, 0.5, 0), Error);
}

TEST_CASE("X_N^2 Y_N^2 dominates |F_N| on random inputs") {
  double worst = 0.0;
  for (unsigned seed = 70; seed < 90; ++seed) {
    auto u = oracle::random_u(16, seed);
    auto st = lp_stats(u, 16, 1.0, 0.5, 1);
    const double ratio = std::abs(f_n(u, 16, 1.0).value) / (st.x_total * st.x_total * st.y_total * st.y_total);
    worst = std::max(worst, ratio);
  }
  CHECK(worst < 10.0);
}
