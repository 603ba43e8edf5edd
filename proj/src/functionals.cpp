#include "dnlsgauge/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dnlsgauge/error.hpp"
#include "dnlsgauge/summation.hpp"

namespace dnlsgauge {

namespace {

void check_s(double s) { require(std::isfinite(s) && s > 0.0, "s must be positive"); }

// |n|^e with 0^e = 0.
std::vector<double> abs_powers(int N, double e) {
  std::vector<double> p(static_cast<std::size_t>(N) + 1, 0.0);
  for (int n = 1; n <= N; ++n) p[static_cast<std::size_t>(n)] = std::pow(static_cast<double>(n), e);
  return p;
}

// Autocorrelation of P_N u with A(-p) = conj A(p); index p + 2N.
struct Autocorr {
  std::vector<Complex> values;
  int N;
  Complex operator()(int p) const { return values[static_cast<std::size_t>(p + 2 * N)]; }
};

// Binomial coefficient C(s, k) for real s.
double binom(double s, int k) {
  double c = 1.0;
  for (int j = 0; j < k; ++j) c *= (s - j) / (j + 1);
  return c;
}

}  // namespace

FunctionalValue f_n(const SpectralFunction& u, int N, double s) {
  require(N >= 0, "cutoff must be non-negative");
  check_s(s);
  const Autocorr A{autocorrelation(u, N), N};
  const auto w = abs_powers(N, 2.0 * s);
  CompensatedComplexSum z;
  for (int n1 = -N; n1 <= N; ++n1) {
    const Complex un1 = u[n1];
    if (un1 == Complex{}) continue;
    for (int m1 = -N; m1 <= N; ++m1) {
      if (m1 == n1 || m1 == 0) continue;
      const int p = m1 - n1;
      z += (w[static_cast<std::size_t>(std::abs(m1))] / p) * un1 * std::conj(u[m1]) * A(p);
    }
  }
  return {2.0 * z.value().real(), std::nullopt, 0.0, 0};
}

FunctionalValue f_split(const SpectralFunction& u, int N, double s, double tol, int max_terms) {
  require(N >= 0, "cutoff must be non-negative");
  check_s(s);
  require(std::isfinite(tol) && tol > 0.0, "tol must be positive");
  require(max_terms >= 1, "max_terms must be at least 1");
  const Autocorr A{autocorrelation(u, N), N};
  const auto w2s = abs_powers(N, 2.0 * s);
  const auto ws = abs_powers(N, s);

  struct LowTerm {
    Complex base;  // |m1|^s |n1|^s / p * u(n1) conj(u(m1)) A(p)
    double x;      // p / n1
  };
  std::vector<LowTerm> low;
  CompensatedComplexSum geq;
  double bound_mass = 0.0;
  double rho = 0.0;

  for (int n1 = -N; n1 <= N; ++n1) {
    const Complex un1 = u[n1];
    if (un1 == Complex{}) continue;
    for (int m1 = -N; m1 <= N; ++m1) {
      if (m1 == n1) continue;
      const int p = m1 - n1;
      const Complex core = un1 * std::conj(u[m1]) * A(p);
      if (std::abs(p) >= std::min(std::abs(n1), std::abs(m1))) {
        if (m1 != 0) geq += (w2s[static_cast<std::size_t>(std::abs(m1))] / p) * core;
        continue;
      }
      const Complex base =
          (ws[static_cast<std::size_t>(std::abs(m1))] * ws[static_cast<std::size_t>(std::abs(n1))] / p) * core;
      if (base == Complex{}) continue;
      const double x = static_cast<double>(p) / n1;
      low.push_back({base, x});
      bound_mass += std::abs(base);
      rho = std::max(rho, std::abs(x));
    }
  }

  // Tail after K terms: 2 B |C(s,K+1)| rho^{K+1} / (1 - rho), valid once |C(s,k)| is
  // non-increasing for k >= K+1, i.e. K+1 >= (s-1)/2.
  const bool integer_s = s == std::floor(s);
  auto tail_bound = [&](int K) {
    if (bound_mass == 0.0) return 0.0;
    if (integer_s && K >= static_cast<int>(s)) return 0.0;
    if (K + 1 < (s - 1.0) / 2.0) return HUGE_VAL;
    return 2.0 * bound_mass * std::abs(binom(s, K + 1)) * std::pow(rho, K + 1) / (1.0 - rho);
  };
  int K = low.empty() ? 0 : 1;
  while (K < max_terms && tail_bound(K) > tol) ++K;
  const double bound = tail_bound(K);
  if (bound > tol) {
    std::ostringstream msg;
    msg << "f_split: series tail bound " << bound << " still above tol " << tol << " after "
        << max_terms << " terms (ratio " << rho << ")";
    fail(ErrorKind::Limit, msg.str());
  }

  std::vector<double> coeff(static_cast<std::size_t>(K) + 1);
  for (int k = 1; k <= K; ++k) coeff[static_cast<std::size_t>(k)] = binom(s, k);
  CompensatedComplexSum less;
  for (const auto& t : low) {
    // sum_{k=1}^K C(s,k) x^k, via Horner
    double series = 0.0;
    for (int k = K; k >= 1; --k) series = (series + coeff[static_cast<std::size_t>(k)]) * t.x;
    less += series * t.base;
  }

  FunctionalValue out;
  const double f_less = 2.0 * less.value().real();
  const double f_geq = 2.0 * geq.value().real();
  out.split = FunctionalSplit{f_less, f_geq};
  out.value = f_n(u, N, s).value;
  out.truncation_error_bound = bound;
  out.series_terms = K;
  return out;
}

double divergence_closed_form(const SpectralFunction& u, int N) {
  require(N >= 0, "cutoff must be non-negative");
  // H[j] = sum_{m=1}^j 1/m
  std::vector<double> H(static_cast<std::size_t>(2 * N) + 1, 0.0);
  {
    CompensatedSum h;
    for (int j = 1; j <= 2 * N; ++j) {
      h += 1.0 / j;
      H[static_cast<std::size_t>(j)] = h.value();
    }
  }
  CompensatedSum acc;
  for (int n = 1; n <= N; ++n) {
    const double diff = std::norm(u[-n]) - std::norm(u[n]);
    acc += 2.0 * diff * (H[static_cast<std::size_t>(N + n)] - H[static_cast<std::size_t>(N - n)]);
  }
  return acc.value();
}

double divergence_double_sum(const SpectralFunction& u, int N) {
  require(N >= 0, "cutoff must be non-negative");
  CompensatedSum acc;
  for (int k = -N; k <= N; ++k) {
    const double mass = std::norm(u[k]);
    if (mass == 0.0) continue;
    // m = n - k over n in [-N, N], m != 0
    CompensatedSum inner;
    for (int n = -N; n <= N; ++n) {
      const int m = n - k;
      if (m != 0) inner += 1.0 / m;
    }
    acc += 2.0 * mass * inner.value();
  }
  return acc.value();
}

double divergence(const SpectralFunction& u, int N) {
  const double a = divergence_closed_form(u, N);
  const double b = divergence_double_sum(u, N);
  CompensatedSum scale;
  {
    CompensatedSum h;
    for (int n = 1; n <= N; ++n) {
      h += 1.0 / n;
    }
    const double HN = h.value();
    for (int n = 1; n <= N; ++n) scale += 2.0 * (std::norm(u[-n]) + std::norm(u[n])) * (HN + std::log(2.0));
  }
  const double tol = 1e-12 * std::max({std::abs(a), std::abs(b), scale.value()});
  if (std::abs(a - b) > tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "divergence dual-form mismatch: closed form " << a << " vs double sum " << b;
    fail(ErrorKind::Numeric, msg.str());
  }
  return a;
}

double jacobian_log_det(const SpectralFunction& u, double alpha, int N, const FlowOptions& opts) {
  return gauge_truncated(u, alpha, N, opts).divergence_integral;
}

LPStats lp_stats(const SpectralFunction& u, int N, double s, double s_prime, int n0) {
  require(N >= 0, "cutoff must be non-negative");
  require(std::isfinite(s) && std::isfinite(s_prime) && s_prime >= 0.0 && s_prime < s,
          "lp_stats needs 0 <= s' < s");
  require(n0 >= 1, "n0 must be at least 1");
  LPStats st;
  const int blocks = lp_block_count(N);
  CompensatedSum xt, yt;
  for (int j = 0; j < blocks; ++j) {
    const auto [lo, hi] = lp_shell(j);
    CompensatedSum mass, ell1;
    for (int a = lo; a <= std::min(hi, N); ++a) {
      mass += std::norm(u[a]);
      ell1 += std::abs(u[a]);
      if (a != 0) {
        mass += std::norm(u[-a]);
        ell1 += std::abs(u[-a]);
      }
    }
    const double x = std::pow(2.0, j * (s - 0.5)) * std::sqrt(mass.value());
    st.x_blocks.push_back(x);
    st.y_blocks.push_back(ell1.value());
    xt += x;
    yt += ell1.value();
  }
  st.x_total = xt.value();
  st.y_total = yt.value();
  for (int n = n0; n <= u.cutoff(); ++n)
    st.l_stat = std::max(st.l_stat, std::pow(static_cast<double>(n), s_prime) * std::abs(u[n]));
  return st;
}

}  // namespace dnlsgauge
