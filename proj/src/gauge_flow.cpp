#include "dnlsgauge/gauge_flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "dnlsgauge/error.hpp"
#include "dnlsgauge/functionals.hpp"
#include "dnlsgauge/summation.hpp"

namespace dnlsgauge {

void FlowOptions::validate() const {
  require(step_count >= 1, "step_count must be at least 1");
  require(oversample_factor >= 4, "oversample_factor must be at least 4");
}

int recommended_step_count(double alpha, double radius) {
  require(std::isfinite(alpha) && std::isfinite(radius), "non-finite flow parameters");
  const double steps = std::ceil(64.0 * std::abs(alpha) * std::max(1.0, radius * radius));
  return std::max(1, static_cast<int>(steps));
}

namespace {

using Coeffs = std::vector<Complex>;

// Field on the dense block n = -N..N (index n + N).
void field(const Coeffs& c, int N, std::vector<Complex>& A, Coeffs& out) {
  auto at = [&](int n) { return c[static_cast<std::size_t>(n + N)]; };
  // A(m), m = 0..2N, stored at index m; A(-m) = conj A(m).
  for (int m = 0; m <= 2 * N; ++m) {
    Complex acc{};
    for (int l = m - N; l <= N; ++l) acc += at(l) * std::conj(at(l - m));
    A[static_cast<std::size_t>(m)] = acc;
  }
  for (int n = -N; n <= N; ++n) {
    Complex acc{};
    // k = n - m ranges over [-N, N], m != 0.
    for (int k = -N; k <= N; ++k) {
      const int m = n - k;
      if (m == 0) continue;
      const Complex a = m > 0 ? A[static_cast<std::size_t>(m)] : std::conj(A[static_cast<std::size_t>(-m)]);
      acc += a * (at(k) / static_cast<double>(m));
    }
    out[static_cast<std::size_t>(n + N)] = acc;
  }
}

bool all_finite(const Coeffs& c) {
  return std::all_of(c.begin(), c.end(), [](Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

double simpson(const std::vector<double>& f, double h) {
  const std::size_t n = f.size() - 1;  // intervals
  if (n == 0) return 0.0;
  if (n == 1) return 0.5 * h * (f[0] + f[1]);
  CompensatedSum acc;
  auto simpson_span = [&](std::size_t a, std::size_t b) {
    // composite 1/3 rule on an even number of intervals [a, b]
    for (std::size_t i = a; i < b; i += 2) acc += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
  };
  if (n % 2 == 0) {
    simpson_span(0, n);
  } else {
    simpson_span(0, n - 3);
    acc += 3.0 * h / 8.0 * (f[n - 3] + 3.0 * f[n - 2] + 3.0 * f[n - 1] + f[n]);
  }
  return acc.value();
}

}  // namespace

SpectralFunction gauge_vector_field(const SpectralFunction& c, int N) {
  require(N >= 0, "cutoff must be non-negative");
  Coeffs x(static_cast<std::size_t>(2 * N + 1));
  for (int n = -N; n <= N; ++n) x[static_cast<std::size_t>(n + N)] = c[n];
  std::vector<Complex> A(static_cast<std::size_t>(2 * N + 1));
  Coeffs out(x.size());
  field(x, N, A, out);
  return SpectralFunction(N, std::move(out));
}

FlowResult gauge_truncated(const SpectralFunction& u, double alpha, int N, const FlowOptions& opts) {
  opts.validate();
  require(N >= 0, "cutoff must be non-negative");
  require(std::isfinite(alpha), "alpha must be finite");

  const int K = std::max(N, u.cutoff());
  const std::size_t W = static_cast<std::size_t>(2 * N + 1);
  Coeffs x(W);
  for (int n = -N; n <= N; ++n) x[static_cast<std::size_t>(n + N)] = u[n];

  const int steps = opts.step_count;
  const double h = alpha / steps;
  std::vector<Complex> A(W);
  Coeffs k1(W), k2(W), k3(W), k4(W), tmp(W);

  auto assemble = [&](const Coeffs& block) {
    std::vector<Complex> c(static_cast<std::size_t>(2 * K + 1));
    for (int n = -K; n <= K; ++n)
      c[static_cast<std::size_t>(n + K)] = (n >= -N && n <= N) ? block[static_cast<std::size_t>(n + N)] : u[n];
    return SpectralFunction(K, std::move(c));
  };
  auto block_div = [&](const Coeffs& block) {
    return divergence(SpectralFunction(N, block), N);
  };

  FlowResult result;
  std::vector<double> div_nodes;
  div_nodes.reserve(static_cast<std::size_t>(steps) + 1);
  div_nodes.push_back(block_div(x));
  if (opts.store_trajectory) result.trajectory.push_back({0.0, assemble(x)});

  for (int step = 1; step <= steps; ++step) {
    field(x, N, A, k1);
    for (std::size_t i = 0; i < W; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    field(tmp, N, A, k2);
    for (std::size_t i = 0; i < W; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    field(tmp, N, A, k3);
    for (std::size_t i = 0; i < W; ++i) tmp[i] = x[i] + h * k3[i];
    field(tmp, N, A, k4);
    for (std::size_t i = 0; i < W; ++i) x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!all_finite(x))
      fail(ErrorKind::Numeric, "non-finite state in truncated gauge flow at RK4 step " +
                                   std::to_string(step) + " of " + std::to_string(steps));
    div_nodes.push_back(block_div(x));
    if (opts.store_trajectory) result.trajectory.push_back({h * step, assemble(x)});
  }

  result.final_state = assemble(x);
  result.divergence_integral = simpson(div_nodes, h);
  const double n0 = std::sqrt(l2_norm_sq(u));
  const double n1 = std::sqrt(l2_norm_sq(result.final_state));
  result.l2_drift = n0 > 0.0 ? std::abs(n1 - n0) / n0 : 0.0;
  return result;
}

ExactGaugeResult gauge_exact(const SpectralFunction& u, double alpha, const FlowOptions& opts) {
  opts.validate();
  require(std::isfinite(alpha), "alpha must be finite");
  const int c = u.cutoff();
  const auto potential = gauge_potential(u, c);
  const bool trivial_potential = std::all_of(potential.coeffs().begin(), potential.coeffs().end(),
                                             [](Complex z) { return z == Complex{}; });
  if (alpha == 0.0 || trivial_potential) return {u, c, 0.0};

  const int G = opts.oversample_factor * (2 * c + 1);
  const auto iv = evaluate(potential, G);
  const auto uv = evaluate(u, G);
  std::vector<Complex> w(static_cast<std::size_t>(G));
  for (std::size_t k = 0; k < w.size(); ++k)
    w[k] = std::polar(1.0, alpha * iv[k].real()) * uv[k];
  const auto bins = analyze_all(w);

  // tail_sq[K], tail_abs[K]: sums of |c_n|^2 and |c_n| over bins with |n| > K.
  // The l1 tail bounds the pointwise error of the truncated series.
  const int kmax_bin = G / 2;
  std::vector<double> shell(static_cast<std::size_t>(kmax_bin) + 1, 0.0);
  std::vector<double> shell_abs(shell.size(), 0.0);
  for (const auto& [n, z] : bins) {
    shell[static_cast<std::size_t>(std::abs(n))] += std::norm(z);
    shell_abs[static_cast<std::size_t>(std::abs(n))] += std::abs(z);
  }
  std::vector<double> tail_sq(shell.size(), 0.0), tail_abs(shell.size(), 0.0);
  for (int K = kmax_bin - 1; K >= 0; --K) {
    const auto k = static_cast<std::size_t>(K);
    tail_sq[k] = tail_sq[k + 1] + shell[k + 1];
    tail_abs[k] = tail_abs[k + 1] + shell_abs[k + 1];
  }

  const double target = 1e-10 * std::sqrt(l2_norm_sq(u));
  const int cap = opts.oversample_factor * c;
  int K = c;
  while (K < cap && tail_abs[static_cast<std::size_t>(K)] >= target) ++K;
  const double tail = std::sqrt(tail_sq[static_cast<std::size_t>(K)]);
  if (tail_abs[static_cast<std::size_t>(K)] >= target) {
    std::ostringstream msg;
    msg << "gauge_exact: discarded tail (l1) " << tail_abs[static_cast<std::size_t>(K)] << " exceeds target " << target << " at cutoff cap " << cap
        << "; raise oversample_factor";
    fail(ErrorKind::Limit, msg.str());
  }

  std::vector<Complex> out(static_cast<std::size_t>(2 * K + 1));
  for (const auto& [n, z] : bins)
    if (std::abs(n) <= K) out[static_cast<std::size_t>(n + K)] = z;
  return {SpectralFunction(K, std::move(out)), K, tail};
}

double group_defect(const SpectralFunction& u, double a1, double a2, int N, const FlowOptions& opts) {
  FlowOptions o = opts;
  o.store_trajectory = false;
  const auto inner = gauge_truncated(u, a2, N, o).final_state;
  const auto composed = gauge_truncated(inner, a1, N, o).final_state;
  const auto direct = gauge_truncated(u, a1 + a2, N, o).final_state;
  return l2_distance(composed, direct);
}

double flow_discrepancy(const SpectralFunction& u, double alpha, int N, const FlowOptions& opts) {
  FlowOptions o = opts;
  o.store_trajectory = false;
  const auto exact = gauge_exact(u, alpha, o).value;
  const auto truncated = gauge_truncated(u, alpha, N, o).final_state;
  return l2_distance(exact, truncated);
}

}  // namespace dnlsgauge
