#include "dnlsgauge/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dnlsgauge/error.hpp"
#include "dnlsgauge/summation.hpp"

namespace dnlsgauge {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::vector<Complex> twiddles(int grid_size, double sign) {
  std::vector<Complex> tw(static_cast<std::size_t>(grid_size));
  for (int k = 0; k < grid_size; ++k) {
    const double angle = sign * 2.0 * std::numbers::pi * k / grid_size;
    tw[static_cast<std::size_t>(k)] = {std::cos(angle), std::sin(angle)};
  }
  return tw;
}

std::size_t wrap(long long a, int g) {
  const long long r = a % g;
  return static_cast<std::size_t>(r < 0 ? r + g : r);
}

}  // namespace

SobolevIndex::SobolevIndex(double s) : s_(s) {
  require(std::isfinite(s) && s > 0.0, "Sobolev index must be positive, got " + std::to_string(s));
}

SpectralFunction::SpectralFunction() : SpectralFunction(0) {}

SpectralFunction::SpectralFunction(int cutoff) : cutoff_(cutoff) {
  require(cutoff >= 0, "cutoff must be non-negative");
  coeffs_.assign(static_cast<std::size_t>(2 * cutoff + 1), Complex{});
}

SpectralFunction::SpectralFunction(int cutoff, std::vector<Complex> coeffs)
    : cutoff_(cutoff), coeffs_(std::move(coeffs)) {
  require(cutoff >= 0, "cutoff must be non-negative");
  require(coeffs_.size() == static_cast<std::size_t>(2 * cutoff + 1),
          "coefficient array must have length 2N+1 (N=" + std::to_string(cutoff) + ", got " +
              std::to_string(coeffs_.size()) + ")");
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (!finite(coeffs_[i]))
      fail(ErrorKind::InvalidArgument,
           "non-finite coefficient at n=" + std::to_string(static_cast<int>(i) - cutoff));
}

SpectralFunction SpectralFunction::from_modes(
    int cutoff, std::initializer_list<std::pair<int, Complex>> modes) {
  std::vector<Complex> c(static_cast<std::size_t>(2 * std::max(cutoff, 0) + 1));
  for (const auto& [n, v] : modes) {
    require(n >= -cutoff && n <= cutoff, "mode " + std::to_string(n) + " outside cutoff");
    c[static_cast<std::size_t>(n + cutoff)] = v;
  }
  return SpectralFunction(cutoff, std::move(c));
}

SpectralFunction SpectralFunction::with(int n, Complex value) const {
  require(n >= -cutoff_ && n <= cutoff_, "mode " + std::to_string(n) + " outside cutoff");
  auto c = coeffs_;
  c[static_cast<std::size_t>(n + cutoff_)] = value;
  return SpectralFunction(cutoff_, std::move(c));
}

namespace {

template <class Op>
SpectralFunction combine(const SpectralFunction& a, const SpectralFunction& b, Op op) {
  const int N = std::max(a.cutoff(), b.cutoff());
  std::vector<Complex> c(static_cast<std::size_t>(2 * N + 1));
  for (int n = -N; n <= N; ++n) c[static_cast<std::size_t>(n + N)] = op(a[n], b[n]);
  return SpectralFunction(N, std::move(c));
}

}  // namespace

SpectralFunction operator+(const SpectralFunction& a, const SpectralFunction& b) {
  return combine(a, b, [](Complex x, Complex y) { return x + y; });
}

SpectralFunction operator-(const SpectralFunction& a, const SpectralFunction& b) {
  return combine(a, b, [](Complex x, Complex y) { return x - y; });
}

SpectralFunction operator*(Complex s, const SpectralFunction& u) {
  std::vector<Complex> c(u.coeffs().begin(), u.coeffs().end());
  for (auto& z : c) z *= s;
  return SpectralFunction(u.cutoff(), std::move(c));
}

SpectralFunction project(const SpectralFunction& u, int M) {
  require(M >= 0, "projection cutoff must be non-negative");
  std::vector<Complex> c(static_cast<std::size_t>(2 * M + 1));
  const int K = std::min(M, u.cutoff());
  for (int n = -K; n <= K; ++n) c[static_cast<std::size_t>(n + M)] = u[n];
  return SpectralFunction(M, std::move(c));
}

std::pair<int, int> lp_shell(int j) {
  require(j >= 0, "Littlewood-Paley index must be non-negative");
  require(j < 31, "Littlewood-Paley index too large");
  if (j == 0) return {0, 1};
  return {(1 << (j - 1)) + 1, 1 << j};
}

int lp_block_count(int N) {
  int j = 0;
  while (lp_shell(j).second < N) ++j;
  return j + 1;
}

SpectralFunction lp_block(const SpectralFunction& u, int j) {
  const auto [lo, hi] = lp_shell(j);
  std::vector<Complex> c(u.coeffs().begin(), u.coeffs().end());
  for (int n = -u.cutoff(); n <= u.cutoff(); ++n) {
    const int a = std::abs(n);
    if (a < lo || a > hi) c[static_cast<std::size_t>(n + u.cutoff())] = {};
  }
  return SpectralFunction(u.cutoff(), std::move(c));
}

double l2_norm_sq(const SpectralFunction& u) {
  CompensatedSum acc;
  for (const auto& z : u.coeffs()) acc += std::norm(z);
  return acc.value();
}

double sobolev_seminorm_sq(const SpectralFunction& u, SobolevIndex s) {
  CompensatedSum acc;
  for (int n = -u.cutoff(); n <= u.cutoff(); ++n) {
    if (n == 0) continue;
    acc += std::pow(std::abs(n), 2.0 * s.value()) * std::norm(u[n]);
  }
  return acc.value();
}

double sobolev_norm_sq(const SpectralFunction& u, SobolevIndex s) {
  return l2_norm_sq(u) + sobolev_seminorm_sq(u, s);
}

double l2_distance(const SpectralFunction& a, const SpectralFunction& b) {
  return std::sqrt(l2_norm_sq(a - b));
}

std::vector<Complex> autocorrelation(const SpectralFunction& u, int N) {
  require(N >= 0, "cutoff must be non-negative");
  const int K = std::min(N, u.cutoff());
  std::vector<Complex> A(static_cast<std::size_t>(4 * N + 1));
  for (int m = 0; m <= 2 * K; ++m) {
    CompensatedComplexSum acc;
    for (int l = std::max(-K, m - K); l <= std::min(K, m + K); ++l) acc += u[l] * std::conj(u[l - m]);
    const Complex v = acc.value();
    A[static_cast<std::size_t>(m + 2 * N)] = v;
    A[static_cast<std::size_t>(-m + 2 * N)] = std::conj(v);
  }
  // A(0) = sum |u|^2 is real; drop the rounding residue in its imaginary part.
  A[static_cast<std::size_t>(2 * N)] = {A[static_cast<std::size_t>(2 * N)].real(), 0.0};
  return A;
}

SpectralFunction gauge_potential(const SpectralFunction& u, int N) {
  require(N >= 0, "cutoff must be non-negative");
  const auto A = autocorrelation(u, N);
  std::vector<Complex> c(static_cast<std::size_t>(4 * N + 1));
  for (int m = 1; m <= 2 * N; ++m) {
    const Complex v = Complex{0.0, -1.0 / m} * A[static_cast<std::size_t>(m + 2 * N)];
    c[static_cast<std::size_t>(m + 2 * N)] = v;
    c[static_cast<std::size_t>(-m + 2 * N)] = std::conj(v);
  }
  return SpectralFunction(2 * N, std::move(c));
}

std::vector<Complex> evaluate(const SpectralFunction& u, int grid_size) {
  if (grid_size < 2 * u.cutoff() + 1)
    fail(ErrorKind::InvalidArgument,
         "grid of size " + std::to_string(grid_size) + " aliases a cutoff-" +
             std::to_string(u.cutoff()) + " function (need at least " +
             std::to_string(2 * u.cutoff() + 1) + " points)");
  const auto tw = twiddles(grid_size, +1.0);
  std::vector<Complex> values(static_cast<std::size_t>(grid_size));
  for (int k = 0; k < grid_size; ++k) {
    CompensatedComplexSum acc;
    for (int n = -u.cutoff(); n <= u.cutoff(); ++n) {
      if (u[n] == Complex{}) continue;
      acc += u[n] * tw[wrap(static_cast<long long>(n) * k, grid_size)];
    }
    values[static_cast<std::size_t>(k)] = acc.value();
  }
  return values;
}

namespace {

Complex dft_coefficient(std::span<const Complex> values, const std::vector<Complex>& tw, int n) {
  const int G = static_cast<int>(values.size());
  CompensatedComplexSum acc;
  for (int k = 0; k < G; ++k) acc += values[static_cast<std::size_t>(k)] * tw[wrap(static_cast<long long>(n) * k, G)];
  return acc.value() / static_cast<double>(G);
}

}  // namespace

SpectralFunction analyze(std::span<const Complex> values, int cutoff) {
  require(cutoff >= 0, "cutoff must be non-negative");
  require(values.size() >= static_cast<std::size_t>(2 * cutoff + 1),
          "too few samples to resolve the requested cutoff");
  const auto tw = twiddles(static_cast<int>(values.size()), -1.0);
  std::vector<Complex> c(static_cast<std::size_t>(2 * cutoff + 1));
  for (int n = -cutoff; n <= cutoff; ++n)
    c[static_cast<std::size_t>(n + cutoff)] = dft_coefficient(values, tw, n);
  return SpectralFunction(cutoff, std::move(c));
}

std::vector<std::pair<int, Complex>> analyze_all(std::span<const Complex> values) {
  const int G = static_cast<int>(values.size());
  require(G >= 1, "need at least one sample");
  const auto tw = twiddles(G, -1.0);
  std::vector<std::pair<int, Complex>> out;
  out.reserve(values.size());
  for (int n = -((G - 1) / 2); n <= G / 2; ++n) out.emplace_back(n, dft_coefficient(values, tw, n));
  return out;
}

}  // namespace dnlsgauge
