#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace dnlsgauge {

using Complex = std::complex<double>;

/// Regularity exponent of a fractional Sobolev (semi)norm. Always positive.
class SobolevIndex {
 public:
  explicit SobolevIndex(double s);
  double value() const noexcept { return s_; }

 private:
  double s_;
};

/// Truncated Fourier series u(x) = sum_{|n| <= N} u(n) e^{inx} on the torus
/// R / 2piZ. Coefficients are stored densely for n = -N..N; everything outside
/// that window is implicitly zero. Values are immutable once built, and the
/// constructor rejects non-finite coefficients.
class SpectralFunction {
 public:
  SpectralFunction();
  explicit SpectralFunction(int cutoff);
  SpectralFunction(int cutoff, std::vector<Complex> coeffs);

  /// Sparse construction helper: modes not listed are zero.
  static SpectralFunction from_modes(int cutoff,
                                     std::initializer_list<std::pair<int, Complex>> modes);

  int cutoff() const noexcept { return cutoff_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  /// Coefficient u(n); zero when |n| exceeds the cutoff.
  Complex operator[](int n) const noexcept {
    if (n < -cutoff_ || n > cutoff_) return {};
    return coeffs_[static_cast<std::size_t>(n + cutoff_)];
  }

  /// Dense coefficients ordered n = -N..N.
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }

  /// Copy with u(n) replaced. Throws if |n| > cutoff or value is non-finite.
  SpectralFunction with(int n, Complex value) const;

  bool operator==(const SpectralFunction&) const = default;

 private:
  int cutoff_;
  std::vector<Complex> coeffs_;
};

SpectralFunction operator+(const SpectralFunction& a, const SpectralFunction& b);
SpectralFunction operator-(const SpectralFunction& a, const SpectralFunction& b);
SpectralFunction operator*(Complex c, const SpectralFunction& u);

/// P_M u: keeps |n| <= min(M, u.cutoff), result has cutoff M.
SpectralFunction project(const SpectralFunction& u, int M);

/// Littlewood-Paley block: j = 0 keeps |n| <= 1, j >= 1 keeps 2^{j-1} < |n| <= 2^j.
SpectralFunction lp_block(const SpectralFunction& u, int j);

/// Inclusive frequency range [lo, hi] of |n| covered by block j.
std::pair<int, int> lp_shell(int j);

/// Number of dyadic blocks needed to cover |n| <= N.
int lp_block_count(int N);

/// sum_n |u(n)|^2 (the Plancherel-normalised L^2 norm squared).
double l2_norm_sq(const SpectralFunction& u);

/// sum_{n != 0} |n|^{2s} |u(n)|^2.
double sobolev_seminorm_sq(const SpectralFunction& u, SobolevIndex s);

/// l2_norm_sq + sobolev_seminorm_sq.
double sobolev_norm_sq(const SpectralFunction& u, SobolevIndex s);

double l2_distance(const SpectralFunction& a, const SpectralFunction& b);

/// Autocorrelation A(m) = sum_l u(l) conj(u(l - m)) of P_N u, for m = -2N..2N
/// (index m + 2N). These are the Fourier coefficients of |P_N u|^2.
std::vector<Complex> autocorrelation(const SpectralFunction& u, int N);

/// The zero-average periodic primitive of |P_N u|^2, returned with cutoff 2N:
/// coefficient 0 at m = 0 and -(i/m) A(m) otherwise. The result is the
/// spectrum of a real function; the negative modes are stored as exact
/// conjugates of the positive ones.
SpectralFunction gauge_potential(const SpectralFunction& u, int N);

/// Point values sum_n u(n) e^{i n x_k} at x_k = 2 pi k / grid_size.
/// Throws when grid_size < 2 * cutoff + 1 (the grid would alias).
std::vector<Complex> evaluate(const SpectralFunction& u, int grid_size);

/// Discrete Fourier analysis of equispaced samples, keeping |n| <= cutoff.
/// Requires 2 * cutoff + 1 <= values.size().
SpectralFunction analyze(std::span<const Complex> values, int cutoff);

/// Full DFT of equispaced samples: coefficient for every representable
/// frequency n in (-G/2, G/2], returned as (n, c_n) in increasing n.
std::vector<std::pair<int, Complex>> analyze_all(std::span<const Complex> values);

}  // namespace dnlsgauge
