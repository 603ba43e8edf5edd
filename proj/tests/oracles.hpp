#pragma once
// Independent reference implementations used only by the tests. None of them
// shares code paths with the library beyond the SpectralFunction container.

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "dnlsgauge/spectral.hpp"

namespace oracle {

using dnlsgauge::Complex;
using dnlsgauge::SpectralFunction;

/// u(n) = (0.3 + 0.1 n + i(0.05 n^2 - 0.2)) / (1 + |n|), n = -N..N.
SpectralFunction fixed_u(int N);

/// Random coefficients with independent N(0, 1/(1+n^2)) parts, from std::mt19937_64(seed).
SpectralFunction random_u(int N, unsigned seed, double scale = 1.0);

/// I[P_N u](x) by nested Gauss-Kronrod quadrature of the defining double integral.
double gauge_potential_quadrature(const SpectralFunction& u, int N, double x);

/// Point value of the series at x, summed directly.
Complex point_value(const SpectralFunction& u, double x);

/// Fourier coefficient (1/2pi) int f(x) e^{-inx} dx by adaptive quadrature.
Complex fourier_coefficient(const std::function<Complex(double)>& f, int n);

/// Truncated flow integrated by an adaptive Dormand-Prince stepper at tight tolerance,
/// with the field assembled from I directly (triple loop).
SpectralFunction truncated_flow_rk45(const SpectralFunction& u, double alpha, int N, double tol = 1e-13);

/// det of the 2(2N+1) x 2(2N+1) real Jacobian of P_N G^N_alpha by central differences.
double jacobian_det_fd(const SpectralFunction& u, double alpha, int N, int steps, double h = 1e-6);

/// F_N by the O(N^3) loop over (n1, m1, n2).
double f_n_cubic(const SpectralFunction& u, int N, double s);

/// Complex sum of the F_N terms (before taking 2 Re) and of their relabelled
/// conjugate partners; Im of the sum of both must vanish.
std::array<Complex, 2> f_n_complex_parts(const SpectralFunction& u, int N, double s);

/// ||u||^2_{Hdot^s} for the exact gauge map by grid evaluation.
double exact_flow_hdot_sq(const SpectralFunction& u, double alpha, double s, int grid);

struct WickBrute {
  double value;
  double zzbar;  // 2 E|z|^2
  double zz;     // 2 E[z^2]
  std::array<double, 24> zzbar_perm;
  std::array<double, 24> zz_perm;
};

/// E[(F_N - F_M)^2] by enumerating every pair of tuples and every pairing.
WickBrute wick_brute_force(int N, int M, double s, const std::function<double(int)>& cov);

}  // namespace oracle
