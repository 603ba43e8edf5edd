#pragma once

#include <optional>
#include <vector>

#include "dnlsgauge/gauge_flow.hpp"
#include "dnlsgauge/spectral.hpp"

namespace dnlsgauge {

struct FunctionalSplit {
  double f_less = 0.0;
  double f_geq = 0.0;
};

struct FunctionalValue {
  double value = 0.0;
  std::optional<FunctionalSplit> split;
  double truncation_error_bound = 0.0;
  int series_terms = 0;
};

/// F_N(u) = 2 Re sum_{n1+n2=m1+m2, n1 != m1} |m1|^{2s}/(m1-n1) u(n1)u(n2) conj(u(m1)u(m2)),
/// all indices in [-N, N]. Modes of u above N are ignored.
FunctionalValue f_n(const SpectralFunction& u, int N, double s);

/// F_N split by the region |n1 - m1| >= min(|n1|, |m1|). The low-frequency
/// part is expanded in powers of (m1-n1)/n1 and truncated once the tail
/// bound is below tol. Throws Limit if max_terms is not enough.
FunctionalValue f_split(const SpectralFunction& u, int N, double s, double tol,
                        int max_terms = 1024);

/// Divergence of the truncated field; evaluates both forms below and throws
/// Numeric if they disagree.
double divergence(const SpectralFunction& u, int N);

/// 2 sum_{n=1}^N (|u(-n)|^2 - |u(n)|^2) sum_{m=N-n+1}^{N+n} 1/m.
double divergence_closed_form(const SpectralFunction& u, int N);

/// 2 sum_{|n|<=N} sum_{m != 0, |n-m| <= N} |u(n-m)|^2 / m.
double divergence_double_sum(const SpectralFunction& u, int N);

/// log det D P_N G^N_alpha (u), as the time integral of the divergence.
double jacobian_log_det(const SpectralFunction& u, double alpha, int N, const FlowOptions& opts);

struct LPStats {
  std::vector<double> x_blocks;
  std::vector<double> y_blocks;
  double x_total = 0.0;
  double y_total = 0.0;
  double l_stat = 0.0;
};

/// X_j = 2^{j(s-1/2)} ||Delta_j P_N u||, Y_j = sum over the shell of |u(n)|,
/// l_stat = sup_{n >= n0} n^{s'} |u(n)|.
LPStats lp_stats(const SpectralFunction& u, int N, double s, double s_prime, int n0);

}  // namespace dnlsgauge
