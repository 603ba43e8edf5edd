#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace dnlsgauge {

/// E|u(n)|^2 = 1 / (1 + |n|^{2s}).
double pair_moment(int n, double s);

/// Covariance n -> E|u(n)|^2.
using Covariance = std::function<double(int)>;

/// E[prod u(a_i) prod conj(u(b_j))] for independent centred complex Gaussians:
/// the sum over bijections b_j = a_{sigma(j)} of prod cov(b_j). Zero when the
/// multisets differ or the sizes do not match.
double gaussian_moment(std::span<const int> a, std::span<const int> b, const Covariance& cov);

/// sigma in S_4 listed in lexicographic order of (sigma(1), ..., sigma(4)), 1-based.
const std::array<std::array<int, 4>, 24>& permutations_s4();

/// Index of a permutation in permutations_s4(), or -1.
int permutation_index(const std::array<int, 4>& sigma);

inline constexpr int kWickMaxCutoff = 64;

struct WickMoment {
  double value = 0.0;
  // Contributions already carry the factor 2 of E[(2 Re z)^2] = 2E|z|^2 + 2 Re E[z^2],
  // so value = sum(zzbar) + sum(zz).
  std::array<double, 24> zzbar{};
  std::array<double, 24> zz{};
  double zzbar_total = 0.0;
  double zz_total = 0.0;
  std::string covariance_used;
};

/// Exact E[(F_N - F_M)^2] under independent coefficients with covariance
/// 1/(1+|n|^{2s}), or `cov_override` when given. Requires 0 <= M <= N <= 64.
WickMoment second_moment_diff(int N, int M, double s, const Covariance* cov_override = nullptr);

struct RateRow {
  int M;
  double l2_distance;
};

/// sqrt(second_moment_diff(N_ref, M, s)) for each M.
std::vector<RateRow> rate_table(double s, const std::vector<int>& M_list, int N_ref);

/// CSV with a "# s=...,N_ref=..." comment line, then header "M,l2_distance".
std::string rate_table_csv(double s, int N_ref, const std::vector<RateRow>& rows);

}  // namespace dnlsgauge
