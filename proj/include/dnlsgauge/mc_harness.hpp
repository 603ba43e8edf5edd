#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dnlsgauge/gauge_flow.hpp"
#include "dnlsgauge/gaussian_measure.hpp"

namespace dnlsgauge {

enum class StatisticKind { FN, FDiff, Divergence, LStat, XTotal, YTotal };

/// A scalar statistic of one sample. N = 0 means "use the measure cutoff".
struct Statistic {
  StatisticKind kind = StatisticKind::FN;
  int N = 0;
  int M = 0;            // FDiff: F_N - F_M
  double s_prime = 0.0; // LStat
  int n0 = 1;           // LStat

  double evaluate(const SpectralFunction& u, const MeasureSpec& spec) const;
  std::string name() const;
};

StatisticKind parse_statistic_kind(const std::string& name);
std::string to_string(StatisticKind kind);

struct HarnessOptions {
  unsigned workers = 0;           // 0 picks std::thread::hardware_concurrency()
  std::uint64_t stream_base = 0;  // stream id fed to the sampler
};

/// Calls fn(i) for i in [0, n) on a pool of workers, each taking contiguous
/// index ranges. fn must be safe to call concurrently.
void parallel_for(std::uint64_t n, unsigned workers, const std::function<void(std::uint64_t)>& fn);

/// Evaluates f on samples 0..n-1 of the stream; results are ordered by index.
std::vector<double> sample_values(const MeasureSpec& spec, std::uint64_t n, const HarnessOptions& opts,
                                  const std::function<double(const SpectralFunction&)>& f);

struct MCEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  MeasureSpec spec;
  std::uint64_t stream_base = 0;
};

/// Mean and standard error (sample sd / sqrt(n)) of the given values.
MCEstimate mean_estimate(const std::vector<double>& values);

/// E[|stat|^p]^{1/p} with a delta-method standard error. Requires p >= 1, n >= 100.
MCEstimate estimate_moment(const Statistic& stat, double p, const MeasureSpec& spec, std::uint64_t n,
                           const HarnessOptions& opts = {});

/// E[|stat|^p] itself, with the plain standard error.
MCEstimate estimate_power_mean(const Statistic& stat, double p, const MeasureSpec& spec,
                               std::uint64_t n, const HarnessOptions& opts = {});

struct ConfidenceInterval {
  double lo;
  double hi;
};

/// Exact two-sided binomial interval for k successes out of n.
ConfidenceInterval clopper_pearson(std::uint64_t k, std::uint64_t n, double confidence = 0.95);

struct TailCurve {
  std::vector<double> thresholds;
  std::vector<std::uint64_t> counts;
  std::vector<double> log_survival;  // -inf when the count is zero
  std::vector<double> log_cp_lo;
  std::vector<double> log_cp_hi;
  std::uint64_t n_samples = 0;
};

/// Empirical log P(|stat| >= t) with 95% Clopper-Pearson bands.
TailCurve tail_curve(const Statistic& stat, const MeasureSpec& spec, const std::vector<double>& thresholds,
                     std::uint64_t n, const HarnessOptions& opts = {});

/// Same from precomputed |stat| values.
TailCurve tail_curve_from_values(const std::vector<double>& abs_values, const std::vector<double>& thresholds);

struct TestSet {
  enum class Kind { SobolevBall, HalfSpace, LinfGridBall, Everything };
  Kind kind = Kind::Everything;
  double radius = 0.0;  // SobolevBall: ||P_N u||_{Hdot^s} <= r; LinfGridBall: max_k |u(x_k)| <= r
  int mode = 0;         // HalfSpace: Re u(mode) >= level
  double level = 0.0;
  int grid_size = 0;    // LinfGridBall; 0 means 4(2N+1)

  bool contains(const SpectralFunction& u, int N, double s) const;
  std::string describe() const;
};

struct PushforwardResult {
  MCEstimate lhs;
  MCEstimate rhs;
  double z_score = 0.0;
};

/// lhs: mean of 1{G^N_{-alpha} u in E}; rhs: mean of 1{u in E} J_alpha(u) on the
/// same samples; z from the paired differences.
PushforwardResult pushforward_check(const TestSet& set, double alpha, const MeasureSpec& spec,
                                    std::uint64_t n, const FlowOptions& flow,
                                    const HarnessOptions& opts = {});

/// log J_alpha(u) = log det + log_density(G u) - log_density(u).
double log_jacobian_weight(const SpectralFunction& u, double alpha, const MeasureSpec& spec,
                           const FlowOptions& flow);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_stderr = 0.0;
};

/// Least squares of log y on log x. Needs >= 3 points, all positive.
RateFit rate_fit(const std::vector<double>& x, const std::vector<double>& y);

/// max(R^{2/(2s-1)}, R^{2(2s-1)}).
double r_star(double R, double s);

}  // namespace dnlsgauge
