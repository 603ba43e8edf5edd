#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dnlsgauge/spectral.hpp"

namespace dnlsgauge {

struct MeasureSpec {
  double s = 1.0;
  int cutoff = 0;
  std::optional<double> radius;  // ball ||P_N u|| <= R; absent means unrestricted
  std::uint64_t master_seed = 0;

  void validate() const;
};

/// Attempts per sample index before giving up with a Starvation error.
inline constexpr std::uint64_t kMaxRejectionAttempts = 1'000'000;

struct SampleBatch {
  MeasureSpec spec;
  std::vector<SpectralFunction> samples;
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
};

/// E|u(n)|^2 = 1 / (1 + |n|^{2s}).
double pair_variance(int n, double s);

struct SampleDraw {
  SpectralFunction value;
  std::uint64_t rejected = 0;
};

/// Sample number `index` of stream `stream_id`. Pure function of its inputs.
SampleDraw sample_one(const MeasureSpec& spec, std::uint64_t stream_id, std::uint64_t index);

/// Samples 0..count-1 of the stream.
SampleBatch sample(const MeasureSpec& spec, std::uint64_t count, std::uint64_t stream_id);

/// -||P_N u||^2_{H^s}: the log-density of the sampler's E_N marginal with
/// respect to Lebesgue measure, normalisation omitted.
double log_density_finite(const SpectralFunction& u, const MeasureSpec& spec);

}  // namespace dnlsgauge
