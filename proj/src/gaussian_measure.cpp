#include "dnlsgauge/gaussian_measure.hpp"

#include <cmath>
#include <string>

#include "dnlsgauge/error.hpp"
#include "dnlsgauge/rng.hpp"

namespace dnlsgauge {

void MeasureSpec::validate() const {
  require(std::isfinite(s) && s > 0.0, "measure: s must be positive");
  require(cutoff >= 0, "measure: cutoff must be non-negative");
  if (radius) require(std::isfinite(*radius) && *radius > 0.0, "measure: radius must be positive");
}

double pair_variance(int n, double s) {
  if (n == 0) return 1.0;
  return 1.0 / (1.0 + std::pow(std::abs(static_cast<double>(n)), 2.0 * s));
}

SampleDraw sample_one(const MeasureSpec& spec, std::uint64_t stream_id, std::uint64_t index) {
  spec.validate();
  const int N = spec.cutoff;
  std::vector<double> sd(static_cast<std::size_t>(N) + 1);
  for (int n = 0; n <= N; ++n) sd[static_cast<std::size_t>(n)] = std::sqrt(pair_variance(n, spec.s));
  const double r2 = spec.radius ? *spec.radius * *spec.radius : 0.0;

  std::vector<Complex> c(static_cast<std::size_t>(2 * N + 1));
  // Rejection attempts continue the same cell stream.
  CellRng rng(spec.master_seed, stream_id, index, 0);
  for (std::uint64_t attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
    double mass = 0.0;
    bool inside = true;
    for (int k = 0; k < 2 * N + 1; ++k) {
      // 0, 1, -1, 2, -2, ...
      const int n = (k % 2 == 1) ? (k + 1) / 2 : -(k / 2);
      const Complex v = rng.complex_gaussian() * sd[static_cast<std::size_t>(std::abs(n))];
      c[static_cast<std::size_t>(n + N)] = v;
      if (spec.radius) {
        mass += std::norm(v);
        if (mass > r2) {
          inside = false;
          break;
        }
      }
    }
    if (inside) return {SpectralFunction(N, c), attempt};
  }
  fail(ErrorKind::Starvation,
       "rejection sampling accepted nothing in " + std::to_string(kMaxRejectionAttempts) +
           " attempts (acceptance below 1e-6); use a larger radius than " +
           std::to_string(*spec.radius));
}

SampleBatch sample(const MeasureSpec& spec, std::uint64_t count, std::uint64_t stream_id) {
  require(count >= 1, "sample count must be at least 1");
  SampleBatch batch;
  batch.spec = spec;
  batch.samples.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    auto draw = sample_one(spec, stream_id, i);
    batch.samples.push_back(std::move(draw.value));
    batch.rejected += draw.rejected;
    ++batch.accepted;
  }
  return batch;
}

double log_density_finite(const SpectralFunction& u, const MeasureSpec& spec) {
  require(u.cutoff() >= spec.cutoff, "log_density_finite: input cutoff below measure cutoff");
  return -sobolev_norm_sq(project(u, spec.cutoff), SobolevIndex(spec.s));
}

}  // namespace dnlsgauge
