#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace dnlsgauge {

/// Deterministic generator for one (seed, stream, index, attempt) cell.
/// Successive draws walk the Fourier modes in the order 0, 1, -1, 2, -2, ...
/// so a sample at cutoff N is the prefix of the same sample at a larger cutoff.
class CellRng {
 public:
  CellRng(std::uint64_t master_seed, std::uint64_t stream_id, std::uint64_t index,
          std::uint64_t attempt);

  /// Uniform on (0, 1].
  double uniform_open_closed();

  /// Complex Gaussian with independent real and imaginary parts of variance 1/2.
  std::complex<double> complex_gaussian();

 private:
  std::mt19937_64 engine_;
};

}  // namespace dnlsgauge
