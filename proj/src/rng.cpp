#include "dnlsgauge/rng.hpp"

#include <cmath>
#include <numbers>

namespace dnlsgauge {

namespace {

std::seed_seq make_seq(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                       std::uint64_t attempt) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  return std::seed_seq{lo(seed),  hi(seed),  lo(stream),  hi(stream),
                       lo(index), hi(index), lo(attempt), hi(attempt)};
}

}  // namespace

CellRng::CellRng(std::uint64_t master_seed, std::uint64_t stream_id, std::uint64_t index,
                 std::uint64_t attempt) {
  auto seq = make_seq(master_seed, stream_id, index, attempt);
  engine_.seed(seq);
}

double CellRng::uniform_open_closed() {
  // 53 random bits mapped to {1, ..., 2^53} / 2^53.
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

std::complex<double> CellRng::complex_gaussian() {
  const double r = std::sqrt(-std::log(uniform_open_closed()));
  const double theta = 2.0 * std::numbers::pi * uniform_open_closed();
  return std::polar(r, theta);
}

}  // namespace dnlsgauge
