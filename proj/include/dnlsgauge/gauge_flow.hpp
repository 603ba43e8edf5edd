#pragma once

#include <vector>

#include "dnlsgauge/spectral.hpp"

namespace dnlsgauge {

struct FlowOptions {
  int step_count = 64;         // fixed RK4 steps over [0, alpha]
  int oversample_factor = 16;  // grid multiplier for gauge_exact
  bool store_trajectory = false;

  void validate() const;
};

/// ceil(64 |alpha| max(1, R^2)), at least 1.
int recommended_step_count(double alpha, double radius);

struct TrajectoryPoint {
  double alpha;
  SpectralFunction state;
};

struct FlowResult {
  SpectralFunction final_state;
  double l2_drift = 0.0;
  // Simpson quadrature of the divergence along the RK4 nodes, signed like alpha.
  double divergence_integral = 0.0;
  // Ordered along the integration direction (decreasing alpha' when alpha < 0).
  std::vector<TrajectoryPoint> trajectory;
};

struct ExactGaugeResult {
  SpectralFunction value;
  int output_cutoff = 0;
  double tail_mass = 0.0;  // L^2 norm of the DFT bins dropped above output_cutoff
};

/// Spectrum of e^{i alpha I[u]} u via an oversampled grid. The output cutoff is
/// the smallest one whose dropped bins have l1 (hence also L^2) mass below
/// 1e-10 ||u||; throws Limit when that needs more than oversample_factor * cutoff modes.
ExactGaugeResult gauge_exact(const SpectralFunction& u, double alpha, const FlowOptions& opts);

/// The truncated field i P_N(I[P_N c] P_N c), cutoff N.
SpectralFunction gauge_vector_field(const SpectralFunction& c, int N);

/// RK4 integration of the truncated flow on |n| <= N; modes above N are copied.
/// The result has cutoff max(N, u.cutoff()).
FlowResult gauge_truncated(const SpectralFunction& u, double alpha, int N, const FlowOptions& opts);

/// || G^N_{a1}(G^N_{a2} u) - G^N_{a1+a2} u ||.
double group_defect(const SpectralFunction& u, double a1, double a2, int N, const FlowOptions& opts);

/// || gauge_exact(u, alpha) - gauge_truncated(u, alpha, N).final ||.
double flow_discrepancy(const SpectralFunction& u, double alpha, int N, const FlowOptions& opts);

}  // namespace dnlsgauge
