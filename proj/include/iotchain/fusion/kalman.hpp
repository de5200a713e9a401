#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace iotchain::fusion {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<Vec2, 2>;

/// Constant-velocity altitude filter state: x = (position [m], velocity [m/tick]).
struct KalmanState {
  Vec2 x{0.0, 0.0};
  Mat2 P{{{1.0, 0.0}, {0.0, 1.0}}};
  /// Process-noise covariance per tick.
  Mat2 Q{{{0.0, 0.0}, {0.0, 0.0}}};
  std::uint64_t tick = 0;
};

struct SensorSpec {
  std::string sensor_id;
  Vec2 H{1.0, 0.0};
  /// Measurement-noise variance [m^2].
  double R = 1.0;
  /// Upper-tail probability of the chi-square(1) innovation gate.
  double gate_p = 0.01;

  /// Throws Error(Errc::invalid_argument) if R <= 0 or gate_p is outside (0, 1).
  void validate() const;
};

struct Reading {
  SensorSpec spec;
  double value = 0.0;
};

struct GateResult {
  bool accepted = true;
  double innovation = 0.0;
  double innovation_variance = 0.0;
  /// innovation^2 / innovation_variance.
  double normalized_innovation = 0.0;
};

struct RejectedReading {
  std::string sensor_id;
  /// Against the prediction, even when the cross-check did the rejecting.
  double normalized_innovation = 0.0;
  /// Isolated by the sensor cross-check rather than the innovation gate.
  bool inconsistent = false;
};

struct FusionVerdict {
  Vec2 fused_x{0.0, 0.0};
  std::vector<std::string> accepted;
  std::vector<RejectedReading> rejected;
  /// Every reading was gated out; the state is the bare prediction.
  bool coasting = false;
};

/// x <- F x, P <- F P F^T + Q dt with F = [[1, dt], [0, 1]].
KalmanState predict(const KalmanState& state, std::uint64_t dt);

/// Value q with P(chi2_1 > q) = upper_tail_p.
double chi_square1_quantile(double upper_tail_p);

/// Innovation test against the current (predicted) state. Throws
/// Error(Errc::numeric_degenerate) when H P H^T + R is not positive.
GateResult gate(const KalmanState& state, double reading, const SensorSpec& spec);

/// Scalar Kalman update in Joseph form, followed by symmetrization.
KalmanState update(const KalmanState& state, double reading, const SensorSpec& spec);

struct FuseOptions {
  bool gating = true;
  /// Pairwise cross-check between readings with the same H. Only used with gating.
  bool cross_check = true;
};

/// Sensors i and j agree when (z_i - z_j)^2 / (R_i + R_j) stays within the
/// chi-square(1) quantile of the smaller gate_p. Both must share H.
bool readings_agree(const Reading& a, const Reading& b);

/// Predict by dt, gate every reading, then apply the accepted readings one at a
/// time in the given order.
///
/// With cross_check, a reading that disagrees with a strict majority of at
/// least two peers is isolated first (worst offender first, repeated). A
/// surviving reading that fails the innovation gate is still accepted when it
/// agrees with every surviving peer: the sensors outvote a prediction that
/// has absorbed a slow drift.
std::pair<KalmanState, FusionVerdict> fuse_step(const KalmanState& state, std::span<const Reading> readings,
                                                std::uint64_t dt, FuseOptions options = {});

/// Smaller eigenvalue of a symmetric 2x2 matrix.
double min_eigenvalue(const Mat2& P);

}  // namespace iotchain::fusion
