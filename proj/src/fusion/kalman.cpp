#include "iotchain/fusion/kalman.hpp"

#include <algorithm>
#include <cmath>

#include "iotchain/core/errors.hpp"

namespace iotchain::fusion {

namespace {

void symmetrize(Mat2& P) {
  const double off = 0.5 * (P[0][1] + P[1][0]);
  P[0][1] = off;
  P[1][0] = off;
}

Vec2 mul(const Mat2& P, const Vec2& h) {
  return {P[0][0] * h[0] + P[0][1] * h[1], P[1][0] * h[0] + P[1][1] * h[1]};
}

double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

}  // namespace

void SensorSpec::validate() const {
  if (!(R > 0.0) || !std::isfinite(R)) {
    throw Error(Errc::invalid_argument, "sensor " + sensor_id + ": R must be positive");
  }
  if (!(gate_p > 0.0 && gate_p < 1.0)) {
    throw Error(Errc::invalid_argument, "sensor " + sensor_id + ": gate_p must lie in (0, 1)");
  }
}

KalmanState predict(const KalmanState& state, std::uint64_t dt) {
  const double t = static_cast<double>(dt);
  KalmanState next = state;
  next.x = {state.x[0] + t * state.x[1], state.x[1]};

  const Mat2& P = state.P;
  // F P F^T expanded for F = [[1, t], [0, 1]].
  next.P[0][0] = P[0][0] + t * (P[1][0] + P[0][1]) + t * t * P[1][1];
  next.P[0][1] = P[0][1] + t * P[1][1];
  next.P[1][0] = P[1][0] + t * P[1][1];
  next.P[1][1] = P[1][1];
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) next.P[i][j] += state.Q[i][j] * t;
  }
  symmetrize(next.P);
  next.tick = state.tick + dt;
  return next;
}

double chi_square1_quantile(double upper_tail_p) {
  if (!(upper_tail_p > 0.0 && upper_tail_p < 1.0)) {
    throw Error(Errc::invalid_argument, "chi-square tail probability must lie in (0, 1)");
  }
  // P(chi2_1 > q) = erfc(sqrt(q / 2)), decreasing in q.
  double lo = 0.0;
  double hi = 1.0;
  while (std::erfc(std::sqrt(hi / 2.0)) > upper_tail_p) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (std::erfc(std::sqrt(mid / 2.0)) > upper_tail_p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

GateResult gate(const KalmanState& state, double reading, const SensorSpec& spec) {
  spec.validate();
  GateResult result;
  result.innovation = reading - dot(spec.H, state.x);
  result.innovation_variance = dot(spec.H, mul(state.P, spec.H)) + spec.R;
  if (!(result.innovation_variance > 0.0) || !std::isfinite(result.innovation_variance)) {
    throw Error(Errc::numeric_degenerate, "innovation variance is not positive for sensor " + spec.sensor_id);
  }
  result.normalized_innovation = result.innovation * result.innovation / result.innovation_variance;
  result.accepted = result.normalized_innovation <= chi_square1_quantile(spec.gate_p);
  return result;
}

KalmanState update(const KalmanState& state, double reading, const SensorSpec& spec) {
  const Vec2 PHt = mul(state.P, spec.H);
  const double S = dot(spec.H, PHt) + spec.R;
  if (!(S > 0.0) || !std::isfinite(S)) {
    throw Error(Errc::numeric_degenerate, "innovation variance is not positive for sensor " + spec.sensor_id);
  }
  const Vec2 K{PHt[0] / S, PHt[1] / S};
  const double nu = reading - dot(spec.H, state.x);

  KalmanState next = state;
  next.x = {state.x[0] + K[0] * nu, state.x[1] + K[1] * nu};

  // Joseph form: (I - K H) P (I - K H)^T + K R K^T.
  const Mat2 A{{{1.0 - K[0] * spec.H[0], -K[0] * spec.H[1]}, {-K[1] * spec.H[0], 1.0 - K[1] * spec.H[1]}}};
  Mat2 AP{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) AP[i][j] = A[i][0] * state.P[0][j] + A[i][1] * state.P[1][j];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) next.P[i][j] = AP[i][0] * A[j][0] + AP[i][1] * A[j][1] + K[i] * spec.R * K[j];
  symmetrize(next.P);
  return next;
}

bool readings_agree(const Reading& a, const Reading& b) {
  const double d = a.value - b.value;
  const double limit = chi_square1_quantile(std::min(a.spec.gate_p, b.spec.gate_p));
  return d * d / (a.spec.R + b.spec.R) <= limit;
}

std::pair<KalmanState, FusionVerdict> fuse_step(const KalmanState& state, std::span<const Reading> readings,
                                                std::uint64_t dt, FuseOptions options) {
  if (readings.empty()) throw Error(Errc::invalid_argument, "fuse_step needs at least one reading");

  KalmanState predicted = predict(state, dt);
  const std::size_t n = readings.size();
  std::vector<GateResult> gates;
  gates.reserve(n);
  for (const auto& r : readings) gates.push_back(gate(predicted, r.value, r.spec));

  std::vector<bool> isolated(n, false);
  // peers[i][j]: same observation row; agree[i][j]: pairwise consistent.
  std::vector<std::vector<bool>> peers(n, std::vector<bool>(n, false)), agree = peers;
  if (options.gating && options.cross_check) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j || readings[i].spec.H != readings[j].spec.H) continue;
        peers[i][j] = true;
        agree[i][j] = readings_agree(readings[i], readings[j]);
      }
    }
    for (;;) {
      std::size_t worst = n, worst_disagree = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (isolated[i]) continue;
        std::size_t count = 0, disagree = 0;
        for (std::size_t j = 0; j < n; ++j) {
          if (isolated[j] || !peers[i][j]) continue;
          ++count;
          disagree += !agree[i][j];
        }
        if (count >= 2 && 2 * disagree > count && disagree > worst_disagree) {
          worst = i;
          worst_disagree = disagree;
        }
      }
      if (worst == n) break;
      isolated[worst] = true;
    }
  }

  FusionVerdict verdict;
  std::vector<const Reading*> usable;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = readings[i];
    bool accept = !options.gating || gates[i].accepted;
    if (options.gating && isolated[i]) {
      accept = false;
    } else if (!accept && options.cross_check) {
      std::size_t count = 0;
      bool all_agree = true;
      for (std::size_t j = 0; j < n; ++j) {
        if (isolated[j] || !peers[i][j]) continue;
        ++count;
        all_agree = all_agree && agree[i][j];
      }
      accept = count >= 1 && all_agree;
    }
    if (accept) {
      usable.push_back(&r);
      verdict.accepted.push_back(r.spec.sensor_id);
    } else {
      verdict.rejected.push_back({r.spec.sensor_id, gates[i].normalized_innovation, isolated[i]});
    }
  }

  KalmanState next = predicted;
  for (const Reading* reading : usable) next = update(next, reading->value, reading->spec);
  verdict.coasting = usable.empty();
  verdict.fused_x = next.x;
  return {next, verdict};
}

double min_eigenvalue(const Mat2& P) {
  const double tr = P[0][0] + P[1][1];
  const double det = P[0][0] * P[1][1] - P[0][1] * P[1][0];
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  return tr / 2.0 - disc;
}

}  // namespace iotchain::fusion
