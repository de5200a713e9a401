#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iotchain/core/bytes.hpp"
#include "iotchain/monitor/snapshot.hpp"
#include "iotchain/monitor/threshold.hpp"
#include "iotchain/nn/autoencoder.hpp"
#include "iotchain/nn/train.hpp"

namespace iotchain::monitor {

struct FitConfig {
  /// Fraction of the benign rows used as T_DS; the rest is Opt_DS.
  double split_ratio = 2.0 / 3.0;
  std::uint64_t seed = 7;
  nn::TrainConfig train;
  /// Learning rates tried on Opt_DS; empty means train.lr_n only.
  std::vector<double> lr_grid = {0.1, 0.01, 0.001};
  /// Defaults to Architecture::default_for(feature width).
  std::optional<nn::Architecture> architecture;
  std::size_t min_snapshots = 50;
};

/// A trained autoencoder plus its Opt_DS threshold.
struct Detector {
  nn::AutoencoderModel model;
  DetectionThreshold threshold;
  double lr_n = 0.0;
  std::size_t best_epoch = 0;
  std::vector<double> history;
  /// Per-row reconstruction errors on Opt_DS that produced the threshold.
  std::vector<double> opt_mses;
};

/// Splits benign rows into T_DS / Opt_DS with a seeded shuffle, fits the
/// normalizer on T_DS, trains once per learning rate and keeps the run with the
/// lowest Opt_DS loss, then sets th_v from that model's Opt_DS errors.
/// Throws Error(Errc::insufficient_data) below `min_snapshots` rows and
/// Error(Errc::diverged) when every learning rate diverges.
Detector fit(std::span<const FeatureVector> benign, const FitConfig& config);

enum class VerdictLabel { normal, malicious };

const char* to_string(VerdictLabel label) noexcept;

struct Verdict {
  std::uint64_t seq_id = 0;
  std::string device_id;
  double mse = 0.0;
  double threshold = 0.0;
  VerdictLabel label = VerdictLabel::normal;
  std::uint64_t tick = 0;
  double elapsed_micros = 0.0;

  bool malicious() const { return label == VerdictLabel::malicious; }
};

/// Reconstruction error of a raw feature vector under the detector's model.
double score(const Detector& detector, std::span<const double> features);

/// malicious iff mse > th_v; a tie is normal.
Verdict classify(const Detector& detector, const Snapshot& snapshot);

// Monitor state container (canonical encoding):
//   fixed "IOTCHAIN-BM", u32 version (1),
//   f64 th_v, f64 opt_mean, f64 opt_std, u64 count, f64 lr_n, u64 best_epoch,
//   u32 n + f64 history[n], bytes model (the autoencoder model container).
// opt_mses are not persisted.
Bytes encode_detector(const Detector& detector);
Detector decode_detector(ByteView data);
void save_detector(const std::filesystem::path& path, const Detector& detector);
/// Throws Error(Errc::not_trained) if the file does not exist.
Detector load_detector(const std::filesystem::path& path);

}  // namespace iotchain::monitor
