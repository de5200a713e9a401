#include "iotchain/monitor/detector.hpp"

#include <algorithm>
#include <chrono>

#include "iotchain/core/errors.hpp"
#include "iotchain/core/file_io.hpp"
#include "iotchain/core/serialize.hpp"
#include "iotchain/datagen/generate.hpp"
#include "iotchain/nn/model_io.hpp"

namespace iotchain::monitor {

namespace {

constexpr std::string_view kMagic = "IOTCHAIN-BM";
constexpr std::uint32_t kVersion = 1;

}  // namespace

const char* to_string(VerdictLabel label) noexcept {
  return label == VerdictLabel::normal ? "normal" : "malicious";
}

Detector fit(std::span<const FeatureVector> benign, const FitConfig& config) {
  if (benign.size() < config.min_snapshots) {
    throw Error(Errc::insufficient_data, "fit needs at least " + std::to_string(config.min_snapshots) +
                                             " benign snapshots, got " + std::to_string(benign.size()));
  }
  config.train.validate();

  datagen::LabeledDataset all;
  all.rows.assign(benign.begin(), benign.end());
  all.labels.assign(benign.size(), datagen::Label::benign);
  all.device_ids.assign(benign.size(), "");
  const auto [t_ds, opt_ds] = datagen::split(all, config.split_ratio, config.seed);
  if (t_ds.size() == 0 || opt_ds.size() < 2) {
    throw Error(Errc::insufficient_data, "split leaves too few rows for T_DS or Opt_DS");
  }

  const auto normalizer = nn::Normalizer::fit(t_ds.rows);
  const auto train_rows = normalizer.normalize_all(t_ds.rows);
  const auto opt_rows = normalizer.normalize_all(opt_ds.rows);
  const auto arch = config.architecture.value_or(nn::Architecture::default_for(normalizer.dim()));

  std::vector<double> grid = config.lr_grid;
  if (grid.empty()) grid.push_back(config.train.lr_n);

  std::optional<nn::TrainResult> best;
  double best_lr = 0.0;
  std::string last_failure;
  for (double lr : grid) {
    auto model = nn::init_model(arch, config.seed);
    model.normalizer = normalizer;
    auto train_config = config.train;
    train_config.lr_n = lr;
    try {
      auto result = nn::train(std::move(model), train_rows, opt_rows, train_config);
      const double loss = result.history[result.best_epoch];
      if (!best || loss < best->history[best->best_epoch]) {
        best = std::move(result);
        best_lr = lr;
      }
    } catch (const Error& e) {
      if (e.code() != Errc::diverged) throw;
      last_failure = e.what();
    }
  }
  if (!best) throw Error(Errc::diverged, "every learning rate diverged: " + last_failure);

  Detector detector;
  detector.model = std::move(best->model);
  detector.lr_n = best_lr;
  detector.best_epoch = best->best_epoch;
  detector.history = std::move(best->history);
  detector.opt_mses.reserve(opt_rows.size());
  for (const auto& z : opt_rows) detector.opt_mses.push_back(nn::mse(z, nn::forward(detector.model, z)));
  detector.threshold = compute_threshold(detector.opt_mses);
  return detector;
}

double score(const Detector& detector, std::span<const double> features) {
  return nn::reconstruction_error(detector.model, features);
}

Verdict classify(const Detector& detector, const Snapshot& snapshot) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  v.seq_id = snapshot.seq_id;
  v.device_id = snapshot.device_id;
  v.tick = snapshot.tick;
  v.mse = score(detector, snapshot.features);
  v.threshold = detector.threshold.th_v;
  v.label = v.mse > v.threshold ? VerdictLabel::malicious : VerdictLabel::normal;
  v.elapsed_micros =
      std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
  return v;
}

Bytes encode_detector(const Detector& detector) {
  core::Writer out;
  out.fixed(as_bytes(kMagic)).u32(kVersion);
  out.f64(detector.threshold.th_v).f64(detector.threshold.opt_mean).f64(detector.threshold.opt_std);
  out.u64(detector.threshold.count).f64(detector.lr_n).u64(detector.best_epoch);
  out.u32(static_cast<std::uint32_t>(detector.history.size()));
  for (double h : detector.history) out.f64(h);
  out.bytes(nn::encode_model(detector.model));
  return out.take();
}

Detector decode_detector(ByteView data) {
  core::Reader in(data);
  const auto magic = in.fixed(kMagic.size());
  if (!std::equal(magic.begin(), magic.end(), kMagic.begin())) throw Error(Errc::decode, "not a monitor state file");
  if (const auto version = in.u32(); version != kVersion) {
    throw Error(Errc::decode, "unsupported monitor state version " + std::to_string(version));
  }
  Detector d;
  d.threshold.th_v = in.f64();
  d.threshold.opt_mean = in.f64();
  d.threshold.opt_std = in.f64();
  d.threshold.count = in.u64();
  d.lr_n = in.f64();
  d.best_epoch = in.u64();
  const auto n = in.u32();
  if (n > in.remaining() / 8) throw Error(Errc::decode, "history length exceeds record size");
  d.history.resize(n);
  for (auto& h : d.history) h = in.f64();
  d.model = nn::decode_model(in.bytes());
  in.expect_done();
  return d;
}

void save_detector(const std::filesystem::path& path, const Detector& detector) {
  core::write_file(path, encode_detector(detector));
}

Detector load_detector(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(Errc::not_trained, "no trained model at " + path.string() + " (run `train` first)");
  }
  return decode_detector(core::read_file(path));
}

}  // namespace iotchain::monitor
