#include "iotchain/nn/model_io.hpp"

#include <algorithm>

#include "iotchain/core/errors.hpp"
#include "iotchain/core/file_io.hpp"
#include "iotchain/core/serialize.hpp"

namespace iotchain::nn {

namespace {

constexpr std::string_view kMagic = "IOTCHAIN-AE";
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kMaxWidth = 1u << 20;

}  // namespace

Bytes encode_model(const AutoencoderModel& model) {
  core::Writer out;
  out.fixed(as_bytes(kMagic)).u32(kVersion);
  const auto& arch = model.architecture;
  out.u32(static_cast<std::uint32_t>(arch.layer_sizes.size()));
  for (auto width : arch.layer_sizes) out.u32(static_cast<std::uint32_t>(width));
  out.u32(static_cast<std::uint32_t>(arch.hidden_activations.size()));
  for (auto act : arch.hidden_activations) out.u8(static_cast<std::uint8_t>(act));

  out.u32(static_cast<std::uint32_t>(model.normalizer.dim()));
  for (double m : model.normalizer.mean()) out.f64(m);
  for (double s : model.normalizer.stddev()) out.f64(s);

  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    for (double w : model.weights[l].data) out.f64(w);
    for (double b : model.biases[l]) out.f64(b);
  }
  const auto checksum = core::hash(out.data());
  out.digest(checksum);
  return out.take();
}

AutoencoderModel decode_model(ByteView data) {
  if (data.size() < core::Digest::kSize) throw Error(Errc::decode, "model file too short");
  const auto body = data.first(data.size() - core::Digest::kSize);
  const auto stored = core::Digest::from_bytes(data.last(core::Digest::kSize));
  if (core::hash(body) != stored) throw Error(Errc::decode, "model checksum mismatch");

  core::Reader in(body);
  const auto magic = in.fixed(kMagic.size());
  if (!std::equal(magic.begin(), magic.end(), kMagic.begin())) throw Error(Errc::decode, "not a model file");
  if (const auto version = in.u32(); version != kVersion) {
    throw Error(Errc::decode, "unsupported model version " + std::to_string(version));
  }

  AutoencoderModel model;
  auto& arch = model.architecture;
  const auto n_layers = in.u32();
  if (n_layers > 64) throw Error(Errc::decode, "implausible layer count");
  for (std::uint32_t i = 0; i < n_layers; ++i) {
    const auto width = in.u32();
    if (width == 0 || width > kMaxWidth) throw Error(Errc::decode, "implausible layer width");
    arch.layer_sizes.push_back(width);
  }
  const auto n_act = in.u32();
  if (n_act > 64) throw Error(Errc::decode, "implausible activation count");
  for (std::uint32_t i = 0; i < n_act; ++i) {
    const auto code = in.u8();
    if (code > static_cast<std::uint8_t>(Activation::relu)) throw Error(Errc::decode, "unknown activation code");
    arch.hidden_activations.push_back(static_cast<Activation>(code));
  }
  try {
    arch.validate();
  } catch (const Error& e) {
    throw Error(Errc::decode, std::string("model architecture: ") + e.what());
  }

  const auto dim = in.u32();
  if (dim != arch.input_dim()) throw Error(Errc::decode, "normalizer width does not match input layer");
  std::vector<double> mean(dim), stddev(dim);
  for (auto& m : mean) m = in.f64();
  for (auto& s : stddev) s = in.f64();
  try {
    model.normalizer = Normalizer(std::move(mean), std::move(stddev));
  } catch (const Error& e) {
    throw Error(Errc::decode, std::string("model normalizer: ") + e.what());
  }

  for (std::size_t l = 0; l < arch.layer_count(); ++l) {
    Matrix W(arch.layer_sizes[l + 1], arch.layer_sizes[l]);
    for (auto& w : W.data) w = in.f64();
    std::vector<double> b(arch.layer_sizes[l + 1]);
    for (auto& v : b) v = in.f64();
    model.weights.push_back(std::move(W));
    model.biases.push_back(std::move(b));
  }
  in.expect_done();
  return model;
}

void save_model(const std::filesystem::path& path, const AutoencoderModel& model) {
  core::write_file(path, encode_model(model));
}

AutoencoderModel load_model(const std::filesystem::path& path) { return decode_model(core::read_file(path)); }

}  // namespace iotchain::nn
