#pragma once

#include <filesystem>

#include "iotchain/core/bytes.hpp"
#include "iotchain/nn/autoencoder.hpp"

namespace iotchain::nn {

// Binary container, canonical encoding (see core/serialize.hpp):
//   fixed  "IOTCHAIN-AE"           magic
//   u32    version (1)
//   u32    layer count, then u32 per width
//   u32    hidden activation count, then u8 per activation
//   u32    normalizer dim, f64 means, f64 stds
//   f64    weights row-major then biases, per layer
//   digest SHA-256 of every preceding byte
// Doubles are stored as raw bit patterns, so save -> load is bit-exact.

Bytes encode_model(const AutoencoderModel& model);
/// Throws Error(Errc::decode) on bad magic, version, checksum or shapes.
AutoencoderModel decode_model(ByteView data);

void save_model(const std::filesystem::path& path, const AutoencoderModel& model);
AutoencoderModel load_model(const std::filesystem::path& path);

}  // namespace iotchain::nn
