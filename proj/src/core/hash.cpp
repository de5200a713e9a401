#include "iotchain/core/hash.hpp"

#include <sodium.h>

#include <algorithm>
#include <cstring>

#include "iotchain/core/errors.hpp"

namespace iotchain::core {

Digest Digest::from_bytes(ByteView data) {
  if (data.size() != kSize) {
    throw Error(Errc::decode, "digest must be 32 bytes, got " + std::to_string(data.size()));
  }
  std::array<std::uint8_t, kSize> raw{};
  std::copy(data.begin(), data.end(), raw.begin());
  return Digest{raw};
}

Digest Digest::from_hex(std::string_view hex) { return from_bytes(iotchain::from_hex(hex)); }

bool Digest::is_zero() const {
  return std::all_of(bytes_.begin(), bytes_.end(), [](auto b) { return b == 0; });
}

std::size_t DigestHasher::operator()(const Digest& d) const noexcept {
  std::size_t out;
  std::memcpy(&out, d.bytes().data(), sizeof(out));
  return out;
}

Digest hash(ByteView data) {
  std::array<std::uint8_t, Digest::kSize> out{};
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return Digest{out};
}

}  // namespace iotchain::core
