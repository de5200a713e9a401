#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "iotchain/core/bytes.hpp"

namespace iotchain::core {

/// A 32-byte SHA-256 output.
class Digest {
 public:
  static constexpr std::size_t kSize = 32;

  Digest() = default;
  explicit Digest(const std::array<std::uint8_t, kSize>& bytes) : bytes_(bytes) {}

  /// Throws Error(Errc::decode) unless `data` is exactly 32 bytes.
  static Digest from_bytes(ByteView data);
  static Digest from_hex(std::string_view hex);
  static Digest zero() { return Digest{}; }

  const std::array<std::uint8_t, kSize>& bytes() const { return bytes_; }
  ByteView view() const { return {bytes_.data(), bytes_.size()}; }
  std::string hex() const { return to_hex(view()); }
  bool is_zero() const;

  auto operator<=>(const Digest&) const = default;

 private:
  std::array<std::uint8_t, kSize> bytes_{};
};

struct DigestHasher {
  std::size_t operator()(const Digest& d) const noexcept;
};

Digest hash(ByteView data);

inline Digest hash(std::string_view text) { return hash(as_bytes(text)); }

}  // namespace iotchain::core
