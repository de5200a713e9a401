#pragma once

#include <array>
#include <compare>
#include <cstdint>

#include "iotchain/core/bytes.hpp"
#include "iotchain/core/rng.hpp"

namespace iotchain::core {

struct KeyPair;

/// Ed25519 verification key.
class PublicKey {
 public:
  static constexpr std::size_t kSize = 32;

  PublicKey() = default;
  /// Throws Error(Errc::decode) on a wrong length or a point that is not a
  /// valid prime-order curve point.
  static PublicKey from_bytes(ByteView data);

  ByteView view() const { return {bytes_.data(), bytes_.size()}; }
  std::string hex() const { return to_hex(view()); }
  auto operator<=>(const PublicKey&) const = default;

 private:
  friend KeyPair keygen(Rng& rng);
  std::array<std::uint8_t, kSize> bytes_{};
};

/// Ed25519 signing key in libsodium layout (seed || public key). Wiped on destruction.
class SecretKey {
 public:
  static constexpr std::size_t kSize = 64;

  SecretKey() = default;
  SecretKey(const SecretKey&) = default;
  SecretKey& operator=(const SecretKey&) = default;
  ~SecretKey();

  ByteView view() const { return {bytes_.data(), bytes_.size()}; }

 private:
  friend KeyPair keygen(Rng& rng);
  std::array<std::uint8_t, kSize> bytes_{};
};

class Signature {
 public:
  static constexpr std::size_t kSize = 64;

  Signature() = default;
  /// Throws Error(Errc::decode) unless `data` is exactly 64 bytes.
  static Signature from_bytes(ByteView data);

  ByteView view() const { return {bytes_.data(), bytes_.size()}; }
  std::string hex() const { return to_hex(view()); }
  auto operator<=>(const Signature&) const = default;

  std::array<std::uint8_t, kSize>& mutable_bytes() { return bytes_; }

 private:
  std::array<std::uint8_t, kSize> bytes_{};
};

struct KeyPair {
  PublicKey public_key;
  SecretKey secret_key;
};

/// Deterministic: the 32-byte Ed25519 seed is drawn from `rng`.
KeyPair keygen(Rng& rng);

Signature sign(const SecretKey& secret_key, ByteView message);

bool verify(const PublicKey& public_key, ByteView message, const Signature& signature);

/// Decodes the raw key and signature first; malformed inputs throw
/// Error(Errc::decode) instead of returning false.
bool verify(ByteView public_key, ByteView message, ByteView signature);

}  // namespace iotchain::core
