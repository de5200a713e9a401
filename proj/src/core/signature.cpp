#include "iotchain/core/signature.hpp"

#include <sodium.h>

#include <algorithm>

#include "iotchain/core/errors.hpp"

namespace iotchain::core {

namespace {

void ensure_sodium() {
  static const bool ready = [] {
    if (sodium_init() < 0) throw Error(Errc::io, "libsodium initialization failed");
    return true;
  }();
  (void)ready;
}

}  // namespace

PublicKey PublicKey::from_bytes(ByteView data) {
  ensure_sodium();
  if (data.size() != kSize) {
    throw Error(Errc::decode, "public key must be 32 bytes, got " + std::to_string(data.size()));
  }
  if (crypto_core_ed25519_is_valid_point(data.data()) != 1) {
    throw Error(Errc::decode, "public key is not a valid Ed25519 point");
  }
  PublicKey key;
  std::copy(data.begin(), data.end(), key.bytes_.begin());
  return key;
}

SecretKey::~SecretKey() { sodium_memzero(bytes_.data(), bytes_.size()); }

Signature Signature::from_bytes(ByteView data) {
  if (data.size() != kSize) {
    throw Error(Errc::decode, "signature must be 64 bytes, got " + std::to_string(data.size()));
  }
  Signature sig;
  std::copy(data.begin(), data.end(), sig.bytes_.begin());
  return sig;
}

KeyPair keygen(Rng& rng) {
  ensure_sodium();
  std::array<std::uint8_t, crypto_sign_SEEDBYTES> seed{};
  for (std::size_t i = 0; i < seed.size(); i += 8) {
    std::uint64_t word = rng.next_u64();
    for (std::size_t j = 0; j < 8; ++j) seed[i + j] = static_cast<std::uint8_t>(word >> (8 * j));
  }
  KeyPair pair;
  crypto_sign_seed_keypair(pair.public_key.bytes_.data(), pair.secret_key.bytes_.data(), seed.data());
  sodium_memzero(seed.data(), seed.size());
  return pair;
}

Signature sign(const SecretKey& secret_key, ByteView message) {
  ensure_sodium();
  Signature sig;
  crypto_sign_detached(sig.mutable_bytes().data(), nullptr, message.data(), message.size(),
                       secret_key.view().data());
  return sig;
}

bool verify(const PublicKey& public_key, ByteView message, const Signature& signature) {
  ensure_sodium();
  return crypto_sign_verify_detached(signature.view().data(), message.data(), message.size(),
                                     public_key.view().data()) == 0;
}

bool verify(ByteView public_key, ByteView message, ByteView signature) {
  return verify(PublicKey::from_bytes(public_key), message, Signature::from_bytes(signature));
}

}  // namespace iotchain::core
