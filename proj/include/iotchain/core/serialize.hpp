#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "iotchain/core/bytes.hpp"
#include "iotchain/core/hash.hpp"

namespace iotchain::core {

// Canonical encoding shared by every hashed or signed record:
//   u8/u32/u64   big-endian, fixed width
//   f64          IEEE-754 bit pattern as u64
//   bytes/string u32 length prefix followed by the raw bytes
//   digest       32 raw bytes (fixed width, no prefix)
// Fields are written in declaration order with no padding or tags.

class Writer {
 public:
  Writer& u8(std::uint8_t v);
  Writer& u32(std::uint32_t v);
  Writer& u64(std::uint64_t v);
  Writer& f64(double v);
  Writer& bytes(ByteView v);
  Writer& str(std::string_view v);
  Writer& digest(const Digest& d);
  /// Raw bytes without a length prefix.
  Writer& fixed(ByteView v);

  const Bytes& data() const { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

/// Reads the encoding above. Every underflow throws Error(Errc::decode).
class Reader {
 public:
  explicit Reader(ByteView data) : data_(data) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  double f64();
  Bytes bytes();
  std::string str();
  Digest digest();
  ByteView fixed(std::size_t n);

  bool done() const { return pos_ == data_.size(); }
  std::size_t remaining() const { return data_.size() - pos_; }
  /// Throws unless the whole input was consumed.
  void expect_done() const;

 private:
  ByteView take(std::size_t n);

  ByteView data_;
  std::size_t pos_ = 0;
};

}  // namespace iotchain::core
