#include "iotchain/core/serialize.hpp"

#include <bit>
#include <limits>

#include "iotchain/core/errors.hpp"

namespace iotchain::core {

Writer& Writer::u8(std::uint8_t v) {
  out_.push_back(v);
  return *this;
}

Writer& Writer::u32(std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
  return *this;
}

Writer& Writer::u64(std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
  return *this;
}

Writer& Writer::f64(double v) { return u64(std::bit_cast<std::uint64_t>(v)); }

Writer& Writer::bytes(ByteView v) {
  if (v.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(Errc::invalid_argument, "field too large for canonical encoding");
  }
  u32(static_cast<std::uint32_t>(v.size()));
  return fixed(v);
}

Writer& Writer::str(std::string_view v) { return bytes(as_bytes(v)); }

Writer& Writer::digest(const Digest& d) { return fixed(d.view()); }

Writer& Writer::fixed(ByteView v) {
  out_.insert(out_.end(), v.begin(), v.end());
  return *this;
}

ByteView Reader::take(std::size_t n) {
  if (remaining() < n) {
    throw Error(Errc::decode, "truncated record: need " + std::to_string(n) + " bytes at offset " +
                                  std::to_string(pos_) + ", have " + std::to_string(remaining()));
  }
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::uint8_t Reader::u8() { return take(1)[0]; }

std::uint32_t Reader::u32() {
  std::uint32_t v = 0;
  for (auto b : take(4)) v = (v << 8) | b;
  return v;
}

std::uint64_t Reader::u64() {
  std::uint64_t v = 0;
  for (auto b : take(8)) v = (v << 8) | b;
  return v;
}

double Reader::f64() { return std::bit_cast<double>(u64()); }

Bytes Reader::bytes() {
  const auto n = u32();
  auto v = take(n);
  return Bytes(v.begin(), v.end());
}

std::string Reader::str() {
  const auto n = u32();
  auto v = take(n);
  return std::string(v.begin(), v.end());
}

Digest Reader::digest() { return Digest::from_bytes(take(Digest::kSize)); }

ByteView Reader::fixed(std::size_t n) { return take(n); }

void Reader::expect_done() const {
  if (!done()) {
    throw Error(Errc::decode, std::to_string(remaining()) + " trailing bytes after record");
  }
}

}  // namespace iotchain::core
