#include "iotchain/core/file_io.hpp"

#include <fstream>
#include <iterator>

#include "iotchain/core/errors.hpp"

namespace iotchain::core {

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string read_text(const std::filesystem::path& path) {
  auto data = read_file(path);
  return std::string(data.begin(), data.end());
}

void write_file(const std::filesystem::path& path, ByteView data) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(Errc::io, "short write to " + path.string());
}

void write_text(const std::filesystem::path& path, std::string_view text) { write_file(path, as_bytes(text)); }

}  // namespace iotchain::core
