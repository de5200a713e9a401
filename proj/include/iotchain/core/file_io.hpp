#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "iotchain/core/bytes.hpp"

namespace iotchain::core {

/// Throws Error(Errc::io) when the file cannot be read.
Bytes read_file(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);

/// Creates parent directories as needed. Throws Error(Errc::io).
void write_file(const std::filesystem::path& path, ByteView data);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace iotchain::core
