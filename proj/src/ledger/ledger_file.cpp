#include "iotchain/ledger/ledger_file.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "iotchain/core/errors.hpp"

namespace iotchain::ledger {

namespace {

constexpr const char* kMagic = "iotchain-ledger v1";

struct ParsedHeader {
  std::size_t blocksize = 0;
  std::map<std::string, core::PublicKey> keys;
  std::vector<std::string> block_lines;
};

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

ParsedHeader parse_lines(std::istream& in, bool strict_keys) {
  ParsedHeader parsed;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw Error(Errc::format, "ledger file line " + std::to_string(line_no) + ": " + what);
  };

  if (!std::getline(in, line)) {
    line_no = 1;
    fail("empty file");
  }
  ++line_no;
  if (strip_cr(line) != kMagic) fail("missing '" + std::string(kMagic) + "' header");

  if (!std::getline(in, line)) fail("missing blocksize line");
  ++line_no;
  {
    std::istringstream fields(strip_cr(line));
    std::string tag;
    long long size = 0;
    if (!(fields >> tag >> size) || tag != "blocksize" || size <= 0) fail("malformed blocksize line");
    parsed.blocksize = static_cast<std::size_t>(size);
  }

  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    if (line.rfind("key ", 0) == 0) {
      if (!parsed.block_lines.empty()) fail("key line after block lines");
      std::istringstream fields(line);
      std::string tag, device, hex;
      if (!(fields >> tag >> device >> hex)) fail("malformed key line");
      try {
        parsed.keys.insert_or_assign(device, core::PublicKey::from_bytes(from_hex(hex)));
      } catch (const Error& e) {
        // A corrupted key leaves that device unknown, so verification points
        // at the first block carrying its transactions.
        if (strict_keys) fail(std::string("bad public key: ") + e.what());
        parsed.keys.erase(device);
      }
    } else {
      parsed.block_lines.push_back(line);
    }
  }
  return parsed;
}

}  // namespace

void write_ledger(std::ostream& out, const Ledger& ledger) {
  out << kMagic << '\n';
  out << "blocksize " << ledger.blocksize() << '\n';
  for (const auto& [device, key] : ledger.keys()) out << "key " << device << ' ' << key.hex() << '\n';
  for (const auto& block : ledger.blocks()) out << to_hex(block.encode()) << '\n';
}

std::string export_ledger(const Ledger& ledger) {
  std::ostringstream out;
  write_ledger(out, ledger);
  return out.str();
}

void save_ledger(const std::filesystem::path& path, const Ledger& ledger) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot write ledger file " + path.string());
  write_ledger(out, ledger);
}

ChainCheck verify_ledger_text(std::istream& in) {
  auto parsed = parse_lines(in, false);
  std::vector<Block> blocks;
  std::optional<std::uint64_t> undecodable;
  std::string decode_reason;
  for (std::size_t i = 0; i < parsed.block_lines.size(); ++i) {
    try {
      blocks.push_back(Block::decode(from_hex(parsed.block_lines[i])));
    } catch (const Error& e) {
      undecodable = i;
      decode_reason = std::string("undecodable block: ") + e.what();
      break;
    }
  }
  auto ledger = Ledger::from_parts(parsed.blocksize, std::move(parsed.keys), std::move(blocks));
  auto check = ledger.verify_chain();
  if (check.ok() && undecodable) return {undecodable, decode_reason};
  return check;
}

ChainCheck verify_ledger_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open ledger file " + path.string());
  return verify_ledger_text(in);
}

Ledger import_ledger(std::istream& in) {
  auto parsed = parse_lines(in, true);
  std::vector<Block> blocks;
  for (const auto& line : parsed.block_lines) blocks.push_back(Block::decode(from_hex(line)));
  return Ledger::from_parts(parsed.blocksize, std::move(parsed.keys), std::move(blocks));
}

}  // namespace iotchain::ledger
