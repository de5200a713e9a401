#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "iotchain/ledger/ledger.hpp"

namespace iotchain::ledger {

// Line-oriented export:
//   iotchain-ledger v1
//   blocksize <n>
//   key <device-id> <public-key-hex>     (sorted by device id)
//   <block-hex>                          (one canonical block per line, height order)
// Pending pool entries are not exported.

void write_ledger(std::ostream& out, const Ledger& ledger);
std::string export_ledger(const Ledger& ledger);
void save_ledger(const std::filesystem::path& path, const Ledger& ledger);

/// Parses and verifies an export. Undecodable block lines are reported as the
/// first bad height (after checking the decodable prefix). A malformed header
/// or key line throws Error(Errc::format).
ChainCheck verify_ledger_text(std::istream& in);

/// Throws Error(Errc::io) if the file cannot be opened.
ChainCheck verify_ledger_file(const std::filesystem::path& path);

/// Strict import; any malformed line throws.
Ledger import_ledger(std::istream& in);

}  // namespace iotchain::ledger
