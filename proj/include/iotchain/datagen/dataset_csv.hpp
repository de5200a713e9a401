#pragma once

#include <filesystem>
#include <iosfwd>

#include "iotchain/datagen/generate.hpp"

namespace iotchain::datagen {

// Header row of feature names, one row per snapshot. An optional `label`
// column (benign|malicious, or 0|1) and `device_id` column may appear anywhere.

struct CsvOptions {
  bool with_labels = true;
  bool with_device_ids = false;
};

void write_csv(std::ostream& out, const LabeledDataset& dataset, CsvOptions options = {});
void save_csv(const std::filesystem::path& path, const LabeledDataset& dataset, CsvOptions options = {});

/// Throws Error(Errc::format) on a wrong feature-column count ("expected 115")
/// and Error(Errc::parse) naming row and column for a non-numeric cell. Rows
/// without a label column are labeled benign and `has_labels` is false.
struct LoadedCsv {
  LabeledDataset dataset;
  bool has_labels = false;
};

LoadedCsv read_csv(std::istream& in);
LoadedCsv load_csv(const std::filesystem::path& path);

}  // namespace iotchain::datagen
