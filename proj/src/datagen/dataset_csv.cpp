#include "iotchain/datagen/dataset_csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>

#include "iotchain/core/errors.hpp"

namespace iotchain::datagen {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '"' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

void write_csv(std::ostream& out, const LabeledDataset& dataset, CsvOptions options) {
  dataset.validate();
  const auto& names = feature_names();
  for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
  if (options.with_device_ids) out << ",device_id";
  if (options.with_labels) out << ",label";
  out << '\n';

  char buf[32];
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& row = dataset.rows[i];
    if (row.size() != kFeatureCount) {
      throw Error(Errc::format, "row " + std::to_string(i) + " has " + std::to_string(row.size()) + " features");
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", row[j]);
      out << (j ? "," : "") << buf;
    }
    if (options.with_device_ids) out << ',' << dataset.device_ids[i];
    if (options.with_labels) out << ',' << to_string(dataset.labels[i]);
    out << '\n';
  }
}

void save_csv(const std::filesystem::path& path, const LabeledDataset& dataset, CsvOptions options) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  write_csv(out, dataset, options);
}

LoadedCsv read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::format, "csv is empty; a header row is required");
  const auto header = split_fields(line);

  std::optional<std::size_t> label_col;
  std::optional<std::size_t> device_col;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto name = trim(header[c]);
    if (name == "label") label_col = c;
    if (name == "device_id") device_col = c;
  }
  const std::size_t feature_cols = header.size() - (label_col ? 1 : 0) - (device_col ? 1 : 0);
  if (feature_cols != kFeatureCount) {
    throw Error(Errc::format, "expected " + std::to_string(kFeatureCount) + " feature columns, got " +
                                  std::to_string(feature_cols));
  }

  LoadedCsv loaded;
  loaded.has_labels = label_col.has_value();
  auto& ds = loaded.dataset;
  std::size_t row_no = 0;
  while (std::getline(in, line)) {
    ++row_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw Error(Errc::format, "row " + std::to_string(row_no) + ": expected " + std::to_string(header.size()) +
                                    " columns, got " + std::to_string(fields.size()));
    }
    FeatureVector row;
    row.reserve(kFeatureCount);
    Label label = Label::benign;
    std::string device = "device-0";
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto cell = trim(fields[c]);
      if (label_col && c == *label_col) {
        if (cell == "benign" || cell == "0") {
          label = Label::benign;
        } else if (cell == "malicious" || cell == "1") {
          label = Label::malicious;
        } else {
          throw Error(Errc::parse, "row " + std::to_string(row_no) + ", column " + std::to_string(c + 1) +
                                       ": unknown label '" + std::string(cell) + "'");
        }
        continue;
      }
      if (device_col && c == *device_col) {
        device = std::string(cell);
        continue;
      }
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty()) {
        throw Error(Errc::parse, "row " + std::to_string(row_no) + ", column " + std::to_string(c + 1) +
                                     ": non-numeric cell '" + std::string(cell) + "'");
      }
      row.push_back(value);
    }
    ds.rows.push_back(std::move(row));
    ds.labels.push_back(label);
    ds.device_ids.push_back(std::move(device));
  }
  return loaded;
}

LoadedCsv load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  return read_csv(in);
}

}  // namespace iotchain::datagen
