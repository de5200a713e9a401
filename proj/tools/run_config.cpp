#include "run_config.hpp"

#include <set>

#include "iotchain/core/errors.hpp"
#include "iotchain/core/file_io.hpp"
#include "iotchain/core/hash.hpp"

namespace iotchain::cli {

namespace {

using nlohmann::json;

void bad(const std::string& field, const std::string& rule) {
  throw Error(Errc::invalid_argument, "config field '" + field + "' " + rule);
}

void check_keys(const json& j, const std::string& section, const std::set<std::string>& allowed) {
  if (!j.is_object()) bad(section.empty() ? "<root>" : section, "must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) bad(section.empty() ? key : section + "." + key, "is not a known setting");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& section) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    bad(section + "." + key, "has the wrong type");
  }
}

}  // namespace

void RunConfig::validate() const {
  if (zones < 1) bad("topology.zones", "must be at least 1");
  if (ticks < 1) bad("topology.ticks", "must be at least 1");
  if (!(train.lr_n > 0.0)) bad("train.lr_n", "must be positive");
  for (double lr : lr_grid) {
    if (!(lr > 0.0)) bad("train.lr_grid", "entries must be positive");
  }
  if (train.epochs < 1) bad("train.epochs", "must be at least 1");
  if (train.batch_size < 1) bad("train.batch_size", "must be at least 1");
  if (train.patience < 1) bad("train.patience", "must be at least 1");
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) bad("train.split_ratio", "must lie in (0, 1)");
  if (min_snapshots < 3) bad("train.min_snapshots", "must be at least 3");
  if (blocksize < 1) bad("ledger.blocksize", "must be at least 1");
  if (trust.window < 1) bad("trust.window", "must be at least 1");
  if (!(trust.tau >= 0.0 && trust.tau <= 1.0)) bad("trust.tau", "must lie in [0, 1]");
  if (!(gate_p > 0.0 && gate_p < 1.0)) bad("fusion.gate_p", "must lie in (0, 1)");
  if (trees < 1) bad("baselines.trees", "must be at least 1");
  if (subsample < 2) bad("baselines.subsample", "must be at least 2");
  if (lof_k < 1) bad("baselines.lof_k", "must be at least 1");
  if (!(quantile > 0.0 && quantile < 1.0)) bad("baselines.quantile", "must lie in (0, 1)");
  if (training_rows < min_snapshots) bad("simulate.training_rows", "must be at least train.min_snapshots");
  if (!(faults.drop_p >= 0.0 && faults.drop_p <= 1.0)) bad("simulate.drop_p", "must lie in [0, 1]");
  if (!(faults.corrupt_p >= 0.0 && faults.corrupt_p <= 1.0)) bad("simulate.corrupt_p", "must lie in [0, 1]");
}

nlohmann::json RunConfig::to_json() const {
  return json{
      {"seed", seed},
      {"paths", {{"data", data_dir}, {"model", model_path}, {"out", out_dir}, {"reports", reports_dir}}},
      {"topology", {{"zones", zones}, {"devices_per_zone", devices_per_zone}, {"ticks", ticks}}},
      {"train",
       {{"lr_n", train.lr_n},
        {"lr_grid", lr_grid},
        {"epochs", train.epochs},
        {"batch_size", train.batch_size},
        {"patience", train.patience},
        {"split_ratio", split_ratio},
        {"min_snapshots", min_snapshots}}},
      {"ledger", {{"blocksize", blocksize}}},
      {"trust", {{"window", trust.window}, {"tau", trust.tau}}},
      {"fusion", {{"gate_p", gate_p}}},
      {"baselines", {{"trees", trees}, {"subsample", subsample}, {"lof_k", lof_k}, {"quantile", quantile}}},
      {"simulate",
       {{"training_rows", training_rows},
        {"drop_p", faults.drop_p},
        {"corrupt_p", faults.corrupt_p},
        {"max_delay", faults.max_delay}}},
  };
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  check_keys(j, "", {"seed", "paths", "topology", "train", "ledger", "trust", "fusion", "baselines", "simulate"});
  read(j, "seed", c.seed, "");
  const auto section = [&](const char* name, const std::set<std::string>& keys) -> json {
    if (!j.contains(name)) return json::object();
    check_keys(j.at(name), name, keys);
    return j.at(name);
  };
  const auto paths = section("paths", {"data", "model", "out", "reports"});
  read(paths, "data", c.data_dir, "paths");
  read(paths, "model", c.model_path, "paths");
  read(paths, "out", c.out_dir, "paths");
  read(paths, "reports", c.reports_dir, "paths");
  const auto topo = section("topology", {"zones", "devices_per_zone", "ticks"});
  read(topo, "zones", c.zones, "topology");
  read(topo, "devices_per_zone", c.devices_per_zone, "topology");
  read(topo, "ticks", c.ticks, "topology");
  const auto train = section("train", {"lr_n", "lr_grid", "epochs", "batch_size", "patience", "split_ratio",
                                       "min_snapshots"});
  read(train, "lr_n", c.train.lr_n, "train");
  read(train, "lr_grid", c.lr_grid, "train");
  read(train, "epochs", c.train.epochs, "train");
  read(train, "batch_size", c.train.batch_size, "train");
  read(train, "patience", c.train.patience, "train");
  read(train, "split_ratio", c.split_ratio, "train");
  read(train, "min_snapshots", c.min_snapshots, "train");
  read(section("ledger", {"blocksize"}), "blocksize", c.blocksize, "ledger");
  const auto trust = section("trust", {"window", "tau"});
  read(trust, "window", c.trust.window, "trust");
  read(trust, "tau", c.trust.tau, "trust");
  read(section("fusion", {"gate_p"}), "gate_p", c.gate_p, "fusion");
  const auto base = section("baselines", {"trees", "subsample", "lof_k", "quantile"});
  read(base, "trees", c.trees, "baselines");
  read(base, "subsample", c.subsample, "baselines");
  read(base, "lof_k", c.lof_k, "baselines");
  read(base, "quantile", c.quantile, "baselines");
  const auto sim = section("simulate", {"training_rows", "drop_p", "corrupt_p", "max_delay"});
  read(sim, "training_rows", c.training_rows, "simulate");
  read(sim, "drop_p", c.faults.drop_p, "simulate");
  read(sim, "corrupt_p", c.faults.corrupt_p, "simulate");
  read(sim, "max_delay", c.faults.max_delay, "simulate");
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  const auto text = core::read_text(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::parse, "config " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

FileDigest digest_file(const std::filesystem::path& path) {
  return {path.generic_string(), core::hash(core::read_file(path)).hex()};
}

void write_manifest(const std::filesystem::path& path, const std::string& command, const RunConfig& config,
                    const std::vector<std::filesystem::path>& inputs,
                    const std::vector<std::filesystem::path>& outputs) {
  const auto list = [](const std::vector<std::filesystem::path>& files) {
    json arr = json::array();
    for (const auto& f : files) {
      const auto d = digest_file(f);
      arr.push_back({{"path", d.path}, {"sha256", d.sha256}});
    }
    return arr;
  };
  const json manifest = {{"command", command},
                         {"seed", config.seed},
                         {"config", config.to_json()},
                         {"inputs", list(inputs)},
                         {"outputs", list(outputs)}};
  core::write_text(path, manifest.dump(2) + "\n");
}

}  // namespace iotchain::cli
