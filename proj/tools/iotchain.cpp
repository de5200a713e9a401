// iotchain: data generation, training, detection, zone simulation and ledger verification.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "iotchain/baselines/evaluation.hpp"
#include "iotchain/baselines/isolation_forest.hpp"
#include "iotchain/baselines/lof.hpp"
#include "iotchain/core/errors.hpp"
#include "iotchain/core/file_io.hpp"
#include "iotchain/datagen/dataset_csv.hpp"
#include "iotchain/datagen/generate.hpp"
#include "iotchain/datagen/profiles.hpp"
#include "iotchain/fusion/sensor_csv.hpp"
#include "iotchain/ledger/ledger_file.hpp"
#include "iotchain/monitor/behavior_monitor.hpp"
#include "iotchain/monitor/detector.hpp"
#include "iotchain/zone/scenario.hpp"
#include "iotchain/zone/simulation.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using namespace iotchain;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitData = 3;
constexpr int kExitVerification = 4;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::invalid_argument:
    case Errc::invalid_architecture:
    case Errc::already_registered:
      return kExitValidation;
    default:
      return kExitData;
  }
}

std::string quoted(const std::string& text) {
  // json::dump escapes quotes, backslashes and control characters.
  return json(text).dump();
}

void print_error(const std::string& command, const std::string& code, const std::string& message) {
  std::cerr << "error command=" << command << " code=" << code << " message=" << quoted(message) << '\n';
}

// Flags shared by several subcommands. Each is applied only if given.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> lr_n;
  std::optional<std::vector<double>> lr_grid;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> batch_size;
  std::optional<std::size_t> patience;
  std::optional<std::size_t> blocksize;
  std::optional<std::size_t> window;
  std::optional<double> tau;
  std::optional<double> gate_p;
  std::optional<std::size_t> training_rows;
  std::optional<double> drop_p;
  std::optional<double> corrupt_p;
  std::optional<std::uint64_t> max_delay;

  void apply(cli::RunConfig& c) const {
    if (seed) c.seed = *seed;
    if (lr_n) {
      c.train.lr_n = *lr_n;
      if (!lr_grid) c.lr_grid = {*lr_n};
    }
    if (lr_grid) c.lr_grid = *lr_grid;
    if (epochs) c.train.epochs = *epochs;
    if (batch_size) c.train.batch_size = *batch_size;
    if (patience) c.train.patience = *patience;
    if (blocksize) c.blocksize = *blocksize;
    if (window) c.trust.window = *window;
    if (tau) c.trust.tau = *tau;
    if (gate_p) c.gate_p = *gate_p;
    if (training_rows) c.training_rows = *training_rows;
    if (drop_p) c.faults.drop_p = *drop_p;
    if (corrupt_p) c.faults.corrupt_p = *corrupt_p;
    if (max_delay) c.faults.max_delay = *max_delay;
  }
};

monitor::FitConfig fit_config(const cli::RunConfig& c) {
  monitor::FitConfig f;
  f.split_ratio = c.split_ratio;
  f.seed = c.seed;
  f.train = c.train;
  f.train.seed = c.seed;
  f.lr_grid = c.lr_grid;
  f.min_snapshots = c.min_snapshots;
  return f;
}

datagen::ProfileSet profiles_from(const std::string& path) {
  return path.empty() ? datagen::default_profiles() : datagen::load_profiles(path);
}

datagen::LabeledDataset load_all(const std::vector<std::string>& paths, bool require_labels) {
  datagen::LabeledDataset all;
  for (const auto& p : paths) {
    auto loaded = datagen::load_csv(p);
    if (require_labels && !loaded.has_labels) {
      throw Error(Errc::format, p + " has no label column; evaluation needs labeled rows");
    }
    all.append(loaded.dataset);
  }
  return all;
}

// ---- gen ------------------------------------------------------------------

struct GenArgs {
  std::size_t benign = 0;
  std::vector<std::pair<std::string, std::size_t>> attacks;
  std::string out;
  std::string profiles;
  std::string write_profiles;
  bool device_ids = false;
};

int cmd_gen(const GenArgs& args, const cli::RunConfig& config) {
  const auto profiles = profiles_from(args.profiles);
  for (const auto& [name, n] : args.attacks) {
    (void)profiles.attack(name);
    if (n == 0) throw Error(Errc::invalid_argument, "attack row count for " + name + " must be positive");
  }
  if (args.benign == 0 && args.attacks.empty() && args.write_profiles.empty()) {
    throw Error(Errc::invalid_argument, "nothing to generate (use --benign and/or --attack)");
  }
  const fs::path out = args.out.empty() ? fs::path(config.data_dir) : fs::path(args.out);
  const datagen::CsvOptions csv{true, args.device_ids};
  std::vector<fs::path> outputs;
  core::Rng seeds(config.seed);
  if (args.benign > 0) {
    const auto path = out / "benign.csv";
    datagen::save_csv(path, datagen::gen_benign(profiles.benign, args.benign, seeds.fork("benign").next_u64()), csv);
    outputs.push_back(path);
  }
  for (const auto& [name, n] : args.attacks) {
    const auto path = out / (name + ".csv");
    datagen::save_csv(path,
                      datagen::gen_attack(profiles.attack(name), profiles.benign, n, seeds.fork(name).next_u64()),
                      csv);
    outputs.push_back(path);
  }
  if (!args.write_profiles.empty()) {
    core::write_text(args.write_profiles, datagen::profiles_to_json(profiles));
    outputs.emplace_back(args.write_profiles);
  }
  std::vector<fs::path> inputs;
  if (!args.profiles.empty()) inputs.emplace_back(args.profiles);
  cli::write_manifest(out / "manifest.json", "gen", config, inputs, outputs);
  for (const auto& p : outputs) std::cout << "wrote " << p.generic_string() << '\n';
  return kExitOk;
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
  std::vector<std::string> data;
  std::string model;
  std::string report;
};

int cmd_train(const TrainArgs& args, const cli::RunConfig& config) {
  const fs::path model_path = args.model.empty() ? fs::path(config.model_path) : fs::path(args.model);
  const fs::path report_path = args.report.empty() ? model_path.parent_path() / "train_report.json"
                                                   : fs::path(args.report);
  // Labels, if present, are never shown to fit().
  const auto data = load_all(args.data, false);
  const auto detector = monitor::fit(data.rows, fit_config(config));
  monitor::save_detector(model_path, detector);

  const json report = {{"th_v", detector.threshold.th_v},
                       {"opt_mean", detector.threshold.opt_mean},
                       {"opt_std", detector.threshold.opt_std},
                       {"opt_count", detector.threshold.count},
                       {"lr_n", detector.lr_n},
                       {"best_epoch", detector.best_epoch},
                       {"epochs_run", detector.history.size() - 1},
                       {"opt_mse_history", detector.history},
                       {"architecture", detector.model.architecture.layer_sizes}};
  core::write_text(report_path, report.dump(2) + "\n");

  std::vector<fs::path> inputs(args.data.begin(), args.data.end());
  cli::write_manifest(model_path.parent_path() / "manifest.json", "train", config, inputs,
                      {model_path, report_path});
  std::printf("th_v=%.10g lr_n=%g best_epoch=%zu model=%s\n", detector.threshold.th_v, detector.lr_n,
              detector.best_epoch, model_path.generic_string().c_str());
  return kExitOk;
}

// ---- detect ---------------------------------------------------------------

struct DetectArgs {
  std::vector<std::string> data;
  std::string model;
  std::string out;
  bool baselines = false;
  std::vector<std::string> train_data;
  bool no_latency = false;
};

int cmd_detect(const DetectArgs& args, const cli::RunConfig& config) {
  const fs::path model_path = args.model.empty() ? fs::path(config.model_path) : fs::path(args.model);
  const fs::path out = args.out.empty() ? fs::path(config.reports_dir) : fs::path(args.out);
  const auto detector = monitor::load_detector(model_path);
  const auto test = load_all(args.data, true);
  const bool latency = !args.no_latency;

  std::vector<monitor::Verdict> verdicts;
  verdicts.reserve(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    monitor::Snapshot snap;
    snap.seq_id = i + 1;
    snap.tick = i + 1;
    snap.device_id = test.device_ids[i].empty() ? "row" : test.device_ids[i];
    snap.features = test.rows[i];
    verdicts.push_back(monitor::classify(detector, snap));
  }

  std::vector<baselines::EvalReport> reports;
  const auto ae_score = [&](std::span<const double> x) { return monitor::score(detector, x); };
  reports.push_back(baselines::evaluate("autoencoder", ae_score, test,
                                        baselines::ThresholdPolicy::fixed(detector.threshold.th_v)));

  std::vector<fs::path> inputs{model_path};
  for (const auto& d : args.data) inputs.emplace_back(d);
  if (args.baselines) {
    if (args.train_data.empty()) {
      throw Error(Errc::invalid_argument, "--baselines needs --train-data with benign rows to fit on");
    }
    for (const auto& d : args.train_data) inputs.emplace_back(d);
    const auto benign = load_all(args.train_data, false);
    const auto [fit_part, calibration] = datagen::split(benign, config.split_ratio, config.seed);
    const auto policy = baselines::ThresholdPolicy::quantile(config.quantile);

    const auto forest = baselines::IsolationForest::fit(fit_part.rows, {config.trees, config.subsample, config.seed});
    reports.push_back(baselines::evaluate(
        "isolation-forest", [&](std::span<const double> x) { return forest.score(x); }, test, policy,
        calibration.rows));
    const auto lof = baselines::LofModel::fit(fit_part.rows, config.lof_k);
    reports.push_back(baselines::evaluate(
        "lof", [&](std::span<const double> x) { return lof.score(x); }, test, policy, calibration.rows));
  }

  std::ostringstream verdict_csv;
  monitor::write_verdict_log(verdict_csv, verdicts, latency);
  std::ostringstream report_csv;
  baselines::write_report_csv(report_csv, reports, latency);
  std::ostringstream table;
  baselines::write_comparison_table(table, reports);
  json report_json = {{"reports", json::array()}};
  for (const auto& r : reports) report_json["reports"].push_back(baselines::report_to_json(r, latency));

  const std::vector<fs::path> outputs{out / "verdicts.csv", out / "report.csv", out / "report.json",
                                      out / "comparison.dat"};
  core::write_text(outputs[0], verdict_csv.str());
  core::write_text(outputs[1], report_csv.str());
  core::write_text(outputs[2], report_json.dump(2) + "\n");
  core::write_text(outputs[3], table.str());
  cli::write_manifest(out / "manifest.json", "detect", config, inputs, outputs);
  std::cout << report_csv.str();
  return kExitOk;
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::string scenario;
  std::string out;
  std::string model;
  std::string profiles;
  bool no_latency = false;
};

zone::Scenario topology_scenario(const cli::RunConfig& c) {
  std::ostringstream text;
  for (std::size_t z = 1; z <= c.zones; ++z) {
    for (std::size_t d = 1; d <= c.devices_per_zone; ++d) text << "REGISTER zone-" << z << " dev-" << d << '\n';
  }
  text << "TICK " << c.ticks << '\n';
  std::istringstream in(text.str());
  return zone::parse_scenario(in);
}

int cmd_simulate(const SimulateArgs& args, const cli::RunConfig& config) {
  const fs::path out = args.out.empty() ? fs::path(config.out_dir) : fs::path(args.out);
  const auto scenario = args.scenario.empty() ? topology_scenario(config) : zone::load_scenario(args.scenario);

  zone::SimulationConfig sim;
  sim.seed = config.seed;
  sim.zone.blocksize = config.blocksize;
  sim.zone.trust = config.trust;
  sim.faults = config.faults;
  sim.profiles = profiles_from(args.profiles);
  sim.training_rows = config.training_rows;
  sim.fit = fit_config(config);
  std::vector<fs::path> inputs;
  if (!args.scenario.empty()) inputs.emplace_back(args.scenario);
  if (!args.profiles.empty()) inputs.emplace_back(args.profiles);
  if (!args.model.empty()) {
    sim.detector = monitor::load_detector(args.model);
    inputs.emplace_back(args.model);
  }

  zone::Simulation simulation(std::move(sim));
  simulation.run(scenario);
  simulation.finish();
  const auto outputs = simulation.write_artifacts(out, !args.no_latency);
  cli::write_manifest(out / "manifest.json", "simulate", config, inputs, outputs);

  for (const auto& [name, z] : simulation.zones()) {
    const auto s = z.status();
    std::printf("zone=%s status=%s trust=%.4f observed=%zu malicious=%zu height=%llu\n", name.c_str(),
                monitor::to_string(s.trust.status), s.trust.trust, s.trust.observed, s.trust.malicious_count,
                static_cast<unsigned long long>(s.ledger_height));
  }
  return kExitOk;
}

// ---- verify-ledger --------------------------------------------------------

int cmd_verify_ledger(const std::string& path) {
  const auto check = ledger::verify_ledger_file(path);
  if (check.ok()) {
    std::cout << "ok path=" << path << '\n';
    return kExitOk;
  }
  std::cout << "tampered path=" << path << " first_bad_height=" << *check.first_bad_height
            << " reason=" << quoted(check.reason) << '\n';
  return kExitVerification;
}

// ---- report ---------------------------------------------------------------

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string table;
  std::string csv;
};

int cmd_report(const ReportArgs& args) {
  std::vector<baselines::EvalReport> reports;
  for (const auto& path : args.inputs) {
    json j;
    try {
      j = json::parse(core::read_text(path));
    } catch (const json::parse_error& e) {
      throw Error(Errc::parse, path + ": " + e.what());
    }
    if (!j.contains("reports") || !j.at("reports").is_array()) {
      throw Error(Errc::format, path + " has no \"reports\" array");
    }
    for (const auto& r : j.at("reports")) reports.push_back(baselines::report_from_json(r));
  }
  std::ostringstream table;
  baselines::write_comparison_table(table, reports);
  if (!args.table.empty()) core::write_text(args.table, table.str());
  if (!args.csv.empty()) {
    std::ostringstream csv;
    baselines::write_report_csv(csv, reports);
    core::write_text(args.csv, csv.str());
  }
  std::cout << table.str();
  return kExitOk;
}

// ---- fuse -----------------------------------------------------------------

struct FuseArgs {
  std::string data;
  std::string out;
  bool no_gating = false;
  bool no_cross_check = false;
};

int cmd_fuse(const FuseArgs& args, const cli::RunConfig& config) {
  std::ifstream in(args.data);
  if (!in) throw Error(Errc::io, "cannot open sensor file " + args.data);
  const auto samples = fusion::read_sensor_csv(in);
  fusion::FusionRunConfig run;
  for (auto& [id, spec] : run.sensors) spec.gate_p = config.gate_p;
  run.options.gating = !args.no_gating;
  run.options.cross_check = !args.no_cross_check;
  const auto verdicts = fusion::run_fusion(samples, run);
  std::ostringstream csv;
  fusion::write_verdict_csv(csv, verdicts);
  if (args.out.empty()) {
    std::cout << csv.str();
  } else {
    core::write_text(args.out, csv.str());
    cli::write_manifest(fs::path(args.out).parent_path() / "manifest.json", "fuse", config, {args.data},
                        {args.out});
  }
  std::size_t rejected = 0;
  for (const auto& v : verdicts) rejected += v.verdict.rejected.size();
  std::fprintf(stderr, "ticks=%zu rejected_readings=%zu\n", verdicts.size(), rejected);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IoT zone blockchain with autoencoder behavior monitoring"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (defaults apply when omitted)")->check(CLI::ExistingFile);

  Overrides ov;
  const auto add_seed = [&](CLI::App* cmd) { cmd->add_option("--seed", ov.seed, "RNG seed"); };
  const auto add_train = [&](CLI::App* cmd) {
    cmd->add_option("--lr-n", ov.lr_n, "single learning rate (disables the grid)");
    cmd->add_option("--lr-grid", ov.lr_grid, "learning rates tried on Opt_DS");
    cmd->add_option("--epochs", ov.epochs, "maximum epochs");
    cmd->add_option("--batch-size", ov.batch_size, "mini-batch size");
    cmd->add_option("--patience", ov.patience, "early-stopping patience in epochs");
  };

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate synthetic benign/attack CSVs");
  gen_cmd->add_option("--benign", gen.benign, "benign rows");
  gen_cmd->add_option("--attack", gen.attacks, "attack profile and row count (repeatable)")->allow_extra_args(false);
  gen_cmd->add_option("--out", gen.out, "output directory");
  gen_cmd->add_option("--profiles", gen.profiles, "profile JSON")->check(CLI::ExistingFile);
  gen_cmd->add_option("--write-profiles", gen.write_profiles, "also write the effective profiles as JSON");
  gen_cmd->add_flag("--device-ids", gen.device_ids, "add a device_id column");
  add_seed(gen_cmd);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "fit the autoencoder and th_v on benign rows");
  train_cmd->add_option("--data", train.data, "benign CSV (repeatable)")->required();
  train_cmd->add_option("--model", train.model, "model output path");
  train_cmd->add_option("--report", train.report, "training report JSON path");
  add_seed(train_cmd);
  add_train(train_cmd);

  DetectArgs detect;
  auto* detect_cmd = app.add_subcommand("detect", "classify labeled rows and emit evaluation reports");
  detect_cmd->add_option("--data", detect.data, "labeled CSV (repeatable)")->required();
  detect_cmd->add_option("--model", detect.model, "trained model path");
  detect_cmd->add_option("--out", detect.out, "report directory");
  detect_cmd->add_flag("--baselines", detect.baselines, "also run Isolation Forest and LOF");
  detect_cmd->add_option("--train-data", detect.train_data, "benign CSV for fitting the baselines");
  detect_cmd->add_flag("--no-latency", detect.no_latency, "write 0 in latency columns");
  add_seed(detect_cmd);

  SimulateArgs simulate;
  auto* sim_cmd = app.add_subcommand("simulate", "run a zone scenario");
  sim_cmd->add_option("--scenario", simulate.scenario, "scenario script (default: config topology)");
  sim_cmd->add_option("--out", simulate.out, "artifact directory");
  sim_cmd->add_option("--model", simulate.model, "pre-trained model (default: fit on synthetic benign rows)");
  sim_cmd->add_option("--profiles", simulate.profiles, "profile JSON")->check(CLI::ExistingFile);
  sim_cmd->add_flag("--no-latency", simulate.no_latency, "write 0 in latency columns");
  sim_cmd->add_option("--blocksize", ov.blocksize, "transactions per block");
  sim_cmd->add_option("--window", ov.window, "trust window W");
  sim_cmd->add_option("--tau", ov.tau, "trust threshold");
  sim_cmd->add_option("--training-rows", ov.training_rows, "benign rows for the shared detector");
  sim_cmd->add_option("--drop-p", ov.drop_p, "transport drop probability");
  sim_cmd->add_option("--corrupt-p", ov.corrupt_p, "transport bit-flip probability");
  sim_cmd->add_option("--max-delay", ov.max_delay, "maximum transport delay in ticks");
  add_seed(sim_cmd);
  add_train(sim_cmd);

  std::string ledger_path;
  auto* verify_cmd = app.add_subcommand("verify-ledger", "check an exported ledger file");
  verify_cmd->add_option("path", ledger_path, "ledger file")->required();

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "merge report.json files into a comparison table");
  report_cmd->add_option("--in", report.inputs, "report.json (repeatable)")->required();
  report_cmd->add_option("--table", report.table, "write the gnuplot table here");
  report_cmd->add_option("--csv", report.csv, "write the merged CSV here");

  FuseArgs fuse;
  auto* fuse_cmd = app.add_subcommand("fuse", "Kalman-fuse a tick,sensor_id,value CSV");
  fuse_cmd->add_option("--data", fuse.data, "sensor CSV")->required();
  fuse_cmd->add_option("--out", fuse.out, "verdict CSV (default stdout)");
  fuse_cmd->add_option("--gate-p", ov.gate_p, "gate false-rejection probability");
  fuse_cmd->add_flag("--no-gating", fuse.no_gating, "accept every reading");
  fuse_cmd->add_flag("--no-cross-check", fuse.no_cross_check, "gate on the innovation test alone");

  std::string command = "iotchain";
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error(command, "usage", e.what());
    return kExitValidation;
  }

  for (auto* sub : app.get_subcommands()) command = sub->get_name();
  try {
    auto config = config_path.empty() ? cli::RunConfig{} : cli::RunConfig::load(config_path);
    ov.apply(config);
    config.validate();

    if (*gen_cmd) return cmd_gen(gen, config);
    if (*train_cmd) return cmd_train(train, config);
    if (*detect_cmd) return cmd_detect(detect, config);
    if (*sim_cmd) return cmd_simulate(simulate, config);
    if (*verify_cmd) return cmd_verify_ledger(ledger_path);
    if (*report_cmd) return cmd_report(report);
    if (*fuse_cmd) return cmd_fuse(fuse, config);
  } catch (const Error& e) {
    print_error(command, to_string(e.code()), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    print_error(command, "internal", e.what());
    return kExitData;
  }
  return kExitOk;
}
