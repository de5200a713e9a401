#include "iotchain/baselines/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "iotchain/core/errors.hpp"

namespace iotchain::baselines {

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(Errc::insufficient_data, "quantile of an empty list");
  if (!(q >= 0.0 && q <= 1.0)) throw Error(Errc::invalid_argument, "quantile must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

EvalReport evaluate(const std::string& name, const ScoreFn& score, const datagen::LabeledDataset& test,
                    const ThresholdPolicy& policy, std::span<const FeatureVector> calibration) {
  test.validate();
  const auto positives = test.count(datagen::Label::malicious);
  const auto negatives = test.count(datagen::Label::benign);
  if (positives == 0 || negatives == 0) {
    throw Error(Errc::degenerate_eval, "evaluation data needs both benign and malicious rows (benign " +
                                           std::to_string(negatives) + ", malicious " +
                                           std::to_string(positives) + ")");
  }

  EvalReport report;
  report.detector = name;
  if (policy.kind == ThresholdPolicy::Kind::fixed) {
    report.threshold = policy.value;
  } else {
    if (calibration.empty()) throw Error(Errc::invalid_argument, "quantile threshold needs benign calibration rows");
    std::vector<double> cal;
    cal.reserve(calibration.size());
    for (const auto& row : calibration) cal.push_back(score(row));
    report.threshold = quantile(std::move(cal), policy.value);
  }

  std::vector<double> latency;
  latency.reserve(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    const double s = score(test.rows[i]);
    latency.push_back(std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count());
    const bool flagged = s > report.threshold;
    const bool malicious = test.labels[i] == datagen::Label::malicious;
    if (malicious) {
      ++(flagged ? report.tp : report.fn);
    } else {
      ++(flagged ? report.fp : report.tn);
    }
  }
  report.tpr = static_cast<double>(report.tp) / static_cast<double>(positives);
  report.fpr = static_cast<double>(report.fp) / static_cast<double>(negatives);
  report.latency_mean_us = std::accumulate(latency.begin(), latency.end(), 0.0) / static_cast<double>(latency.size());
  report.latency_p50_us = quantile(latency, 0.50);
  report.latency_p95_us = quantile(latency, 0.95);
  report.latency_p99_us = quantile(latency, 0.99);
  return report;
}

void write_report_csv(std::ostream& out, std::span<const EvalReport> reports, bool include_latency) {
  out << "detector,threshold,tp,fp,tn,fn,tpr,fpr,latency_mean_us,latency_p50_us,latency_p95_us,latency_p99_us\n";
  char buf[256];
  for (const auto& r : reports) {
    const double k = include_latency ? 1.0 : 0.0;
    std::snprintf(buf, sizeof buf, "%.10g,%zu,%zu,%zu,%zu,%.6f,%.6f,%.3f,%.3f,%.3f,%.3f", r.threshold, r.tp, r.fp,
                  r.tn, r.fn, r.tpr, r.fpr, k * r.latency_mean_us, k * r.latency_p50_us, k * r.latency_p95_us,
                  k * r.latency_p99_us);
    out << r.detector << ',' << buf << '\n';
  }
}

nlohmann::json report_to_json(const EvalReport& r, bool include_latency) {
  nlohmann::json j = {{"detector", r.detector}, {"threshold", r.threshold}, {"tp", r.tp},   {"fp", r.fp},
                      {"tn", r.tn},             {"fn", r.fn},               {"tpr", r.tpr}, {"fpr", r.fpr}};
  if (include_latency) {
    j["latency_us"] = {{"mean", r.latency_mean_us},
                       {"p50", r.latency_p50_us},
                       {"p95", r.latency_p95_us},
                       {"p99", r.latency_p99_us}};
  }
  return j;
}

EvalReport report_from_json(const nlohmann::json& j) {
  try {
    EvalReport r;
    r.detector = j.at("detector").get<std::string>();
    r.threshold = j.at("threshold").get<double>();
    r.tp = j.at("tp").get<std::size_t>();
    r.fp = j.at("fp").get<std::size_t>();
    r.tn = j.at("tn").get<std::size_t>();
    r.fn = j.at("fn").get<std::size_t>();
    r.tpr = j.at("tpr").get<double>();
    r.fpr = j.at("fpr").get<double>();
    if (j.contains("latency_us")) {
      const auto& l = j.at("latency_us");
      r.latency_mean_us = l.at("mean").get<double>();
      r.latency_p50_us = l.at("p50").get<double>();
      r.latency_p95_us = l.at("p95").get<double>();
      r.latency_p99_us = l.at("p99").get<double>();
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::format, std::string("malformed evaluation report: ") + e.what());
  }
}

void write_comparison_table(std::ostream& out, std::span<const EvalReport> reports) {
  out << "# detector tpr_pct fpr_pct mean_latency_us\n";
  char buf[128];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, " %.2f %.2f %.3f", 100.0 * r.tpr, 100.0 * r.fpr, r.latency_mean_us);
    out << r.detector << buf << '\n';
  }
}

}  // namespace iotchain::baselines
