#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "iotchain/core/features.hpp"
#include "iotchain/datagen/generate.hpp"

namespace iotchain::baselines {

using ScoreFn = std::function<double(std::span<const double>)>;

/// How a detector's scores become labels. Either a fixed threshold (the
/// autoencoder's th_v) or a quantile of the scores of benign calibration rows.
struct ThresholdPolicy {
  enum class Kind { fixed, benign_quantile };
  Kind kind = Kind::benign_quantile;
  double value = 0.99;

  static ThresholdPolicy fixed(double threshold) { return {Kind::fixed, threshold}; }
  static ThresholdPolicy quantile(double q = 0.99) { return {Kind::benign_quantile, q}; }
};

/// Linear interpolation between order statistics (position q * (n - 1)).
double quantile(std::vector<double> values, double q);

struct EvalReport {
  std::string detector;
  double threshold = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  double tpr = 0.0;
  double fpr = 0.0;
  double latency_mean_us = 0.0;
  double latency_p50_us = 0.0;
  double latency_p95_us = 0.0;
  double latency_p99_us = 0.0;

  std::size_t total() const { return tp + fp + tn + fn; }
};

/// Scores every row of `test`, labels it malicious iff score > threshold and
/// times each score call. Quantile policies take their threshold from the
/// scores of `calibration`. Throws Error(Errc::degenerate_eval) when `test`
/// lacks either class.
EvalReport evaluate(const std::string& name, const ScoreFn& score, const datagen::LabeledDataset& test,
                    const ThresholdPolicy& policy, std::span<const FeatureVector> calibration = {});

/// `detector,threshold,tp,fp,tn,fn,tpr,fpr,latency_mean_us,latency_p50_us,latency_p95_us,latency_p99_us`.
/// Latency columns are written as 0 when include_latency is false.
void write_report_csv(std::ostream& out, std::span<const EvalReport> reports, bool include_latency = true);

nlohmann::json report_to_json(const EvalReport& report, bool include_latency = true);
EvalReport report_from_json(const nlohmann::json& j);

/// Whitespace-separated table for gnuplot bar charts: detector, TPR and FPR in
/// percent, mean latency in microseconds.
void write_comparison_table(std::ostream& out, std::span<const EvalReport> reports);

}  // namespace iotchain::baselines
