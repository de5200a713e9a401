#include <doctest.h>

#include <cmath>
#include <sstream>

#include "iotchain/baselines/evaluation.hpp"
#include "iotchain/baselines/isolation_forest.hpp"
#include "iotchain/baselines/lof.hpp"
#include "iotchain/core/errors.hpp"
#include "iotchain/core/rng.hpp"

using namespace iotchain;
using namespace iotchain::baselines;
using datagen::Label;
using datagen::LabeledDataset;

namespace {

std::vector<FeatureVector> gaussian_cloud(std::size_t n, std::size_t dim, std::uint64_t seed) {
  core::Rng rng(seed);
  std::vector<FeatureVector> rows(n, FeatureVector(dim));
  for (auto& r : rows)
    for (auto& v : r) v = rng.normal(0.0, 1.0);
  return rows;
}

LabeledDataset labeled(const std::vector<double>& benign, const std::vector<double>& malicious) {
  LabeledDataset d;
  for (double v : benign) {
    d.rows.push_back({v});
    d.labels.push_back(Label::benign);
    d.device_ids.push_back("d");
  }
  for (double v : malicious) {
    d.rows.push_back({v});
    d.labels.push_back(Label::malicious);
    d.device_ids.push_back("d");
  }
  return d;
}

const ScoreFn identity = [](std::span<const double> x) { return x[0]; };

}  // namespace

TEST_CASE("path length normalization") {
  CHECK(average_path_length(0) == 0.0);
  CHECK(average_path_length(1) == 0.0);
  CHECK(average_path_length(2) == doctest::Approx(1.0));
  CHECK(harmonic(3) == doctest::Approx(11.0 / 6.0));
  // c(256) = 2 H(255) - 2 * 255 / 256
  CHECK(average_path_length(256) == doctest::Approx(2.0 * harmonic(255) - 2.0 * 255.0 / 256.0));
  CHECK(anomaly_score(average_path_length(256), 256) == doctest::Approx(0.5));
  CHECK(anomaly_score(0.0, 256) == doctest::Approx(1.0));
}

TEST_CASE("isolation forest structure and scores") {
  const auto data = gaussian_cloud(1000, 4, 3);
  const auto forest = IsolationForest::fit(data, {100, 256, 9});
  CHECK(forest.tree_count() == 100);
  CHECK(forest.depth_cap() == 8);
  CHECK(forest.max_depth() <= forest.depth_cap());
  CHECK(forest.trained_size() == 1000);

  const FeatureVector far{12.0, -12.0, 12.0, 12.0};
  CHECK(forest.score(far) > 0.6);
  CHECK(forest.score(FeatureVector(4, 0.0)) < 0.5);
  CHECK(forest.score(far) > forest.score(FeatureVector(4, 0.0)));
  CHECK(IsolationForest::fit(data, {100, 256, 9}).score(far) == forest.score(far));
  CHECK_THROWS_AS(forest.score(FeatureVector(3, 0.0)), Error);

  // Identical points cannot be split: every path ends at the root with c(psi).
  const std::vector<FeatureVector> dup(300, FeatureVector{1.0, 2.0});
  const auto flat = IsolationForest::fit(dup, {10, 64, 1});
  CHECK(flat.max_depth() == 0);
  CHECK(flat.mean_path_length(dup[0]) == doctest::Approx(average_path_length(64)));

  CHECK_THROWS_AS(IsolationForest::fit(data, {0, 256, 1}), Error);
  CHECK_THROWS_AS(IsolationForest::fit(std::span(data).first(100), {10, 256, 1}), Error);
}

TEST_CASE("lof matches a reference implementation") {
  const std::vector<FeatureVector> points{{0, 0},       {0.3, 0.1},  {0.1, 0.45}, {0.52, 0.33},
                                          {0.21, 0.74}, {0.9, 0.15}, {0.67, 0.81}, {1.1, 0.62},
                                          {0.05, 1.02}, {0.43, 1.07}, {3.0, 3.2},  {0.78, 0.47}};
  const double expected[] = {1.12309655115139,  1.11639720582283, 0.89826722029355, 0.908526855675246,
                             1.04876913037115,  0.955791268359978, 0.854374940992624, 1.0194248545979,
                             1.00924530563204,  1.08225837997957, 7.46565944632354, 1.11370853319683};
  // The reference adds 1e-10 to each mean reachability distance; this
  // implementation only clamps, hence the 1e-8 tolerance.
  const auto lof = LofModel::fit(points, 3, false);
  for (std::size_t i = 0; i < points.size(); ++i) {
    CAPTURE(i);
    CHECK(lof.training_score(i) == doctest::Approx(expected[i]).epsilon(1e-8));
  }
  CHECK(lof.score(FeatureVector{0.5, 0.5}) == doctest::Approx(0.951158184854982).epsilon(1e-8));
  CHECK(lof.score(FeatureVector{2.0, 2.0}) == doctest::Approx(3.77060948355783).epsilon(1e-8));
  CHECK_THROWS_AS(LofModel::fit(points, 12, false), Error);
  CHECK_THROWS_AS(LofModel::fit(points, 0, false), Error);
}

TEST_CASE("lof on a uniform cluster stays near one") {
  core::Rng rng(4);
  std::vector<FeatureVector> grid;
  for (int i = 0; i < 300; ++i) grid.push_back({rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)});
  const auto lof = LofModel::fit(grid, 20);
  CHECK(lof.score(FeatureVector{0.5, 0.5}) == doctest::Approx(1.0).epsilon(0.2));
  CHECK(lof.score(FeatureVector{5.0, 5.0}) > 3.0);
  // Exact duplicates keep densities finite.
  const std::vector<FeatureVector> same(30, FeatureVector{1.0, 1.0});
  const auto d = LofModel::fit(same, 5, false);
  CHECK(std::isfinite(d.training_score(0)));
  CHECK(d.training_score(0) == doctest::Approx(1.0));
}

TEST_CASE("quantile interpolation") {
  const std::vector<double> v{3, 1, 4, 1.5, 9};
  CHECK(quantile(v, 0.0) == doctest::Approx(1.0));
  CHECK(quantile(v, 0.25) == doctest::Approx(1.5));
  CHECK(quantile(v, 0.5) == doctest::Approx(3.0));
  CHECK(quantile(v, 0.9) == doctest::Approx(7.0));
  CHECK(quantile(v, 0.99) == doctest::Approx(8.8));
  CHECK(quantile(v, 1.0) == doctest::Approx(9.0));
  CHECK_THROWS_AS(quantile({}, 0.5), Error);
  CHECK_THROWS_AS(quantile(v, 1.5), Error);
}

TEST_CASE("evaluation counts") {
  const auto perfect = labeled({0.1, 0.2, 0.3}, {5, 6});
  auto r = evaluate("perfect", identity, perfect, ThresholdPolicy::fixed(1.0));
  CHECK(r.tp == 2);
  CHECK(r.tn == 3);
  CHECK(r.tpr == 1.0);
  CHECK(r.fpr == 0.0);
  CHECK(r.total() == perfect.size());

  // A score equal to the threshold is benign.
  r = evaluate("tie", identity, labeled({1.0}, {1.0, 2.0}), ThresholdPolicy::fixed(1.0));
  CHECK(r.fp == 0);
  CHECK(r.fn == 1);

  const std::vector<FeatureVector> calib{{0}, {1}, {2}, {3}, {4}};
  r = evaluate("q", identity, perfect, ThresholdPolicy::quantile(0.5), calib);
  CHECK(r.threshold == 2.0);
  CHECK_THROWS_AS(evaluate("q", identity, perfect, ThresholdPolicy::quantile(0.5)), Error);

  // Random scores give tpr close to fpr.
  core::Rng rng(12);
  std::vector<double> b(4000), m(4000);
  for (auto& v : b) v = rng.uniform();
  for (auto& v : m) v = rng.uniform();
  r = evaluate("coin", identity, labeled(b, m), ThresholdPolicy::fixed(0.7));
  CHECK(std::abs(r.tpr - r.fpr) < 0.05);
  CHECK(r.total() == 8000);

  try {
    (void)evaluate("single", identity, labeled({1, 2}, {}), ThresholdPolicy::fixed(1.0));
    FAIL("expected degenerate_eval");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degenerate_eval);
  }
}

TEST_CASE("report serialization") {
  auto r = evaluate("ae", identity, labeled({0.1, 0.2}, {5}), ThresholdPolicy::fixed(1.0));
  const auto back = report_from_json(report_to_json(r));
  CHECK(back.detector == "ae");
  CHECK(back.tp == r.tp);
  CHECK(back.latency_p99_us == r.latency_p99_us);
  CHECK_FALSE(report_to_json(r, false).contains("latency_us"));
  CHECK(report_from_json(report_to_json(r, false)).latency_mean_us == 0.0);

  std::ostringstream csv, table;
  write_report_csv(csv, std::span(&r, 1), false);
  CHECK(csv.str().rfind("detector,threshold,tp,fp,tn,fn,tpr,fpr,latency_mean_us", 0) == 0);
  CHECK(csv.str().find("\nae,") != std::string::npos);
  write_comparison_table(table, std::span(&r, 1));
  CHECK(table.str().find("ae 100") != std::string::npos);
}
