#include <doctest.h>

#include <cmath>
#include <sstream>

#include "iotchain/core/errors.hpp"
#include "iotchain/datagen/generate.hpp"
#include "iotchain/ledger/ledger.hpp"
#include "iotchain/monitor/behavior_monitor.hpp"
#include "iotchain/monitor/detector.hpp"
#include "iotchain/monitor/threshold.hpp"

using namespace iotchain;
using namespace iotchain::monitor;

namespace {

Snapshot make_snapshot(const FeatureVector& x, const std::string& device = "cam-1", std::uint64_t tick = 0) {
  Snapshot s;
  s.device_id = device;
  s.features = x;
  s.meta = {"10.0.0.2", "10.0.0.1", "02:00:00:00:00:02", "443"};
  s.tick = tick;
  return s;
}

FitConfig quick_fit() {
  FitConfig c;
  c.lr_grid = {0.1};
  c.train.epochs = 15;
  c.train.patience = 3;
  return c;
}

const Detector& small_detector() {
  static const Detector d = [] {
    const auto rows = datagen::gen_benign(datagen::default_benign_profile(), 600, 21).rows;
    return fit(rows, quick_fit());
  }();
  return d;
}

}  // namespace

TEST_CASE("threshold examples") {
  const std::vector<double> a{1, 2, 3};
  CHECK(compute_threshold(a).th_v == doctest::Approx(3.0).epsilon(1e-12));
  const std::vector<double> b{0, 0, 0, 4};
  const auto t = compute_threshold(b);
  CHECK(t.opt_mean == doctest::Approx(1.0));
  CHECK(t.opt_std == doctest::Approx(2.0));
  CHECK(t.th_v == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(t.count == 4);
  const std::vector<double> flat(7, 0.25);
  CHECK(compute_threshold(flat).th_v == 0.25);
  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(compute_threshold(one), Error);
  CHECK_THROWS_AS(compute_threshold(std::vector<double>{}), Error);
}

TEST_CASE("snapshot encoding and store") {
  const auto x = datagen::gen_benign(datagen::default_benign_profile(), 1, 2).rows[0];
  const auto s = make_snapshot(x, "cam-1", 9);
  auto back = Snapshot::decode(s.encode());
  CHECK(back == s);
  auto bytes = s.encode();
  bytes.pop_back();
  CHECK_THROWS_AS(Snapshot::decode(bytes), Error);

  SnapshotStore store;
  const auto r1 = store.record(s);
  CHECK(r1.seq_id == 1);
  CHECK(r1.payload_hash == s.payload_hash());
  const auto r2 = store.record(make_snapshot(x, "cam-1", 10));
  CHECK(r2.seq_id == 2);
  CHECK(store.by_hash(r1.payload_hash).snapshot.tick == 9);
  CHECK(store.by_seq(2).snapshot.tick == 10);
  CHECK_THROWS_AS(store.by_seq(3), Error);

  auto explicit_seq = make_snapshot(x, "cam-1", 11);
  explicit_seq.seq_id = 2;
  CHECK_THROWS_AS(store.record(explicit_seq), Error);
  explicit_seq.seq_id = 40;
  CHECK(store.record(explicit_seq).seq_id == 40);

  auto bad = make_snapshot(x);
  bad.features[3] = std::nan("");
  try {
    store.record(bad);
    FAIL("expected invalid_feature");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_feature);
  }
  bad.features.resize(114);
  CHECK_THROWS_AS(store.record(bad), Error);
}

TEST_CASE("audit ties stored snapshots to sealed transactions") {
  core::Rng rng(5);
  const auto keys = core::keygen(rng);
  ledger::Ledger ledger(2);
  SnapshotStore store;
  const auto rows = datagen::gen_benign(datagen::default_benign_profile(), 5, 3).rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = store.record(make_snapshot(rows[i], "cam-1", i));
    const auto tx = ledger::make_transaction(r.seq_id, "cam-1", r.payload_hash, i, keys.secret_key);
    REQUIRE(ledger.submit(tx, keys.public_key).accepted());
  }
  auto report = audit(store, ledger);
  CHECK(report.checked == 5);
  CHECK(report.orphans == std::vector<std::uint64_t>{5});
  ledger.flush();
  CHECK(audit(store, ledger).clean());

  store.raw_bytes(3)[10] ^= 0x01;
  report = audit(store, ledger);
  CHECK(report.mismatched == std::vector<std::uint64_t>{3});
}

TEST_CASE("fit needs enough rows") {
  const auto rows = datagen::gen_benign(datagen::default_benign_profile(), 49, 1).rows;
  try {
    (void)fit(rows, quick_fit());
    FAIL("expected insufficient_data");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::insufficient_data);
  }
}

TEST_CASE("fit picks a learning rate and sets the threshold from Opt_DS") {
  const auto& d = small_detector();
  CHECK(d.lr_n == 0.1);
  CHECK(d.opt_mses.size() == 200);
  CHECK(d.threshold == compute_threshold(d.opt_mses));
  CHECK(d.history.size() >= 2);
  CHECK(d.history[d.best_epoch] <= d.history.front());

  const auto rows = datagen::gen_benign(datagen::default_benign_profile(), 600, 21).rows;
  CHECK(fit(rows, quick_fit()).model == d.model);
}

TEST_CASE("classification") {
  const auto& d = small_detector();
  auto x = datagen::gen_benign(datagen::default_benign_profile(), 1, 77).rows[0];
  const auto v = classify(d, make_snapshot(x));
  CHECK(v.mse == doctest::Approx(score(d, x)));
  CHECK(v.threshold == d.threshold.th_v);
  CHECK(v.elapsed_micros >= 0.0);

  Detector tie = d;
  tie.threshold.th_v = v.mse;
  CHECK(classify(tie, make_snapshot(x)).label == VerdictLabel::normal);
  tie.threshold.th_v = std::nextafter(v.mse, 0.0);
  CHECK(classify(tie, make_snapshot(x)).label == VerdictLabel::malicious);

  for (auto& f : x) f *= 100.0;
  CHECK(classify(d, make_snapshot(x)).malicious());
}

TEST_CASE("monitor stream flags attack traffic") {
  BehaviorMonitor bm;
  CHECK_THROWS_AS(bm.ingest(make_snapshot(FeatureVector(kFeatureCount, 1.0))), Error);
  CHECK(bm.store().size() == 0);

  bm.set_detector(small_detector());
  const auto profiles = datagen::default_profiles();
  std::vector<Snapshot> stream;
  for (const auto& x : datagen::gen_benign(profiles.benign, 100, 31).rows) stream.push_back(make_snapshot(x));
  for (const auto& x : datagen::gen_attack(profiles.attack("mirai-flood"), profiles.benign, 20, 32).rows)
    stream.push_back(make_snapshot(x));
  const auto events = bm.monitor_stream(stream);
  REQUIRE(events.size() == 120);
  std::size_t flagged = 0, false_alarms = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    CHECK(events[i].record.seq_id == i + 1);
    CHECK(events[i].alert.has_value() == events[i].verdict.malicious());
    if (events[i].verdict.malicious()) (i >= 100 ? flagged : false_alarms)++;
  }
  CHECK(flagged >= 19);
  CHECK(false_alarms <= 25);
  CHECK(bm.alerts().size() == flagged + false_alarms);
  CHECK(bm.verdicts().size() == 120);
  const auto& a = bm.alerts().back();
  CHECK(bm.store().by_seq(a.seq_id).hash_id == a.hash_id);

  bm.note_sensor_rejection("cam-1");
  bm.note_sensor_rejection("cam-1");
  CHECK(bm.anomaly_hints().at("cam-1") == 2);
  CHECK(bm.verdicts().size() == 120);
}

TEST_CASE("trust window arithmetic") {
  TrustWindow empty;
  CHECK(empty.level().status == TrustStatus::no_data);
  CHECK(empty.level().trust == 1.0);

  TrustWindow w;
  for (int i = 0; i < 1000; ++i) w.push(i < 50);
  auto level = w.level();
  CHECK(level.trust == doctest::Approx(0.95));
  CHECK(level.status == TrustStatus::trusted);

  TrustWindow u;
  for (int i = 0; i < 1000; ++i) u.push(i < 100);
  CHECK(u.level().trust == doctest::Approx(0.90));
  CHECK(u.level().status == TrustStatus::untrusted);

  // Old labels slide out of the window.
  for (int i = 0; i < 100; ++i) u.push(false);
  CHECK(u.level().trust == 1.0);
  CHECK(u.level().observed == 1000);

  TrustWindow partial({10, 0.95});
  partial.push(true);
  partial.push(false);
  CHECK(partial.level().trust == doctest::Approx(0.5));

  TrustWindow mono({50, 0.95});
  double last = 1.0;
  for (int i = 0; i < 50; ++i) {
    mono.push(true);
    CHECK(mono.level().trust <= last);
    last = mono.level().trust;
  }
  CHECK(last == 0.0);

  CHECK_THROWS_AS(TrustWindow({0, 0.95}), Error);
  CHECK_THROWS_AS(TrustWindow({10, 1.5}), Error);
  CHECK(std::string(to_string(TrustStatus::no_data)) == "no-data");
}

TEST_CASE("detector persistence") {
  const auto& d = small_detector();
  const auto back = decode_detector(encode_detector(d));
  CHECK(back.model == d.model);
  CHECK(back.threshold == d.threshold);
  CHECK(back.lr_n == d.lr_n);
  CHECK(back.best_epoch == d.best_epoch);
  CHECK(back.history == d.history);
  CHECK(back.opt_mses.empty());

  auto bytes = encode_detector(d);
  bytes[0] ^= 0xff;
  CHECK_THROWS_AS(decode_detector(bytes), Error);
  bytes = encode_detector(d);
  bytes.resize(bytes.size() / 2);
  CHECK_THROWS_AS(decode_detector(bytes), Error);

  try {
    (void)load_detector("/nonexistent/model.bin");
    FAIL("expected not_trained");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_trained);
  }
}

TEST_CASE("verdict log omits latency on request") {
  Verdict v;
  v.seq_id = 4;
  v.device_id = "cam-1";
  v.mse = 0.5;
  v.threshold = 0.25;
  v.label = VerdictLabel::malicious;
  v.tick = 3;
  v.elapsed_micros = 17.25;
  std::ostringstream with, without;
  write_verdict_log(with, std::span<const Verdict>(&v, 1));
  write_verdict_log(without, std::span<const Verdict>(&v, 1), false);
  CHECK(with.str().find("17.250") != std::string::npos);
  CHECK(without.str().find("4,cam-1,0.5,0.25,malicious,3,0.000\n") != std::string::npos);
}
