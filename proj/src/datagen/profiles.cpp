#include "iotchain/datagen/profiles.hpp"

#include <array>
#include <cmath>
#include <json.hpp>

#include "iotchain/core/errors.hpp"
#include "iotchain/core/file_io.hpp"
#include "iotchain/core/rng.hpp"

namespace iotchain::datagen {

using nlohmann::json;

namespace {

// Packet counts and inter-arrival sums grow with the length of the decay window.
constexpr std::array<double, 5> kWindowScale = {1.0, 1.7, 5.0, 40.0, 300.0};

struct StateShape {
  const char* name;
  double weight;
  double rate_scale;
  double size_scale;
  double inter_arrival_scale;
  double noise_scale;
};

// Idle devices dominate; rare bursts are loud and widely spread.
constexpr std::array<StateShape, 3> kStates = {{
    {"idle", 0.80, 1.0, 1.0, 1.0, 1.0},
    {"active", 0.185, 1.5, 1.15, 0.8, 1.5},
    {"burst", 0.015, 2.0, 1.3, 0.6, 8.0},
}};

FeatureGroup group_from_string(const std::string& name) {
  for (auto g : {FeatureGroup::packet_rate, FeatureGroup::packet_size, FeatureGroup::inter_arrival,
                 FeatureGroup::connection_count}) {
    if (name == to_string(g)) return g;
  }
  throw Error(Errc::format, "unknown feature group '" + name + "'");
}

std::size_t window_of(std::size_t column) {
  // Columns are stream-major, then window, then statistic.
  static const std::vector<std::size_t> windows = [] {
    std::vector<std::size_t> out;
    const auto& names = feature_names();
    const std::array<const char*, 5> tags = {"_L5_", "_L3_", "_L1_", "_L0.1_", "_L0.01_"};
    for (const auto& name : names) {
      for (std::size_t w = 0; w < tags.size(); ++w) {
        if (name.find(tags[w]) != std::string::npos) {
          out.push_back(w);
          break;
        }
      }
    }
    return out;
  }();
  return windows.at(column);
}

}  // namespace

std::vector<double> BenignProfile::mixture_mean() const {
  std::vector<double> out(dim(), 0.0);
  for (const auto& c : components) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += c.weight * c.mean[j];
  }
  return out;
}

std::vector<double> BenignProfile::mixture_variance() const {
  const auto mu = mixture_mean();
  std::vector<double> out(dim(), 0.0);
  for (const auto& c : components) {
    for (std::size_t j = 0; j < out.size(); ++j) {
      const double d = c.mean[j] - mu[j];
      out[j] += c.weight * (c.variance[j] + d * d);
    }
  }
  return out;
}

void BenignProfile::validate() const {
  if (components.empty()) throw Error(Errc::invalid_argument, "benign profile has no components");
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight > 0.0)) throw Error(Errc::invalid_argument, "mixture weights must be positive");
    if (c.mean.size() != dim() || c.variance.size() != dim()) {
      throw Error(Errc::invalid_argument, "mixture component '" + c.name + "' has inconsistent width");
    }
    for (double v : c.variance) {
      if (!(v > 0.0) || !std::isfinite(v)) throw Error(Errc::invalid_argument, "variances must be positive");
    }
    if (!all_finite(c.mean)) throw Error(Errc::invalid_argument, "means must be finite");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error(Errc::invalid_argument, "mixture weights must sum to 1");
  if (!std::isfinite(drift_rate)) throw Error(Errc::invalid_argument, "drift rate must be finite");
}

bool AttackProfile::inflates(FeatureGroup group) const {
  for (const auto& inf : inflations) {
    if (inf.group == group) return true;
  }
  return false;
}

double AttackProfile::factor_for(FeatureGroup group) const {
  for (const auto& inf : inflations) {
    if (inf.group == group) return inf.factor;
  }
  return 1.0;
}

void AttackProfile::validate() const {
  bool any = false;
  for (const auto& inf : inflations) {
    if (!(inf.factor > 0.0) || !std::isfinite(inf.factor)) {
      throw Error(Errc::invalid_argument, "attack '" + name + "': inflation factors must be positive");
    }
    any = any || inf.factor > 1.0;
  }
  if (!any) throw Error(Errc::invalid_argument, "attack '" + name + "' must inflate at least one group");
  if (!(jitter >= 0.0) || !std::isfinite(jitter)) {
    throw Error(Errc::invalid_argument, "attack '" + name + "': jitter must be non-negative");
  }
}

BenignProfile default_benign_profile() {
  core::Rng recipe(0x49'6f'54'42'65'6eULL);
  const std::size_t dim = kFeatureCount;
  std::vector<double> base_mean(dim), base_std(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const double window = kWindowScale[window_of(j)];
    double mu = 0.0;
    switch (feature_group(j)) {
      case FeatureGroup::packet_rate: mu = 20.0 * window * recipe.uniform(0.8, 1.25); break;
      case FeatureGroup::packet_size: mu = recipe.uniform(60.0, 900.0); break;
      case FeatureGroup::inter_arrival: mu = recipe.uniform(0.5, 5.0) * window; break;
      case FeatureGroup::connection_count: mu = recipe.uniform(5.0, 60.0) * window; break;
    }
    base_mean[j] = mu;
    base_std[j] = mu * recipe.uniform(0.12, 0.25);
  }

  BenignProfile profile;
  profile.name = "default";
  for (const auto& state : kStates) {
    MixtureComponent c;
    c.name = state.name;
    c.weight = state.weight;
    c.mean.resize(dim);
    c.variance.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      double scale = 1.0;
      switch (feature_group(j)) {
        case FeatureGroup::packet_rate:
        case FeatureGroup::connection_count: scale = state.rate_scale; break;
        case FeatureGroup::packet_size: scale = state.size_scale; break;
        case FeatureGroup::inter_arrival: scale = state.inter_arrival_scale; break;
      }
      c.mean[j] = base_mean[j] * scale;
      const double sd = base_std[j] * state.noise_scale;
      c.variance[j] = sd * sd;
    }
    profile.components.push_back(std::move(c));
  }
  profile.validate();
  return profile;
}

const std::vector<std::string>& attack_names() {
  static const std::vector<std::string> names = {"mirai-scan", "mirai-flood"};
  return names;
}

AttackProfile attack_profile(std::string_view name) {
  if (name == "mirai-flood") {
    return {"mirai-flood",
            {{FeatureGroup::packet_rate, 20.0}, {FeatureGroup::connection_count, 20.0}},
            0.1};
  }
  if (name == "mirai-scan") {
    return {"mirai-scan", {{FeatureGroup::connection_count, 8.0}}, 0.35};
  }
  throw Error(Errc::invalid_argument,
              "unknown attack '" + std::string(name) + "' (valid: mirai-scan, mirai-flood)");
}

const AttackProfile& ProfileSet::attack(std::string_view name) const {
  for (const auto& a : attacks) {
    if (a.name == name) return a;
  }
  std::string valid;
  for (const auto& a : attacks) valid += (valid.empty() ? "" : ", ") + a.name;
  throw Error(Errc::invalid_argument, "unknown attack '" + std::string(name) + "' (valid: " + valid + ")");
}

ProfileSet default_profiles() {
  ProfileSet set;
  set.benign = default_benign_profile();
  for (const auto& name : attack_names()) set.attacks.push_back(attack_profile(name));
  return set;
}

std::string profiles_to_json(const ProfileSet& profiles) {
  json doc;
  json benign;
  benign["name"] = profiles.benign.name;
  benign["drift_rate"] = profiles.benign.drift_rate;
  benign["feature_names"] = feature_names();
  benign["components"] = json::array();
  for (const auto& c : profiles.benign.components) {
    benign["components"].push_back({{"name", c.name}, {"weight", c.weight}, {"mean", c.mean}, {"variance", c.variance}});
  }
  doc["benign"] = std::move(benign);
  doc["attacks"] = json::array();
  for (const auto& a : profiles.attacks) {
    json inflations = json::array();
    for (const auto& inf : a.inflations) inflations.push_back({{"group", to_string(inf.group)}, {"factor", inf.factor}});
    doc["attacks"].push_back({{"name", a.name}, {"jitter", a.jitter}, {"inflations", std::move(inflations)}});
  }
  return doc.dump(2) + "\n";
}

ProfileSet profiles_from_json(std::string_view text) {
  ProfileSet set;
  try {
    const json doc = json::parse(text);
    const auto& benign = doc.at("benign");
    set.benign.name = benign.value("name", "benign");
    set.benign.drift_rate = benign.value("drift_rate", 0.0);
    for (const auto& c : benign.at("components")) {
      MixtureComponent comp;
      comp.name = c.value("name", "");
      comp.weight = c.at("weight").get<double>();
      comp.mean = c.at("mean").get<std::vector<double>>();
      comp.variance = c.at("variance").get<std::vector<double>>();
      set.benign.components.push_back(std::move(comp));
    }
    for (const auto& a : doc.at("attacks")) {
      AttackProfile attack;
      attack.name = a.at("name").get<std::string>();
      attack.jitter = a.value("jitter", 0.0);
      for (const auto& inf : a.at("inflations")) {
        attack.inflations.push_back({group_from_string(inf.at("group").get<std::string>()),
                                     inf.at("factor").get<double>()});
      }
      set.attacks.push_back(std::move(attack));
    }
  } catch (const json::exception& e) {
    throw Error(Errc::format, std::string("profile config: ") + e.what());
  }
  set.benign.validate();
  for (const auto& a : set.attacks) a.validate();
  return set;
}

ProfileSet load_profiles(const std::filesystem::path& path) { return profiles_from_json(core::read_text(path)); }

}  // namespace iotchain::datagen
