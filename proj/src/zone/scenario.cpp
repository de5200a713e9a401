#include "iotchain/zone/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "iotchain/core/errors.hpp"
#include "iotchain/datagen/profiles.hpp"

namespace iotchain::zone {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error(Errc::parse, "scenario line " + std::to_string(line) + ": " + what);
}

void expect_args(std::size_t line, const std::string& verb, const std::vector<std::string>& words, std::size_t n) {
  if (words.size() != n + 1) {
    fail(line, verb + " takes " + std::to_string(n) + " argument(s), got " + std::to_string(words.size() - 1));
  }
}

void check_name(std::size_t line, const std::string& name) {
  const bool ok = std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '-' || c == '_' || c == '.';
  });
  if (!ok || name == "." || name == "..") {
    fail(line, "name '" + name + "' may only use letters, digits, '-', '_' and '.'");
  }
}

}  // namespace

Scenario parse_scenario(std::istream& in) {
  Scenario scenario;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words_in(raw);
    std::vector<std::string> words;
    for (std::string w; words_in >> w;) words.push_back(w);
    if (words.empty()) continue;

    ScenarioCommand cmd;
    cmd.line = line;
    const auto& verb = words[0];
    if (verb == "TICK") {
      expect_args(line, verb, words, 1);
      cmd.kind = ScenarioCommand::Kind::tick;
      const auto& s = words[1];
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), cmd.count);
      if (ec != std::errc{} || ptr != s.data() + s.size() || cmd.count == 0) {
        fail(line, "TICK needs a positive integer, got '" + s + "'");
      }
    } else if (verb == "REGISTER") {
      expect_args(line, verb, words, 2);
      cmd.kind = ScenarioCommand::Kind::reg;
      cmd.zone = words[1];
      cmd.device = words[2];
      check_name(line, cmd.zone);
      check_name(line, cmd.device);
    } else if (verb == "SEND") {
      expect_args(line, verb, words, 4);
      cmd.kind = ScenarioCommand::Kind::send;
      cmd.zone = words[1];
      cmd.device = words[2];
      check_name(line, cmd.zone);
      check_name(line, cmd.device);
      cmd.to = words[3];
      check_name(line, cmd.to);
      try {
        cmd.payload = from_hex(words[4]);
      } catch (const Error& e) {
        fail(line, std::string("bad payload hex: ") + e.what());
      }
    } else if (verb == "INJECT") {
      expect_args(line, verb, words, 3);
      cmd.kind = ScenarioCommand::Kind::inject;
      cmd.zone = words[1];
      cmd.device = words[2];
      check_name(line, cmd.zone);
      check_name(line, cmd.device);
      cmd.attack = words[3];
      try {
        (void)datagen::attack_profile(cmd.attack);
      } catch (const Error& e) {
        fail(line, e.what());
      }
    } else {
      fail(line, "unknown command '" + verb + "' (expected TICK, REGISTER, SEND or INJECT)");
    }
    scenario.commands.push_back(std::move(cmd));
  }
  return scenario;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open scenario " + path.string());
  return parse_scenario(in);
}

}  // namespace iotchain::zone
