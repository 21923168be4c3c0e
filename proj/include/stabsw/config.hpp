// Copyright 2026 The stabsw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Plain-text run configuration: one `key = value` per line, '#' starts a
// comment. Coupling grids are comma lists or inclusive ranges start:stop:step.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "stabsw/models.hpp"
#include "stabsw/sw.hpp"

namespace stabsw {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;  // tfim, toric, bilayer, kagome, validate
  std::string model;    // tfim, toric_square, toric_bilayer, kagome_tc
  std::size_t n = 0;    // TFIM ring length
  std::size_t lx = 0, ly = 0;
  std::vector<double> couplings;
  std::string coupling_name;  // "h" or "J"
  std::size_t order = 0;
  std::string state = "all_up";
  std::string perturbation = "xx_ising";
  std::string frame;  // empty: matched to the perturbation
  std::vector<std::string> observables;
  std::size_t max_distance = 0;  // 0: model default
  bool ed_compare = false;
  std::filesystem::path out = "results";
  bool emit_plotdata = false;
  std::size_t term_cap = 20'000'000;
  std::uint64_t seed = 20260101;
  double onset_threshold = 0.5;
  std::size_t threads = 0;  // 0: hardware concurrency
  TieBreak tie_break = TieBreak::kLast;
  bool translation_mode = true;
  std::size_t trials = 200;  // validate: randomized instances per check

  std::size_t worker_count() const {
    return threads ? threads : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }
};

namespace detail {

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (auto t = trim(item); !t.empty()) out.push_back(t);
  return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  }
}

inline std::uint64_t parse_unsigned(const std::string& key, const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + v + "'");
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': integer out of range: '" + v + "'");
  }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + v + "'");
}

}  // namespace detail

/// "0.1, 0.2" or "0.05:0.40:0.05" (inclusive; values are start + i * step).
inline std::vector<double> parse_grid(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : detail::split(v, ',')) {
    const auto parts = detail::split(item, ':');
    if (parts.size() == 1) {
      out.push_back(detail::parse_double(key, parts[0]));
    } else if (parts.size() == 3) {
      const double a = detail::parse_double(key, parts[0]), b = detail::parse_double(key, parts[1]),
                   s = detail::parse_double(key, parts[2]);
      if (!(s > 0.0) || b < a) throw ConfigError("key '" + key + "': range needs start <= stop and step > 0");
      const auto count = static_cast<std::size_t>(std::floor((b - a) / s + 1e-9)) + 1;
      if (count > 100000) throw ConfigError("key '" + key + "': range has too many points");
      for (std::size_t i = 0; i < count; ++i) out.push_back(a + static_cast<double>(i) * s);
    } else {
      throw ConfigError("key '" + key + "': cannot parse grid item '" + item + "'");
    }
  }
  return out;
}

inline std::string model_for_command(const std::string& command) {
  static const std::map<std::string, std::string> kModels = {
      {"tfim", "tfim"}, {"toric", "toric_square"}, {"bilayer", "toric_bilayer"}, {"kagome", "kagome_tc"}};
  if (auto it = kModels.find(command); it != kModels.end()) return it->second;
  return {};
}

/// Parses config text. `command` (from the CLI) fills in the model when the
/// file does not name one, and must agree with it when it does.
inline RunConfig parse_config(const std::string& text, const std::string& command) {
  RunConfig c;
  c.command = command;
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const auto key = detail::trim(line.substr(0, eq)), value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, value).second) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }

  static const std::set<std::string> kKnown = {
      "command", "model", "n", "extents", "lx", "ly", "h", "J", "couplings", "order", "state", "perturbation",
      "frame", "observables", "max_distance", "ed_compare", "out", "emit_plotdata", "term_cap", "seed",
      "onset_threshold", "threads", "tie_break", "mode", "trials"};
  for (const auto& [k, v] : kv)
    if (!kKnown.count(k)) throw ConfigError("unknown key '" + k + "'");

  if (auto it = kv.find("command"); it != kv.end() && it->second != command)
    throw ConfigError("config is for command '" + it->second + "', not '" + command + "'");
  c.model = model_for_command(command);
  if (auto it = kv.find("model"); it != kv.end()) {
    if (command != "validate" && it->second != c.model)
      throw ConfigError("model '" + it->second + "' does not match command '" + command + "'");
    c.model = it->second;
  }
  if (c.model.empty() && command != "validate") throw ConfigError("unknown command '" + command + "'");

  auto get = [&](const std::string& k) -> std::optional<std::string> {
    if (auto it = kv.find(k); it != kv.end()) return it->second;
    return std::nullopt;
  };
  if (auto v = get("n")) c.n = detail::parse_unsigned("n", *v);
  if (auto v = get("extents")) {
    const auto parts = detail::split(*v, 'x');
    if (parts.size() != 2) throw ConfigError("key 'extents': expected LXxLY, got '" + *v + "'");
    c.lx = detail::parse_unsigned("extents", parts[0]);
    c.ly = detail::parse_unsigned("extents", parts[1]);
  }
  if (auto v = get("lx")) c.lx = detail::parse_unsigned("lx", *v);
  if (auto v = get("ly")) c.ly = detail::parse_unsigned("ly", *v);

  c.coupling_name = c.model == "toric_bilayer" || c.model == "kagome_tc" ? "J" : "h";
  int grids = 0;
  for (const char* k : {"h", "J", "couplings"})
    if (auto v = get(k)) {
      if (std::string(k) != "couplings" && k != c.coupling_name)
        throw ConfigError("model '" + c.model + "' takes coupling '" + c.coupling_name + "', not '" + k + "'");
      c.couplings = parse_grid(k, *v);
      ++grids;
    }
  if (grids > 1) throw ConfigError("give the coupling grid once");

  if (auto v = get("order")) c.order = detail::parse_unsigned("order", *v);
  if (auto v = get("state")) c.state = *v;
  if (auto v = get("perturbation")) c.perturbation = *v;
  if (auto v = get("frame")) c.frame = *v;
  if (auto v = get("observables")) c.observables = detail::split(*v, ',');
  if (auto v = get("max_distance")) c.max_distance = detail::parse_unsigned("max_distance", *v);
  if (auto v = get("ed_compare")) c.ed_compare = detail::parse_bool("ed_compare", *v);
  if (auto v = get("out")) c.out = *v;
  if (auto v = get("emit_plotdata")) c.emit_plotdata = detail::parse_bool("emit_plotdata", *v);
  if (auto v = get("term_cap")) c.term_cap = detail::parse_unsigned("term_cap", *v);
  if (auto v = get("seed")) c.seed = detail::parse_unsigned("seed", *v);
  if (auto v = get("onset_threshold")) c.onset_threshold = detail::parse_double("onset_threshold", *v);
  if (auto v = get("threads")) c.threads = detail::parse_unsigned("threads", *v);
  if (auto v = get("trials")) c.trials = detail::parse_unsigned("trials", *v);
  if (auto v = get("tie_break")) {
    if (*v == "first") c.tie_break = TieBreak::kFirst;
    else if (*v == "last") c.tie_break = TieBreak::kLast;
    else throw ConfigError("key 'tie_break': expected first or last, got '" + *v + "'");
  }
  if (auto v = get("mode")) {
    if (*v == "translation") c.translation_mode = true;
    else if (*v == "explicit") c.translation_mode = false;
    else throw ConfigError("key 'mode': expected translation or explicit, got '" + *v + "'");
  }
  return c;
}

inline RunConfig load_config(const std::filesystem::path& path, const std::string& command) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), command);
}

/// Checks the invariants a run needs; throws ConfigError.
inline void validate_config(const RunConfig& c) {
  if (c.command == "validate") {
    if (c.trials == 0) throw ConfigError("trials must be at least 1");
    return;
  }
  if (c.couplings.empty()) throw ConfigError("coupling grid '" + c.coupling_name + "' is empty or missing");
  if (c.order < 1) throw ConfigError("order must be at least 1");
  if (c.term_cap == 0) throw ConfigError("term_cap must be positive");
  if (!(c.onset_threshold > 0.0)) throw ConfigError("onset_threshold must be positive");
  if (c.model == "tfim") {
    if (c.n < 3) throw ConfigError("tfim needs n >= 3");
    static const std::set<std::string> kStates = {"all_up", "all_down", "ghz", "all_right"};
    if (!kStates.count(c.state)) throw ConfigError("unknown state '" + c.state + "'");
    if (c.state == "all_right")
      for (double h : c.couplings)
        if (h == 0.0) throw ConfigError("the paramagnetic frame needs h != 0");
    if (c.ed_compare && c.n > 14) throw ConfigError("ed_compare needs n <= 14");
  } else {
    if (c.lx < 2 || c.ly < 2) throw ConfigError("extents must be at least 2x2");
    if (c.ed_compare) throw ConfigError("ed_compare is only available for tfim");
  }
  if (c.model == "kagome_tc") {
    static const std::set<std::string> kPert = {"xx_ising", "zz_ising", "heisenberg"};
    if (!kPert.count(c.perturbation)) throw ConfigError("unknown perturbation '" + c.perturbation + "'");
    if (!c.frame.empty() && c.frame != "x_loops" && c.frame != "z_loops")
      throw ConfigError("unknown frame '" + c.frame + "'");
  }
  std::error_code ec;
  std::filesystem::create_directories(c.out, ec);
  const auto probe = c.out / ".write_probe";
  {
    std::ofstream f(probe);
    if (!f) throw ConfigError("output directory '" + c.out.string() + "' is not writable");
  }
  std::filesystem::remove(probe, ec);
}

/// The unit-coupling model a config describes (H1 = h1_unit).
inline LatticeModel build_unit_model(const RunConfig& c) {
  if (c.model == "tfim") {
    static const std::map<std::string, TfimState> kStates = {{"all_up", TfimState::kAllUp},
                                                             {"all_down", TfimState::kAllDown},
                                                             {"ghz", TfimState::kGhz},
                                                             {"all_right", TfimState::kAllRight}};
    return build_tfim_chain(c.n, 1.0, kStates.at(c.state));
  }
  if (c.model == "toric_square") return build_toric_square(c.lx, c.ly, 1.0);
  if (c.model == "toric_bilayer") return build_toric_bilayer(c.lx, c.ly, 1.0);
  if (c.model == "kagome_tc") {
    static const std::map<std::string, KagomePerturbation> kPert = {{"xx_ising", KagomePerturbation::kXXIsing},
                                                                    {"zz_ising", KagomePerturbation::kZZIsing},
                                                                    {"heisenberg", KagomePerturbation::kHeisenberg}};
    const auto pert = kPert.at(c.perturbation);
    KagomeFrame frame = pert == KagomePerturbation::kZZIsing ? KagomeFrame::kZLoops : KagomeFrame::kXLoops;
    if (c.frame == "x_loops") frame = KagomeFrame::kXLoops;
    if (c.frame == "z_loops") frame = KagomeFrame::kZLoops;
    return build_kagome_tc(c.lx, c.ly, pert, 1.0, frame);
  }
  throw ConfigError("unknown model '" + c.model + "'");
}

/// Expansion parameter for a grid value: h itself, or 1/h in the
/// paramagnetic TFIM frame.
inline double expansion_parameter(const RunConfig& c, double coupling) {
  return c.model == "tfim" && c.state == "all_right" ? 1.0 / coupling : coupling;
}

}  // namespace stabsw
