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

// stabsw <command> --config <file> [--order M] [--out DIR] [--emit-plotdata]
//                  [--term-cap K] [--seed S]
//
// Exit codes: 0 ok, 1 other failure, 2 config error, 3 term cap, 4 validation failed.

#include <iostream>

#include "CLI11.hpp"
#include "stabsw/validation.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::size_t> order;
  std::optional<std::string> out;
  bool emit_plotdata = false;
  std::optional<std::size_t> term_cap;
  std::optional<std::uint64_t> seed;
};

stabsw::RunConfig resolve(const std::string& command, const Overrides& o) {
  stabsw::RunConfig c = o.config.empty() ? stabsw::parse_config("", command) : stabsw::load_config(o.config, command);
  if (o.order) c.order = *o.order;
  if (o.out) c.out = *o.out;
  if (o.emit_plotdata) c.emit_plotdata = true;
  if (o.term_cap) c.term_cap = *o.term_cap;
  if (o.seed) c.seed = *o.seed;
  stabsw::validate_config(c);
  return c;
}

int run(const std::string& command, const Overrides& o) {
  const auto c = resolve(command, o);
  if (command == "validate") {
    stabsw::ValidationOptions vo;
    vo.seed = c.seed;
    vo.trials = c.trials;
    const auto report = stabsw::run_validation(vo);
    stabsw::print(std::cout, report);
    std::filesystem::create_directories(c.out);
    stabsw::write_json(c.out / "validation.json", stabsw::to_json(report));
    return report.passed() ? 0 : 4;
  }
  const auto report = command == "tfim" ? stabsw::run_tfim(c) : stabsw::run_loops(c);
  for (const auto& w : report["warnings"]) std::cerr << "warning: " << w.get<std::string>() << '\n';
  if (report.contains("onsets"))
    for (const auto& on : report["onsets"])
      std::cout << on["family"].get<std::string>() << " layer " << on["layer"] << ": deviation onset "
                << (on["onset"].is_null() ? std::string("not reached") : stabsw::fmt_coupling(on["onset"].get<double>()))
                << '\n';
  std::cout << "results written to " << c.out.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schrieffer-Wolff perturbation theory for stabilizer Hamiltonians"};
  app.require_subcommand(1);
  Overrides o;
  std::string chosen;
  for (const char* name : {"tfim", "toric", "bilayer", "kagome", "validate"}) {
    auto* sub = app.add_subcommand(name);
    auto* cfg = sub->add_option("--config", o.config, "key = value config file")->check(CLI::ExistingFile);
    if (std::string(name) != "validate") cfg->required();
    sub->add_option("--order", o.order, "perturbation order M");
    sub->add_option("--out", o.out, "output directory");
    sub->add_flag("--emit-plotdata", o.emit_plotdata, "also write plotdata.csv");
    sub->add_option("--term-cap", o.term_cap, "abort when an order exceeds this many terms");
    sub->add_option("--seed", o.seed, "seed for randomized checks");
    sub->callback([&chosen, name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    return run(chosen, o);
  } catch (const stabsw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const stabsw::TermCapExceeded& e) {
    std::cerr << "term cap exceeded: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
