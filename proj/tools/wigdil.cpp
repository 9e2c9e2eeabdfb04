// Copyright 2026 the wigdil authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// wigdil: amplitude-damping dilation scenarios from the environment's side.
//   run   <config> [-o out.csv]   run a scenario, emit the record table
//   fig1  --N <val> [-o out.csv]  thermal relaxation preset with the ancilla
//   check <config>                invariant / oracle sweep, no table output
// Exit codes: 0 ok, 2 config error, 3 physics error, 4 check violation.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "wigdil/errors.hpp"
#include "wigdil/scenario.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw wigdil::ParseError("cannot open config file '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// CSV to the configured path (or stdout), witness summary to stderr.
int run_one(const wigdil::Scenario& scenario, const std::string& out_override) {
  const wigdil::ScenarioResult result = wigdil::run_scenario(scenario);
  const std::string csv = wigdil::render_csv(result, scenario.output_columns);
  const std::string path =
      out_override.empty() ? scenario.output_path : out_override;
  if (path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw wigdil::ConfigError("cannot write output file '" + path + "'");
    }
    out << csv;
    if (!out.good()) {
      throw wigdil::ConfigError("short write to output file '" + path + "'");
    }
  }
  std::cerr << wigdil::witness_summary(result.witnesses) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wigner-entropic decomposition of amplitude damping"};
  app.require_subcommand(1);

  std::string run_config, run_out;
  CLI::App* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("config", run_config, "scenario config file")->required();
  run->add_option("-o,--output", run_out, "CSV output path (default: stdout)");

  double fig_N = 0.0;
  std::string fig_out;
  CLI::App* fig1 =
      app.add_subcommand("fig1", "thermal relaxation preset at kappa = 1");
  fig1->add_option("--N", fig_N, "initial thermal occupation")->required();
  fig1->add_option("-o,--output", fig_out, "CSV output path (default: stdout)");

  std::string check_config;
  CLI::App* check =
      app.add_subcommand("check", "run the invariant/oracle suite");
  check->add_option("config", check_config, "scenario config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return run_one(wigdil::parse_scenario(read_file(run_config)), run_out);
    }
    if (fig1->parsed()) {
      return run_one(wigdil::fig1_preset(fig_N), fig_out);
    }
    const wigdil::CheckReport report =
        wigdil::check_scenario(wigdil::parse_scenario(read_file(check_config)));
    std::cout << wigdil::render_check(report);
    return report.ok ? 0 : 4;
  } catch (const wigdil::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const wigdil::PhysicsError& e) {
    std::cerr << "physics error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
