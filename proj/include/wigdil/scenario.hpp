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

#ifndef WIGDIL_SCENARIO_HPP
#define WIGDIL_SCENARIO_HPP

#include <string>
#include <vector>

#include "wigdil/bath.hpp"
#include "wigdil/dopri5.hpp"
#include "wigdil/gaussian.hpp"
#include "wigdil/production.hpp"
#include "wigdil/witnesses.hpp"

namespace wigdil {

// Declarative run description. Parsed from a JSON document with this exact
// field tree; unknown fields are hard errors, silent typos in physics configs
// are costly.
//
// {
//   "system":     {"mu": [re, im] | x, "N": n, "M": [re, im] | x}
//                 or {"mu": ..., "nbar": n, "r": r, "theta": th},
//   "bath":       {"tim": {"kappa": k}}
//                 | {"discrete": {"omega": w, "modes": [{"Omega": o,
//                                                        "gamma": g}, ...]}}
//                 | {"spectral": {"shape": "flat" | "ohmic" | "lorentzian",
//                                 "omega": w, "amplitude": a, "cutoff": c,
//                                 "center": c0, "width": fw,
//                                 "band": [lo, hi], "K": k}},
//   "time":       {"t_max": T, "n_points": n},
//   "ancilla":    {"enabled": b, "z": z},
//   "integrator": {"rtol": r, "atol": a},
//   "output":     {"path": "...", "columns": ["t", "Pi", ...]}
// }
//
// system, bath and time are required; everything else defaults. The ancilla
// squeezing defaults to z = asinh(sqrt(N)), the purification of the thermal
// marginal.

enum class BathKind { Tim, Discrete, Spectral };

struct Scenario {
  SystemInit system;
  BathKind bath_kind = BathKind::Tim;
  double kappa = 0.0;       // BathKind::Tim
  BathSpec discrete;        // BathKind::Discrete
  SpectralPreset spectral;  // BathKind::Spectral
  double t_max = 0.0;
  int n_points = 300;
  bool ancilla_enabled = false;
  double ancilla_z = 0.0;
  IntegratorOptions integrator;
  std::string output_path;               // empty: stdout
  std::vector<std::string> output_columns;  // empty: all columns
};

Scenario parse_scenario(const std::string& text);

// Thermal relaxation at kappa = 1 with the matched ancilla, t_max = 4,
// the configuration behind the three-term decomposition figures.
Scenario fig1_preset(double N);

struct ScenarioResult {
  std::vector<EntropicRecord> records;
  WitnessReport witnesses;
  // cumulative trapezoid integrals of Pi, env_rate and dI_SE_dt from t = 0
  std::vector<double> int_Pi;
  std::vector<double> int_env_rate;
  std::vector<double> int_dI_SE;
};

// Runs dilation + production + witnesses. Deterministic: the same scenario
// yields bit-identical records. Every emitted record is re-checked against
// the decomposition and flux identities; a failure throws ToleranceFailure.
ScenarioResult run_scenario(const Scenario& scenario);

// Fixed CSV column order.
const std::vector<std::string>& csv_columns();

// Render records as CSV. Floating-point fields carry 17 significant digits,
// so a reader recovers the doubles exactly. Runs without an ancilla leave
// I_AS / dI_AS_dt empty. `columns` empty means all columns.
std::string render_csv(const ScenarioResult& result,
                       const std::vector<std::string>& columns = {});

// One-line witness summary for diagnostics output.
std::string witness_summary(const WitnessReport& report);

// Invariant / oracle sweep over a scenario: each entry is a named maximum
// deviation. Entries with tolerance <= 0 are diagnostics (the alternate
// closed forms and the quoted ancilla proportionalities are reported, never
// asserted); the rest gate the `ok` verdict.
struct CheckEntry {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct CheckReport {
  std::vector<CheckEntry> entries;
  bool has_ancilla = false;
  AncillaRelationReport relations;  // evaluated at relation_time
  double relation_time = 0.0;
  bool ok = true;
};

CheckReport check_scenario(const Scenario& scenario);

std::string render_check(const CheckReport& report);

}  // namespace wigdil

#endif  // WIGDIL_SCENARIO_HPP
