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

#include "wigdil/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <utility>

#include <json.hpp>

#include "wigdil/dilation.hpp"
#include "wigdil/errors.hpp"
#include "wigdil/trajectory.hpp"

namespace wigdil {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError("config: " + where + ": " + what);
}

const json& expect_object(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  return j;
}

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) fail(where, "unknown field '" + item.key() + "'");
  }
}

const json& require(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) fail(where, std::string("missing field '") + key + "'");
  return j.at(key);
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

int get_integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

bool get_boolean(const json& j, const std::string& where) {
  if (!j.is_boolean()) fail(where, "expected true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

// Complex values are written as a plain number (real) or as [re, im].
Complex get_complex(const json& j, const std::string& where) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Complex(j[0].get<double>(), j[1].get<double>());
  }
  fail(where, "expected a number or [re, im]");
}

SystemInit parse_system(const json& j) {
  expect_object(j, "system");
  check_keys(j, "system", {"mu", "N", "M", "nbar", "r", "theta"});
  const bool squeezed =
      j.contains("nbar") || j.contains("r") || j.contains("theta");
  if (squeezed && (j.contains("N") || j.contains("M"))) {
    fail("system", "give either (N, M) or (nbar, r, theta), not a mix");
  }
  Complex mu(0.0, 0.0);
  if (j.contains("mu")) mu = get_complex(j.at("mu"), "system.mu");
  if (squeezed) {
    const double nbar =
        j.contains("nbar") ? get_number(j.at("nbar"), "system.nbar") : 0.0;
    const double r = j.contains("r") ? get_number(j.at("r"), "system.r") : 0.0;
    const double theta =
        j.contains("theta") ? get_number(j.at("theta"), "system.theta") : 0.0;
    return SystemInit::squeezed_thermal(mu, nbar, r, theta);
  }
  const double N = j.contains("N") ? get_number(j.at("N"), "system.N") : 0.0;
  Complex M(0.0, 0.0);
  if (j.contains("M")) M = get_complex(j.at("M"), "system.M");
  return SystemInit(mu, N, M);
}

void parse_tim(const json& j, Scenario& s) {
  expect_object(j, "bath.tim");
  check_keys(j, "bath.tim", {"kappa"});
  s.bath_kind = BathKind::Tim;
  s.kappa = get_number(require(j, "bath.tim", "kappa"), "bath.tim.kappa");
  if (!(s.kappa > 0.0)) fail("bath.tim.kappa", "must be positive");
}

void parse_discrete(const json& j, Scenario& s) {
  expect_object(j, "bath.discrete");
  check_keys(j, "bath.discrete", {"omega", "modes"});
  s.bath_kind = BathKind::Discrete;
  s.discrete.omega =
      get_number(require(j, "bath.discrete", "omega"), "bath.discrete.omega");
  const json& modes = require(j, "bath.discrete", "modes");
  if (!modes.is_array() || modes.empty()) {
    fail("bath.discrete.modes", "expected a non-empty array");
  }
  s.discrete.modes.clear();
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const std::string where = "bath.discrete.modes[" + std::to_string(k) + "]";
    const json& m = expect_object(modes[k], where);
    check_keys(m, where, {"Omega", "gamma"});
    BathMode mode;
    mode.Omega = get_number(require(m, where, "Omega"), where + ".Omega");
    mode.gamma = get_number(require(m, where, "gamma"), where + ".gamma");
    s.discrete.modes.push_back(mode);
  }
  validate_bath(s.discrete);
}

void parse_spectral(const json& j, Scenario& s) {
  expect_object(j, "bath.spectral");
  check_keys(j, "bath.spectral",
             {"shape", "omega", "amplitude", "cutoff", "center", "width",
              "band", "K"});
  s.bath_kind = BathKind::Spectral;
  const std::string shape =
      get_string(require(j, "bath.spectral", "shape"), "bath.spectral.shape");
  if (shape == "flat") {
    s.spectral.shape = SpectralShape::Flat;
  } else if (shape == "ohmic") {
    s.spectral.shape = SpectralShape::Ohmic;
  } else if (shape == "lorentzian") {
    s.spectral.shape = SpectralShape::Lorentzian;
  } else {
    fail("bath.spectral.shape", "unknown shape '" + shape + "'");
  }
  s.spectral.omega =
      get_number(require(j, "bath.spectral", "omega"), "bath.spectral.omega");
  s.spectral.amplitude = get_number(require(j, "bath.spectral", "amplitude"),
                                    "bath.spectral.amplitude");
  if (j.contains("cutoff")) {
    s.spectral.cutoff = get_number(j.at("cutoff"), "bath.spectral.cutoff");
  }
  if (j.contains("center")) {
    s.spectral.center = get_number(j.at("center"), "bath.spectral.center");
  }
  if (j.contains("width")) {
    s.spectral.width = get_number(j.at("width"), "bath.spectral.width");
  }
  const json& band = require(j, "bath.spectral", "band");
  if (!band.is_array() || band.size() != 2) {
    fail("bath.spectral.band", "expected [omega_min, omega_max]");
  }
  s.spectral.omega_min = get_number(band[0], "bath.spectral.band[0]");
  s.spectral.omega_max = get_number(band[1], "bath.spectral.band[1]");
  s.spectral.K =
      get_integer(require(j, "bath.spectral", "K"), "bath.spectral.K");
  if (s.spectral.K < 1) fail("bath.spectral.K", "must be at least 1");
}

void parse_bath(const json& j, Scenario& s) {
  expect_object(j, "bath");
  if (j.size() != 1) fail("bath", "exactly one bath variant required");
  const std::string kind = j.items().begin().key();
  if (kind == "tim") {
    parse_tim(j.at("tim"), s);
  } else if (kind == "discrete") {
    parse_discrete(j.at("discrete"), s);
  } else if (kind == "spectral") {
    parse_spectral(j.at("spectral"), s);
  } else {
    throw UnknownBathType("config: bath: unknown bath type '" + kind + "'");
  }
}

void parse_time(const json& j, Scenario& s) {
  expect_object(j, "time");
  check_keys(j, "time", {"t_max", "n_points"});
  s.t_max = get_number(require(j, "time", "t_max"), "time.t_max");
  if (!(s.t_max > 0.0)) fail("time.t_max", "must be positive");
  if (j.contains("n_points")) {
    s.n_points = get_integer(j.at("n_points"), "time.n_points");
    if (s.n_points < 2) fail("time.n_points", "must be at least 2");
  }
}

void parse_ancilla(const json& j, Scenario& s) {
  expect_object(j, "ancilla");
  check_keys(j, "ancilla", {"enabled", "z"});
  // Writing the block at all signals intent, so `enabled` defaults to true.
  s.ancilla_enabled =
      j.contains("enabled") ? get_boolean(j.at("enabled"), "ancilla.enabled")
                            : true;
  if (j.contains("z")) {
    s.ancilla_z = get_number(j.at("z"), "ancilla.z");
  }
}

void parse_integrator(const json& j, Scenario& s) {
  expect_object(j, "integrator");
  check_keys(j, "integrator", {"rtol", "atol"});
  if (j.contains("rtol")) {
    s.integrator.rtol = get_number(j.at("rtol"), "integrator.rtol");
    if (!(s.integrator.rtol > 0.0)) fail("integrator.rtol", "must be positive");
  }
  if (j.contains("atol")) {
    s.integrator.atol = get_number(j.at("atol"), "integrator.atol");
    if (!(s.integrator.atol > 0.0)) fail("integrator.atol", "must be positive");
  }
}

void parse_output(const json& j, Scenario& s) {
  expect_object(j, "output");
  check_keys(j, "output", {"path", "columns"});
  if (j.contains("path")) s.output_path = get_string(j.at("path"), "output.path");
  if (j.contains("columns")) {
    const json& cols = j.at("columns");
    if (!cols.is_array()) fail("output.columns", "expected an array of names");
    const std::vector<std::string>& known = csv_columns();
    for (const json& c : cols) {
      const std::string name = get_string(c, "output.columns");
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        fail("output.columns", "unknown column '" + name + "'");
      }
      s.output_columns.push_back(name);
    }
  }
}

// Trajectory factory shared by run and check; `opts` may be tightened.
std::unique_ptr<Trajectory> build_trajectory(const Scenario& s,
                                             const IntegratorOptions& opts,
                                             int& env_modes) {
  switch (s.bath_kind) {
    case BathKind::Tim:
      env_modes = 1;
      return std::make_unique<TimTrajectory>(s.kappa, s.t_max);
    case BathKind::Discrete: {
      validate_bath(s.discrete);
      env_modes = s.discrete.K();
      return std::make_unique<AuxTrajectory>(s.discrete, s.t_max, opts);
    }
    case BathKind::Spectral: {
      BathSpec bath = discretize(s.spectral);
      env_modes = bath.K();
      return std::make_unique<AuxTrajectory>(std::move(bath), s.t_max, opts);
    }
  }
  throw ParseError("config: bath: unset bath variant");
}

std::vector<double> uniform_grid(double t_max, int n_points) {
  std::vector<double> grid(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    grid[static_cast<std::size_t>(i)] =
        t_max * static_cast<double>(i) / static_cast<double>(n_points - 1);
  }
  return grid;
}

std::vector<double> cumulative_trapezoid(const std::vector<EntropicRecord>& rec,
                                         double EntropicRecord::*field) {
  std::vector<double> out(rec.size(), 0.0);
  for (std::size_t i = 1; i < rec.size(); ++i) {
    const double dt = rec[i].t - rec[i - 1].t;
    out[i] = out[i - 1] + 0.5 * dt * (rec[i].*field + rec[i - 1].*field);
  }
  return out;
}

std::string format_value(double v) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  expect_object(j, "top level");
  check_keys(j, "top level",
             {"system", "bath", "time", "ancilla", "integrator", "output"});
  for (const char* req : {"system", "bath", "time"}) {
    if (!j.contains(req)) {
      fail("top level", std::string("missing required section '") + req + "'");
    }
  }

  Scenario s;
  s.system = parse_system(j.at("system"));
  parse_bath(j.at("bath"), s);
  parse_time(j.at("time"), s);
  // Purification default: z matching the thermal occupation of the system.
  s.ancilla_z = std::asinh(std::sqrt(std::max(0.0, s.system.N)));
  if (j.contains("ancilla")) parse_ancilla(j.at("ancilla"), s);
  if (j.contains("integrator")) parse_integrator(j.at("integrator"), s);
  if (j.contains("output")) parse_output(j.at("output"), s);
  return s;
}

Scenario fig1_preset(double N) {
  Scenario s;
  s.system = SystemInit(Complex(0.0, 0.0), N, Complex(0.0, 0.0));
  s.bath_kind = BathKind::Tim;
  s.kappa = 1.0;
  s.t_max = 4.0;
  s.n_points = 300;
  s.ancilla_enabled = true;
  s.ancilla_z = std::asinh(std::sqrt(N));
  return s;
}

ScenarioResult run_scenario(const Scenario& scenario) {
  int env_modes = 0;
  const std::unique_ptr<Trajectory> traj =
      build_trajectory(scenario, scenario.integrator, env_modes);
  const std::vector<double> grid =
      uniform_grid(scenario.t_max, scenario.n_points);

  std::optional<AncillaConfig> ancilla;
  if (scenario.ancilla_enabled) ancilla.emplace(scenario.ancilla_z);

  ScenarioResult result;
  result.records =
      build_records(scenario.system, *traj, grid, env_modes, ancilla);

  // Emission-time re-check of the decomposition and flux identities.
  for (const EntropicRecord& r : result.records) {
    const double split = r.env_rate + r.dI_SE_dt;
    if (std::abs(r.Pi - split) > 1e-8 * (1.0 + std::abs(r.Pi))) {
      char msg[128];
      std::snprintf(msg, sizeof msg,
                    "decomposition identity violated at t = %.6g "
                    "(Pi = %.12e, parts = %.12e)",
                    r.t, r.Pi, split);
      throw ToleranceFailure(msg);
    }
    const double gamma_u = traj->gamma_u(r.t);
    const double srate = system_entropy_rate_u(scenario.system, r.u, gamma_u);
    if (std::abs(r.flux - (srate - r.Pi)) > 1e-8 * (1.0 + std::abs(r.flux))) {
      char msg[128];
      std::snprintf(msg, sizeof msg,
                    "flux identity violated at t = %.6g "
                    "(flux = %.12e, dS - Pi = %.12e)",
                    r.t, r.flux, srate - r.Pi);
      throw ToleranceFailure(msg);
    }
  }

  result.witnesses = witness_report(*traj, result.records);
  result.int_Pi = cumulative_trapezoid(result.records, &EntropicRecord::Pi);
  result.int_env_rate =
      cumulative_trapezoid(result.records, &EntropicRecord::env_rate);
  result.int_dI_SE =
      cumulative_trapezoid(result.records, &EntropicRecord::dI_SE_dt);
  return result;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns = {
      "t",        "re_g",     "im_g",        "abs_g2",     "Gamma",
      "S_WS",     "S_WE",     "srel_S_vac",  "srel_E_init", "I_SE",
      "Pi",       "env_rate", "dI_SE_dt",    "flux",        "n_t",
      "I_AS",     "dI_AS_dt", "int_Pi",      "int_env_rate", "int_dI_SE"};
  return columns;
}

std::string render_csv(const ScenarioResult& result,
                       const std::vector<std::string>& columns) {
  const std::vector<std::string>& all = csv_columns();
  const std::vector<std::string>& cols = columns.empty() ? all : columns;
  for (const std::string& c : cols) {
    if (std::find(all.begin(), all.end(), c) == all.end()) {
      throw ParseError("config: output.columns: unknown column '" + c + "'");
    }
  }

  const auto field = [&](std::size_t i, const std::string& name) -> std::string {
    const EntropicRecord& r = result.records[i];
    if (name == "t") return format_value(r.t);
    if (name == "re_g") return format_value(r.g.real());
    if (name == "im_g") return format_value(r.g.imag());
    if (name == "abs_g2") return format_value(r.u);
    if (name == "Gamma") return format_value(r.Gamma);
    if (name == "S_WS") return format_value(r.S_WS);
    if (name == "S_WE") return format_value(r.S_WE);
    if (name == "srel_S_vac") return format_value(r.srel_S_vac);
    if (name == "srel_E_init") return format_value(r.srel_E_init);
    if (name == "I_SE") return format_value(r.I_SE);
    if (name == "Pi") return format_value(r.Pi);
    if (name == "env_rate") return format_value(r.env_rate);
    if (name == "dI_SE_dt") return format_value(r.dI_SE_dt);
    if (name == "flux") return format_value(r.flux);
    if (name == "n_t") return format_value(r.n_t);
    if (name == "I_AS") return r.has_ancilla ? format_value(r.I_AS) : "";
    if (name == "dI_AS_dt") {
      return r.has_ancilla ? format_value(r.dI_AS_dt) : "";
    }
    if (name == "int_Pi") return format_value(result.int_Pi[i]);
    if (name == "int_env_rate") return format_value(result.int_env_rate[i]);
    return format_value(result.int_dI_SE[i]);  // int_dI_SE
  };

  std::string out;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    out += cols[c];
    out += (c + 1 == cols.size()) ? '\n' : ',';
  }
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out += field(i, cols[c]);
      out += (c + 1 == cols.size()) ? '\n' : ',';
    }
  }
  return out;
}

std::string witness_summary(const WitnessReport& report) {
  if (report.markovian) return "witnesses: markovian";
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "witnesses: non-Markovian; Gamma<0 intervals %zu (measure "
                "%.6g), srel_S reversals %zu, srel_E reversals %zu, flux "
                "backflow intervals %zu, ancilla revivals %zu",
                report.gamma_negative_intervals.size(), report.gamma_measure,
                report.srel_S_reversals.size(), report.srel_E_reversals.size(),
                report.flux_backflow_intervals.size(),
                report.ancilla_revival_intervals.size());
  return std::string(buf);
}

CheckReport check_scenario(const Scenario& scenario) {
  // The oracle pass integrates tighter than the run itself so that
  // finite-difference gates probe the formulas, not the dense output.
  IntegratorOptions opts = scenario.integrator;
  opts.rtol = std::min(opts.rtol, 1e-11);
  opts.atol = std::min(opts.atol, 1e-13);

  int env_modes = 0;
  const std::unique_ptr<Trajectory> traj =
      build_trajectory(scenario, opts, env_modes);
  const SystemInit& init = scenario.system;
  const std::vector<double> grid =
      uniform_grid(scenario.t_max, scenario.n_points);

  std::optional<AncillaConfig> ancilla;
  if (scenario.ancilla_enabled) ancilla.emplace(scenario.ancilla_z);

  const std::vector<EntropicRecord> records =
      build_records(init, *traj, grid, env_modes, ancilla);

  CheckReport report;
  const auto add = [&report](std::string name, double value, double tol) {
    CheckEntry entry;
    entry.name = std::move(name);
    entry.value = value;
    entry.tolerance = tol;
    entry.pass = tol <= 0.0 || value <= tol;
    report.ok = report.ok && entry.pass;
    report.entries.push_back(std::move(entry));
  };

  // Row identities over the full grid.
  double dec = 0.0;
  double flux = 0.0;
  for (const EntropicRecord& r : records) {
    dec = std::max(dec, std::abs(r.Pi - (r.env_rate + r.dI_SE_dt)) /
                            (1.0 + std::abs(r.Pi)));
    const double gamma_u = traj->gamma_u(r.t);
    const double srate = system_entropy_rate_u(init, r.u, gamma_u);
    flux = std::max(flux, std::abs(r.flux - (srate - r.Pi)) /
                              (1.0 + std::abs(r.flux)));
  }
  add("Pi decomposition identity", dec, 1e-8);
  add("flux identity", flux, 1e-8);

  double defect = 0.0;
  if (const auto* aux = dynamic_cast<const AuxTrajectory*>(traj.get())) {
    defect = aux->norm_defect();
  }
  add("aux unitarity defect", defect, 1e-8);

  add("joint relative entropy drift",
      conservation_check(init, *traj, uniform_grid(scenario.t_max, 11)), 1e-6);

  // Interior sample times, clear of both endpoints.
  std::vector<double> ts;
  for (const double frac : {0.12, 0.27, 0.45, 0.63, 0.81}) {
    ts.push_back(frac * scenario.t_max);
  }
  const auto usable = [&](double t) {
    if (std::abs(traj->g(t)) <= 1e-3) return false;
    try {
      (void)traj->gamma(t);
    } catch (const VanishingG&) {
      return false;
    }
    return true;
  };

  // Closed forms against the generic state route.
  double path_s = 0.0;
  double path_e = 0.0;
  for (const double t : ts) {
    const Complex g = traj->g(t);
    path_s = std::max(
        path_s, std::abs(srel_S_vac(init, g) -
                         relative_entropy(assemble_system(init, g),
                                          vacuum_state(1))));
    Eigen::VectorXcd f;
    if (traj->closed_form_tim()) {
      f.resize(1);
      f(0) = std::sqrt(std::max(0.0, 1.0 - std::norm(g)));
    } else {
      f = traj->f(t);
    }
    const GaussianState env_now = assemble_environment(init, f);
    const GaussianState env_init = assemble_environment(
        init, Eigen::VectorXcd::Zero(f.size()));
    path_e = std::max(path_e, std::abs(srel_E_init(init, g) -
                                       relative_entropy(env_now, env_init)));
  }
  add("srel(S||vac) closed form vs state route", path_s, 1e-9);
  add("srel(E||E0) closed form vs state route", path_e, 1e-8);

  // Finite-difference oracle for every rate, one Richardson pass on a
  // five-point stencil.
  const double h = 1e-5;
  const auto fd = [h](const std::function<double(double)>& fn, double t) {
    const auto d5 = [&](double hh) {
      return (fn(t - 2.0 * hh) - 8.0 * fn(t - hh) + 8.0 * fn(t + hh) -
              fn(t + 2.0 * hh)) /
             (12.0 * hh);
    };
    return (16.0 * d5(0.5 * h) - d5(h)) / 15.0;
  };

  double fd_pi = 0.0, fd_env = 0.0, fd_env_alt = 0.0, fd_mi = 0.0;
  int fd_used = 0;
  for (const double t : ts) {
    if (!usable(t)) continue;
    ++fd_used;
    const double pi = production_rate(init, *traj, t);
    const double env = env_production_rate(init, *traj, t);
    const double mi = mutual_info_rate(init, *traj, t);
    const double alt =
        env_production_rate_alt_u(init, std::norm(traj->g(t)),
                                  traj->gamma_u(t));
    const double fd_srel_s =
        fd([&](double s) { return srel_S_vac(init, traj->g(s)); }, t);
    const double fd_srel_e =
        fd([&](double s) { return srel_E_init(init, traj->g(s)); }, t);
    const double fd_ise =
        fd([&](double s) { return mutual_information_SE(init, traj->g(s)); },
           t);
    fd_pi = std::max(fd_pi, std::abs(pi + fd_srel_s) / (1.0 + std::abs(pi)));
    fd_env =
        std::max(fd_env, std::abs(env - fd_srel_e) / (1.0 + std::abs(env)));
    fd_env_alt =
        std::max(fd_env_alt, std::abs(alt - fd_srel_e) / (1.0 + std::abs(alt)));
    fd_mi = std::max(fd_mi, std::abs(mi - fd_ise) / (1.0 + std::abs(mi)));
  }
  add("production rate vs finite difference", fd_pi, 1e-6);
  add("environment rate vs finite difference", fd_env, 1e-6);
  add("environment rate, alternate numerator, vs finite difference",
      fd_env_alt, 0.0);
  add("mutual information rate vs finite difference", fd_mi, 1e-6);
  add("finite-difference samples used", static_cast<double>(fd_used), 0.0);

  // Moment-engine current integrals. The raw environment comparison and the
  // joint-route-vs-analytic comparison are only enforced when the trajectory
  // carries no phase drift; the drift-corrected comparisons always are.
  double ci_s = 0.0, ci_e = 0.0, ci_e_raw = 0.0;
  double joint_split = 0.0, joint_direct = 0.0, max_drift = 0.0;
  int ci_used = 0;
  for (const double t : ts) {
    if (!usable(t)) continue;
    double gamma = 0.0;
    try {
      gamma = traj->gamma(t);
    } catch (const VanishingG&) {
      continue;
    }
    if (std::abs(gamma) <= epsilon_gamma(*traj)) continue;
    ++ci_used;
    const Complex logd = traj->gdot(t) / traj->g(t);
    const double ratio = std::norm(logd) / (gamma * gamma);
    max_drift = std::max(max_drift, std::abs(logd.imag() / gamma));

    const double pi = production_rate(init, *traj, t);
    const double env = env_production_rate(init, *traj, t);
    const double mi = mutual_info_rate(init, *traj, t);
    const double cis = current_integral_S(init, *traj, t);
    const double cie = current_integral_E(init, *traj, t);
    const double mic = mutual_info_rate_currents(init, *traj, t);
    ci_s = std::max(ci_s, std::abs(cis - pi) / (1.0 + std::abs(pi)));
    ci_e = std::max(ci_e, std::abs(cie - ratio * env) /
                              (1.0 + std::abs(ratio * env)));
    ci_e_raw = std::max(ci_e_raw, std::abs(cie - env) / (1.0 + std::abs(env)));
    joint_split =
        std::max(joint_split, std::abs(mic - (cis - cie)) /
                                  (1.0 + std::abs(mic)));
    joint_direct =
        std::max(joint_direct, std::abs(mic - mi) / (1.0 + std::abs(mi)));
  }
  const bool drift_free = max_drift <= 1e-6;
  add("system current integral vs production rate", ci_s, 1e-8);
  add("environment current integral vs drift-corrected rate", ci_e, 1e-8);
  add("environment current integral vs env rate, uncorrected", ci_e_raw,
      drift_free ? 1e-7 : 0.0);
  add("joint current route vs current split", joint_split, 1e-10);
  add("joint current route vs mutual info rate", joint_direct,
      drift_free ? 1e-7 : 0.0);
  add("max phase drift |Im(g'/g)|/|Gamma|", max_drift, 0.0);
  add("current-route samples used", static_cast<double>(ci_used), 0.0);

  if (ancilla) {
    report.has_ancilla = true;
    double fd_anc = 0.0, fd_anc_alt = 0.0;
    for (const double t : ts) {
      if (!usable(t)) continue;
      const double u = std::norm(traj->g(t));
      const double gamma_u = traj->gamma_u(t);
      const double rate = ancilla_info_rate(*ancilla, u, gamma_u);
      const double alt = ancilla_info_rate_alt(*ancilla, u, gamma_u);
      const double fd_ias =
          fd([&](double s) { return ancilla_mutual_info(*ancilla, traj->g(s)); },
             t);
      fd_anc =
          std::max(fd_anc, std::abs(rate - fd_ias) / (1.0 + std::abs(rate)));
      fd_anc_alt =
          std::max(fd_anc_alt, std::abs(alt - fd_ias) / (1.0 + std::abs(alt)));
    }
    add("ancilla info rate vs finite difference", fd_anc, 1e-6);
    add("ancilla info rate, halved alternate, vs finite difference",
        fd_anc_alt, 0.0);

    // Representative interior time for the proportionality report, away
    // from the u = 1/2 node where the mutual-information side degenerates.
    double t_rel = ts[ts.size() / 2];
    for (const double t : ts) {
      if (!usable(t)) continue;
      if (std::abs(1.0 - 2.0 * std::norm(traj->g(t))) > 0.2) {
        t_rel = t;
        break;
      }
    }
    report.relation_time = t_rel;
    report.relations = ancilla_relation_report(*ancilla, *traj, t_rel);
    add("ancilla relation sign claims",
        report.relations.signs_consistent ? 0.0 : 1.0, 0.5);
  }

  return report;
}

std::string render_check(const CheckReport& report) {
  std::string out;
  char line[192];
  for (const CheckEntry& e : report.entries) {
    if (e.tolerance > 0.0) {
      std::snprintf(line, sizeof line, "%-6s %-58s %12.5e  (tol %g)\n",
                    e.pass ? "[ok]" : "[FAIL]", e.name.c_str(), e.value,
                    e.tolerance);
    } else {
      std::snprintf(line, sizeof line, "%-6s %-58s %12.5e  (diagnostic)\n",
                    "[--]", e.name.c_str(), e.value);
    }
    out += line;
  }

  if (report.has_ancilla) {
    const AncillaRelationReport& rel = report.relations;
    std::snprintf(line, sizeof line,
                  "ancilla relations at t = %.6g: dI_AS/dt = %.10e\n",
                  report.relation_time, rel.lhs);
    out += line;
    const auto relation_line = [&](const char* label,
                                   const AncillaRelation& r) {
      char ratio[48];
      if (r.defined) {
        std::snprintf(ratio, sizeof ratio, "%.10e", r.ratio);
      } else {
        std::snprintf(ratio, sizeof ratio, "undefined (rhs at zero)");
      }
      std::snprintf(line, sizeof line,
                    "  vs %-12s prefactor %+.10e  partner %+.10e  "
                    "quoted rhs %+.10e  ratio %s\n",
                    label, r.prefactor, r.partner, r.quoted_rhs, ratio);
      out += line;
    };
    relation_line("production:", rel.production);
    relation_line("env rate:", rel.environment);
    relation_line("dI_SE/dt:", rel.mutual);
    std::snprintf(line, sizeof line, "  sign claims hold: %s\n",
                  rel.signs_consistent ? "yes" : "no");
    out += line;
  }

  out += report.ok ? "verdict: PASS\n" : "verdict: FAIL\n";
  return out;
}

}  // namespace wigdil
