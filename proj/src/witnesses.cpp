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

#include "wigdil/witnesses.hpp"

#include <cmath>
#include <limits>

#include "wigdil/errors.hpp"

namespace wigdil {

namespace {

// Collapse a boolean mask over sample times into maximal true runs.
std::vector<TimeInterval> mask_to_intervals(const std::vector<double>& t,
                                            const std::vector<bool>& flag) {
  std::vector<TimeInterval> out;
  std::size_t i = 0;
  while (i < flag.size()) {
    if (!flag[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < flag.size() && flag[j + 1]) ++j;
    out.push_back({t[i], t[j]});
    i = j + 1;
  }
  return out;
}

}  // namespace

GammaWitness gamma_witness(const Trajectory& traj, int n_points) {
  if (n_points < 2) {
    throw InsufficientData("gamma_witness: need at least two sample points");
  }
  const double eps = epsilon_gamma(traj);
  const double dt = traj.t_end() / (n_points - 1);

  std::vector<double> t(n_points);
  std::vector<double> gamma(n_points);
  std::vector<bool> negative(n_points);
  for (int i = 0; i < n_points; ++i) {
    t[i] = i * dt;
    double value = std::numeric_limits<double>::quiet_NaN();
    try {
      value = traj.gamma(t[i]);
    } catch (const VanishingG&) {
      // pole of Gamma; the sample carries no sign information
    }
    gamma[i] = value;
    negative[i] = value < -eps;  // false for NaN
  }

  GammaWitness result;
  result.intervals = mask_to_intervals(t, negative);
  for (int i = 0; i + 1 < n_points; ++i) {
    const double a = std::isnan(gamma[i]) ? 0.0 : std::max(0.0, -gamma[i]);
    const double b =
        std::isnan(gamma[i + 1]) ? 0.0 : std::max(0.0, -gamma[i + 1]);
    result.measure += 0.5 * (a + b) * dt;
  }
  return result;
}

MonotonicityWitness monotonicity_witness(
    const std::vector<EntropicRecord>& records) {
  if (records.size() < 3) {
    throw InsufficientData("monotonicity_witness: need at least three records");
  }
  MonotonicityWitness result;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const double rise_s = records[i].srel_S_vac - records[i - 1].srel_S_vac;
    if (rise_s > kEventThreshold) {
      result.srel_S_reversals.push_back({records[i].t, rise_s});
    }
    const double drop_e = records[i - 1].srel_E_init - records[i].srel_E_init;
    if (drop_e > kEventThreshold) {
      result.srel_E_reversals.push_back({records[i].t, drop_e});
    }
  }
  return result;
}

std::vector<TimeInterval> flux_backflow_witness(
    const std::vector<EntropicRecord>& records) {
  std::vector<double> t(records.size());
  std::vector<bool> backflow(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    t[i] = records[i].t;
    backflow[i] = records[i].flux > kEventThreshold;
  }
  return mask_to_intervals(t, backflow);
}

std::vector<TimeInterval> ancilla_witness(
    const std::vector<EntropicRecord>& records) {
  if (records.size() < 2) return {};
  std::vector<double> t(records.size());
  std::vector<bool> revival(records.size(), false);
  for (std::size_t i = 0; i < records.size(); ++i) t[i] = records[i].t;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (!records[i].has_ancilla || !records[i - 1].has_ancilla) continue;
    if (records[i].I_AS - records[i - 1].I_AS > kEventThreshold) {
      // mark both ends of the rising step
      revival[i - 1] = revival[i] = true;
    }
  }
  return mask_to_intervals(t, revival);
}

WitnessReport witness_report(const Trajectory& traj,
                             const std::vector<EntropicRecord>& records,
                             int gamma_points) {
  WitnessReport report;
  GammaWitness gw = gamma_witness(traj, gamma_points);
  report.gamma_negative_intervals = std::move(gw.intervals);
  report.gamma_measure = gw.measure;
  MonotonicityWitness mono = monotonicity_witness(records);
  report.srel_S_reversals = std::move(mono.srel_S_reversals);
  report.srel_E_reversals = std::move(mono.srel_E_reversals);
  report.flux_backflow_intervals = flux_backflow_witness(records);
  report.ancilla_revival_intervals = ancilla_witness(records);
  report.markovian = report.gamma_negative_intervals.empty() &&
                     report.srel_S_reversals.empty() &&
                     report.srel_E_reversals.empty() &&
                     report.flux_backflow_intervals.empty() &&
                     report.ancilla_revival_intervals.empty();
  return report;
}

}  // namespace wigdil
