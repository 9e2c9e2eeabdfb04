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

#ifndef WIGDIL_WITNESSES_HPP
#define WIGDIL_WITNESSES_HPP

#include <vector>

#include "wigdil/production.hpp"
#include "wigdil/trajectory.hpp"

namespace wigdil {

// Non-Markovianity detection. A single dissipation channel ties every signal
// to the sign of Gamma(t): the decay rate itself, monotonicity of the two
// relative entropies, the direction of the entropy flux, and revivals of the
// ancilla correlations. The mutual information I_SE is exposed in the records
// but deliberately not used as a witness; it can grow and shrink either way.

struct TimeInterval {
  double t_start = 0.0;
  double t_end = 0.0;
};

struct ReversalEvent {
  double t = 0.0;
  double magnitude = 0.0;
};

// Detection threshold for consecutive-point differences. Plain differences
// beat derivative interpolation here: they are immune to dense-output wiggle.
inline constexpr double kEventThreshold = 1e-9;

// Intervals with Gamma < -eps_Gamma and the measure integral(max(0, -Gamma)),
// sampled uniformly on [0, t_end] with n_points samples and integrated by the
// trapezoid rule. Samples where Gamma has a pole never count as negative.
struct GammaWitness {
  std::vector<TimeInterval> intervals;
  double measure = 0.0;
};

GammaWitness gamma_witness(const Trajectory& traj, int n_points = 2001);

// Events where srel_S_vac rises or srel_E_init falls between consecutive
// records by more than the threshold. Needs at least three records.
struct MonotonicityWitness {
  std::vector<ReversalEvent> srel_S_reversals;
  std::vector<ReversalEvent> srel_E_reversals;
};

MonotonicityWitness monotonicity_witness(
    const std::vector<EntropicRecord>& records);

// Maximal runs of records with flux > threshold: entropy flowing back into
// the system.
std::vector<TimeInterval> flux_backflow_witness(
    const std::vector<EntropicRecord>& records);

// Maximal runs of consecutive increases of I_AS. Records without an ancilla
// produce no intervals.
std::vector<TimeInterval> ancilla_witness(
    const std::vector<EntropicRecord>& records);

struct WitnessReport {
  std::vector<TimeInterval> gamma_negative_intervals;
  double gamma_measure = 0.0;
  std::vector<ReversalEvent> srel_S_reversals;
  std::vector<ReversalEvent> srel_E_reversals;
  std::vector<TimeInterval> flux_backflow_intervals;
  std::vector<TimeInterval> ancilla_revival_intervals;
  bool markovian = false;  // true iff every list above is empty
};

WitnessReport witness_report(const Trajectory& traj,
                             const std::vector<EntropicRecord>& records,
                             int gamma_points = 2001);

}  // namespace wigdil

#endif  // WIGDIL_WITNESSES_HPP
