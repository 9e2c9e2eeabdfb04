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

#ifndef WIGDIL_DILATION_HPP
#define WIGDIL_DILATION_HPP

#include <vector>

#include <Eigen/Dense>

#include "wigdil/bath.hpp"
#include "wigdil/dopri5.hpp"
#include "wigdil/gaussian.hpp"
#include "wigdil/trajectory.hpp"

namespace wigdil {

// The single-excitation structure of the dilation makes every joint moment a
// rank-one dressing of the initial system moments: with amplitudes
// c = (g, f_1, ..., f_K) the joint covariance is
//   Theta(2i,   2j)   = N c_i conj(c_j) + delta_ij / 2
//   Theta(2i,   2j+1) = M c_i c_j
// (remaining entries by Hermiticity / pairing), and the mean is mu * c paired
// with its conjugate. All three assembly entry points below share this shape.

// Reduced system state at amplitude g (1 mode).
GaussianState assemble_system(const SystemInit& init, Complex g);

// Exact joint state of system + K bath modes at time t (1+K modes, system
// mode first, bath modes in bath order).
GaussianState assemble_covariance(const SystemInit& init, const Trajectory& traj,
                                  double t);

// Two-mode representation in which the emitted weight is carried by a single
// collective environment mode, f_c = sqrt(1 - |g|^2). Exact for every
// single-mode observable of S and of the environment as a whole.
GaussianState assemble_collective(const SystemInit& init, Complex g);

// Environment marginal alone, for the given mode amplitudes f.
GaussianState assemble_environment(const SystemInit& init,
                                   const Eigen::VectorXcd& f);

// Drift matrix W(t) of the joint first-moment flow d<R>/dt = W <R> in the
// paired ordering; the covariance obeys dTheta/dt = W Theta + Theta W^dag.
// Diagonal blocks vanish (interaction picture); the system-bath blocks carry
// entries of modulus gamma_k with the rotating phases e^{+- i Delta_k t}.
Eigen::MatrixXcd drift_matrix(const BathSpec& bath, double t);

// Integrate the Lyapunov equation from the separable initial state over the
// given grid (non-negative, strictly increasing). Independent cross-check of
// assemble_covariance: no reference to g or f is made.
std::vector<GaussianState> lyapunov_propagate(const BathSpec& bath,
                                              const SystemInit& init,
                                              const std::vector<double>& grid,
                                              const IntegratorOptions& opts = {});

}  // namespace wigdil

#endif  // WIGDIL_DILATION_HPP
