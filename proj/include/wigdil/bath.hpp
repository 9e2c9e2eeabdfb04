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

#ifndef WIGDIL_BATH_HPP
#define WIGDIL_BATH_HPP

#include <complex>
#include <vector>

#include "wigdil/errors.hpp"

namespace wigdil {

// One discrete bath oscillator: frequency Omega and coupling gamma >= 0.
struct BathMode {
  double Omega = 0.0;
  double gamma = 0.0;
};

// Discrete environment attached to a system mode of frequency omega. The
// rotating-frame detunings are Delta_k = omega - Omega_k.
struct BathSpec {
  double omega = 0.0;
  std::vector<BathMode> modes;

  int K() const { return static_cast<int>(modes.size()); }
  double detuning(int k) const { return omega - modes[k].Omega; }
  double coupling_sum() const;  // sum_k gamma_k^2
};

// Throws EmptyBand / UnphysicalInit on structural problems.
void validate_bath(const BathSpec& bath);

enum class SpectralShape { Flat, Ohmic, Lorentzian };

// Continuum spectral density J(Omega) restricted to [omega_min, omega_max],
// sampled into K modes by the midpoint rule: gamma_k^2 = J(Omega_k) dOmega / 2 pi.
struct SpectralPreset {
  SpectralShape shape = SpectralShape::Flat;
  double omega = 0.0;      // system frequency, needed for detunings
  double amplitude = 0.0;  // flat plateau / ohmic slope scale / lorentzian peak
  double cutoff = 1.0;     // ohmic exponential cutoff
  double center = 0.0;     // lorentzian center
  double width = 1.0;      // lorentzian FWHM
  double omega_min = 0.0;
  double omega_max = 0.0;
  int K = 0;
};

double spectral_density(const SpectralPreset& preset, double Omega);
BathSpec discretize(const SpectralPreset& preset);

// Flat band of width 2 * halfwidth * kappa centered on omega with plateau
// J = 2 kappa, the configuration whose continuum limit is exponential decay
// at rate kappa.
SpectralPreset flat_band_preset(double omega, double kappa,
                                double halfwidth = 20.0, int K = 400);

// Two-time correlation kernel sum_k gamma_k^2 e^{i Delta_k tau}.
std::complex<double> memory_kernel(const BathSpec& bath, double tau);

}  // namespace wigdil

#endif  // WIGDIL_BATH_HPP
