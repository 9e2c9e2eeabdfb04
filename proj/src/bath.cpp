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

#include "wigdil/bath.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace wigdil {

double BathSpec::coupling_sum() const {
  double acc = 0.0;
  for (const BathMode& m : modes) acc += m.gamma * m.gamma;
  return acc;
}

void validate_bath(const BathSpec& bath) {
  if (bath.modes.empty()) {
    throw EmptyBand("bath has no modes");
  }
  for (const BathMode& m : bath.modes) {
    if (!(m.gamma >= 0.0)) {
      throw UnphysicalInit("bath coupling gamma must be non-negative");
    }
    if (!std::isfinite(m.Omega)) {
      throw UnphysicalInit("bath mode frequency must be finite");
    }
  }
}

double spectral_density(const SpectralPreset& preset, double Omega) {
  if (Omega < preset.omega_min || Omega > preset.omega_max) return 0.0;
  switch (preset.shape) {
    case SpectralShape::Flat:
      return preset.amplitude;
    case SpectralShape::Ohmic:
      return preset.amplitude * (Omega / preset.cutoff) *
             std::exp(-Omega / preset.cutoff);
    case SpectralShape::Lorentzian: {
      const double hw = 0.5 * preset.width;
      const double d = Omega - preset.center;
      return preset.amplitude * hw * hw / (d * d + hw * hw);
    }
  }
  return 0.0;
}

BathSpec discretize(const SpectralPreset& preset) {
  if (preset.K < 1) {
    throw EmptyBand("discretize: K must be at least 1");
  }
  if (!(preset.omega_max > preset.omega_min)) {
    throw EmptyBand("discretize: band is empty");
  }
  if (!(preset.amplitude > 0.0)) {
    throw UnphysicalInit("discretize: amplitude must be positive");
  }
  if (preset.shape == SpectralShape::Ohmic && !(preset.cutoff > 0.0)) {
    throw UnphysicalInit("discretize: ohmic cutoff must be positive");
  }
  if (preset.shape == SpectralShape::Lorentzian && !(preset.width > 0.0)) {
    throw UnphysicalInit("discretize: lorentzian width must be positive");
  }
  // the flat and lorentzian presets describe baths probed around the system
  // line; a band that misses omega entirely is a configuration mistake
  if (preset.shape != SpectralShape::Ohmic &&
      (preset.omega < preset.omega_min || preset.omega > preset.omega_max)) {
    std::ostringstream os;
    os << "discretize: band [" << preset.omega_min << ", " << preset.omega_max
       << "] does not contain the system frequency " << preset.omega;
    throw EmptyBand(os.str());
  }

  const double d_omega = (preset.omega_max - preset.omega_min) / preset.K;
  BathSpec bath;
  bath.omega = preset.omega;
  bath.modes.reserve(preset.K);
  for (int k = 0; k < preset.K; ++k) {
    const double Omega = preset.omega_min + (k + 0.5) * d_omega;
    const double j = spectral_density(preset, Omega);
    if (j < 0.0) {
      throw UnphysicalInit("discretize: spectral density negative on the band");
    }
    bath.modes.push_back(
        {Omega, std::sqrt(j * d_omega / (2.0 * std::numbers::pi))});
  }
  return bath;
}

SpectralPreset flat_band_preset(double omega, double kappa, double halfwidth,
                                int K) {
  if (!(kappa > 0.0)) {
    throw UnphysicalInit("flat_band_preset: kappa must be positive");
  }
  SpectralPreset p;
  p.shape = SpectralShape::Flat;
  p.omega = omega;
  p.amplitude = 2.0 * kappa;  // J(omega) = 2 kappa
  p.omega_min = omega - halfwidth * kappa;
  p.omega_max = omega + halfwidth * kappa;
  p.K = K;
  return p;
}

std::complex<double> memory_kernel(const BathSpec& bath, double tau) {
  std::complex<double> acc(0.0, 0.0);
  for (int k = 0; k < bath.K(); ++k) {
    const double g2 = bath.modes[k].gamma * bath.modes[k].gamma;
    acc += g2 * std::polar(1.0, bath.detuning(k) * tau);
  }
  return acc;
}

}  // namespace wigdil
