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

#ifndef WIGDIL_GAUSSIAN_HPP
#define WIGDIL_GAUSSIAN_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "wigdil/errors.hpp"

namespace wigdil {

using Complex = std::complex<double>;

// Initial reduced state of the system mode: first and second moments
//   mu = <a>,  N = <a'a> - |mu|^2,  M = <aa> - mu^2
// (centered moments; N and M describe the fluctuation part). Physicality
// requires |M|^2 <= N(N+1), with equality on the pure squeezed boundary.
struct SystemInit {
  Complex mu{0.0, 0.0};
  double N = 0.0;
  Complex M{0.0, 0.0};

  SystemInit() = default;
  SystemInit(Complex mu_, double N_, Complex M_);

  // Squeezed-thermal parametrization: N + 1/2 = (nbar + 1/2) cosh 2r,
  // M = (nbar + 1/2) e^{i theta} sinh 2r.
  static SystemInit squeezed_thermal(Complex mu, double nbar, double r,
                                     double theta);

  double nbar() const;   // thermal occupation of the Williamson normal mode
  double r() const;      // squeezing amplitude
  double theta() const;  // squeezing phase, 0 when M = 0
};

// Gaussian state over n modes in the paired complex ordering: phase-space
// coordinates xi = (alpha_1, conj(alpha_1), ..., alpha_n, conj(alpha_n)),
// mean_i = <R_i> for R = (a_1, a_1', ...), and covariance
//   Theta_ij = 1/2 <{dR_i, dR_j'}>,  dR = R - <R>.
// The covariance is Hermitian and invariant under swapping each (2i, 2i+1)
// pair together with complex conjugation; both are checked on construction.
class GaussianState {
 public:
  GaussianState(Eigen::VectorXcd mean, Eigen::MatrixXcd cov);

  int n_modes() const { return static_cast<int>(mean_.size()) / 2; }
  const Eigen::VectorXcd& mean() const { return mean_; }
  const Eigen::MatrixXcd& cov() const { return cov_; }

 private:
  Eigen::VectorXcd mean_;
  Eigen::MatrixXcd cov_;
};

GaussianState vacuum_state(int n_modes);
GaussianState state_from_init(const SystemInit& init);

// Symplectic spectrum in the complex representation: the moduli of the
// eigenvalues of diag(1,-1,...) * Theta, one value per mode, ascending.
// Physical states have every value >= 1/2; pure states sit exactly at 1/2.
Eigen::VectorXd symplectic_eigenvalues(const GaussianState& s);

// Throws UnphysicalInit if any symplectic eigenvalue drops below 1/2 - 1e-9.
void assert_physical(const GaussianState& s, const char* context);

// Differential (Boltzmann-Gibbs-Shannon) entropy of the Wigner density:
//   S = n (1 + ln pi) + 1/2 ln det Theta.
double wigner_entropy(const GaussianState& s);

// Kullback-Leibler divergence of the Wigner densities,
//   S(W1 || W2) = 1/2 ln(det T2/det T1) + 1/2 tr(T1 T2^-1) - n
//                 + 1/2 dmu' T2^-1 dmu.
double relative_entropy(const GaussianState& s1, const GaussianState& s2);

// Keep the listed modes (in the given order) and drop the rest.
GaussianState marginal(const GaussianState& s, const std::vector<int>& modes);

// I(A:B) = 1/2 ln( det Theta_A det Theta_B / det Theta_AB ); part_a lists the
// modes on side A, side B is the complement. Both sides must be non-empty.
double mutual_information(const GaussianState& joint,
                          const std::vector<int>& part_a);

// Linear phase-space current density J(xi) = (d + L . (xi - mean)) W(xi),
// in canonical form (no derivative terms left). L is paired like the state.
struct LinearCurrent {
  Complex d{0.0, 0.0};
  Eigen::VectorXcd L;
  GaussianState state;

  Complex polynomial_at(const Eigen::VectorXcd& xi) const;
};

// Second moment of the current against its own state,
//   integral |d + L.(xi-mean)|^2 W(xi) dxi = |d|^2 + sum_ij L_i conj(L_j) Theta_ij.
// This is the only phase-space integral the library evaluates; it is exact
// for Gaussian W and first-order polynomial coefficients.
double moment_form(const LinearCurrent& current);

// Rewrite a pure derivative current  J = -(sum_i w_i d/dxi_i) W  in canonical
// polynomial form, returning L with J = (L . (xi - mean)) W. Uses the Gaussian
// gradient identity (xi - mean) W = -Theta P dW, P the pair-swap permutation.
Eigen::VectorXcd derivative_to_polynomial(const GaussianState& s,
                                          const Eigen::VectorXcd& w);
// Inverse of the above (recovers w from L); the pair round-trips exactly.
Eigen::VectorXcd polynomial_to_derivative(const GaussianState& s,
                                          const Eigen::VectorXcd& L);

}  // namespace wigdil

#endif  // WIGDIL_GAUSSIAN_HPP
