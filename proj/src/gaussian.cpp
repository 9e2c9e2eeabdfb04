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

#include "wigdil/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace wigdil {

namespace {

constexpr double kStructureTol = 1e-12;    // Hermiticity / pairing, relative
constexpr double kPhysicalitySlack = 1e-9; // symplectic eigenvalue floor slack

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

// log det of a Hermitian positive definite matrix through its Cholesky factor.
double log_det_hermitian(const Eigen::MatrixXcd& m, const char* context) {
  Eigen::LLT<Eigen::MatrixXcd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NonPositiveDeterminant(std::string(context) +
                                 ": covariance is not positive definite");
  }
  double acc = 0.0;
  const auto& L = llt.matrixLLT();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    acc += std::log(L(i, i).real());
  }
  return 2.0 * acc;
}

void check_paired_vector(const Eigen::VectorXcd& v, const char* what) {
  if (v.size() % 2 != 0 || v.size() == 0) {
    throw DimensionMismatch(std::string(what) +
                            ": length must be a positive even number");
  }
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < v.size(); i += 2) {
    if (std::abs(v(i + 1) - std::conj(v(i))) > kStructureTol * scale) {
      throw UnphysicalInit(std::string(what) +
                           ": entries are not conjugate-paired");
    }
  }
}

}  // namespace

SystemInit::SystemInit(Complex mu_, double N_, Complex M_)
    : mu(mu_), N(N_), M(M_) {
  if (!(N >= 0.0)) {
    throw UnphysicalInit("SystemInit: N must be non-negative");
  }
  if (std::abs(M) > std::sqrt(N * (N + 1.0)) + 1e-12) {
    std::ostringstream os;
    os << "SystemInit: |M| = " << std::abs(M)
       << " exceeds sqrt(N(N+1)) = " << std::sqrt(N * (N + 1.0));
    throw UnphysicalInit(os.str());
  }
}

SystemInit SystemInit::squeezed_thermal(Complex mu, double nbar, double r,
                                        double theta) {
  if (!(nbar >= 0.0)) {
    throw UnphysicalInit("SystemInit: nbar must be non-negative");
  }
  const double s = nbar + 0.5;
  const double N = s * std::cosh(2.0 * r) - 0.5;
  const Complex M = s * std::sinh(2.0 * r) * std::polar(1.0, theta);
  return SystemInit(mu, N, M);
}

double SystemInit::nbar() const {
  const double d0 = (N + 0.5) * (N + 0.5) - std::norm(M);
  return std::sqrt(std::max(0.25, d0)) - 0.5;
}

double SystemInit::r() const {
  const double arg = (N + 0.5) / (nbar() + 0.5);
  return 0.5 * std::acosh(std::max(1.0, arg));
}

double SystemInit::theta() const { return M == Complex(0.0) ? 0.0 : std::arg(M); }

GaussianState::GaussianState(Eigen::VectorXcd mean, Eigen::MatrixXcd cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  check_paired_vector(mean_, "GaussianState mean");
  const Eigen::Index dim = mean_.size();
  if (cov_.rows() != dim || cov_.cols() != dim) {
    throw DimensionMismatch("GaussianState: covariance shape does not match mean");
  }
  const double scale = std::max(1.0, max_abs(cov_));
  if (max_abs(cov_ - cov_.adjoint()) > kStructureTol * scale) {
    throw UnphysicalInit("GaussianState: covariance is not Hermitian");
  }
  // Pair-swap conjugation symmetry: Theta[P(i)][P(j)] = conj(Theta[i][j]),
  // with P exchanging 2m <-> 2m+1. This is what makes the matrix a valid
  // second-moment table over (a, a') pairs rather than arbitrary Hermitian data.
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Eigen::Index pi = i ^ 1;
    for (Eigen::Index j = 0; j <= i; ++j) {
      const Eigen::Index pj = j ^ 1;
      if (std::abs(cov_(pi, pj) - std::conj(cov_(i, j))) > kStructureTol * scale) {
        throw UnphysicalInit("GaussianState: covariance breaks conjugate pairing");
      }
    }
  }
}

GaussianState vacuum_state(int n_modes) {
  if (n_modes < 1) {
    throw DimensionMismatch("vacuum_state: need at least one mode");
  }
  Eigen::VectorXcd mean = Eigen::VectorXcd::Zero(2 * n_modes);
  Eigen::MatrixXcd cov =
      0.5 * Eigen::MatrixXcd::Identity(2 * n_modes, 2 * n_modes);
  return GaussianState(std::move(mean), std::move(cov));
}

GaussianState state_from_init(const SystemInit& init) {
  Eigen::VectorXcd mean(2);
  mean << init.mu, std::conj(init.mu);
  Eigen::MatrixXcd cov(2, 2);
  cov << init.N + 0.5, init.M, std::conj(init.M), init.N + 0.5;
  GaussianState s(std::move(mean), std::move(cov));
  assert_physical(s, "state_from_init");
  return s;
}

Eigen::VectorXd symplectic_eigenvalues(const GaussianState& s) {
  const Eigen::Index dim = s.cov().rows();
  Eigen::MatrixXcd zt = s.cov();
  for (Eigen::Index i = 1; i < dim; i += 2) {
    zt.row(i) *= -1.0;  // left-multiply by diag(1,-1,1,-1,...)
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(zt, false);
  if (es.info() != Eigen::Success) {
    throw ToleranceFailure("symplectic_eigenvalues: eigensolver failed");
  }
  Eigen::VectorXd mags = es.eigenvalues().cwiseAbs();
  std::sort(mags.data(), mags.data() + mags.size());
  // The spectrum comes in +/- pairs of equal modulus; average each pair.
  Eigen::VectorXd out(dim / 2);
  for (Eigen::Index m = 0; m < dim / 2; ++m) {
    out(m) = 0.5 * (mags(2 * m) + mags(2 * m + 1));
  }
  return out;
}

void assert_physical(const GaussianState& s, const char* context) {
  const Eigen::VectorXd nu = symplectic_eigenvalues(s);
  if (nu(0) < 0.5 - kPhysicalitySlack) {
    std::ostringstream os;
    os << context << ": symplectic eigenvalue " << nu(0)
       << " below the physical floor 1/2";
    throw UnphysicalInit(os.str());
  }
}

double wigner_entropy(const GaussianState& s) {
  const double n = s.n_modes();
  return n * (1.0 + std::log(std::numbers::pi)) +
         0.5 * log_det_hermitian(s.cov(), "wigner_entropy");
}

double relative_entropy(const GaussianState& s1, const GaussianState& s2) {
  if (s1.n_modes() != s2.n_modes()) {
    throw DimensionMismatch("relative_entropy: mode counts differ");
  }
  const Eigen::Index dim = s1.cov().rows();
  Eigen::LLT<Eigen::MatrixXcd> llt2(s2.cov());
  if (llt2.info() != Eigen::Success) {
    throw SingularReference("relative_entropy: reference covariance not invertible");
  }
  double logdet2 = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    logdet2 += 2.0 * std::log(llt2.matrixLLT()(i, i).real());
  }
  const double logdet1 = log_det_hermitian(s1.cov(), "relative_entropy");
  const double trace_term = llt2.solve(s1.cov()).trace().real();
  const Eigen::VectorXcd dmu = s1.mean() - s2.mean();
  const double mean_term = dmu.dot(llt2.solve(dmu)).real();  // dmu' T2^-1 dmu
  return 0.5 * (logdet2 - logdet1) + 0.5 * trace_term -
         0.5 * static_cast<double>(dim) + 0.5 * mean_term;
}

GaussianState marginal(const GaussianState& s, const std::vector<int>& modes) {
  if (modes.empty()) {
    throw BadIndex("marginal: empty mode list");
  }
  std::vector<int> seen;
  for (int m : modes) {
    if (m < 0 || m >= s.n_modes()) {
      throw BadIndex("marginal: mode index out of range");
    }
    if (std::find(seen.begin(), seen.end(), m) != seen.end()) {
      throw BadIndex("marginal: duplicate mode index");
    }
    seen.push_back(m);
  }
  const Eigen::Index nm = static_cast<Eigen::Index>(modes.size());
  Eigen::VectorXcd mean(2 * nm);
  Eigen::MatrixXcd cov(2 * nm, 2 * nm);
  for (Eigen::Index i = 0; i < nm; ++i) {
    mean.segment<2>(2 * i) = s.mean().segment<2>(2 * modes[i]);
    for (Eigen::Index j = 0; j < nm; ++j) {
      cov.block<2, 2>(2 * i, 2 * j) =
          s.cov().block<2, 2>(2 * modes[i], 2 * modes[j]);
    }
  }
  GaussianState out(std::move(mean), std::move(cov));
  assert_physical(out, "marginal");
  return out;
}

double mutual_information(const GaussianState& joint,
                          const std::vector<int>& part_a) {
  const int n = joint.n_modes();
  std::vector<bool> in_a(n, false);
  for (int m : part_a) {
    if (m < 0 || m >= n) {
      throw BadPartition("mutual_information: mode index out of range");
    }
    if (in_a[m]) {
      throw BadPartition("mutual_information: duplicate mode index");
    }
    in_a[m] = true;
  }
  std::vector<int> part_b;
  for (int m = 0; m < n; ++m) {
    if (!in_a[m]) part_b.push_back(m);
  }
  if (part_a.empty() || part_b.empty()) {
    throw BadPartition("mutual_information: both sides must be non-empty");
  }
  const double ld_a =
      log_det_hermitian(marginal(joint, part_a).cov(), "mutual_information");
  const double ld_b =
      log_det_hermitian(marginal(joint, part_b).cov(), "mutual_information");
  const double ld_ab = log_det_hermitian(joint.cov(), "mutual_information");
  return 0.5 * (ld_a + ld_b - ld_ab);
}

Complex LinearCurrent::polynomial_at(const Eigen::VectorXcd& xi) const {
  if (xi.size() != L.size()) {
    throw DimensionMismatch("LinearCurrent: coordinate size mismatch");
  }
  return d + L.conjugate().dot(xi - state.mean());  // = L^T (xi - mean)
}

double moment_form(const LinearCurrent& current) {
  if (current.L.size() != current.state.mean().size()) {
    throw DimensionMismatch("moment_form: coefficient size mismatch");
  }
  // E_W |d + L.(xi-mean)|^2 = |d|^2 + sum_ij L_i conj(L_j) Theta_ij; the cross
  // terms vanish because the Gaussian is centered.
  const Complex quad = current.L.conjugate().dot(current.state.cov() *
                                                 current.L.conjugate());
  return std::norm(current.d) + quad.real();
}

namespace {

Eigen::VectorXcd pair_swap(const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); i += 2) {
    out(i) = v(i + 1);
    out(i + 1) = v(i);
  }
  return out;
}

}  // namespace

Eigen::VectorXcd derivative_to_polynomial(const GaussianState& s,
                                          const Eigen::VectorXcd& w) {
  if (w.size() != s.mean().size()) {
    throw DimensionMismatch("derivative_to_polynomial: size mismatch");
  }
  // -(w . d/dxi) W = (L . (xi - mean)) W with L = conj(Theta^-1) P w, since
  // dW/dxi_i = -(Theta^-1 (xi - mean))_{P(i)} W.
  Eigen::LLT<Eigen::MatrixXcd> llt(s.cov());
  if (llt.info() != Eigen::Success) {
    throw NonPositiveDeterminant(
        "derivative_to_polynomial: covariance not positive definite");
  }
  return llt.solve(pair_swap(w).conjugate()).conjugate();
}

Eigen::VectorXcd polynomial_to_derivative(const GaussianState& s,
                                          const Eigen::VectorXcd& L) {
  if (L.size() != s.mean().size()) {
    throw DimensionMismatch("polynomial_to_derivative: size mismatch");
  }
  return pair_swap((s.cov() * L.conjugate()).conjugate());
}

}  // namespace wigdil
