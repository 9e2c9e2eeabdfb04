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

// Shared test utilities: deterministic RNG helpers, a brute-force phase-space
// quadrature oracle, finite-difference stencils, and a generator of random
// physical Gaussian states built from elementary symplectic operations.

#ifndef WIGDIL_TESTS_HELPERS_HPP
#define WIGDIL_TESTS_HELPERS_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>

#include "wigdil/gaussian.hpp"

namespace wigdil::testing {

inline std::mt19937& rng() {
  static std::mt19937 gen(0x5eed);
  return gen;
}

inline double uniform(double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng());
}

inline Complex random_complex(double radius) {
  const double r = uniform(0.0, radius);
  const double phi = uniform(0.0, 2.0 * std::numbers::pi);
  return std::polar(r, phi);
}

// ---- elementary Gaussian unitaries on the paired complex representation ----

// Single-mode block of a phase rotation a -> e^{i phi} a.
inline Eigen::Matrix2cd rotation_block(double phi) {
  Eigen::Matrix2cd b = Eigen::Matrix2cd::Zero();
  b(0, 0) = std::polar(1.0, phi);
  b(1, 1) = std::polar(1.0, -phi);
  return b;
}

// Single-mode squeezer a -> cosh(r) a - e^{i theta} sinh(r) a'.
inline Eigen::Matrix2cd squeeze_block(double r, double theta) {
  Eigen::Matrix2cd b;
  b(0, 0) = std::cosh(r);
  b(0, 1) = -std::polar(std::sinh(r), theta);
  b(1, 0) = -std::polar(std::sinh(r), -theta);
  b(1, 1) = std::cosh(r);
  return b;
}

// Apply a one-mode map to mode m of an n-mode transform matrix.
inline void embed_block(Eigen::MatrixXcd& S, int m, const Eigen::Matrix2cd& b) {
  const Eigen::Index n = S.rows();
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(n, n);
  op.block<2, 2>(2 * m, 2 * m) = b;
  S = op * S;
}

// Real beamsplitter between modes i and j with mixing angle tau.
inline void embed_beamsplitter(Eigen::MatrixXcd& S, int i, int j, double tau) {
  const Eigen::Index n = S.rows();
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(n, n);
  const double c = std::cos(tau), s = std::sin(tau);
  op(2 * i, 2 * i) = c;
  op(2 * i + 1, 2 * i + 1) = c;
  op(2 * i, 2 * j) = s;
  op(2 * i + 1, 2 * j + 1) = s;
  op(2 * j, 2 * i) = -s;
  op(2 * j + 1, 2 * i + 1) = -s;
  op(2 * j, 2 * j) = c;
  op(2 * j + 1, 2 * j + 1) = c;
  S = op * S;
}

// Random physical n-mode state: thermal core, then random squeezers,
// beamsplitters, rotations and displacements. Physical by construction.
inline GaussianState random_state(int n_modes, double max_nbar = 1.5,
                                  double max_r = 0.8, double max_disp = 1.5) {
  const Eigen::Index dim = 2 * n_modes;
  Eigen::MatrixXcd cov = Eigen::MatrixXcd::Zero(dim, dim);
  for (int m = 0; m < n_modes; ++m) {
    const double nb = uniform(0.0, max_nbar);
    cov.block<2, 2>(2 * m, 2 * m) = (nb + 0.5) * Eigen::Matrix2cd::Identity();
  }
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Identity(dim, dim);
  for (int m = 0; m < n_modes; ++m) {
    embed_block(S, m, squeeze_block(uniform(0.0, max_r),
                                    uniform(0.0, 2.0 * std::numbers::pi)));
    embed_block(S, m, rotation_block(uniform(0.0, 2.0 * std::numbers::pi)));
  }
  for (int i = 0; i + 1 < n_modes; ++i) {
    embed_beamsplitter(S, i, i + 1, uniform(0.0, std::numbers::pi));
  }
  cov = S * cov * S.adjoint();
  cov = 0.5 * (cov + cov.adjoint().eval());  // scrub rounding asymmetry
  Eigen::VectorXcd mean(dim);
  for (int m = 0; m < n_modes; ++m) {
    const Complex d = random_complex(max_disp);
    mean(2 * m) = d;
    mean(2 * m + 1) = std::conj(d);
  }
  return GaussianState(std::move(mean), std::move(cov));
}

// ---- brute-force Wigner quadrature (single mode only) ----

// Pointwise Gaussian Wigner density in the paired complex convention. Lives
// only here: the library proper never evaluates W on a grid.
inline double wigner_density(const GaussianState& s, Complex alpha) {
  const Eigen::Matrix2cd th = s.cov().block<2, 2>(0, 0);
  const Complex det = th(0, 0) * th(1, 1) - th(0, 1) * th(1, 0);
  Eigen::Matrix2cd inv;
  inv << th(1, 1), -th(0, 1), -th(1, 0), th(0, 0);
  inv /= det;
  Eigen::Vector2cd dxi;
  dxi << alpha - s.mean()(0), std::conj(alpha) - s.mean()(1);
  const double q = (dxi.dot(inv * dxi)).real();  // dxi' Theta^-1 dxi
  return std::exp(-0.5 * q) / (std::numbers::pi * std::sqrt(det.real()));
}

// Simpson quadrature of F(alpha) * W(alpha) over a +/- 7.5 sigma box.
inline double quadrature_expectation(
    const GaussianState& s, const std::function<double(Complex)>& F,
    int intervals = 500) {
  const Eigen::Matrix2cd th = s.cov().block<2, 2>(0, 0);
  const double sigma = std::sqrt(th(0, 0).real() + std::abs(th(0, 1)));
  const double half = 7.5 * sigma;
  const Complex center = s.mean()(0);
  const int n = intervals;  // must be even for Simpson weights
  const double h = 2.0 * half / n;
  auto weight = [n](int k) {
    if (k == 0 || k == n) return 1.0;
    return (k % 2 == 1) ? 4.0 : 2.0;
  };
  double acc = 0.0;
  for (int ix = 0; ix <= n; ++ix) {
    const double x = center.real() - half + ix * h;
    double row = 0.0;
    for (int iy = 0; iy <= n; ++iy) {
      const double y = center.imag() - half + iy * h;
      const Complex a(x, y);
      row += weight(iy) * F(a) * wigner_density(s, a);
    }
    acc += weight(ix) * row;
  }
  return acc * h * h / 9.0;
}

// Composite Simpson rule on [a, b] with n subintervals (n rounded up to even).
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int n = 200) {
  if (n % 2 == 1) ++n;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int k = 1; k < n; ++k) {
    acc += (k % 2 == 1 ? 4.0 : 2.0) * f(a + k * h);
  }
  return acc * h / 3.0;
}

// ---- finite differences ----

// Five-point central first derivative.
inline double deriv5(const std::function<double(double)>& f, double t,
                     double h = 1e-5) {
  return (f(t - 2 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2 * h)) /
         (12.0 * h);
}

// One Richardson extrapolation pass over the five-point stencil.
inline double deriv5_richardson(const std::function<double(double)>& f,
                                double t, double h = 1e-5) {
  const double d1 = deriv5(f, t, h);
  const double d2 = deriv5(f, t, h / 2.0);
  return (16.0 * d2 - d1) / 15.0;
}

}  // namespace wigdil::testing

#endif  // WIGDIL_TESTS_HELPERS_HPP
