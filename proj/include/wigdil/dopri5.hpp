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

#ifndef WIGDIL_DOPRI5_HPP
#define WIGDIL_DOPRI5_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "wigdil/errors.hpp"

namespace wigdil {

struct IntegratorOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  long max_steps = 2000000;
};

namespace detail {

// Accepted-step mesh of an adaptive run. dy[i] is the exact right-hand side
// evaluated at (t[i], y[i]), so cubic Hermite interpolation between nodes is
// globally C^1 and inherits the step tolerance.
struct OdeMesh {
  std::vector<double> t;
  std::vector<Eigen::VectorXcd> y;
  std::vector<Eigen::VectorXcd> dy;
};

// Dormand-Prince 5(4) with the standard error estimate and a smoothed
// step-size controller. Rhs signature: VectorXcd(double t, const VectorXcd&).
template <class Rhs>
OdeMesh dopri5(const Rhs& rhs, Eigen::VectorXcd y0, double t0, double t1,
               const IntegratorOptions& opt) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // 4th-order weights for the embedded error estimate
  static constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695,
                          e4 = b4 - 393.0 / 640, e5 = b5 + 92097.0 / 339200,
                          e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

  if (!(t1 > t0)) {
    throw InsufficientData("dopri5: integration span must be positive");
  }
  const double span = t1 - t0;
  const Eigen::Index dim = y0.size();

  auto error_norm = [&](const Eigen::VectorXcd& err, const Eigen::VectorXcd& ya,
                        const Eigen::VectorXcd& yb) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double sc =
          opt.atol + opt.rtol * std::max(std::abs(ya(i)), std::abs(yb(i)));
      const double q = std::abs(err(i)) / sc;
      acc += q * q;
    }
    return std::sqrt(acc / static_cast<double>(dim));
  };

  OdeMesh mesh;
  double t = t0;
  Eigen::VectorXcd y = std::move(y0);
  Eigen::VectorXcd k1 = rhs(t, y);
  mesh.t.push_back(t);
  mesh.y.push_back(y);
  mesh.dy.push_back(k1);

  // initial step heuristic (scaled first/second derivative probe)
  double h;
  {
    double d0 = 0.0, d1 = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double sc = opt.atol + opt.rtol * std::abs(y(i));
      d0 += std::norm(y(i) / sc);
      d1 += std::norm(k1(i) / sc);
    }
    d0 = std::sqrt(d0 / dim);
    d1 = std::sqrt(d1 / dim);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    const Eigen::VectorXcd y_probe = y + h0 * k1;
    const Eigen::VectorXcd f_probe = rhs(t + h0, y_probe);
    double d2 = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double sc = opt.atol + opt.rtol * std::abs(y(i));
      d2 += std::norm((f_probe(i) - k1(i)) / sc);
    }
    d2 = std::sqrt(d2 / dim) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 =
        (dmax <= 1e-15) ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    h = std::min({100.0 * h0, h1, span});
  }

  long steps = 0;
  while (t < t1) {
    if (++steps > opt.max_steps) {
      throw ToleranceFailure("dopri5: step budget exhausted");
    }
    if (h < 1e-14 * span) {
      throw ToleranceFailure("dopri5: step size underflow");
    }
    h = std::min(h, t1 - t);

    const Eigen::VectorXcd k2 = rhs(t + c2 * h, y + h * (a21 * k1));
    const Eigen::VectorXcd k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const Eigen::VectorXcd k4 =
        rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Eigen::VectorXcd k5 =
        rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Eigen::VectorXcd k6 = rhs(
        t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Eigen::VectorXcd y_new =
        y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Eigen::VectorXcd k7 = rhs(t + h, y_new);  // FSAL stage
    const Eigen::VectorXcd err =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double en = error_norm(err, y, y_new);
    if (en <= 1.0) {
      t += h;
      y = y_new;
      k1 = k7;
      mesh.t.push_back(t);
      mesh.y.push_back(y);
      mesh.dy.push_back(k1);
      const double fac =
          std::clamp(0.9 * std::pow(std::max(en, 1e-10), -0.2), 0.2, 5.0);
      h *= fac;
    } else {
      h *= std::clamp(0.9 * std::pow(en, -0.2), 0.1, 0.9);
    }
  }
  return mesh;
}

// C^1 cubic Hermite evaluation over the accepted mesh. Node hits return the
// stored values exactly.
inline Eigen::VectorXcd hermite_eval(const OdeMesh& mesh, double t) {
  const auto& ts = mesh.t;
  if (ts.empty()) {
    throw InsufficientData("hermite_eval: empty mesh");
  }
  const double slop = 1e-12 * std::max(1.0, std::abs(ts.back()));
  if (t < ts.front() - slop || t > ts.back() + slop) {
    throw BadIndex("hermite_eval: time outside the integrated range");
  }
  t = std::clamp(t, ts.front(), ts.back());
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  size_t hi = std::min(static_cast<size_t>(it - ts.begin()), ts.size() - 1);
  if (hi == 0) hi = 1;
  const size_t lo = hi - 1;
  if (t == ts[lo]) return mesh.y[lo];
  if (t == ts[hi]) return mesh.y[hi];
  const double h = ts[hi] - ts[lo];
  const double s = (t - ts[lo]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * mesh.y[lo] + (h10 * h) * mesh.dy[lo] + h01 * mesh.y[hi] +
         (h11 * h) * mesh.dy[hi];
}

}  // namespace detail
}  // namespace wigdil

#endif  // WIGDIL_DOPRI5_HPP
