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

#include "wigdil/dilation.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "wigdil/errors.hpp"

namespace wigdil {

namespace {

constexpr Complex kI{0.0, 1.0};

GaussianState assemble_from_amplitudes(const SystemInit& init,
                                       const Eigen::VectorXcd& c,
                                       const char* context) {
  const Eigen::Index n = c.size();
  Eigen::VectorXcd mean(2 * n);
  Eigen::MatrixXcd cov(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    mean(2 * i) = init.mu * c(i);
    mean(2 * i + 1) = std::conj(mean(2 * i));
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex nn = init.N * c(i) * std::conj(c(j)) + (i == j ? 0.5 : 0.0);
      const Complex mm = init.M * c(i) * c(j);
      cov(2 * i, 2 * j) = nn;
      cov(2 * i, 2 * j + 1) = mm;
      cov(2 * i + 1, 2 * j) = std::conj(mm);
      cov(2 * i + 1, 2 * j + 1) = std::conj(nn);
    }
  }
  GaussianState state(std::move(mean), std::move(cov));
  assert_physical(state, context);
  return state;
}

}  // namespace

GaussianState assemble_system(const SystemInit& init, Complex g) {
  Eigen::VectorXcd c(1);
  c(0) = g;
  return assemble_from_amplitudes(init, c, "assemble_system");
}

GaussianState assemble_covariance(const SystemInit& init, const Trajectory& traj,
                                  double t) {
  const int K = traj.bath_size();
  Eigen::VectorXcd c(1 + K);
  c(0) = traj.g(t);
  c.tail(K) = traj.f(t);
  return assemble_from_amplitudes(init, c, "assemble_covariance");
}

GaussianState assemble_collective(const SystemInit& init, Complex g) {
  const double v = 1.0 - std::norm(g);
  if (v < -1e-12) {
    throw UnphysicalInit("assemble_collective: |g| exceeds 1");
  }
  Eigen::VectorXcd c(2);
  c(0) = g;
  c(1) = std::sqrt(std::max(v, 0.0));
  return assemble_from_amplitudes(init, c, "assemble_collective");
}

GaussianState assemble_environment(const SystemInit& init,
                                   const Eigen::VectorXcd& f) {
  if (f.size() == 0) {
    throw DimensionMismatch("assemble_environment: no environment modes");
  }
  return assemble_from_amplitudes(init, f, "assemble_environment");
}

Eigen::MatrixXcd drift_matrix(const BathSpec& bath, double t) {
  const int K = bath.K();
  Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(2 * (1 + K), 2 * (1 + K));
  for (int k = 0; k < K; ++k) {
    const double gk = bath.modes[static_cast<std::size_t>(k)].gamma;
    const double dk = bath.detuning(k);
    const Complex phase = std::polar(1.0, dk * t);
    W(0, 2 * (k + 1)) = -kI * gk * phase;
    W(1, 2 * (k + 1) + 1) = kI * gk * std::conj(phase);
    W(2 * (k + 1), 0) = -kI * gk * std::conj(phase);
    W(2 * (k + 1) + 1, 1) = kI * gk * phase;
  }
  return W;
}

std::vector<GaussianState> lyapunov_propagate(const BathSpec& bath,
                                              const SystemInit& init,
                                              const std::vector<double>& grid,
                                              const IntegratorOptions& opts) {
  if (grid.empty()) {
    throw InsufficientData("lyapunov_propagate: empty time grid");
  }
  if (grid.front() < 0.0) {
    throw InsufficientData("lyapunov_propagate: negative time in grid");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw InsufficientData("lyapunov_propagate: grid must increase strictly");
    }
  }

  const int n = 1 + bath.K();
  const Eigen::Index d = 2 * n;

  // Separable initial condition: system moments dressed into the top-left
  // pair, bath modes at the vacuum floor.
  const GaussianState sys0 = state_from_init(init);
  Eigen::VectorXcd y0(d + d * d);
  {
    Eigen::VectorXcd mean0 = Eigen::VectorXcd::Zero(d);
    mean0.head(2) = sys0.mean();
    Eigen::MatrixXcd cov0 = 0.5 * Eigen::MatrixXcd::Identity(d, d);
    cov0.topLeftCorner(2, 2) = sys0.cov();
    y0.head(d) = mean0;
    Eigen::Map<Eigen::MatrixXcd>(y0.data() + d, d, d) = cov0;
  }

  const auto rhs = [&bath, d](double t, const Eigen::VectorXcd& y) {
    const Eigen::MatrixXcd W = drift_matrix(bath, t);
    const Eigen::Map<const Eigen::MatrixXcd> theta(y.data() + d, d, d);
    Eigen::VectorXcd dy(y.size());
    dy.head(d) = W * y.head(d);
    Eigen::Map<Eigen::MatrixXcd>(dy.data() + d, d, d) =
        W * theta + theta * W.adjoint();
    return dy;
  };

  detail::OdeMesh mesh;
  if (grid.back() > 0.0) {
    mesh = detail::dopri5(rhs, y0, 0.0, grid.back(), opts);
  }

  std::vector<GaussianState> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Eigen::VectorXcd y =
        grid[i] > 0.0 ? detail::hermite_eval(mesh, grid[i]) : y0;
    Eigen::VectorXcd mean = y.head(d);
    Eigen::MatrixXcd cov = Eigen::Map<const Eigen::MatrixXcd>(y.data() + d, d, d);
    // The flow preserves Hermiticity and the pairing symmetry exactly;
    // stepping only breaks them at roundoff level. Project back so the state
    // constructor's structure checks see the symmetric part.
    cov = 0.5 * (cov + cov.adjoint()).eval();
    for (Eigen::Index r = 0; r < d; r += 2) {
      mean(r + 1) = std::conj(mean(r));
      for (Eigen::Index s = 0; s < d; s += 2) {
        const Complex nn = 0.5 * (cov(r, s) + std::conj(cov(r + 1, s + 1)));
        const Complex mm = 0.5 * (cov(r, s + 1) + std::conj(cov(r + 1, s)));
        cov(r, s) = nn;
        cov(r + 1, s + 1) = std::conj(nn);
        cov(r, s + 1) = mm;
        cov(r + 1, s) = std::conj(mm);
      }
    }
    out.emplace_back(std::move(mean), std::move(cov));
  }
  return out;
}

}  // namespace wigdil
