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

#include "wigdil/trajectory.hpp"

#include <cmath>
#include <sstream>

namespace wigdil {

namespace {

constexpr Complex kI(0.0, 1.0);

void check_time(double t, double t_end, const char* who) {
  const double slop = 1e-12 * std::max(1.0, t_end);
  if (t < -slop || t > t_end + slop) {
    std::ostringstream os;
    os << who << ": t = " << t << " outside [0, " << t_end << "]";
    throw BadIndex(os.str());
  }
}

}  // namespace

double Trajectory::gamma(double t) const {
  const Complex gt = g(t);
  if (std::abs(gt) <= kEpsG) {
    std::ostringstream os;
    os << "gamma undefined: |g(" << t << ")| = " << std::abs(gt);
    throw VanishingG(os.str());
  }
  return -std::real(gdot(t) * std::conj(gt)) / std::norm(gt);
}

double Trajectory::gamma_u(double t) const {
  return -std::real(gdot(t) * std::conj(g(t)));
}

double gamma_rate(const Trajectory& traj, double t) { return traj.gamma(t); }

AuxTrajectory::AuxTrajectory(BathSpec bath, double t_end, IntegratorOptions opts)
    : bath_(std::move(bath)), t_end_(t_end) {
  validate_bath(bath_);
  if (!(t_end > 0.0)) {
    throw InsufficientData("integrate_aux: t_end must be positive");
  }
  const int K = bath_.K();
  gammas_.resize(K);
  deltas_.resize(K);
  for (int k = 0; k < K; ++k) {
    gammas_(k) = bath_.modes[k].gamma;
    deltas_(k) = bath_.detuning(k);
  }

  Eigen::VectorXcd y0 = Eigen::VectorXcd::Zero(1 + K);
  y0(0) = 1.0;
  mesh_ = detail::dopri5(
      [this](double t, const Eigen::VectorXcd& y) { return rhs(t, y); }, y0,
      0.0, t_end, opts);

  // unitarity audit across the accepted mesh
  for (std::size_t i = 0; i < mesh_.t.size(); ++i) {
    const double defect = std::abs(1.0 - mesh_.y[i].squaredNorm());
    norm_defect_ = std::max(norm_defect_, defect);
  }
  if (norm_defect_ > 1e-8) {
    std::ostringstream os;
    os << "integrate_aux: unitarity defect " << norm_defect_
       << " exceeds 1e-8; tighten the integrator tolerances";
    throw ToleranceFailure(os.str());
  }
  for (std::size_t i = 0; i < mesh_.t.size(); ++i) {
    const Complex gi = mesh_.y[i](0);
    if (std::abs(gi) > kEpsG) {
      const double gam =
          std::abs(std::real(mesh_.dy[i](0) * std::conj(gi))) / std::norm(gi);
      gamma_scale_ = std::max(gamma_scale_, gam);
    }
  }
}

Eigen::VectorXcd AuxTrajectory::rhs(double t, const Eigen::VectorXcd& y) const {
  const int K = bath_.K();
  const Eigen::ArrayXcd phase = (kI * (deltas_ * t).cast<Complex>()).exp();
  const Eigen::ArrayXcd coupled = gammas_.cast<Complex>() * phase;
  Eigen::VectorXcd dy(1 + K);
  dy(0) = -kI * (coupled * y.tail(K).array()).sum();
  dy.tail(K) = (-kI * y(0)) * coupled.conjugate().matrix();
  return dy;
}

Eigen::VectorXcd AuxTrajectory::state(double t) const {
  check_time(t, t_end_, "AuxTrajectory");
  return detail::hermite_eval(mesh_, t);
}

Complex AuxTrajectory::g(double t) const { return state(t)(0); }

Complex AuxTrajectory::gdot(double t) const { return rhs(t, state(t))(0); }

Eigen::VectorXcd AuxTrajectory::f(double t) const {
  return state(t).tail(bath_.K());
}

Eigen::VectorXcd AuxTrajectory::fdot(double t) const {
  return rhs(t, state(t)).tail(bath_.K());
}

double AuxTrajectory::gamma_at(std::size_t i) const {
  const Complex gi = mesh_.y.at(i)(0);
  if (std::abs(gi) <= kEpsG) {
    throw VanishingG("gamma undefined at mesh point");
  }
  return -std::real(mesh_.dy[i](0) * std::conj(gi)) / std::norm(gi);
}

AuxTrajectory integrate_aux(const BathSpec& bath, double t_end,
                            const IntegratorOptions& opts) {
  return AuxTrajectory(bath, t_end, opts);
}

TimTrajectory::TimTrajectory(double kappa, double t_end)
    : kappa_(kappa), t_end_(t_end) {
  if (!(kappa > 0.0)) {
    throw UnphysicalInit("TimTrajectory: kappa must be positive");
  }
  if (!(t_end > 0.0)) {
    throw InsufficientData("TimTrajectory: t_end must be positive");
  }
}

TimTrajectory::TimTrajectory(double kappa, BathSpec bath, double t_end)
    : TimTrajectory(kappa, t_end) {
  bath_ = std::move(bath);
  validate_bath(bath_);
}

Complex TimTrajectory::g(double t) const {
  check_time(t, t_end_, "TimTrajectory");
  return std::exp(-kappa_ * t);
}

Complex TimTrajectory::gdot(double t) const { return -kappa_ * g(t); }

Eigen::VectorXcd TimTrajectory::f(double t) const {
  check_time(t, t_end_, "TimTrajectory");
  return tim_aux(kappa_, bath_, t).second;
}

Eigen::VectorXcd TimTrajectory::fdot(double t) const {
  const Complex gt = g(t);
  Eigen::VectorXcd df(bath_.K());
  for (int k = 0; k < bath_.K(); ++k) {
    df(k) = -kI * bath_.modes[k].gamma *
            std::polar(1.0, -bath_.detuning(k) * t) * gt;
  }
  return df;
}

std::pair<Complex, Eigen::VectorXcd> tim_aux(double kappa, const BathSpec& bath,
                                             double t) {
  const Complex g = std::exp(-kappa * t);
  Eigen::VectorXcd f(bath.K());
  for (int k = 0; k < bath.K(); ++k) {
    const Complex pole(kappa, bath.detuning(k));
    f(k) = kI * bath.modes[k].gamma * (std::exp(-pole * t) - 1.0) / pole;
  }
  return {g, std::move(f)};
}

}  // namespace wigdil
