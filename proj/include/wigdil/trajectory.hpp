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

#ifndef WIGDIL_TRAJECTORY_HPP
#define WIGDIL_TRAJECTORY_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "wigdil/bath.hpp"
#include "wigdil/dopri5.hpp"
#include "wigdil/errors.hpp"

namespace wigdil {

using Complex = std::complex<double>;

// Single-excitation amplitudes of the closed system + environment dynamics in
// the rotating frame:
//   g'    = -i sum_k gamma_k e^{+i Delta_k t} f_k,   g(0) = 1
//   f_k'  = -i gamma_k e^{-i Delta_k t} g,           f_k(0) = 0
// Unitarity pins |g|^2 + sum_k |f_k|^2 = 1 along the flow. The instantaneous
// decay rate is Gamma(t) = -Re(g'/g).
class Trajectory {
 public:
  virtual ~Trajectory() = default;

  virtual int bath_size() const = 0;
  virtual double t_end() const = 0;
  virtual Complex g(double t) const = 0;
  virtual Complex gdot(double t) const = 0;
  virtual Eigen::VectorXcd f(double t) const = 0;
  virtual Eigen::VectorXcd fdot(double t) const = 0;

  // True for the closed-form exponential-decay trajectory.
  virtual bool closed_form_tim() const { return false; }

  // Reference scale used for the "Gamma effectively zero" guards: kappa for
  // the closed-form trajectory, the largest finite mesh |Gamma| otherwise.
  virtual double gamma_scale() const = 0;

  // -Re(g'/g). Throws VanishingG within eps_g of a zero of g.
  double gamma(double t) const;
  // Gamma |g|^2 = -Re(g' conj(g)): finite through zeros of g; rates built
  // from Gamma always enter via this product.
  double gamma_u(double t) const;

  static constexpr double kEpsG = 1e-9;  // relative to |g(0)| = 1
};

double gamma_rate(const Trajectory& traj, double t);

// Numerically integrated trajectory for a discrete bath. Stores the accepted
// step mesh with exact right-hand-side derivatives at each node; off-node
// queries use C^1 cubic Hermite interpolation, and derivative queries
// re-evaluate the equations of motion on the interpolated state, so the
// g'/f' consistency relations hold pointwise by construction.
class AuxTrajectory final : public Trajectory {
 public:
  AuxTrajectory(BathSpec bath, double t_end, IntegratorOptions opts = {});

  int bath_size() const override { return bath_.K(); }
  double t_end() const override { return t_end_; }
  Complex g(double t) const override;
  Complex gdot(double t) const override;
  Eigen::VectorXcd f(double t) const override;
  Eigen::VectorXcd fdot(double t) const override;
  double gamma_scale() const override { return gamma_scale_; }

  const BathSpec& bath() const { return bath_; }
  const std::vector<double>& grid() const { return mesh_.t; }
  Complex g_at(std::size_t i) const { return mesh_.y.at(i)(0); }
  Complex gdot_at(std::size_t i) const { return mesh_.dy.at(i)(0); }
  Eigen::VectorXcd f_at(std::size_t i) const { return mesh_.y.at(i).tail(bath_.K()); }
  Eigen::VectorXcd fdot_at(std::size_t i) const { return mesh_.dy.at(i).tail(bath_.K()); }
  double gamma_at(std::size_t i) const;

  // max_i |1 - (|g|^2 + sum_k |f_k|^2)| over the mesh
  double norm_defect() const { return norm_defect_; }

 private:
  Eigen::VectorXcd rhs(double t, const Eigen::VectorXcd& y) const;
  Eigen::VectorXcd state(double t) const;

  BathSpec bath_;
  double t_end_ = 0.0;
  detail::OdeMesh mesh_;
  Eigen::ArrayXd gammas_, deltas_;  // cached coupling/detuning arrays
  double norm_defect_ = 0.0;
  double gamma_scale_ = 0.0;
};

AuxTrajectory integrate_aux(const BathSpec& bath, double t_end,
                            const IntegratorOptions& opts = {});

// Closed-form exponential-decay trajectory g = e^{-kappa t}. When a
// discretized bath is attached, the matching mode amplitudes
//   f_k = i gamma_k (e^{-(kappa + i Delta_k) t} - 1) / (kappa + i Delta_k)
// are available as well; they satisfy the equations of motion exactly but
// only resolve the unitarity sum up to the discretization error of the band.
class TimTrajectory final : public Trajectory {
 public:
  TimTrajectory(double kappa, double t_end);
  TimTrajectory(double kappa, BathSpec bath, double t_end);

  int bath_size() const override { return bath_.K(); }
  double t_end() const override { return t_end_; }
  Complex g(double t) const override;
  Complex gdot(double t) const override;
  Eigen::VectorXcd f(double t) const override;
  Eigen::VectorXcd fdot(double t) const override;
  bool closed_form_tim() const override { return true; }
  double gamma_scale() const override { return kappa_; }

  double kappa() const { return kappa_; }
  const BathSpec& bath() const { return bath_; }

 private:
  double kappa_ = 0.0;
  double t_end_ = 0.0;
  BathSpec bath_;  // may be empty
};

// Closed-form amplitudes (g, f) for exponential decay at rate kappa over the
// given discretized band, evaluated at time t.
std::pair<Complex, Eigen::VectorXcd> tim_aux(double kappa, const BathSpec& bath,
                                             double t);

}  // namespace wigdil

#endif  // WIGDIL_TRAJECTORY_HPP
