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

#include "wigdil/production.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "wigdil/errors.hpp"
#include "wigdil/parallel.hpp"

namespace wigdil {

namespace {

// D'(x) for D(x) = (N x + 1/2)^2 - |M|^2 x^2, the numerator of every
// determinant-derivative term.
double det_derivative(const SystemInit& init, double x) {
  return init.N + 2.0 * (init.N * init.N - std::norm(init.M)) * x;
}

// For the exact exponential trajectory the environment is represented by its
// single collective mode, which carries the full excitation v = 1 - |g|^2
// without a band discretization error.  Mesh trajectories use their own basis.
Eigen::VectorXcd env_amplitudes(const Trajectory& traj, double t) {
  if (traj.closed_form_tim()) {
    Eigen::VectorXcd f(1);
    const double v = std::max(0.0, 1.0 - std::norm(traj.g(t)));
    f(0) = std::sqrt(v);
    return f;
  }
  return traj.f(t);
}

GaussianState joint_state(const SystemInit& init, const Trajectory& traj,
                          double t) {
  if (traj.closed_form_tim()) {
    return assemble_collective(init, traj.g(t));
  }
  return assemble_covariance(init, traj, t);
}

// Canonical polynomial coefficients L = conj(Theta^-1) w for a current
// J = (d + L . dxi) W whose raw coefficient vector over dxi is mediated by
// the state's inverse covariance.
Eigen::VectorXcd solve_coefficients(const GaussianState& s,
                                    const Eigen::VectorXcd& w) {
  const Eigen::LLT<Eigen::MatrixXcd> llt(s.cov());
  if (llt.info() != Eigen::Success) {
    throw NonPositiveDeterminant("current coefficients: covariance not SPD");
  }
  return llt.solve(w.conjugate()).conjugate();
}

}  // namespace

double det_system(const SystemInit& init, double u) {
  const double a = init.N * u + 0.5;
  return a * a - std::norm(init.M) * u * u;
}

double det_environment(const SystemInit& init, double u) {
  const double v = 1.0 - u;
  const double a = init.N * v + 0.5;
  return a * a - std::norm(init.M) * v * v;
}

double srel_S_vac(const SystemInit& init, Complex g) {
  const double u = std::norm(g);
  return 2.0 * (init.N + std::norm(init.mu)) * u -
         0.5 * std::log(det_system(init, u)) - std::numbers::ln2;
}

double srel_E_init(const SystemInit& init, Complex g) {
  const double u = std::norm(g);
  return 2.0 * (init.N + std::norm(init.mu)) * (1.0 - u) -
         0.5 * std::log(det_environment(init, u)) - std::numbers::ln2;
}

double mean_occupation(const SystemInit& init, Complex g) {
  return (init.N + std::norm(init.mu)) * std::norm(g);
}

double system_entropy(const SystemInit& init, Complex g) {
  return 1.0 + std::log(std::numbers::pi) +
         0.5 * std::log(det_system(init, std::norm(g)));
}

double environment_entropy(const SystemInit& init, Complex g, int env_modes) {
  if (env_modes < 1) {
    throw DimensionMismatch("environment_entropy: env_modes must be >= 1");
  }
  return env_modes * (1.0 + std::log(std::numbers::pi)) +
         0.5 * std::log(det_environment(init, std::norm(g))) -
         (env_modes - 1) * std::numbers::ln2;
}

double mutual_information_SE(const SystemInit& init, Complex g) {
  const double u = std::norm(g);
  return 0.5 * std::log(4.0 * det_system(init, u) * det_environment(init, u) /
                        det_system(init, 1.0));
}

double conserved_relative_entropy(const SystemInit& init) {
  return 2.0 * (init.N + std::norm(init.mu)) -
         0.5 * std::log(det_system(init, 1.0)) - std::numbers::ln2;
}

double production_rate_u(const SystemInit& init, double u, double gamma_u) {
  return 4.0 * gamma_u *
         (init.N + std::norm(init.mu) -
          0.25 * det_derivative(init, u) / det_system(init, u));
}

double env_production_rate_u(const SystemInit& init, double u, double gamma_u) {
  const double v = 1.0 - u;
  return 4.0 * gamma_u *
         (init.N + std::norm(init.mu) -
          0.25 * det_derivative(init, v) / det_environment(init, u));
}

double env_production_rate_alt_u(const SystemInit& init, double u,
                                 double gamma_u) {
  const double v = 1.0 - u;
  return 4.0 * gamma_u *
         (init.N + std::norm(init.mu) -
          det_derivative(init, v) / det_environment(init, u));
}

double mutual_info_rate_u(const SystemInit& init, double u, double gamma_u) {
  return gamma_u * (det_derivative(init, 1.0 - u) / det_environment(init, u) -
                    det_derivative(init, u) / det_system(init, u));
}

double system_entropy_rate_u(const SystemInit& init, double u, double gamma_u) {
  return -gamma_u * det_derivative(init, u) / det_system(init, u);
}

double entropy_flux_u(const SystemInit& init, double u, double gamma_u) {
  (void)u;  // the flux depends on u only through the product gamma_u
  return -4.0 * gamma_u * (init.N + std::norm(init.mu));
}

double production_rate(const SystemInit& init, const Trajectory& traj,
                       double t) {
  (void)traj.gamma(t);  // VanishingG contract at zeros of g
  return production_rate_u(init, std::norm(traj.g(t)), traj.gamma_u(t));
}

double env_production_rate(const SystemInit& init, const Trajectory& traj,
                           double t) {
  (void)traj.gamma(t);
  return env_production_rate_u(init, std::norm(traj.g(t)), traj.gamma_u(t));
}

double mutual_info_rate(const SystemInit& init, const Trajectory& traj,
                        double t) {
  (void)traj.gamma(t);
  return mutual_info_rate_u(init, std::norm(traj.g(t)), traj.gamma_u(t));
}

double entropy_flux(const SystemInit& init, const Trajectory& traj, double t) {
  (void)traj.gamma(t);
  return entropy_flux_u(init, std::norm(traj.g(t)), traj.gamma_u(t));
}

double epsilon_gamma(const Trajectory& traj) {
  return 1e-9 * traj.gamma_scale();
}

LinearCurrent current_S(const SystemInit& init, const Trajectory& traj,
                        double t) {
  const double Gamma = traj.gamma(t);
  const Complex g = traj.g(t);
  GaussianState state = assemble_system(init, g);
  const Eigen::Matrix2cd A = state.cov().inverse();
  Eigen::VectorXcd L(2);
  L(0) = Gamma * (1.0 - 0.5 * A(0, 0));
  L(1) = -0.5 * Gamma * A(0, 1);
  return LinearCurrent{Gamma * init.mu * g, std::move(L), std::move(state)};
}

LinearCurrent current_E(const SystemInit& init, const Trajectory& traj,
                        double t) {
  const Complex gdot = traj.gdot(t);
  const Eigen::VectorXcd f = env_amplitudes(traj, t);
  GaussianState state = assemble_environment(init, f);
  Eigen::VectorXcd w(2 * f.size());
  for (Eigen::Index q = 0; q < f.size(); ++q) {
    w(2 * q) = gdot * init.N * std::conj(f(q));
    w(2 * q + 1) = gdot * init.M * f(q);
  }
  Eigen::VectorXcd L = solve_coefficients(state, w);
  return LinearCurrent{gdot * init.mu, std::move(L), std::move(state)};
}

std::vector<LinearCurrent> current_E_modes(const SystemInit& init,
                                           const Trajectory& traj, double t) {
  if (traj.bath_size() == 0) {
    throw InsufficientData(
        "current_E_modes: no mode basis attached to the trajectory");
  }
  const Complex gdot = traj.gdot(t);
  if (std::abs(gdot) <= 1e-9 * traj.gamma_scale()) {
    throw VanishingGdot("current_E_modes: |g'| below the rate scale");
  }
  // per-mode split in the explicit mode basis
  const Eigen::VectorXcd f = traj.f(t);
  GaussianState state = assemble_environment(init, f);
  Eigen::VectorXcd w(2 * f.size());
  for (Eigen::Index q = 0; q < f.size(); ++q) {
    w(2 * q) = gdot * init.N * std::conj(f(q));
    w(2 * q + 1) = gdot * init.M * f(q);
  }
  const Eigen::VectorXcd L = solve_coefficients(state, w);
  const Complex d = gdot * init.mu;

  const Eigen::VectorXcd fdot = traj.fdot(t);
  std::vector<LinearCurrent> out;
  out.reserve(static_cast<std::size_t>(f.size()));
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    const Complex scale = -fdot(k) / gdot;
    out.push_back(LinearCurrent{scale * d, scale * L, state});
  }
  return out;
}

namespace {

double gated_gamma(const Trajectory& traj, double t, const char* what) {
  const double Gamma = traj.gamma(t);
  if (std::abs(Gamma) <= epsilon_gamma(traj)) {
    throw VanishingGamma(what);
  }
  return Gamma;
}

}  // namespace

double current_integral_S(const SystemInit& init, const Trajectory& traj,
                          double t) {
  const double Gamma =
      gated_gamma(traj, t, "current_integral_S: |Gamma| below epsilon");
  return 4.0 / Gamma * moment_form(current_S(init, traj, t));
}

double current_integral_E(const SystemInit& init, const Trajectory& traj,
                          double t) {
  const double Gamma =
      gated_gamma(traj, t, "current_integral_E: |Gamma| below epsilon");
  return 4.0 / Gamma * moment_form(current_E(init, traj, t));
}

double mutual_info_rate_currents(const SystemInit& init, const Trajectory& traj,
                                 double t) {
  const double Gamma =
      gated_gamma(traj, t, "mutual_info_rate_currents: |Gamma| below epsilon");
  const GaussianState joint = joint_state(init, traj, t);
  const Eigen::Index dim = joint.mean().size();

  const LinearCurrent js = current_S(init, traj, t);
  Eigen::VectorXcd Ls = Eigen::VectorXcd::Zero(dim);
  Ls.head(2) = js.L;
  const LinearCurrent js_joint{js.d, std::move(Ls), joint};

  const LinearCurrent je = current_E(init, traj, t);
  Eigen::VectorXcd Le = Eigen::VectorXcd::Zero(dim);
  Le.tail(dim - 2) = je.L;
  const LinearCurrent je_joint{je.d, std::move(Le), joint};

  return 4.0 / Gamma * (moment_form(js_joint) - moment_form(je_joint));
}

double conservation_check(const SystemInit& init, const Trajectory& traj,
                          const std::vector<double>& grid) {
  if (grid.empty()) {
    throw InsufficientData("conservation_check: empty grid");
  }
  const GaussianState ref0 = joint_state(init, traj, 0.0);
  const GaussianState vac = vacuum_state(ref0.n_modes());
  const double s0 = relative_entropy(ref0, vac);
  double worst = 0.0;
  for (double t : grid) {
    const double s = relative_entropy(joint_state(init, traj, t), vac);
    worst = std::max(worst, std::abs(s - s0));
  }
  return worst;
}

AncillaConfig::AncillaConfig(double z_) : z(z_) {
  if (!std::isfinite(z_)) {
    throw UnphysicalInit("AncillaConfig: z must be finite");
  }
  const double sh = std::sinh(z_);
  nbar_ = sh * sh;
  zeta_ = sh * std::cosh(z_);
  // sqrt(N(N+1)) and sinh cosh agree identically; keep the guard as a
  // tripwire for future refactors
  if (std::abs(zeta_ - std::sqrt(nbar_ * (nbar_ + 1.0))) >
      1e-12 * (1.0 + zeta_)) {
    throw UnphysicalInit("AncillaConfig: inconsistent off-diagonal");
  }
}

GaussianState ancilla_joint_state(const AncillaConfig& cfg, Complex g) {
  const double N = cfg.N();
  const double u = std::norm(g);
  Eigen::VectorXcd mean = Eigen::VectorXcd::Zero(4);
  Eigen::MatrixXcd cov = Eigen::MatrixXcd::Zero(4, 4);
  cov(0, 0) = cov(1, 1) = N + 0.5;
  cov(2, 2) = cov(3, 3) = N * u + 0.5;
  cov(0, 3) = cfg.zeta() * g;
  cov(3, 0) = std::conj(cov(0, 3));
  cov(1, 2) = std::conj(cfg.zeta() * g);
  cov(2, 1) = std::conj(cov(1, 2));
  GaussianState state(std::move(mean), std::move(cov));
  assert_physical(state, "ancilla_joint_state");
  return state;
}

double ancilla_mutual_info(const AncillaConfig& cfg, Complex g) {
  const double N = cfg.N();
  const double u = std::norm(g);
  return std::log(2.0 * (N + 0.5) * (N * u + 0.5) / (N * (1.0 - u) + 0.5));
}

double ancilla_info_rate(const AncillaConfig& cfg, double u, double gamma_u) {
  const double N = cfg.N();
  return -2.0 * gamma_u * N * (N + 1.0) /
         ((N * u + 0.5) * (N * (1.0 - u) + 0.5));
}

double ancilla_info_rate_alt(const AncillaConfig& cfg, double u,
                             double gamma_u) {
  return 0.5 * ancilla_info_rate(cfg, u, gamma_u);
}

AncillaRelationReport ancilla_relation_report(const AncillaConfig& cfg,
                                              const Trajectory& traj,
                                              double t) {
  const double N = cfg.N();
  const SystemInit thermal(Complex(0.0, 0.0), N, Complex(0.0, 0.0));
  const double u = std::norm(traj.g(t));
  const double v = 1.0 - u;
  const double gamma_u = traj.gamma_u(t);

  AncillaRelationReport report;
  report.lhs = ancilla_info_rate(cfg, u, gamma_u);

  const auto fill = [&](AncillaRelation& rel, double prefactor,
                        double partner) {
    rel.prefactor = prefactor;
    rel.partner = partner;
    rel.quoted_rhs = prefactor * partner;
    // the ratio is meaningless once the right side sits at roundoff scale
    rel.defined =
        std::abs(rel.quoted_rhs) > 1e-12 * (1.0 + std::abs(report.lhs));
    rel.ratio = rel.defined
                    ? report.lhs / rel.quoted_rhs
                    : std::numeric_limits<double>::quiet_NaN();
  };

  fill(report.production, -2.0 * N / (N + 1.0) * (u * (N * v + 0.5)),
       production_rate_u(thermal, u, gamma_u));
  fill(report.environment, -2.0 * N / (N + 1.0) * (v * (N * u + 0.5)),
       env_production_rate_u(thermal, u, gamma_u));
  fill(report.mutual, N / (N + 1.0) * (1.0 - 2.0 * u),
       mutual_info_rate_u(thermal, u, gamma_u));

  const double sign_claim = 1.0 - 2.0 * u;
  report.signs_consistent =
      report.production.prefactor <= 0.0 &&
      report.environment.prefactor <= 0.0 &&
      (report.mutual.prefactor == 0.0
           ? sign_claim == 0.0
           : std::signbit(report.mutual.prefactor) == std::signbit(sign_claim));
  return report;
}

std::vector<EntropicRecord> build_records(
    const SystemInit& init, const Trajectory& traj,
    const std::vector<double>& grid, int env_modes,
    const std::optional<AncillaConfig>& ancilla) {
  std::vector<EntropicRecord> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const double t = grid[i];
    EntropicRecord& r = out[i];
    r.t = t;
    r.g = traj.g(t);
    r.u = std::norm(r.g);
    const double gamma_u = traj.gamma_u(t);
    try {
      r.Gamma = traj.gamma(t);
    } catch (const VanishingG&) {
      r.Gamma = std::numeric_limits<double>::quiet_NaN();
    }
    r.S_WS = system_entropy(init, r.g);
    r.S_WE = environment_entropy(init, r.g, env_modes);
    r.srel_S_vac = wigdil::srel_S_vac(init, r.g);
    r.srel_E_init = wigdil::srel_E_init(init, r.g);
    r.I_SE = mutual_information_SE(init, r.g);
    r.Pi = production_rate_u(init, r.u, gamma_u);
    r.env_rate = env_production_rate_u(init, r.u, gamma_u);
    r.dI_SE_dt = mutual_info_rate_u(init, r.u, gamma_u);
    r.flux = entropy_flux_u(init, r.u, gamma_u);
    r.n_t = mean_occupation(init, r.g);
    if (ancilla) {
      r.has_ancilla = true;
      r.I_AS = ancilla_mutual_info(*ancilla, r.g);
      r.dI_AS_dt = ancilla_info_rate(*ancilla, r.u, gamma_u);
    }
  });
  return out;
}

}  // namespace wigdil
