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

#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "helpers.hpp"
#include "wigdil/dilation.hpp"
#include "wigdil/errors.hpp"
#include "wigdil/gaussian.hpp"
#include "wigdil/production.hpp"
#include "wigdil/trajectory.hpp"

using namespace wigdil;
using wigdil::testing::deriv5_richardson;
using wigdil::testing::simpson;
using wigdil::testing::uniform;

namespace {

SystemInit random_init(bool with_mu = true) {
  const double N = uniform(0.0, 1.8);
  const double m = uniform(0.0, 0.9) * std::sqrt(N * (N + 1.0));
  const Complex M = m * std::exp(Complex(0.0, uniform(0.0, 6.28)));
  Complex mu(0.0, 0.0);
  if (with_mu) mu = Complex(uniform(-1.2, 1.2), uniform(-1.2, 1.2));
  return SystemInit(mu, N, M);
}

BathSpec detuned_bath(int K) {
  BathSpec bath;
  bath.omega = 5.0;
  for (int k = 0; k < K; ++k) {
    bath.modes.push_back({5.0 + 0.7 + 0.45 * k, 0.35 + 0.08 * k});
  }
  return bath;
}

BathSpec resonant_bath(double gamma) {
  BathSpec bath;
  bath.omega = 5.0;
  bath.modes.push_back({5.0, gamma});
  return bath;
}

const IntegratorOptions kTight{1e-11, 1e-13, 2000000};

// Test double with an exact zero of g at t = 2, for the vanishing-g contract.
class RampTrajectory final : public Trajectory {
 public:
  int bath_size() const override { return 0; }
  double t_end() const override { return 2.0; }
  Complex g(double t) const override { return Complex(1.0 - 0.5 * t, 0.0); }
  Complex gdot(double) const override { return Complex(-0.5, 0.0); }
  Eigen::VectorXcd f(double) const override { return Eigen::VectorXcd(); }
  Eigen::VectorXcd fdot(double) const override { return Eigen::VectorXcd(); }
  double gamma_scale() const override { return 0.5; }
};

}  // namespace

TEST_CASE("closed-form relative entropies match the state pathway") {
  for (int trial = 0; trial < 12; ++trial) {
    const SystemInit init = random_init();
    const Complex g =
        uniform(0.05, 1.0) * std::exp(Complex(0.0, uniform(0.0, 6.28)));
    const double u = std::norm(g);

    const double s_direct =
        relative_entropy(assemble_system(init, g), vacuum_state(1));
    CHECK(std::abs(srel_S_vac(init, g) - s_direct) <= 1e-10);

    // collective environment mode carries exactly v = 1 - u
    Eigen::VectorXcd fc(1);
    fc(0) = std::sqrt(1.0 - u);
    const double e_direct =
        relative_entropy(assemble_environment(init, fc), vacuum_state(1));
    CHECK(std::abs(srel_E_init(init, g) - e_direct) <= 1e-10);
  }

  // mode-resolved environment along an integrated trajectory
  const AuxTrajectory traj(detuned_bath(3), 2.2, kTight);
  const SystemInit init = SystemInit::squeezed_thermal(Complex(0.5, -0.3), 0.6,
                                                       0.4, 0.9);
  for (double t : {0.4, 1.1, 1.9}) {
    const double direct = relative_entropy(
        assemble_environment(init, traj.f(t)), vacuum_state(3));
    CHECK(std::abs(srel_E_init(init, traj.g(t)) - direct) <= 1e-8);
  }

  SUBCASE("anchor values") {
    const SystemInit thermal(Complex(0.0, 0.0), 1.0, Complex(0.0, 0.0));
    CHECK(srel_S_vac(thermal, Complex(1.0, 0.0)) ==
          doctest::Approx(2.0 - std::log(3.0)).epsilon(1e-12));
    CHECK(std::abs(srel_S_vac(thermal, Complex(0.0, 0.0))) <= 1e-14);
    CHECK(std::abs(srel_E_init(thermal, Complex(1.0, 0.0))) <= 1e-14);
    // fully relaxed: everything the system lost sits in the environment
    const SystemInit hot(Complex(0.0, 0.0), 2.4, Complex(0.0, 0.0));
    CHECK(srel_E_init(hot, Complex(0.0, 0.0)) ==
          doctest::Approx(2.0 * 2.4 - std::log(2.0 * 2.4 + 1.0))
              .epsilon(1e-12));
    CHECK(srel_E_init(hot, Complex(0.0, 0.0)) ==
          doctest::Approx(srel_S_vac(hot, Complex(1.0, 0.0))).epsilon(1e-12));

    const SystemInit coh(Complex(1.1, -0.4), 0.0, Complex(0.0, 0.0));
    const Complex g(0.6, 0.3);
    const double u = std::norm(g);
    const double m2 = std::norm(coh.mu);
    CHECK(srel_S_vac(coh, g) == doctest::Approx(2.0 * m2 * u).epsilon(1e-12));
    CHECK(srel_E_init(coh, g) ==
          doctest::Approx(2.0 * m2 * (1.0 - u)).epsilon(1e-12));
  }
}

TEST_CASE("analytic rates match finite differences of the closed forms") {
  const TimTrajectory traj(0.8, 6.0);
  const std::vector<SystemInit> inits = {
      SystemInit(Complex(0.0, 0.0), 2.3, Complex(0.0, 0.0)),
      SystemInit::squeezed_thermal(Complex(0.4, 0.3), 0.7, 0.5, 1.1),
      SystemInit(Complex(1.2, -0.5), 0.0, Complex(0.0, 0.0)),
  };
  for (const SystemInit& init : inits) {
    for (double t : {0.15, 0.6, 1.4}) {
      const auto srelS = [&](double s) { return srel_S_vac(init, traj.g(s)); };
      const auto srelE = [&](double s) { return srel_E_init(init, traj.g(s)); };
      const auto mi = [&](double s) {
        return mutual_information_SE(init, traj.g(s));
      };
      const auto sw = [&](double s) { return system_entropy(init, traj.g(s)); };

      CHECK(std::abs(production_rate(init, traj, t) +
                     deriv5_richardson(srelS, t)) <= 1e-7);
      CHECK(std::abs(env_production_rate(init, traj, t) -
                     deriv5_richardson(srelE, t)) <= 1e-7);
      CHECK(std::abs(mutual_info_rate(init, traj, t) -
                     deriv5_richardson(mi, t)) <= 1e-7);
      CHECK(std::abs(entropy_flux(init, traj, t) -
                     (deriv5_richardson(sw, t) -
                      production_rate(init, traj, t))) <= 1e-7);
      CHECK(entropy_flux(init, traj, t) ==
            doctest::Approx(-4.0 * traj.gamma(t) *
                            mean_occupation(init, traj.g(t)))
                .epsilon(1e-12));
    }
  }

  // Alternate environment-rate form kept for cross-validation only; the
  // finite-difference oracle selects the primary form.
  const SystemInit& hot = inits[0];
  const double t = 0.6;
  const double fd = deriv5_richardson(
      [&](double s) { return srel_E_init(hot, traj.g(s)); }, t);
  const double u = std::norm(traj.g(t));
  const double gu = traj.gamma_u(t);
  CHECK(std::abs(env_production_rate_u(hot, u, gu) - fd) <= 1e-7);
  CHECK(std::abs(env_production_rate_alt_u(hot, u, gu) - fd) > 1e-2);
}

TEST_CASE("spot values of the rate formulas") {
  const TimTrajectory traj(1.0, 6.0);
  const SystemInit thermal(Complex(0.0, 0.0), 1.0, Complex(0.0, 0.0));
  const double t_half = 0.5 * std::numbers::ln2;  // |g|^2 = 1/2
  CHECK(production_rate(thermal, traj, t_half) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(env_production_rate(thermal, traj, t_half) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(mutual_info_rate(thermal, traj, t_half)) <= 1e-12);
  CHECK(entropy_flux(thermal, traj, t_half) ==
        doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(mean_occupation(thermal, traj.g(t_half)) ==
        doctest::Approx(0.5).epsilon(1e-10));

  SUBCASE("thermal closed form away from the half point") {
    const SystemInit hot(Complex(0.0, 0.0), 2.4, Complex(0.0, 0.0));
    const double u = std::norm(traj.g(0.5));
    const double expected =
        4.0 * 1.0 * 2.4 * 2.4 * u * u / (2.4 * u + 0.5);
    CHECK(production_rate(hot, traj, 0.5) ==
          doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("coherent rates coincide") {
    const SystemInit coh(Complex(0.9, 0.2), 0.0, Complex(0.0, 0.0));
    const double u = std::norm(traj.g(0.8));
    const double expected = 4.0 * 1.0 * u * std::norm(coh.mu);
    CHECK(production_rate(coh, traj, 0.8) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(env_production_rate(coh, traj, 0.8) ==
          doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("vacuum stays silent") {
    const SystemInit vac;
    CHECK(production_rate(vac, traj, 0.7) == 0.0);
    CHECK(env_production_rate(vac, traj, 0.7) == 0.0);
    CHECK(entropy_flux(vac, traj, 0.7) == 0.0);
  }

  SUBCASE("initial instant") {
    // Nothing has reached the environment yet, so its rate starts at zero
    // and the full production shows up as growth of correlations.
    CHECK(std::abs(env_production_rate(thermal, traj, 0.0)) <= 1e-14);
    CHECK(production_rate(thermal, traj, 0.0) ==
          doctest::Approx(mutual_info_rate(thermal, traj, 0.0))
              .epsilon(1e-12));
  }
}

TEST_CASE("system current canonical coefficients") {
  const TimTrajectory traj(1.0, 6.0);
  const double t = 0.6;
  const double Gamma = traj.gamma(t);
  const Complex g = traj.g(t);

  SUBCASE("vacuum carries no current") {
    const LinearCurrent j = current_S(SystemInit(), traj, t);
    CHECK(std::abs(j.d) <= 1e-14);
    CHECK(j.L.norm() <= 1e-14);
  }

  SUBCASE("coherent state is pure displacement") {
    const SystemInit coh(Complex(0.8, -0.6), 0.0, Complex(0.0, 0.0));
    const LinearCurrent j = current_S(coh, traj, t);
    CHECK(std::abs(j.d - Gamma * coh.mu * g) <= 1e-14);
    CHECK(j.L.norm() <= 1e-14);
  }

  SUBCASE("thermal state drives the diagonal coefficient") {
    const SystemInit hot(Complex(0.0, 0.0), 1.7, Complex(0.0, 0.0));
    const LinearCurrent j = current_S(hot, traj, t);
    const double sigma = 1.7 * std::norm(g) + 0.5;
    CHECK(std::abs(j.d) <= 1e-14);
    CHECK(std::abs(j.L(0) - Gamma * (1.0 - 0.5 / sigma)) <= 1e-12);
    CHECK(std::abs(j.L(1)) <= 1e-14);
  }

  SUBCASE("squeezing couples the conjugate coordinate") {
    const SystemInit sq = SystemInit::squeezed_thermal(
        Complex(0.0, 0.0), 0.4, 0.6, 0.7);
    const LinearCurrent j = current_S(sq, traj, t);
    CHECK(std::abs(j.L(1)) > 1e-3);
  }
}

TEST_CASE("current integrals reproduce the analytic rates") {
  SUBCASE("exponential decay, random draws") {
    for (int trial = 0; trial < 30; ++trial) {
      const SystemInit init = random_init();
      const TimTrajectory traj(uniform(0.4, 1.6), 6.0);
      const double t = uniform(0.1, 2.0);
      const double pi_rate = production_rate(init, traj, t);
      const double env = env_production_rate(init, traj, t);
      CHECK(std::abs(current_integral_S(init, traj, t) - pi_rate) <=
            1e-10 * (1.0 + std::abs(pi_rate)));
      CHECK(std::abs(current_integral_E(init, traj, t) - env) <=
            1e-8 * (1.0 + std::abs(env)));
    }
  }

  SUBCASE("single resonant mode, both signs of the rate") {
    const AuxTrajectory traj(resonant_bath(0.9), 3.2, kTight);
    for (double t : {0.4, 0.9, 1.4, 2.3, 2.9}) {
      const SystemInit init = random_init();
      const double pi_rate = production_rate(init, traj, t);
      const double env = env_production_rate(init, traj, t);
      CHECK(std::abs(current_integral_S(init, traj, t) - pi_rate) <=
            1e-9 * (1.0 + std::abs(pi_rate)));
      CHECK(std::abs(current_integral_E(init, traj, t) - env) <=
            5e-8 * (1.0 + std::abs(env)));
    }
  }

  SUBCASE("symmetric flat band keeps the phase still") {
    const AuxTrajectory traj(discretize(flat_band_preset(5.0, 1.0, 6.0, 48)),
                             1.0, kTight);
    const SystemInit init = SystemInit::squeezed_thermal(Complex(0.3, 0.2),
                                                         0.8, 0.3, 0.4);
    for (double t : {0.2, 0.5, 0.9}) {
      const double env = env_production_rate(init, traj, t);
      CHECK(std::abs(current_integral_E(init, traj, t) - env) <=
            5e-8 * (1.0 + std::abs(env)));
    }
  }

  SUBCASE("detuning drifts the phase of g and the environment integral") {
    BathSpec bath;
    bath.omega = 5.0;
    bath.modes.push_back({7.0, 0.8});  // strongly detuned single mode
    const AuxTrajectory traj(bath, 1.6, kTight);
    for (double t : {0.5, 0.8, 1.3}) {
      const SystemInit init = random_init();
      const double pi_rate = production_rate(init, traj, t);
      CHECK(std::abs(current_integral_S(init, traj, t) - pi_rate) <=
            1e-9 * (1.0 + std::abs(pi_rate)));

      const double Gamma = traj.gamma(t);
      const Complex ratio_c = traj.gdot(t) / traj.g(t);
      const double ratio = std::norm(ratio_c) / (Gamma * Gamma);
      const double env = env_production_rate(init, traj, t);
      // |g'/g|^2 exceeds Gamma^2 whenever the phase drifts, and the
      // environment moment integral picks up exactly that factor
      CHECK(ratio > 1.0 + 1e-3);
      CHECK(std::abs(current_integral_E(init, traj, t) - ratio * env) <=
            5e-8 * (1.0 + std::abs(ratio * env)));
    }
  }
}

TEST_CASE("per-mode environment currents scale with the mode velocities") {
  SUBCASE("integrated detuned bath") {
    const AuxTrajectory traj(detuned_bath(3), 2.0, kTight);
    const SystemInit init = SystemInit::squeezed_thermal(Complex(0.4, -0.2),
                                                         0.9, 0.35, 1.3);
    const double t = 0.9;
    const LinearCurrent whole = current_E(init, traj, t);
    const auto modes = current_E_modes(init, traj, t);
    REQUIRE(modes.size() == 3);
    const Complex gdot = traj.gdot(t);
    const Eigen::VectorXcd fdot = traj.fdot(t);
    for (int k = 0; k < 3; ++k) {
      const Complex scale = -fdot(k) / gdot;
      CHECK(std::abs(modes[k].d - scale * whole.d) <= 1e-12);
      CHECK((modes[k].L - scale * whole.L).norm() <= 1e-12);
    }
  }

  SUBCASE("closed-form decay over a discretized band") {
    const TimTrajectory traj(1.0, discretize(flat_band_preset(5.0, 1.0, 6.0,
                                                              12)), 4.0);
    const SystemInit init(Complex(0.5, 0.1), 0.6, Complex(0.0, 0.0));
    const double t = 0.7;
    const auto modes = current_E_modes(init, traj, t);
    const Eigen::VectorXcd fdot = traj.fdot(t);
    REQUIRE(modes.size() == 12);
    for (int k = 1; k < 12; ++k) {
      // every coefficient of mode k is the mode-0 one rescaled by fdot_k/fdot_0
      const Complex expect = fdot(k) / fdot(0);
      CHECK(std::abs(modes[k].d / modes[0].d - expect) <= 1e-10);
      CHECK((modes[k].L - expect * modes[0].L).norm() <=
            1e-10 * (1.0 + modes[0].L.norm()));
    }
  }

  SUBCASE("guards") {
    const TimTrajectory bare(1.0, 4.0);
    const SystemInit init = random_init();
    CHECK_THROWS_AS(current_E_modes(init, bare, 0.5), InsufficientData);
    const AuxTrajectory traj(detuned_bath(2), 1.5, kTight);
    CHECK_THROWS_AS(current_E_modes(init, traj, 0.0), VanishingGdot);
  }
}

TEST_CASE("joint moment route reproduces the mutual information rate") {
  SUBCASE("closed-form decay") {
    const TimTrajectory traj(1.0, 6.0);
    for (const SystemInit& init :
         {SystemInit(Complex(0.0, 0.0), 1.3, Complex(0.0, 0.0)),
          SystemInit::squeezed_thermal(Complex(0.7, 0.1), 0.5, 0.45, 0.8)}) {
      for (double t : {0.3, 0.9, 1.8}) {
        const double direct = mutual_info_rate(init, traj, t);
        CHECK(std::abs(mutual_info_rate_currents(init, traj, t) - direct) <=
              1e-10 * (1.0 + std::abs(direct)));
      }
    }
  }

  SUBCASE("resonant mode keeps g real") {
    const AuxTrajectory traj(resonant_bath(0.9), 3.0, kTight);
    const SystemInit init = SystemInit(Complex(0.4, 0.0), 0.9,
                                       Complex(0.3, 0.2));
    for (double t : {0.7, 2.4}) {
      const double direct = mutual_info_rate(init, traj, t);
      CHECK(std::abs(mutual_info_rate_currents(init, traj, t) - direct) <=
            5e-8 * (1.0 + std::abs(direct)));
    }
  }

  SUBCASE("always the difference of the two marginal integrals") {
    const AuxTrajectory traj(detuned_bath(2), 1.8, kTight);
    const SystemInit init = random_init();
    for (double t : {0.6, 1.2}) {
      const double split = current_integral_S(init, traj, t) -
                           current_integral_E(init, traj, t);
      CHECK(std::abs(mutual_info_rate_currents(init, traj, t) - split) <=
            1e-12 * (1.0 + std::abs(split)));
    }
  }
}

TEST_CASE("mutual information rate integrates to the mutual information") {
  const TimTrajectory traj(1.0, 6.0);
  const SystemInit init(Complex(0.6, 0.0), 1.5, Complex(0.0, 0.0));
  const double T = 1.7;
  const double integral = simpson(
      [&](double s) { return mutual_info_rate(init, traj, s); }, 0.0, T, 600);
  CHECK(std::abs(integral - mutual_information_SE(init, traj.g(T))) <= 1e-6);

  // state-route cross-check of the integrand's antiderivative
  CHECK(mutual_information_SE(init, traj.g(T)) ==
        doctest::Approx(mutual_information(assemble_collective(init,
                                                               traj.g(T)),
                                           {0}))
            .epsilon(1e-10));

  SUBCASE("one sign change for a relaxing thermal state") {
    const SystemInit hot(Complex(0.0, 0.0), 1.0, Complex(0.0, 0.0));
    int flips = 0;
    double prev = mutual_info_rate(hot, traj, 0.01);
    CHECK(prev > 0.0);
    for (int i = 2; i <= 300; ++i) {
      const double cur = mutual_info_rate(hot, traj, 0.01 * i);
      if (prev > 0.0 && cur < 0.0) ++flips;
      if (prev < 0.0 && cur > 0.0) ++flips;
      prev = cur;
    }
    CHECK(prev < 0.0);
    CHECK(flips == 1);
  }
}

TEST_CASE("the joint relative entropy is conserved along the flow") {
  SUBCASE("integrated five-mode bath") {
    BathSpec bath;
    bath.omega = 4.0;
    for (int k = 0; k < 5; ++k) {
      bath.modes.push_back({4.0 + 0.5 * (k - 2) + 0.13, 0.25 + 0.07 * k});
    }
    const AuxTrajectory traj(bath, 2.1, kTight);
    const SystemInit init = SystemInit::squeezed_thermal(Complex(0.5, 0.4),
                                                         0.8, 0.4, 0.6);
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(0.21 * i);
    CHECK(conservation_check(init, traj, grid) <= 1e-6);
  }

  SUBCASE("coherent closed form") {
    const TimTrajectory traj(1.0, 6.0);
    const SystemInit coh(Complex(1.3, -0.2), 0.0, Complex(0.0, 0.0));
    CHECK(conservation_check(coh, traj, {0.0, 0.5, 1.0, 2.0, 4.0}) <= 1e-10);
  }

  SUBCASE("initial value is the fully relaxed system distance") {
    const SystemInit init = SystemInit::squeezed_thermal(Complex(0.2, 0.7),
                                                         0.9, 0.3, 1.4);
    const double joint = relative_entropy(
        assemble_collective(init, Complex(1.0, 0.0)), vacuum_state(2));
    CHECK(joint ==
          doctest::Approx(srel_S_vac(init, Complex(1.0, 0.0))).epsilon(1e-12));
    CHECK(joint ==
          doctest::Approx(conserved_relative_entropy(init)).epsilon(1e-12));
  }

  SUBCASE("empty grid rejected") {
    const TimTrajectory traj(1.0, 6.0);
    CHECK_THROWS_AS(conservation_check(SystemInit(), traj, {}),
                    InsufficientData);
  }
}

TEST_CASE("monotone relaxation under positive decay") {
  const TimTrajectory traj(0.9, 6.0);
  const SystemInit init = SystemInit::squeezed_thermal(Complex(0.6, -0.3),
                                                       1.1, 0.5, 0.2);
  double prev_s = srel_S_vac(init, traj.g(0.0));
  double prev_e = srel_E_init(init, traj.g(0.0));
  for (int i = 1; i <= 60; ++i) {
    const double t = 0.05 * i;
    const double s = srel_S_vac(init, traj.g(t));
    const double e = srel_E_init(init, traj.g(t));
    CHECK(s <= prev_s + 1e-12);
    CHECK(e >= prev_e - 1e-12);
    CHECK(production_rate(init, traj, t) >= -1e-12);
    prev_s = s;
    prev_e = e;
  }

  SUBCASE("positive-rate window of the resonant mode") {
    const AuxTrajectory traj1(resonant_bath(0.9), 3.0, kTight);
    for (double t : {0.3, 0.8, 1.3}) {
      CHECK(traj1.gamma(t) > 0.0);
      CHECK(production_rate(init, traj1, t) >= -1e-12);
    }
  }
}

TEST_CASE("coherent initializations stay in a product state") {
  const SystemInit coh(Complex(1.3, 0.0), 0.0, Complex(0.0, 0.0));
  const AuxTrajectory traj(detuned_bath(2), 1.8, IntegratorOptions{});
  for (double t : {0.3, 0.9, 1.6}) {
    CHECK(std::abs(mutual_information_SE(coh, traj.g(t))) <= 1e-10);
    CHECK(mutual_information(assemble_covariance(coh, traj, t), {0}) <= 1e-8);
    CHECK(production_rate(coh, traj, t) ==
          doctest::Approx(env_production_rate(coh, traj, t)).epsilon(1e-12));
  }
}

TEST_CASE("ancilla correlations and their decay") {
  const AncillaConfig cfg(std::asinh(1.0));  // N = 1
  CHECK(cfg.N() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cfg.zeta() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  CHECK(ancilla_mutual_info(cfg, Complex(1.0, 0.0)) ==
        doctest::Approx(std::log(9.0)).epsilon(1e-12));
  CHECK(std::abs(ancilla_mutual_info(cfg, Complex(0.0, 0.0))) <= 1e-14);

  SUBCASE("closed form equals the state-route mutual information") {
    for (int trial = 0; trial < 8; ++trial) {
      const Complex g = uniform(0.05, 0.999) *
                        std::exp(Complex(0.0, uniform(0.0, 6.28)));
      const AncillaConfig c2(uniform(0.2, 1.4));
      const GaussianState joint = ancilla_joint_state(c2, g);
      CHECK(std::abs(ancilla_mutual_info(c2, g) -
                     mutual_information(joint, {0})) <= 1e-12);
    }
  }

  SUBCASE("rate matches finite differences, printed alternate is half") {
    const TimTrajectory traj(0.7, 8.0);
    const AncillaConfig hot(std::asinh(std::sqrt(1.8)));
    for (double t : {0.2, 0.9, 1.6}) {
      const double fd = deriv5_richardson(
          [&](double s) { return ancilla_mutual_info(hot, traj.g(s)); }, t);
      const double u = std::norm(traj.g(t));
      const double rate = ancilla_info_rate(hot, u, traj.gamma_u(t));
      CHECK(std::abs(rate - fd) <= 1e-7);
      const double alt = ancilla_info_rate_alt(hot, u, traj.gamma_u(t));
      CHECK(alt == doctest::Approx(0.5 * rate).epsilon(1e-12));
      CHECK(std::abs(alt - fd) > 0.25 * std::abs(fd));
    }
  }

  SUBCASE("anchor rate at the half point") {
    const TimTrajectory traj(1.0, 6.0);
    const double t_half = 0.5 * std::numbers::ln2;
    CHECK(ancilla_info_rate(cfg, 0.5, traj.gamma_u(t_half)) ==
          doctest::Approx(-2.0).epsilon(1e-10));
  }

  SUBCASE("monotone decay and full release") {
    const TimTrajectory traj(1.0, 14.0);
    for (int i = 0; i <= 50; ++i) {
      const double t = 0.08 * i;
      CHECK(ancilla_info_rate(cfg, std::norm(traj.g(t)), traj.gamma_u(t)) <
            0.0);
    }
    CHECK(std::abs(ancilla_mutual_info(cfg, traj.g(12.0))) <= 1e-6);
  }

  SUBCASE("invalid squeezing rejected") {
    CHECK_THROWS_AS(AncillaConfig(std::nan("")), UnphysicalInit);
  }
}

TEST_CASE("ancilla relation report") {
  const AncillaConfig cfg(std::asinh(1.0));  // N = 1
  const TimTrajectory traj(1.0, 6.0);

  SUBCASE("undefined ratio exactly at the half point") {
    const double t_half = 0.5 * std::numbers::ln2;
    const auto report = ancilla_relation_report(cfg, traj, t_half);
    CHECK_FALSE(report.mutual.defined);
    CHECK(std::isnan(report.mutual.ratio));
    CHECK(report.production.defined);
    CHECK(report.environment.defined);
    CHECK(report.signs_consistent);
  }

  SUBCASE("printed prefactors are reciprocals of the consistent factors") {
    for (double u : {0.8, 0.3, 0.12}) {
      const double t = -0.5 * std::log(u);
      const auto report = ancilla_relation_report(cfg, traj, t);
      CHECK(report.lhs ==
            doctest::Approx(ancilla_info_rate(cfg, u, traj.gamma_u(t)))
                .epsilon(1e-12));
      for (const AncillaRelation* rel :
           {&report.production, &report.environment, &report.mutual}) {
        REQUIRE(rel->defined);
        CHECK(rel->ratio * rel->prefactor * rel->prefactor ==
              doctest::Approx(1.0).epsilon(1e-10));
      }
      CHECK(report.production.prefactor <= 0.0);
      CHECK(report.environment.prefactor <= 0.0);
      CHECK(std::signbit(report.mutual.prefactor) == std::signbit(1.0 - 2 * u));
      CHECK(report.signs_consistent);
    }
  }

  SUBCASE("partners are the thermal-state rates") {
    const double t = 0.4;
    const SystemInit thermal(Complex(0.0, 0.0), cfg.N(), Complex(0.0, 0.0));
    const auto report = ancilla_relation_report(cfg, traj, t);
    CHECK(report.production.partner ==
          doctest::Approx(production_rate(thermal, traj, t)).epsilon(1e-12));
    CHECK(report.environment.partner ==
          doctest::Approx(env_production_rate(thermal, traj, t))
              .epsilon(1e-12));
    CHECK(report.mutual.partner ==
          doctest::Approx(mutual_info_rate(thermal, traj, t)).epsilon(1e-12));
  }
}

TEST_CASE("vanishing guards") {
  const SystemInit init = random_init();

  SUBCASE("zero of g") {
    const RampTrajectory ramp;
    CHECK_THROWS_AS(production_rate(init, ramp, 2.0), VanishingG);
    CHECK_THROWS_AS(entropy_flux(init, ramp, 2.0), VanishingG);
    CHECK(production_rate(init, ramp, 1.0) >= 0.0);  // well-defined before
  }

  SUBCASE("zero of Gamma at the initial instant") {
    const AuxTrajectory traj(detuned_bath(2), 1.5, kTight);
    CHECK_THROWS_AS(current_integral_S(init, traj, 0.0), VanishingGamma);
    CHECK_THROWS_AS(current_integral_E(init, traj, 0.0), VanishingGamma);
    CHECK_THROWS_AS(mutual_info_rate_currents(init, traj, 0.0),
                    VanishingGamma);
  }

  SUBCASE("mode count validation") {
    CHECK_THROWS_AS(environment_entropy(init, Complex(0.5, 0.0), 0),
                    DimensionMismatch);
  }
}

TEST_CASE("record assembly is deterministic and internally consistent") {
  const TimTrajectory traj(1.0, 6.0);
  const SystemInit init = SystemInit::squeezed_thermal(Complex(0.5, 0.3), 0.9,
                                                       0.4, 1.0);
  const AncillaConfig cfg(0.6);
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(0.04 * i);

  const auto records = build_records(init, traj, grid, 1, cfg);
  REQUIRE(records.size() == grid.size());
  for (const EntropicRecord& r : records) {
    CHECK(std::abs(r.Pi - (r.env_rate + r.dI_SE_dt)) <=
          1e-10 * (1.0 + std::abs(r.Pi)));
    const double gu = traj.gamma_u(r.t);
    CHECK(std::abs(r.flux - (system_entropy_rate_u(init, r.u, gu) - r.Pi)) <=
          1e-12 * (1.0 + std::abs(r.flux)));
    CHECK(r.S_WS == system_entropy(init, r.g));
    CHECK(r.n_t == mean_occupation(init, r.g));
    CHECK(r.has_ancilla);
    CHECK(r.I_AS == ancilla_mutual_info(cfg, r.g));
    CHECK(std::isfinite(r.Gamma));
  }

  SUBCASE("thread count does not change the records") {
    setenv("WIGNER_DILATION_THREADS", "3", 1);
    const auto pooled = build_records(init, traj, grid, 1, cfg);
    setenv("WIGNER_DILATION_THREADS", "1", 1);
    const auto serial = build_records(init, traj, grid, 1, cfg);
    unsetenv("WIGNER_DILATION_THREADS");
    REQUIRE(pooled.size() == serial.size());
    for (std::size_t i = 0; i < pooled.size(); ++i) {
      CHECK(pooled[i].S_WS == serial[i].S_WS);
      CHECK(pooled[i].Pi == serial[i].Pi);
      CHECK(pooled[i].env_rate == serial[i].env_rate);
      CHECK(pooled[i].I_AS == serial[i].I_AS);
    }
  }

  SUBCASE("gamma pole is recorded as NaN, rates stay finite") {
    const RampTrajectory ramp;
    const auto recs = build_records(SystemInit(Complex(0.4, 0.0), 0.7,
                                               Complex(0.0, 0.0)),
                                    ramp, {0.0, 1.0, 2.0}, 1, std::nullopt);
    CHECK(std::isfinite(recs[1].Gamma));
    CHECK(std::isnan(recs[2].Gamma));
    CHECK(std::isfinite(recs[2].Pi));
    CHECK_FALSE(recs[2].has_ancilla);
  }

  SUBCASE("mode-resolved environment entropy") {
    const AuxTrajectory aux(detuned_bath(2), 1.5, IntegratorOptions{});
    const auto recs =
        build_records(init, aux, {0.0, 0.5, 1.0, 1.5}, 2, std::nullopt);
    for (const EntropicRecord& r : recs) {
      CHECK(r.S_WE ==
            doctest::Approx(environment_entropy(init, r.g, 2)).epsilon(1e-12));
      CHECK_FALSE(r.has_ancilla);
    }
  }
}
