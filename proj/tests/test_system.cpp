#include <doctest.h>

#include "fixtures.hpp"
#include "sqom/errors.hpp"
#include "sqom/system.hpp"

using namespace sqom;
using fixture::rel;

namespace {

RawParams table_raw() {
  RawParams r;
  r.Omega_m = two_pi * 1e6;
  r.Q_m = 5e8;
  r.m_eff = 1e-12;
  r.kappa = two_pi * 2.75e6;
  r.eta_c = 1.0;
  r.cavity_length = 1e-3;
  r.membrane_reflectivity = 0.76;
  r.coop = 1.0;
  return r;
}

}  // namespace

TEST_CASE("derive_params on the reference device") {
  SystemParams s = derive_params(table_raw());
  CHECK(rel(s.Gamma_m, two_pi * 2e-3) < 1e-14);
  CHECK(rel(s.q_zp, 4.10e-15) < 0.01);
  // hand evaluation of 8 pi^2 c sqrt(R/(1-R)) / (lambda^2 L)
  CHECK(rel(*s.g_om, 1.7308618825042887e25) < 1e-12);
  CHECK(rel(s.g0, 2.905084079444319e-4) < 1e-12);
  CHECK(rel(s.n_c, 1.0814119549306515e10) < 1e-12);
  CHECK(rel(s.Omega_l, two_pi * c_light / 1560e-9) < 1e-15);
}

TEST_CASE("Q_m and Gamma_m round trip") {
  RawParams r = table_raw();
  r.Q_m.reset();
  r.Gamma_m = two_pi * 2e-3;
  SystemParams s = derive_params(r);
  CHECK(rel(s.Q_m, 5e8) < 1e-12);
  CHECK(s.Gamma_m == s.Omega_m / s.Q_m);
  r.Q_m = 5e8;
  CHECK_NOTHROW(derive_params(r));
  r.Q_m = 4e8;
  CHECK_THROWS_AS(derive_params(r), parameter_error);
}

TEST_CASE("cooperativity and displacement round trip") {
  RawParams r = table_raw();
  SystemParams a = derive_params(r);
  CHECK(rel(a.coop, 4 * a.g * a.g / (a.kappa * a.Gamma_m)) < 1e-12);
  r.coop.reset();
  r.q_bar_m = a.q_bar_m;
  SystemParams b = derive_params(r);
  CHECK(rel(b.coop, 1.0) < 1e-12);
  CHECK(rel(b.g, a.g) < 1e-12);

  r.q_bar_m = 0.0;
  r.g_om.reset();
  r.g0 = 1e-3;
  SystemParams z = derive_params(r);
  CHECK(z.g == 0.0);
  CHECK(z.coop == 0.0);
}

TEST_CASE("derive_params rejects bad input") {
  RawParams r = table_raw();
  SUBCASE("missing field") {
    r.m_eff.reset();
    CHECK_THROWS_AS(derive_params(r), parameter_error);
  }
  SUBCASE("both coop and q_bar_m") {
    r.q_bar_m = 1.0;
    CHECK_THROWS_AS(derive_params(r), parameter_error);
  }
  SUBCASE("neither coop nor q_bar_m") {
    r.coop.reset();
    CHECK_THROWS_AS(derive_params(r), parameter_error);
  }
  SUBCASE("non-positive rate") {
    r.kappa = 0.0;
    CHECK_THROWS_AS(derive_params(r), parameter_error);
  }
  SUBCASE("eta_c outside (0, 1]") {
    r.eta_c = 1.5;
    CHECK_THROWS_AS(derive_params(r), parameter_error);
  }
  SUBCASE("n_bar and temperature") {
    r.n_bar = 1.0;
    r.temperature = 1.0;
    CHECK_THROWS_AS(derive_params(r), parameter_error);
  }
  SUBCASE("no coupling given") {
    r.cavity_length.reset();
    CHECK_THROWS_AS(derive_params(r), parameter_error);
  }
}

TEST_CASE("thermal occupancy at 300 K") {
  RawParams r = table_raw();
  r.temperature = 300.0;
  SystemParams s = derive_params(r);
  CHECK(rel(s.n_bar, 6.2e6) < 0.01);
}

TEST_CASE("matched signal power") {
  SystemParams s = derive_params(table_raw());
  const double k = s.kappa, base = hbar * s.Omega_l * s.n_c;
  SqueezerParams q;
  CHECK(rel(matched_signal_power(s, q), base * k / (4 * s.eta_c)) < 1e-14);
  q.G = k / 4;
  q.theta = 0.0;
  CHECK(matched_signal_power(s, q) == 0.0);
  q.theta = -pi / 2;
  // bracket 8 G kappa = 2 kappa^2
  CHECK(rel(matched_signal_power(s, q), base * 2 * k * k / (4 * k * s.eta_c)) < 1e-14);

  SUBCASE("non-negative and monotone in 1 - cos theta") {
    for (double G : {0.0, 0.05 * k, 0.2 * k, 0.25 * k, 0.4 * k}) {
      double prev = -1.0;
      for (int i = 0; i <= 64; ++i) {
        q.G = G;
        q.theta = -pi * i / 64.0;
        double P = matched_signal_power(s, q);
        CHECK(P >= 0.0);
        CHECK(P >= prev);
        prev = P;
      }
    }
  }
}

TEST_CASE("steady state") {
  RawParams r = table_raw();
  SystemParams s = derive_params(r);
  SqueezerParams q;
  q.G = 0.2 * s.kappa;

  SUBCASE("cos theta = 0 branch") {
    q.theta = -pi / 2;
    q.Phi = -pi / 3;
    // |2 eps/sqrt(n_c)| cos Phi = kappa
    double e = s.kappa;  // eps / sqrt(n_c) = kappa
    q.P_s = e * e * s.n_c * hbar * s.Omega_l / (s.kappa * s.eta_c);
    SteadyState st = steady_state(s, q);
    CHECK(std::abs(st.cos_theta_check) < 1e-12);
    CHECK(st.consistent);
    CHECK(st.q_bar_sq > 0.0);
  }
  SUBCASE("cos Phi = 0 at G = kappa/4") {
    q.G = s.kappa / 4;
    q.theta = -0.1;
    q.Phi = -pi / 2;  // sin Phi = -1 keeps q_bar^2 positive
    q.P_s = 1e-3;
    SteadyState st = steady_state(s, q);
    CHECK(st.cos_theta_check == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("matched power reproduces theta and q_bar_m") {
    for (double th : {-0.01, -0.7, -2.0}) {
      q.theta = th;
      q.P_s = matched_signal_power(s, q);
      q.Phi = matched_signal_phase(s, q);
      SteadyState st = steady_state(s, q);
      CHECK(st.cos_theta_check == doctest::Approx(std::cos(th)).epsilon(1e-9));
      // the drive terms cancel against 2 G sin(theta), which is ~1e9 times Delta_c
      CHECK(std::abs(st.q_bar_sq * s.g0 - s.Delta_c) < 1e-12 * s.kappa);
    }
  }
  SUBCASE("G to kappa/4 and theta to 0 drives P_s to 0") {
    q.G = s.kappa / 4 * (1 - 1e-9);
    q.theta = -1e-9;
    double P = matched_signal_power(s, q);
    CHECK(P < 1e-12 * hbar * s.Omega_l * s.n_c * s.kappa);
  }
  SUBCASE("errors") {
    q.P_s = 1e-3;
    q.G = 0.0;
    CHECK_THROWS_AS(steady_state(s, q), singularity_error);
    q.G = 0.1 * s.kappa;
    q.P_s.reset();
    CHECK_THROWS_AS(steady_state(s, q), parameter_error);
    q.P_s = 1e-3;
    q.theta = 0.5;
    q.Phi = pi / 2;  // sin Phi = 1 pushes q_bar^2 negative
    CHECK_THROWS_AS(steady_state(s, q), domain_error);
  }
}

TEST_CASE("drive amplitudes") {
  SystemParams s = derive_params(table_raw());
  double P = 2e-3;
  CHECK(rel(pump_power(s, pump_drive(s, P)), P) < 1e-14);
  CHECK(rel(signal_drive(s, P), std::sqrt(s.kappa * s.eta_c * P / (hbar * s.Omega_l))) < 1e-15);
  CHECK_THROWS_AS(signal_drive(s, -1.0), parameter_error);
}
