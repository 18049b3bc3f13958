#include "sqom/system.hpp"

#include <cmath>
#include <string>

#include "sqom/constants.hpp"
#include "sqom/errors.hpp"

namespace sqom {

namespace {

double require(const std::optional<double>& v, const char* name) {
  if (!v) throw parameter_error(std::string("missing mandatory field ") + name);
  if (!std::isfinite(*v)) throw parameter_error(std::string(name) + " is not finite");
  return *v;
}

double require_positive(const std::optional<double>& v, const char* name) {
  double x = require(v, name);
  if (!(x > 0.0)) throw parameter_error(std::string(name) + " must be positive");
  return x;
}

}  // namespace

double zero_point_displacement(double m_eff, double Omega_m) {
  return std::sqrt(hbar / (m_eff * Omega_m));
}

double thermal_occupancy(double Omega_m, double temperature) {
  return k_boltzmann * temperature / (hbar * Omega_m);
}

double quadratic_coupling(double reflectivity, double lambda_s, double length) {
  if (!(reflectivity >= 0.0 && reflectivity < 1.0))
    throw parameter_error("membrane_reflectivity must lie in [0, 1)");
  if (!(lambda_s > 0.0 && length > 0.0))
    throw parameter_error("lambda_s and cavity_length must be positive");
  return 8.0 * pi * pi * c_light * std::sqrt(reflectivity / (1.0 - reflectivity)) /
         (lambda_s * lambda_s * length);
}

SystemParams derive_params(const RawParams& raw) {
  SystemParams s;
  s.Omega_m = require_positive(raw.Omega_m, "Omega_m");
  if (raw.Q_m && raw.Gamma_m) {
    double q = require_positive(raw.Q_m, "Q_m");
    double gm = require_positive(raw.Gamma_m, "Gamma_m");
    if (std::abs(s.Omega_m / gm - q) > 1e-12 * q)
      throw parameter_error("Q_m and Gamma_m are both given and disagree");
    s.Q_m = q;
    s.Gamma_m = s.Omega_m / q;
  } else if (raw.Q_m) {
    s.Q_m = require_positive(raw.Q_m, "Q_m");
    s.Gamma_m = s.Omega_m / s.Q_m;
  } else if (raw.Gamma_m) {
    s.Gamma_m = require_positive(raw.Gamma_m, "Gamma_m");
    s.Q_m = s.Omega_m / s.Gamma_m;
  } else {
    throw parameter_error("missing mandatory field Q_m (or Gamma_m)");
  }

  s.m_eff = require_positive(raw.m_eff, "m_eff");
  s.kappa = require_positive(raw.kappa, "kappa");
  s.eta_c = require(raw.eta_c, "eta_c");
  if (!(s.eta_c > 0.0 && s.eta_c <= 1.0)) throw parameter_error("eta_c must lie in (0, 1]");

  s.lambda_s = raw.lambda_s ? require_positive(raw.lambda_s, "lambda_s") : 1560e-9;
  s.Omega_l = two_pi * c_light / s.lambda_s;
  s.q_zp = zero_point_displacement(s.m_eff, s.Omega_m);
  s.cavity_length = raw.cavity_length;
  s.membrane_reflectivity = raw.membrane_reflectivity;

  if (raw.g0) {
    s.g0 = require_positive(raw.g0, "g0");
    s.g_om = raw.g_om;
  } else if (raw.g_om) {
    s.g_om = require_positive(raw.g_om, "g_om");
    s.g0 = *s.g_om * s.q_zp * s.q_zp;
  } else if (raw.cavity_length && raw.membrane_reflectivity) {
    s.g_om = quadratic_coupling(*raw.membrane_reflectivity, s.lambda_s, *raw.cavity_length);
    if (!(*s.g_om > 0.0)) throw parameter_error("membrane_reflectivity = 0 gives g_om = 0");
    s.g0 = *s.g_om * s.q_zp * s.q_zp;
  } else {
    throw parameter_error("missing mandatory field g0 (or g_om, or membrane_reflectivity with cavity_length)");
  }
  s.n_c = raw.n_c ? require_positive(raw.n_c, "n_c") : s.Omega_m / (2.0 * s.g0);

  if (raw.temperature) {
    s.temperature = require(raw.temperature, "temperature");
    if (*s.temperature < 0.0) throw parameter_error("temperature must be non-negative");
    if (raw.n_bar) throw parameter_error("give either n_bar or temperature, not both");
    s.n_bar = thermal_occupancy(s.Omega_m, *s.temperature);
  } else {
    s.n_bar = raw.n_bar ? require(raw.n_bar, "n_bar") : 0.0;
    if (s.n_bar < 0.0) throw parameter_error("n_bar must be non-negative");
  }

  s.Delta = raw.Delta ? require(raw.Delta, "Delta") : 0.0;

  if (raw.coop.has_value() == raw.q_bar_m.has_value())
    throw parameter_error("exactly one of coop and q_bar_m must be given");
  if (raw.coop) {
    double c = require(raw.coop, "coop");
    if (c < 0.0) throw parameter_error("coop must be non-negative");
    s = with_cooperativity(s, c);
  } else {
    s.q_bar_m = require(raw.q_bar_m, "q_bar_m");
    s.g = s.g0 * s.q_bar_m * std::sqrt(2.0 * s.n_c);
    s.coop = 4.0 * s.g * s.g / (s.kappa * s.Gamma_m);
  }
  s.Delta_c = s.Delta + s.g0 * s.q_bar_m * s.q_bar_m;
  return s;
}

SystemParams with_cooperativity(const SystemParams& sys, double coop) {
  if (!(coop >= 0.0)) throw parameter_error("coop must be non-negative");
  SystemParams s = sys;
  s.coop = coop;
  s.g = std::sqrt(coop * s.kappa * s.Gamma_m / 4.0);
  s.q_bar_m = s.g / (s.g0 * std::sqrt(2.0 * s.n_c));
  s.Delta_c = s.Delta + s.g0 * s.q_bar_m * s.q_bar_m;
  return s;
}

double signal_drive(const SystemParams& sys, double P_s) {
  if (P_s < 0.0) throw parameter_error("P_s must be non-negative");
  return std::sqrt(sys.kappa * sys.eta_c * P_s / (hbar * sys.Omega_l));
}

double pump_drive(const SystemParams& sys, double P_p, std::optional<double> eta_p) {
  if (P_p < 0.0) throw parameter_error("P_p must be non-negative");
  double eta = eta_p.value_or(sys.eta_c);
  return std::sqrt(sys.kappa * eta * P_p / (2.0 * hbar * sys.Omega_l));
}

double pump_power(const SystemParams& sys, double eps_p, std::optional<double> eta_p) {
  double eta = eta_p.value_or(sys.eta_c);
  return 2.0 * hbar * sys.Omega_l * eps_p * eps_p / (sys.kappa * eta);
}

SteadyState steady_state(const SystemParams& sys, const SqueezerParams& sq) {
  if (!(sys.n_c > 0.0)) throw parameter_error("n_c must be positive");
  if (sq.G == 0.0) throw singularity_error("G", "steady state divides by G = 0");
  if (!sq.P_s) throw parameter_error("steady_state needs the signal power P_s");
  double eps = signal_drive(sys, *sq.P_s);
  if (eps == 0.0) throw singularity_error("eps_c", "signal drive is zero");
  double Phi = sq.Phi.value_or(0.0);
  double e = eps / std::sqrt(sys.n_c);

  SteadyState out;
  out.cos_theta_check = (sys.kappa - 2.0 * e * std::cos(Phi)) / (4.0 * sq.G);
  out.q_bar_sq = (sys.Delta_c - e * std::sin(Phi) - 2.0 * sq.G * std::sin(sq.theta)) / sys.g0;
  out.consistent = std::abs(out.cos_theta_check) <= 1.0 + 1e-12;
  if (out.q_bar_sq < 0.0)
    throw domain_error("q_bar_m^2", "negative steady-state displacement (unphysical configuration)");
  return out;
}

double matched_signal_power(const SystemParams& sys, const SqueezerParams& sq) {
  if (!(sys.eta_c > 0.0)) throw parameter_error("eta_c must be positive");
  double k = sys.kappa, G = sq.G;
  double bracket = (k - 4.0 * G) * (k - 4.0 * G) + 8.0 * G * k * (1.0 - std::cos(sq.theta));
  return hbar * sys.Omega_l * sys.n_c / (4.0 * k * sys.eta_c) * bracket;
}

double matched_signal_phase(const SystemParams& sys, const SqueezerParams& sq) {
  return std::atan2(-4.0 * sq.G * std::sin(sq.theta), sys.kappa - 4.0 * sq.G * std::cos(sq.theta));
}

}  // namespace sqom
