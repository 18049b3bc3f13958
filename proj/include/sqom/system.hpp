#pragma once

#include <optional>

namespace sqom {

// User-facing inputs, SI units, angular frequencies in rad/s.
// Unset optionals are either derived or defaulted by derive_params.
struct RawParams {
  std::optional<double> Omega_m;
  std::optional<double> Q_m;
  std::optional<double> Gamma_m;
  std::optional<double> m_eff;
  std::optional<double> kappa;
  std::optional<double> eta_c;
  std::optional<double> g0;
  std::optional<double> g_om;
  std::optional<double> Delta;
  std::optional<double> n_bar;
  std::optional<double> temperature;
  std::optional<double> lambda_s;
  std::optional<double> cavity_length;
  std::optional<double> membrane_reflectivity;
  std::optional<double> q_bar_m;
  std::optional<double> coop;
  std::optional<double> n_c;  // override of Omega_m/(2 g0)
};

struct SystemParams {
  double Omega_m = 0.0;
  double Q_m = 0.0;
  double Gamma_m = 0.0;
  double m_eff = 0.0;
  double kappa = 0.0;
  double eta_c = 1.0;
  double g0 = 0.0;
  std::optional<double> g_om;
  double Delta = 0.0;
  double Delta_c = 0.0;  // Delta + g0 q_bar_m^2
  double n_bar = 0.0;
  std::optional<double> temperature;
  double lambda_s = 1560e-9;
  double Omega_l = 0.0;
  std::optional<double> cavity_length;
  std::optional<double> membrane_reflectivity;
  double q_zp = 0.0;
  double n_c = 0.0;
  double q_bar_m = 0.0;
  double g = 0.0;
  double coop = 0.0;
};

struct SqueezerParams {
  double G = 0.0;
  double theta = 0.0;
  std::optional<double> nu;
  std::optional<double> Delta_p;
  std::optional<double> P_p;
  std::optional<double> eta_p;  // defaults to eta_c
  std::optional<double> Phi;
  std::optional<double> P_s;
};

SystemParams derive_params(const RawParams& raw);

// Same system with a different cooperativity; g and q_bar_m re-derived.
SystemParams with_cooperativity(const SystemParams& sys, double coop);

double zero_point_displacement(double m_eff, double Omega_m);
double thermal_occupancy(double Omega_m, double temperature);
double quadratic_coupling(double reflectivity, double lambda_s, double length);

// |eps_c| = sqrt(kappa eta_c P_s / (hbar Omega_l)).
double signal_drive(const SystemParams& sys, double P_s);
// |eps_p| = sqrt(kappa eta_p P_p / (2 hbar Omega_l)).
double pump_drive(const SystemParams& sys, double P_p, std::optional<double> eta_p = {});
double pump_power(const SystemParams& sys, double eps_p, std::optional<double> eta_p = {});

struct SteadyState {
  double cos_theta_check = 0.0;
  double q_bar_sq = 0.0;
  bool consistent = false;  // |cos_theta_check| <= 1
};

SteadyState steady_state(const SystemParams& sys, const SqueezerParams& sq);

double matched_signal_power(const SystemParams& sys, const SqueezerParams& sq);

// Signal-laser phase that, at the matched power, reproduces sq.theta in the
// steady state and leaves q_bar_m^2 = Delta_c/g0.
double matched_signal_phase(const SystemParams& sys, const SqueezerParams& sq);

}  // namespace sqom
