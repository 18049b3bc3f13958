#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "sqom/system.hpp"

namespace sqom {

struct OpoPoint {
  double P_p = 0.0;
  double G = 0.0;  // NaN outside the domain
  double tau_opo = 0.0;
  double eps_p = 0.0;
  bool in_domain = false;
};

// G = nu (tau - sqrt(tau^2 + Omega_m/(8 g0) - |eps_p|/(4 nu))).
OpoPoint squeezing_strength_from_drive(const SystemParams& sys, double nu, double Delta_p,
                                       double eps_p);
OpoPoint squeezing_strength(const SystemParams& sys, double nu, double Delta_p, double P_p,
                            std::optional<double> eta_p = {});

struct OpoThresholds {
  double P_zero_crossing = 0.0;    // G = 0
  double P_domain_boundary = 0.0;  // square-root argument = 0
  double G_max = 0.0;              // G at the domain boundary, nu tau
};

OpoThresholds opo_thresholds(const SystemParams& sys, double nu, double Delta_p,
                             std::optional<double> eta_p = {});

struct PowerCurve {
  std::vector<OpoPoint> points;
  OpoThresholds thresholds;
  std::optional<double> P_quarter_kappa;  // bisection for G = kappa/4 when bracketed
};

PowerCurve power_curve(const SystemParams& sys, double nu, double Delta_p,
                       const std::vector<double>& P_grid, std::optional<double> eta_p = {});

struct ShInputs {
  double kappa_s = 0.0, kappa_p = 0.0;
  double Delta_p = 0.0;
  double g_s = 0.0, g_p = 0.0;
  double q_bar_m = 0.0;
  double n_s = 0.0, n_p = 0.0;
  double nu = 0.0;
  double alpha_s = 0.0;
  double theta = 0.0;
  double threshold = 10.0;
};

struct ShCorrections {
  std::complex<double> kappa_s_eff;
  double Omega_m_eff = 0.0;
  std::complex<double> G_s_plus, G_s_minus;
  double Delta_prime = 0.0, G_s = 0.0, G_p = 0.0;
  double ratio_detuning = 0.0;     // Delta'/G_p
  double ratio_nonlinearity = 0.0; // nu/G_p
  std::string verdict;             // "valid", "invalid" or "trivially valid"
};

ShCorrections sh_corrections(const ShInputs& in);

}  // namespace sqom
