#include "sqom/opo.hpp"

#include <cmath>
#include <limits>

#include "sqom/errors.hpp"

namespace sqom {

namespace {

double opo_tau(const SystemParams& sys, double nu, double Delta_p) {
  return std::sqrt(sys.kappa * sys.kappa + 4.0 * Delta_p * Delta_p) / (16.0 * nu);
}

}  // namespace

OpoPoint squeezing_strength_from_drive(const SystemParams& sys, double nu, double Delta_p,
                                       double eps_p) {
  if (nu == 0.0) throw parameter_error("nu must be nonzero");
  if (!(nu > 0.0)) throw parameter_error("nu must be positive");
  OpoPoint p;
  p.eps_p = eps_p;
  p.tau_opo = opo_tau(sys, nu, Delta_p);
  // square-root argument minus tau^2; exactly zero at eps_p = nu Omega_m/(2 g0)
  const double delta = (nu * sys.Omega_m / (2.0 * sys.g0) - eps_p) / (4.0 * nu);
  const double arg = p.tau_opo * p.tau_opo + delta;
  p.in_domain = arg >= 0.0;
  if (p.in_domain)
    p.G = -nu * delta / (p.tau_opo + std::sqrt(arg));
  else
    p.G = std::numeric_limits<double>::quiet_NaN();
  return p;
}

OpoPoint squeezing_strength(const SystemParams& sys, double nu, double Delta_p, double P_p,
                            std::optional<double> eta_p) {
  if (P_p < 0.0) throw parameter_error("P_p must be non-negative");
  OpoPoint p = squeezing_strength_from_drive(sys, nu, Delta_p, pump_drive(sys, P_p, eta_p));
  p.P_p = P_p;
  return p;
}

OpoThresholds opo_thresholds(const SystemParams& sys, double nu, double Delta_p,
                             std::optional<double> eta_p) {
  if (!(nu > 0.0)) throw parameter_error("nu must be positive");
  OpoThresholds t;
  const double tau = opo_tau(sys, nu, Delta_p);
  const double eps0 = nu * sys.Omega_m / (2.0 * sys.g0);
  t.P_zero_crossing = pump_power(sys, eps0, eta_p);
  t.P_domain_boundary = pump_power(sys, eps0 + 4.0 * nu * tau * tau, eta_p);
  t.G_max = nu * tau;
  return t;
}

PowerCurve power_curve(const SystemParams& sys, double nu, double Delta_p,
                       const std::vector<double>& P_grid, std::optional<double> eta_p) {
  if (P_grid.empty()) throw parameter_error("power grid is empty");
  for (size_t i = 1; i < P_grid.size(); ++i)
    if (!(P_grid[i] > P_grid[i - 1])) throw parameter_error("power grid must be strictly ascending");
  PowerCurve c;
  c.thresholds = opo_thresholds(sys, nu, Delta_p, eta_p);
  c.points.reserve(P_grid.size());
  for (double P : P_grid) c.points.push_back(squeezing_strength(sys, nu, Delta_p, P, eta_p));

  const double target = sys.kappa / 4.0;
  auto excess = [&](double P) { return squeezing_strength(sys, nu, Delta_p, P, eta_p).G - target; };
  for (size_t i = 1; i < c.points.size(); ++i) {
    const OpoPoint& a = c.points[i - 1];
    const OpoPoint& b = c.points[i];
    if (!a.in_domain || !b.in_domain) continue;
    if ((a.G - target) * (b.G - target) > 0.0) continue;
    double lo = a.P_p, hi = b.P_p;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      double mid = 0.5 * (lo + hi);
      if (excess(mid) < 0.0)
        lo = mid;
      else
        hi = mid;
    }
    c.P_quarter_kappa = 0.5 * (lo + hi);
    break;
  }
  return c;
}

ShCorrections sh_corrections(const ShInputs& in) {
  if (!(in.kappa_p > 0.0)) throw parameter_error("kappa_p must be positive");
  using C = std::complex<double>;
  ShCorrections r;
  r.Delta_prime = in.Delta_p - in.g_p * in.q_bar_m * in.q_bar_m;
  r.G_s = in.g_s * in.q_bar_m * std::sqrt(2.0 * in.n_s);
  r.G_p = in.g_p * in.q_bar_m * std::sqrt(2.0 * in.n_p);
  const C den(in.kappa_p, 2.0 * r.Delta_prime);
  r.kappa_s_eff = in.kappa_s + 16.0 * in.nu * in.nu * in.n_s / den;
  r.Omega_m_eff = -16.0 * r.G_p * r.G_p * r.Delta_prime /
                  (in.kappa_p * in.kappa_p + 4.0 * r.Delta_prime * r.Delta_prime);
  const C shift = 4.0 * in.nu * in.alpha_s * r.G_p / den;
  r.G_s_plus = r.G_s + shift * std::polar(1.0, in.theta);
  r.G_s_minus = r.G_s - shift * std::polar(1.0, -in.theta);
  if (r.G_p == 0.0) {
    r.ratio_detuning = std::numeric_limits<double>::infinity();
    r.ratio_nonlinearity = 0.0;
    r.verdict = "trivially valid";
  } else {
    r.ratio_detuning = r.Delta_prime / r.G_p;
    r.ratio_nonlinearity = in.nu / r.G_p;
    bool ok = r.ratio_detuning > in.threshold && r.ratio_nonlinearity < 1.0 / in.threshold;
    r.verdict = ok ? "valid" : "invalid";
  }
  return r;
}

}  // namespace sqom
