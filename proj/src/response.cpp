#include "sqom/response.hpp"

#include <cmath>

#include "sqom/errors.hpp"

namespace sqom {

namespace {
const cplx I(0.0, 1.0);
}

TransferMatrix TransferCoefficients::matrix() const {
  TransferMatrix L;
  L << A_minus, B_minus, C_minus, D_minus, N_minus,
      -B_plus, A_plus, -D_plus, C_plus, N_plus;
  return L;
}

TransferCoefficients susceptibilities(const SystemParams& sys, const SqueezerParams& sq,
                                      double Omega) {
  if (Omega == 0.0) throw singularity_error("chi_m", "mechanical susceptibility is singular at Omega = 0");
  TransferCoefficients t;
  t.Omega = Omega;
  const double W = Omega;
  t.chi_m = -sys.Omega_m / cplx(W * W, W * sys.Gamma_m);
  t.chi_s = sys.Omega_m / cplx(sys.Omega_m * sys.Omega_m - W * W, -W * sys.Gamma_m);
  const double s = std::sin(sq.theta), c = std::cos(sq.theta);
  t.sigma_plus = sys.Delta + 2.0 * sq.G * s;
  t.sigma_minus = sys.Delta - 2.0 * sq.G * s;
  t.rho_plus = sys.kappa / 2.0 + 2.0 * sq.G * c;
  t.rho_minus = sys.kappa / 2.0 - 2.0 * sq.G * c;
  t.chi_plus = 1.0 / cplx(t.rho_plus, -W);
  t.chi_minus = 1.0 / cplx(t.rho_minus, -W);
  return t;
}

TransferCoefficients transfer_coefficients(const SystemParams& sys, const SqueezerParams& sq,
                                           double Omega) {
  TransferCoefficients t = susceptibilities(sys, sq, Omega);
  const double k = sys.kappa, eta = sys.eta_c;
  const double loss = std::sqrt(eta * (1.0 - eta));
  const cplx chipm = t.chi_plus * t.chi_minus;

  t.tau_Omega = t.sigma_minus - 4.0 * sys.g * sys.g * t.chi_m;
  cplx den = 1.0 + t.tau_Omega * t.sigma_plus * chipm;
  if (den == 0.0) throw singularity_error("rho_Omega", "denominator 1 + tau sigma_+ chi_+ chi_- vanishes");
  t.rho_Omega = 1.0 / den;

  const cplx kr = k * t.rho_Omega;
  t.A_plus = kr * t.chi_plus * eta - 1.0;
  t.A_minus = kr * t.chi_minus * eta - 1.0;
  t.B_plus = kr * t.tau_Omega * chipm * eta;
  t.B_minus = t.sigma_plus * kr * chipm * eta;  // sigma_+ B_+ / tau without the pole
  t.C_plus = kr * t.chi_plus * loss;
  t.C_minus = kr * t.chi_minus * loss;
  t.D_plus = kr * t.tau_Omega * chipm * loss;
  t.D_minus = t.sigma_plus * kr * chipm * loss;
  t.N_plus = 2.0 * t.rho_Omega * sys.g * t.chi_plus * t.chi_m *
             std::sqrt(2.0 * k * eta * sys.Gamma_m);
  t.N_minus = t.sigma_plus * t.chi_minus * t.N_plus;
  return t;
}

cplx effective_susceptibility(const SystemParams& sys, const SqueezerParams& sq, double Omega) {
  if (Omega == 0.0) throw singularity_error("chi_m", "mechanical susceptibility is singular at Omega = 0");
  const double d = Omega - sys.Delta;
  const double den = sys.kappa * sys.kappa - 16.0 * sq.G * sq.G + 4.0 * d * d;
  if (den == 0.0) throw singularity_error("Sigma", "self-energy pole (G = kappa/4 at Omega = Delta)");
  const double Sigma = 16.0 * sys.g * sys.g * (d - 2.0 * sq.G * std::sin(sq.theta)) / den;
  const cplx chi_m = -sys.Omega_m / cplx(Omega * Omega, Omega * sys.Gamma_m);
  return 1.0 / (sys.m_eff * sys.Omega_m * (1.0 / chi_m + Sigma));
}

}  // namespace sqom
