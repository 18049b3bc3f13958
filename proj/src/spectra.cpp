#include "sqom/spectra.hpp"

#include <cmath>
#include <limits>

#include "sqom/constants.hpp"
#include "sqom/errors.hpp"

namespace sqom {

namespace {

double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

double wrap_half_turn(double phi) {
  // map to (-pi/2, pi/2]; n_add and R_m have period pi in phi
  phi = std::remainder(phi, pi);
  if (phi <= -pi / 2) phi += pi;
  return phi;
}

double vacuum_part(const TransferMatrix& L, double c, double s) {
  double v = 0.0;
  for (int j = 0; j < 4; ++j) v += std::norm(L(0, j) * c + L(1, j) * s);
  return 0.5 * v;
}

}  // namespace

OutputSpectra raw_output_spectra(const SystemParams& sys, const TransferCoefficients& t) {
  NoiseKernels k;
  double U_minus = std::norm(t.A_minus) + std::norm(t.B_minus);
  double U_plus = std::norm(t.A_plus) + std::norm(t.B_plus);
  double V_minus = std::norm(t.C_minus) + std::norm(t.D_minus);
  double V_plus = std::norm(t.C_plus) + std::norm(t.D_plus);
  cplx U_si = t.A_minus * std::conj(t.A_plus) + t.B_minus * std::conj(t.B_plus);
  cplx U_cr = t.B_minus * std::conj(t.A_plus) - t.A_minus * std::conj(t.B_plus);
  cplx V_si = t.C_minus * std::conj(t.C_plus) + t.D_minus * std::conj(t.D_plus);
  cplx V_cr = t.D_minus * std::conj(t.C_plus) - t.C_minus * std::conj(t.D_plus);
  k.K_minus = U_minus + V_minus;
  k.K_plus = U_plus + V_plus;
  k.K_cr = U_cr + V_cr;
  k.K_si = U_si + V_si;
  k.R_minus = std::norm(t.N_minus);
  k.R_plus = std::norm(t.N_plus);
  k.R_si = std::conj(t.N_plus) * t.N_minus;

  OutputSpectra s;
  s.Omega = t.Omega;
  s.kernels = k;
  s.S_qq = 0.5 * k.K_minus + k.R_minus * sys.n_bar;
  s.S_pp = 0.5 * k.K_plus + k.R_plus * sys.n_bar;
  // symmetrized <{q_out, p_out}>/2: K_cr is sum_j L_qj L_pj^*
  s.S_pq = 0.5 * k.K_cr.real() + k.R_si.real() * sys.n_bar;
  return s;
}

OutputSpectra raw_output_spectra(const SystemParams& sys, const SqueezerParams& sq, double Omega) {
  return raw_output_spectra(sys, transfer_coefficients(sys, sq, Omega));
}

double rotated_spectrum(const OutputSpectra& s, double phi) {
  double c = std::cos(phi), sn = std::sin(phi);
  return s.S_qq * c * c + s.S_pp * sn * sn + s.S_pq * std::sin(2.0 * phi);
}

double mechanical_response(const TransferCoefficients& t, double phi) {
  return std::norm(t.N_minus * std::cos(phi) + t.N_plus * std::sin(phi));
}

double mechanical_response(const SystemParams& sys, const SqueezerParams& sq, double Omega,
                           double phi) {
  return mechanical_response(transfer_coefficients(sys, sq, Omega), phi);
}

double added_noise(const TransferCoefficients& t, double phi) {
  double c = std::cos(phi), s = std::sin(phi);
  double R = mechanical_response(t, phi);
  if (!(R > 0.0)) throw singularity_error("R_m_phi", "zero mechanical response, added noise undefined");
  return vacuum_part(t.matrix(), c, s) / R;
}

double added_noise(const SystemParams& sys, const SqueezerParams& sq, double Omega, double phi) {
  return added_noise(transfer_coefficients(sys, sq, Omega), phi);
}

SpectrumPoint spectrum_point(const SystemParams& sys, const SqueezerParams& sq, double Omega,
                             double phi) {
  TransferCoefficients t = transfer_coefficients(sys, sq, Omega);
  OutputSpectra s = raw_output_spectra(sys, t);
  SpectrumPoint p;
  p.Omega = Omega;
  p.phi = phi;
  p.S_qq = s.S_qq;
  p.S_pp = s.S_pp;
  p.S_pq = s.S_pq;
  p.kernels = s.kernels;
  p.S_phi = rotated_spectrum(s, phi);
  p.R_m_phi = mechanical_response(t, phi);
  p.n_add = added_noise(t, phi);
  p.S_FF = force_psd(sys, p.n_add);
  return p;
}

PhiQuadratic phi_quadratic(const TransferCoefficients& t) {
  const TransferMatrix L = t.matrix();
  PhiQuadratic q;
  q.A.setZero();
  double u[8][2];
  for (int j = 0; j < 4; ++j) {
    u[2 * j][0] = L(0, j).real();
    u[2 * j][1] = L(1, j).real();
    u[2 * j + 1][0] = L(0, j).imag();
    u[2 * j + 1][1] = L(1, j).imag();
  }
  for (auto& v : u) {
    q.A(0, 0) += 0.5 * v[0] * v[0];
    q.A(0, 1) += 0.5 * v[0] * v[1];
    q.A(1, 1) += 0.5 * v[1] * v[1];
  }
  q.A(1, 0) = q.A(0, 1);
  // Cauchy-Binet keeps the determinants free of cancellation
  for (int a = 0; a < 8; ++a)
    for (int b = a + 1; b < 8; ++b) {
      double x = cross(u[a][0], u[a][1], u[b][0], u[b][1]);
      q.det_A += 0.25 * x * x;
    }
  double nr[2] = {t.N_minus.real(), t.N_plus.real()};
  double ni[2] = {t.N_minus.imag(), t.N_plus.imag()};
  q.B << nr[0] * nr[0] + ni[0] * ni[0], nr[0] * nr[1] + ni[0] * ni[1],
      nr[0] * nr[1] + ni[0] * ni[1], nr[1] * nr[1] + ni[1] * ni[1];
  double x = cross(nr[0], nr[1], ni[0], ni[1]);
  q.det_B = x * x;
  return q;
}

PhiExtremum min_added_noise_over_phi(const TransferCoefficients& t) {
  PhiQuadratic q = phi_quadratic(t);
  const auto& A = q.A;
  const auto& B = q.B;
  double tr = A(0, 0) * B(1, 1) + A(1, 1) * B(0, 0) - 2.0 * A(0, 1) * B(0, 1);
  if (!(tr > 0.0)) throw singularity_error("R_m_phi", "zero mechanical response, added noise undefined");
  double disc = std::max(tr * tr - 4.0 * q.det_A * q.det_B, 0.0);
  double lam = 2.0 * q.det_A / (tr + std::sqrt(disc));

  Eigen::Matrix2d P = A - lam * B;
  double n0 = std::hypot(P(0, 0), P(0, 1)), n1 = std::hypot(P(1, 0), P(1, 1));
  double vx, vy;
  if (n0 >= n1) {
    vx = -P(0, 1);
    vy = P(0, 0);
  } else {
    vx = -P(1, 1);
    vy = P(1, 0);
  }
  PhiExtremum e;
  e.phi = (n0 == 0.0 && n1 == 0.0) ? pi / 2 : wrap_half_turn(std::atan2(vy, vx));
  e.value = added_noise(t, e.phi);
  return e;
}

PhiExtremum max_response_over_phi(const TransferCoefficients& t) {
  PhiQuadratic q = phi_quadratic(t);
  const auto& B = q.B;
  double d = std::hypot(B(0, 0) - B(1, 1), 2.0 * B(0, 1));
  PhiExtremum e;
  e.value = 0.5 * (B(0, 0) + B(1, 1) + d);
  // eigenvector angle of the symmetric 2x2 matrix
  e.phi = wrap_half_turn(0.5 * std::atan2(2.0 * B(0, 1), B(0, 0) - B(1, 1)));
  return e;
}

double cooperativity_sql(const SystemParams& sys, double Omega) {
  if (Omega == 0.0) throw singularity_error("chi_m", "SQL is singular at Omega = 0");
  double chi = std::abs(sys.Omega_m / cplx(Omega * Omega, Omega * sys.Gamma_m));
  return 1.0 / (4.0 * std::sqrt(sys.eta_c) * sys.Gamma_m * chi);
}

SqlPoint sql(const SystemParams& sys, double Omega) {
  SqlPoint p;
  p.C_sql = cooperativity_sql(sys, Omega);
  p.n_add_sql = 2.0 * p.C_sql;
  p.S_FF_sql = 2.0 * hbar * sys.m_eff * sys.Gamma_m * sys.Omega_m * p.n_add_sql;
  return p;
}

double closed_form_added_noise(const SystemParams& sys, double Omega) {
  if (Omega == 0.0) throw singularity_error("chi_m", "singular at Omega = 0");
  if (!(sys.coop > 0.0)) throw singularity_error("coop", "closed form needs C > 0");
  double chi2 = std::norm(sys.Omega_m / cplx(Omega * Omega, Omega * sys.Gamma_m));
  double C = sys.coop;
  return C + 1.0 / (16.0 * sys.eta_c * C * sys.Gamma_m * sys.Gamma_m * chi2);
}

double force_psd(const SystemParams& sys, double n_add) {
  if (!(n_add >= 0.0) || !std::isfinite(n_add)) throw domain_error("n_add", "must be finite and non-negative");
  return 2.0 * hbar * sys.m_eff * sys.Gamma_m * sys.Omega_m * (sys.n_bar + n_add);
}

double thermal_psd(const SystemParams& sys, double temperature) {
  if (temperature < 0.0) throw parameter_error("temperature must be non-negative");
  return 2.0 * sys.m_eff * k_boltzmann * temperature * sys.Omega_m / sys.Q_m;
}

LinearBaseline linear_baseline_added_noise(const SystemParams& sys, double Omega) {
  LinearBaseline b;
  b.chi_s_abs = std::abs(sys.Omega_m / cplx(sys.Omega_m * sys.Omega_m - Omega * Omega,
                                            -Omega * sys.Gamma_m));
  if (!(b.chi_s_abs > 0.0) || !std::isfinite(b.chi_s_abs))
    throw singularity_error("chi_s", "Lorentzian susceptibility is not finite");
  b.C_sql = 1.0 / (4.0 * std::sqrt(sys.eta_c) * sys.Gamma_m * b.chi_s_abs);
  b.n_add_sql = 2.0 * b.C_sql;
  if (sys.coop > 0.0)
    b.n_add = sys.coop + 1.0 / (16.0 * sys.eta_c * sys.coop * sys.Gamma_m * sys.Gamma_m *
                                b.chi_s_abs * b.chi_s_abs);
  else
    b.n_add = std::numeric_limits<double>::infinity();
  return b;
}

}  // namespace sqom
