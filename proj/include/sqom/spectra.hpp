#pragma once

#include <Eigen/Core>

#include "sqom/response.hpp"

namespace sqom {

// K_cr and K_si are kept complex: K_cr = U_cr + V_cr, K_si = U_si + V_si.
struct NoiseKernels {
  double K_minus = 0.0, K_plus = 0.0;
  cplx K_cr, K_si;
  double R_minus = 0.0, R_plus = 0.0;
  cplx R_si;  // N_+^* N_-
};

struct OutputSpectra {
  double Omega = 0.0;
  double S_qq = 0.0, S_pp = 0.0, S_pq = 0.0;
  NoiseKernels kernels;
};

struct SpectrumPoint {
  double Omega = 0.0, phi = 0.0;
  double S_qq = 0.0, S_pp = 0.0, S_pq = 0.0;
  NoiseKernels kernels;
  double S_phi = 0.0;  // rotated quadrature spectrum
  double R_m_phi = 0.0;
  double n_add = 0.0;
  double S_FF = 0.0;
};

OutputSpectra raw_output_spectra(const SystemParams& sys, const TransferCoefficients& t);
OutputSpectra raw_output_spectra(const SystemParams& sys, const SqueezerParams& sq, double Omega);

double rotated_spectrum(const OutputSpectra& s, double phi);

double mechanical_response(const TransferCoefficients& t, double phi);
double mechanical_response(const SystemParams& sys, const SqueezerParams& sq, double Omega,
                           double phi);

// Vacuum part of the rotated spectrum over R_m^phi. Summed as |r_j|^2 per
// input port, which equals the kernel expression but avoids cancellation.
double added_noise(const TransferCoefficients& t, double phi);
double added_noise(const SystemParams& sys, const SqueezerParams& sq, double Omega, double phi);

SpectrumPoint spectrum_point(const SystemParams& sys, const SqueezerParams& sq, double Omega,
                             double phi);

// n_add(phi) = (v^T A v)/(v^T B v) with v = (cos phi, sin phi).
struct PhiQuadratic {
  Eigen::Matrix2d A;  // vacuum noise
  Eigen::Matrix2d B;  // mechanical response
  double det_A = 0.0, det_B = 0.0;
};

PhiQuadratic phi_quadratic(const TransferCoefficients& t);

struct PhiExtremum {
  double phi = 0.0;  // in (-pi/2, pi/2]
  double value = 0.0;
};

PhiExtremum min_added_noise_over_phi(const TransferCoefficients& t);
PhiExtremum max_response_over_phi(const TransferCoefficients& t);

struct SqlPoint {
  double n_add_sql = 0.0;
  double S_FF_sql = 0.0;
  double C_sql = 0.0;
};

SqlPoint sql(const SystemParams& sys, double Omega);
double cooperativity_sql(const SystemParams& sys, double Omega);

// Standard-phase closed form for G = 0, Delta = 0.
double closed_form_added_noise(const SystemParams& sys, double Omega);

double force_psd(const SystemParams& sys, double n_add);
double thermal_psd(const SystemParams& sys, double temperature);

struct LinearBaseline {
  double n_add = 0.0;
  double n_add_sql = 0.0;
  double C_sql = 0.0;
  double chi_s_abs = 0.0;
};

LinearBaseline linear_baseline_added_noise(const SystemParams& sys, double Omega);

}  // namespace sqom
