#pragma once

#include <complex>

#include <Eigen/Core>

#include "sqom/system.hpp"

namespace sqom {

using cplx = std::complex<double>;
using TransferMatrix = Eigen::Matrix<cplx, 2, 5>;

struct TransferCoefficients {
  double Omega = 0.0;
  cplx chi_m, chi_s, chi_plus, chi_minus;
  double sigma_plus = 0.0, sigma_minus = 0.0;
  double rho_plus = 0.0, rho_minus = 0.0;
  cplx tau_Omega, rho_Omega;
  cplx A_plus, A_minus, B_plus, B_minus, C_plus, C_minus, D_plus, D_minus, N_plus, N_minus;

  // Rows q_out, p_out; columns q_in, p_in, q_0, p_0, F_in.
  TransferMatrix matrix() const;
};

// Fills chi_m, chi_s, chi_pm, sigma_pm, rho_pm only.
TransferCoefficients susceptibilities(const SystemParams& sys, const SqueezerParams& sq,
                                      double Omega);

TransferCoefficients transfer_coefficients(const SystemParams& sys, const SqueezerParams& sq,
                                           double Omega);

// Units s^2/kg.
cplx effective_susceptibility(const SystemParams& sys, const SqueezerParams& sq, double Omega);

}  // namespace sqom
