#pragma once

#include <Eigen/Core>

#include "sqom/system.hpp"

namespace sqom {

struct CovarianceState {
  Eigen::MatrixXd V;       // ordering (q_c, p_c, q_m, p_m) for the full system
  Eigen::MatrixXd D_diff;  // right-hand side used in M V + V M^T = -D_diff
  double residual = 0.0;   // ||M V + V M^T + D|| / ||D||, Frobenius, on the extended-precision solution
  // n_bar < 1: the thermal variance convention (n_bar vs n_bar + 1/2) matters.
  bool low_occupancy = false;
};

// Diag(kappa/2, kappa/2, 0, 2 Gamma_m n_bar): amplitude * variance * amplitude^T.
Eigen::Matrix4d diffusion_matrix(const SystemParams& sys, const SqueezerParams& sq);

// Generic n x n solve (n <= 8). Throws stability_error when M has an
// eigenvalue with non-negative real part (marginal when it is zero within
// 1e-14 ||M||). The vectorized system is solved in binary128.
CovarianceState lyapunov_solve(const Eigen::MatrixXd& M, const Eigen::MatrixXd& D);

// Full four-mode state. Stability is decided by the Routh-Hurwitz test on the
// closed-form coefficients, so g = 0 or G = 0 on resonance is reported as marginal.
CovarianceState lyapunov_solve(const SystemParams& sys, const SqueezerParams& sq);

// exp(-psi V^-1 psi / 2) / (pi^2 sqrt(det V)) for a 4x4 V.
double wigner(const Eigen::Matrix4d& V, const Eigen::Vector4d& psi);

Eigen::Matrix2d marginal(const Eigen::MatrixXd& V, int i, int j);

// Unit-normalized density of a two-dimensional marginal.
double wigner_marginal(const Eigen::Matrix2d& V2, const Eigen::Vector2d& x);

// 10 lg sqrt(S_sql / S_phi), in dB.
double quantum_advantage(double S_sql, double S_phi);

}  // namespace sqom
