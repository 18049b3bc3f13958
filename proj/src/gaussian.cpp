#include "sqom/gaussian.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "sqom/constants.hpp"
#include "sqom/errors.hpp"
#include "sqom/stability.hpp"

namespace sqom {

namespace {

using quad = __float128;

quad qabs(quad x) { return x < 0 ? -x : x; }

// Gaussian elimination with partial pivoting, in place; solution left in b.
void solve_dense(std::vector<quad>& a, std::vector<quad>& b, int n) {
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (qabs(a[i * n + k]) > qabs(a[p * n + k])) p = i;
    if (a[p * n + k] == 0) throw singularity_error("M", "vectorized Lyapunov operator is singular");
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
      std::swap(b[k], b[p]);
    }
    for (int i = k + 1; i < n; ++i) {
      quad f = a[i * n + k] / a[k * n + k];
      if (f == 0) continue;
      for (int j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
      b[i] -= f * b[k];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    quad s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a[i * n + j] * b[j];
    b[i] = s / a[i * n + i];
  }
}

CovarianceState solve_unchecked(const Eigen::MatrixXd& M, const Eigen::MatrixXd& D) {
  const int n = static_cast<int>(M.rows());
  const int N = n * n;
  // unknown V(r, c) at index r * n + c; equation (r, c) of M V + V M^T = -D
  std::vector<quad> a(static_cast<size_t>(N) * N, 0), b(N, 0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      int row = r * n + c;
      for (int k = 0; k < n; ++k) {
        a[row * N + k * n + c] += static_cast<quad>(M(r, k));
        a[row * N + r * n + k] += static_cast<quad>(M(c, k));
      }
      b[row] = -static_cast<quad>(D(r, c));
    }
  solve_dense(a, b, N);

  std::vector<quad> V(N);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) V[r * n + c] = (b[r * n + c] + b[c * n + r]) / 2;

  quad res2 = 0, d2 = 0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      quad s = static_cast<quad>(D(r, c));
      for (int k = 0; k < n; ++k)
        s += static_cast<quad>(M(r, k)) * V[k * n + c] + V[r * n + k] * static_cast<quad>(M(c, k));
      res2 += s * s;
      d2 += static_cast<quad>(D(r, c)) * static_cast<quad>(D(r, c));
    }

  CovarianceState out;
  out.V.resize(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out.V(r, c) = static_cast<double>(V[r * n + c]);
  out.D_diff = D;
  double d = std::sqrt(static_cast<double>(d2));
  out.residual = std::sqrt(static_cast<double>(res2)) / (d > 0.0 ? d : 1.0);
  return out;
}

}  // namespace

Eigen::Matrix4d diffusion_matrix(const SystemParams& sys, const SqueezerParams&) {
  Eigen::Vector4d amp(std::sqrt(sys.kappa), std::sqrt(sys.kappa), 0.0, std::sqrt(2.0 * sys.Gamma_m));
  Eigen::Vector4d var(0.5, 0.5, 0.0, sys.n_bar);
  return (amp.array() * var.array() * amp.array()).matrix().asDiagonal();
}

CovarianceState lyapunov_solve(const Eigen::MatrixXd& M, const Eigen::MatrixXd& D) {
  if (M.rows() != M.cols() || D.rows() != M.rows() || D.cols() != M.cols())
    throw parameter_error("lyapunov_solve: M and D must be square and of equal size");
  if (M.rows() < 1 || M.rows() > 8) throw parameter_error("lyapunov_solve supports sizes 1..8");
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  double max_re = es.eigenvalues().real().maxCoeff();
  double tol = 1e-14 * M.cwiseAbs().maxCoeff();
  if (std::abs(max_re) <= tol)
    throw stability_error(true, "drift matrix has a zero eigenvalue; no stationary covariance");
  if (max_re > 0.0) throw stability_error(false, "drift matrix is unstable; no stationary covariance");
  return solve_unchecked(M, D);
}

CovarianceState lyapunov_solve(const SystemParams& sys, const SqueezerParams& sq) {
  DriftModel d = drift_matrix(sys, sq);
  RouthHurwitz rh = routh_hurwitz(d.coeffs);
  if (rh.marginal)
    throw stability_error(true, "marginally stable drift (zero eigenvalue); no stationary covariance");
  if (!rh.stable) throw stability_error(false, "unstable drift; no stationary covariance");
  CovarianceState s = solve_unchecked(d.M, diffusion_matrix(sys, sq));
  s.low_occupancy = sys.n_bar < 1.0;
  return s;
}

double wigner(const Eigen::Matrix4d& V, const Eigen::Vector4d& psi) {
  Eigen::LLT<Eigen::Matrix4d> llt(V);
  if (llt.info() != Eigen::Success) throw singularity_error("V", "covariance is not positive definite");
  double det = llt.matrixLLT().diagonal().prod();
  det *= det;
  double quadform = psi.dot(llt.solve(psi));
  return std::exp(-0.5 * quadform) / (pi * pi * std::sqrt(det));
}

Eigen::Matrix2d marginal(const Eigen::MatrixXd& V, int i, int j) {
  if (i < 0 || j < 0 || i >= V.rows() || j >= V.rows() || i == j)
    throw parameter_error("marginal: invalid index pair");
  Eigen::Matrix2d m;
  m << V(i, i), V(i, j), V(j, i), V(j, j);
  return m;
}

double wigner_marginal(const Eigen::Matrix2d& V2, const Eigen::Vector2d& x) {
  double det = V2.determinant();
  if (!(det > 0.0) || !(V2(0, 0) > 0.0)) throw singularity_error("V", "marginal covariance is not positive definite");
  double quadform = x.dot(V2.inverse() * x);
  return std::exp(-0.5 * quadform) / (two_pi * std::sqrt(det));
}

double quantum_advantage(double S_sql, double S_phi) {
  if (!(S_sql > 0.0) || !(S_phi > 0.0)) throw parameter_error("quantum_advantage needs positive PSDs");
  return 10.0 * std::log10(std::sqrt(S_sql / S_phi));
}

}  // namespace sqom
