#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Core>

#include "sqom/configuration.hpp"

namespace sqom {

// coeffs = (M3, M2, M1, M0) of lambda^4 + M3 lambda^3 + M2 lambda^2 + M1 lambda + M0.
struct DriftModel {
  Eigen::Matrix4d M;
  std::array<double, 4> coeffs{};
  Eigen::Vector4d D_amp;  // Diag(sqrt(kappa), sqrt(kappa), 0, sqrt(2 Gamma_m))
};

DriftModel drift_matrix(const SystemParams& sys, const SqueezerParams& sq);

std::complex<double> characteristic_polynomial(const std::array<double, 4>& coeffs,
                                               const std::complex<double>& lambda);

struct RouthHurwitz {
  std::array<bool, 4> conditions{};
  bool stable = false;
  // All conditions hold except M0 == 0 exactly: a zero eigenvalue
  // (free mechanics without an optical spring).
  bool marginal = false;
  double Theta1 = 0.0;
};

RouthHurwitz routh_hurwitz(const std::array<double, 4>& coeffs);

struct ThetaValues {
  double Theta1 = 0.0;
  double Theta2 = 0.0;
  int sign1 = 0, sign2 = 0;  // +1 implies stability
};

// eps_c from sq.P_s when set, otherwise from the matched signal power.
ThetaValues theta_functions(const SystemParams& sys, const SqueezerParams& sq);

bool is_stable(const SystemParams& sys, const SqueezerParams& sq);

// G/kappa < 1/4 and -pi < theta < 0, the resonance prerequisites.
bool resonance_allowed(const SystemParams& sys, const SqueezerParams& sq);

struct BoundarySegment {
  double x0, y0, x1, y1;
};

struct StabilityMap {
  AxisRange axis1, axis2;
  std::vector<double> x, y;  // axis values
  // row-major with axis1 outer: index i * y.size() + j
  std::vector<double> Theta1, Theta2;
  std::vector<unsigned char> stable, allowed;
  std::vector<BoundarySegment> boundary;
};

StabilityMap stability_map(const Configuration& cfg, const AxisRange& a1, const AxisRange& a2,
                           int threads = 1);

// Marching squares on the zero level of a row-major field; values <= 0
// count as outside.
std::vector<BoundarySegment> marching_squares(const std::vector<double>& x,
                                              const std::vector<double>& y,
                                              const std::vector<double>& field);

}  // namespace sqom
