#pragma once

#include <cmath>
#include <complex>

#include "sqom/constants.hpp"
#include "sqom/scenario.hpp"

namespace fixture {

// Reference device at G = 0.246 kappa, C = 0.505 C_SQL, theta = -1e-4,
// Omega = 2 pi 100 Hz, phi = pi/2.
inline sqom::Configuration reference() { return sqom::resolve(sqom::reference_scenario()); }

inline sqom::Configuration reference_without_squeezing() {
  sqom::Scenario s = sqom::reference_scenario();
  s.G_over_kappa = 0.0;
  s.sq.theta = 0.0;
  return sqom::resolve(s);
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double crel(std::complex<double> a, std::complex<double> b, double scale) {
  return std::abs(a - b) / std::max(std::abs(b), scale);
}

}  // namespace fixture
