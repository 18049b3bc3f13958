#pragma once

#include <string>
#include <vector>

#include "sqom/system.hpp"

namespace sqom {

// One fully specified working point: system, squeezer, Fourier frequency,
// homodyne angle.
struct Configuration {
  SystemParams sys;
  SqueezerParams sq;
  double Omega = 0.0;
  double phi = 0.0;
};

enum class Axis { phi, C_over_CSQL, G_over_kappa, theta };

Axis parse_axis(const std::string& name);
std::string axis_name(Axis a);

double axis_value(const Configuration& cfg, Axis a);
Configuration with_axis(const Configuration& cfg, Axis a, double value);

// Grid along one axis. log spacing needs lo and hi of the same sign.
struct AxisRange {
  Axis axis = Axis::phi;
  double lo = 0.0, hi = 0.0;
  int points = 1;
  bool log = false;

  std::vector<double> values() const;
  double at(int i) const;
};

}  // namespace sqom
