#include "sqom/configuration.hpp"

#include <cmath>

#include "sqom/errors.hpp"
#include "sqom/spectra.hpp"

namespace sqom {

Axis parse_axis(const std::string& name) {
  if (name == "phi") return Axis::phi;
  if (name == "C" || name == "C_over_CSQL") return Axis::C_over_CSQL;
  if (name == "G" || name == "G_over_kappa") return Axis::G_over_kappa;
  if (name == "theta") return Axis::theta;
  throw parameter_error("unknown axis '" + name + "' (expected phi, C_over_CSQL, G_over_kappa, theta)");
}

std::string axis_name(Axis a) {
  switch (a) {
    case Axis::phi: return "phi";
    case Axis::C_over_CSQL: return "C_over_CSQL";
    case Axis::G_over_kappa: return "G_over_kappa";
    case Axis::theta: return "theta";
  }
  return "?";
}

double axis_value(const Configuration& cfg, Axis a) {
  switch (a) {
    case Axis::phi: return cfg.phi;
    case Axis::C_over_CSQL: return cfg.sys.coop / cooperativity_sql(cfg.sys, cfg.Omega);
    case Axis::G_over_kappa: return cfg.sq.G / cfg.sys.kappa;
    case Axis::theta: return cfg.sq.theta;
  }
  return 0.0;
}

Configuration with_axis(const Configuration& cfg, Axis a, double value) {
  Configuration out = cfg;
  switch (a) {
    case Axis::phi: out.phi = value; break;
    case Axis::C_over_CSQL:
      out.sys = with_cooperativity(cfg.sys, value * cooperativity_sql(cfg.sys, cfg.Omega));
      break;
    case Axis::G_over_kappa:
      if (value < 0.0) throw parameter_error("G_over_kappa must be non-negative");
      out.sq.G = value * cfg.sys.kappa;
      break;
    case Axis::theta: out.sq.theta = value; break;
  }
  return out;
}

double AxisRange::at(int i) const {
  if (points <= 1) return lo;
  double u = static_cast<double>(i) / (points - 1);
  if (log) return lo * std::pow(hi / lo, u);
  return lo + (hi - lo) * u;
}

std::vector<double> AxisRange::values() const {
  if (points < 1) throw parameter_error("axis " + axis_name(axis) + " needs at least one point");
  if (log && !(lo * hi > 0.0))
    throw parameter_error("log axis " + axis_name(axis) + " needs bounds of the same sign");
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i) v[i] = at(i);
  return v;
}

}  // namespace sqom
