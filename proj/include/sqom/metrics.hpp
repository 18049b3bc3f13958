#pragma once

#include <string>
#include <vector>

#include "sqom/configuration.hpp"

namespace sqom {

// SN = 1 + S_sig / S_FF at cfg.phi.
double snr(const Configuration& cfg, double S_sig);

// SN over the SQL-limited SN at the same n_bar.
double snr_enhancement(const Configuration& cfg, double S_sig);

enum class Objective { n_add, S_FF, SN, R_m };
enum class StabilityPolicy { strict, allow_marginal };

Objective parse_objective(const std::string& name);
std::string objective_name(Objective o);

struct AxisBounds {
  Axis axis = Axis::phi;
  double lo = 0.0, hi = 0.0;
  bool log = false;
};

struct OptimizeOptions {
  Objective objective = Objective::n_add;
  std::vector<AxisBounds> axes;
  int resolution = 128;   // grid points per axis
  int iterations = 48;    // golden-section iterations per line search
  int max_sweeps = 24;
  double tolerance = 1e-10;
  StabilityPolicy policy = StabilityPolicy::strict;
  double S_sig = 0.0;     // used by the SN objective
  int threads = 1;
};

struct OptimumReport {
  std::string objective;
  double value = 0.0;
  double n_add = 0.0;
  Configuration at;
  std::vector<Axis> axes;
  bool stability_verified = false;
  bool marginal = false;
  bool phi_closed_form = false;  // phi eliminated through the 2x2 eigenproblem
  int grid_resolution = 0;
  long grid_points = 0;
  long feasible_points = 0;
  int refinement_iterations = 0;
  int sweeps = 0;
};

// Coarse grid filtered by the stability predicate, then coordinate descent
// with golden-section line searches. When phi spans a full period it is
// minimized exactly at every evaluation instead of gridded.
OptimumReport optimize(const Configuration& base, const OptimizeOptions& opt);

// Default C/C_SQL bracket used by the enhancement metrics.
inline constexpr double default_c_min = 1e-3;
inline constexpr double default_c_max = 0.7;

struct ChiOptions {
  std::vector<AxisBounds> squeezed_axes;   // empty: phi and C_over_CSQL
  std::vector<AxisBounds> reference_axes;  // empty: phi and C_over_CSQL
  int resolution = 128;
  int threads = 1;
};

struct ChiResult {
  double chi = 0.0;
  OptimumReport reference;  // G = 0
  OptimumReport squeezed;
};

ChiResult enhancement_chi(const Configuration& cfg, const ChiOptions& opt = {});

// Depth of an optimized working point below the G = 0 reference, in dB of
// added noise. same_phi: G = 0 minimized over C at the point's phi.
// standard_phase: G = 0 at phi = pi/2 and C = C_SQL, i.e. the SQL.
struct SqueezingDepth {
  double same_phi_dB = 0.0;
  double standard_phase_dB = 0.0;
  double n_add = 0.0;
  double n_add_same_phi = 0.0;
  double n_add_sql = 0.0;
  OptimumReport reference;  // the same_phi minimization
};

SqueezingDepth squeezing_depth(const Configuration& point, const AxisBounds& C_bounds = {
                                   Axis::C_over_CSQL, default_c_min, default_c_max, true},
                               int resolution = 128, int threads = 1);

struct XiOptions {
  AxisBounds G{Axis::G_over_kappa, 0.0, 0.25, false};
  AxisBounds C{Axis::C_over_CSQL, default_c_min, default_c_max, true};
  int resolution = 128;
  bool numerator_fixed_phi = false;  // restrict the numerator to phi = pi/2
  int threads = 1;
};

struct XiResult {
  double xi = 0.0;
  double max_response = 0.0, max_response_standard = 0.0;
  double G_over_kappa = 0.0, C_over_CSQL = 0.0, phi = 0.0;  // numerator argmax
  long stable_points = 0;
};

XiResult response_enhancement_xi(const Configuration& cfg, const XiOptions& opt = {});

struct VarianceResult {
  double value = 0.0;
  double error_estimate = 0.0;
  double Omega_lo = 0.0, Omega_hi = 0.0;
  long evaluations = 0;
};

// Integral of the rotated spectrum over [Omega_lo, Omega_hi] divided by 2 pi.
VarianceResult quadrature_variance(const Configuration& cfg, double Omega_lo, double Omega_hi,
                                   double rel_tol = 1e-9, int max_depth = 40);

}  // namespace sqom
