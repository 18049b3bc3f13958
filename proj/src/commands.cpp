#include "sqom/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <thread>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "sqom/constants.hpp"
#include "sqom/csv.hpp"
#include "sqom/errors.hpp"
#include "sqom/gaussian.hpp"
#include "sqom/opo.hpp"
#include "sqom/parallel.hpp"
#include "sqom/scenario.hpp"
#include "sqom/spectra.hpp"
#include "sqom/stability.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace sqom {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

struct Common {
  std::string scenario;
  std::string out = "out";
  int threads = 0;
  std::vector<std::string> sets;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--scenario", c.scenario, "scenario JSON file (default: built-in reference device)");
  sub->add_option("--out", c.out, "output directory, created if absent")->capture_default_str();
  sub->add_option("--threads", c.threads, "worker threads (0: hardware concurrency)")->check(CLI::NonNegativeNumber);
  sub->add_option("--set", c.sets, "override a scenario key, KEY=VALUE [UNIT]");
}

int thread_count(const Common& c) {
  if (c.threads > 0) return c.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

Scenario load(const Common& c) {
  Scenario s = c.scenario.empty() ? reference_scenario() : load_scenario(c.scenario);
  for (const auto& a : c.sets) {
    // n_bar and temperature are alternatives; the flag wins over the file
    if (a.rfind("n_bar=", 0) == 0) s.raw.temperature.reset();
    if (a.rfind("temperature=", 0) == 0) s.raw.n_bar.reset();
    if (a.rfind("coop=", 0) == 0 || a.rfind("q_bar_m=", 0) == 0) {
      s.C_over_CSQL.reset();
      s.raw.coop.reset();
      s.raw.q_bar_m.reset();
    }
    if (a.rfind("C_over_CSQL=", 0) == 0) {
      s.raw.coop.reset();
      s.raw.q_bar_m.reset();
    }
    if (a.rfind("G=", 0) == 0) s.G_over_kappa.reset();
    if (a.rfind("G_over_kappa=", 0) == 0) s.sq.G = 0.0;
    apply_override(s, a);
  }
  return s;
}

// Files are kept in memory until the command has finished computing, then
// written; any failure removes what was written.
class Run {
 public:
  Run(std::string command, const Common& c) : command_(std::move(command)), common_(c) {
    start_ = std::chrono::steady_clock::now();
  }

  void add(const std::string& name, std::string content) { files_.emplace_back(name, std::move(content)); }
  void add(const std::string& name, const CsvTable& t) { add(name, t.str()); }
  void add(const std::string& name, const json& j) { add(name, j.dump(2) + "\n"); }

  void commit(const json& resolved, std::ostream& out) {
    fs::path dir(common_.out);
    fs::create_directories(dir);
    fs::remove(dir / "manifest.json");
    std::vector<std::string> listed;
    try {
      for (const auto& [name, content] : files_) {
        fs::path p = dir / name;
        written_.push_back(p);
        write_file(p, content);
        listed.push_back(p.string());
      }
      double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
      json m = {{"command", command_},
                {"scenario", common_.scenario.empty() ? json("<built-in reference>") : json(common_.scenario)},
                {"overrides", common_.sets},
                {"resolved", resolved},
                {"outputs", listed},
                {"toolkit_version", toolkit_version},
                {"wall_clock_s", wall}};
      fs::path mp = dir / "manifest.json";
      written_.push_back(mp);
      write_file(mp, m.dump(2) + "\n");
    } catch (...) {
      cleanup();
      throw;
    }
    for (const auto& p : listed) out << p << "\n";
  }

 private:
  static void write_file(const fs::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << content;
    if (!f) throw std::runtime_error("write failed for " + p.string());
  }

  void cleanup() {
    std::error_code ec;
    for (const auto& p : written_) fs::remove(p, ec);
  }

  std::string command_;
  Common common_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::pair<std::string, std::string>> files_;
  std::vector<fs::path> written_;
};

json resolved_json(const Scenario& s, const Configuration& cfg) {
  json j = to_json(cfg);
  j["name"] = s.name;
  j["S_sig"] = s.S_sig;
  j["C_over_CSQL"] = axis_value(cfg, Axis::C_over_CSQL);
  j["G_over_kappa"] = axis_value(cfg, Axis::G_over_kappa);
  return j;
}

double rate(const std::string& text) { return parse_quantity("Omega", text); }
double angle(const std::string& text) { return parse_quantity("phi", text); }
double power(const std::string& text) { return parse_quantity("P_p", text); }

AxisBounds default_bounds(Axis a) {
  switch (a) {
    case Axis::phi: return {a, -pi / 2, pi / 2, false};
    case Axis::C_over_CSQL: return {a, default_c_min, default_c_max, true};
    case Axis::G_over_kappa: return {a, 0.0, 0.25, false};
    case Axis::theta: return {a, -pi, -1e-8, true};
  }
  return {};
}

AxisRange to_range(const AxisBounds& b, int points) { return AxisRange{b.axis, b.lo, b.hi, points, b.log}; }

// ---- spectrum -------------------------------------------------------------

struct SpectrumArgs {
  std::string omega_min, omega_max;
  int points = 1;
  bool linear = false;
  std::vector<std::string> phi;
  std::vector<double> phi_deg;
  bool phi_opt = false;
};

void cmd_spectrum(const Common& c, const SpectrumArgs& a, std::ostream& out) {
  Scenario s = load(c);
  Configuration cfg = resolve(s);
  if (a.points < 1) throw parameter_error("--points must be >= 1");
  double lo = a.omega_min.empty() ? cfg.Omega : rate(a.omega_min);
  double hi = a.omega_max.empty() ? (a.omega_min.empty() ? cfg.Omega : lo) : rate(a.omega_max);
  if (!(lo > 0.0 && hi > 0.0)) throw parameter_error("Omega range must exclude 0 and be positive");

  std::vector<double> phis;
  for (const auto& p : a.phi) phis.push_back(angle(p));
  for (double d : a.phi_deg) phis.push_back(d * pi / 180.0);
  if (phis.empty() && !a.phi_opt) phis.push_back(cfg.phi);

  std::vector<double> omegas = AxisRange{Axis::phi, lo, hi, a.points, !a.linear && lo != hi}.values();
  CsvTable t({"Omega_rad_s", "phi_rad", "S_qq", "S_pp", "S_pq", "R_m_phi", "n_add", "n_add_SQL",
              "S_FF_N2_Hz", "S_FF_SQL_N2_Hz"});
  for (double W : omegas) {
    SqlPoint q = sql(cfg.sys, W);
    double S_sql = force_psd(cfg.sys, q.n_add_sql);
    std::vector<double> row_phis = phis;
    if (a.phi_opt)
      row_phis.push_back(min_added_noise_over_phi(transfer_coefficients(cfg.sys, cfg.sq, W)).phi);
    for (double phi : row_phis) {
      SpectrumPoint p = spectrum_point(cfg.sys, cfg.sq, W, phi);
      t.add_row({W, phi, p.S_qq, p.S_pp, p.S_pq, p.R_m_phi, p.n_add, q.n_add_sql, p.S_FF, S_sql});
    }
  }
  Run run("spectrum", c);
  run.add("spectrum.csv", t);
  run.commit(resolved_json(s, cfg), out);
}

// ---- map / stability --------------------------------------------------------

struct MapArgs {
  std::string x = "C_over_CSQL", y = "theta";
  int resolution = 128;
  int nx = 0, ny = 0;
};

struct Grid {
  AxisRange x, y;
};

Grid make_grid(const MapArgs& a) {
  AxisBounds bx = parse_axis_bounds(a.x), by = parse_axis_bounds(a.y);
  if (bx.axis == by.axis) throw parameter_error("map axes must differ");
  int nx = a.nx > 0 ? a.nx : a.resolution, ny = a.ny > 0 ? a.ny : a.resolution;
  if (nx < 1 || ny < 1) throw parameter_error("map resolution must be >= 1");
  return {to_range(bx, nx), to_range(by, ny)};
}

CsvTable boundary_table(const StabilityMap& m) {
  CsvTable b({axis_name(m.axis1.axis) + "_0", axis_name(m.axis2.axis) + "_0",
              axis_name(m.axis1.axis) + "_1", axis_name(m.axis2.axis) + "_1"});
  for (const auto& s : m.boundary) b.add_row({s.x0, s.y0, s.x1, s.y1});
  return b;
}

void cmd_map(const Common& c, const MapArgs& a, std::ostream& out) {
  Scenario s = load(c);
  Configuration cfg = resolve(s);
  Grid g = make_grid(a);
  int threads = thread_count(c);
  StabilityMap m = stability_map(cfg, g.x, g.y, threads);
  const size_t nx = m.x.size(), ny = m.y.size();
  std::vector<double> n_add(nx * ny, nan), S_FF(nx * ny, nan), S_phi(nx * ny, nan), R(nx * ny, nan);

  parallel_for(static_cast<int>(nx), threads, [&](int i) {
    Configuration ci = with_axis(cfg, g.x.axis, m.x[i]);
    for (size_t j = 0; j < ny; ++j) {
      Configuration cij = with_axis(ci, g.y.axis, m.y[j]);
      size_t k = i * ny + j;
      try {
        SpectrumPoint p = spectrum_point(cij.sys, cij.sq, cij.Omega, cij.phi);
        n_add[k] = p.n_add;
        S_FF[k] = p.S_FF;
        S_phi[k] = p.S_phi;
        R[k] = p.R_m_phi;
      } catch (const domain_error&) {
      }
    }
  });

  std::string xn = axis_name(g.x.axis), yn = axis_name(g.y.axis);
  CsvTable t({xn, yn, "Theta1", "Theta2", "stable", "allowed", "S_phi", "R_m_phi", "n_add", "S_FF_N2_Hz"});
  for (size_t i = 0; i < nx; ++i)
    for (size_t j = 0; j < ny; ++j) {
      size_t k = i * ny + j;
      t.add_row({m.x[i], m.y[j], m.Theta1[k], m.Theta2[k], double(m.stable[k]), double(m.allowed[k]),
                 S_phi[k], R[k], n_add[k], S_FF[k]});
    }

  // per-y minimum over x inside the stable region
  CsvTable mins({yn, xn, "n_add", "S_FF_N2_Hz"});
  for (size_t j = 0; j < ny; ++j) {
    long best = -1;
    for (size_t i = 0; i < nx; ++i) {
      size_t k = i * ny + j;
      if (!m.stable[k] || !std::isfinite(S_FF[k])) continue;
      if (best < 0 || S_FF[k] < S_FF[best]) best = static_cast<long>(k);
    }
    if (best >= 0) mins.add_row({m.y[j], m.x[best / ny], n_add[best], S_FF[best]});
  }

  Run run("map", c);
  run.add("map.csv", t);
  run.add("map_boundary.csv", boundary_table(m));
  run.add("map_minima.csv", mins);
  run.commit(resolved_json(s, cfg), out);
}

void cmd_stability(const Common& c, const MapArgs& a, std::ostream& out) {
  Scenario s = load(c);
  Configuration cfg = resolve(s);
  Grid g = make_grid(a);
  StabilityMap m = stability_map(cfg, g.x, g.y, thread_count(c));
  CsvTable t({axis_name(g.x.axis), axis_name(g.y.axis), "Theta1", "Theta2", "stable", "allowed"});
  for (size_t i = 0; i < m.x.size(); ++i)
    for (size_t j = 0; j < m.y.size(); ++j) {
      size_t k = i * m.y.size() + j;
      t.add_row({m.x[i], m.y[j], m.Theta1[k], m.Theta2[k], double(m.stable[k]), double(m.allowed[k])});
    }
  RouthHurwitz rh = routh_hurwitz(drift_matrix(cfg.sys, cfg.sq).coeffs);
  json summary = {{"stable", rh.stable},
                  {"marginal", rh.marginal},
                  {"conditions", rh.conditions},
                  {"Theta1", rh.Theta1},
                  {"resonance_allowed", resonance_allowed(cfg.sys, cfg.sq)},
                  {"stable_points", std::count(m.stable.begin(), m.stable.end(), 1)},
                  {"grid_points", m.stable.size()}};
  Run run("stability", c);
  run.add("stability.csv", t);
  run.add("stability_boundary.csv", boundary_table(m));
  run.add("stability.json", summary);
  run.commit(resolved_json(s, cfg), out);
}

// ---- optimize ---------------------------------------------------------------

struct OptimizeArgs {
  std::string objective = "n_add";
  std::vector<std::string> axes;
  int resolution = 128;
  std::string policy = "strict";
  bool chi = false, xi = false, depth = false;
};

void cmd_optimize(const Common& c, const OptimizeArgs& a, std::ostream& out) {
  Scenario s = load(c);
  Configuration cfg = resolve(s);
  OptimizeOptions o;
  o.objective = parse_objective(a.objective);
  if (a.policy == "strict")
    o.policy = StabilityPolicy::strict;
  else if (a.policy == "allow_marginal")
    o.policy = StabilityPolicy::allow_marginal;
  else
    throw parameter_error("unknown policy '" + a.policy + "' (strict, allow_marginal)");
  o.resolution = a.resolution;
  o.threads = thread_count(c);
  o.S_sig = s.S_sig;
  if (a.axes.empty())
    o.axes = {default_bounds(Axis::phi), default_bounds(Axis::C_over_CSQL)};
  else
    for (const auto& ax : a.axes) o.axes.push_back(parse_axis_bounds(ax));

  OptimumReport rep = optimize(cfg, o);
  json j = to_json(rep);
  SqlPoint q = sql(rep.at.sys, rep.at.Omega);
  j["n_add_SQL"] = q.n_add_sql;
  j["S_FF_N2_Hz"] = force_psd(rep.at.sys, rep.n_add);
  j["S_FF_SQL_N2_Hz"] = force_psd(rep.at.sys, q.n_add_sql);

  if (a.depth) {
    SqueezingDepth d = squeezing_depth(rep.at, default_bounds(Axis::C_over_CSQL), a.resolution, o.threads);
    j["squeezing_depth"] = {{"same_phi_dB", d.same_phi_dB},
                            {"standard_phase_dB", d.standard_phase_dB},
                            {"n_add_reference_same_phi", d.n_add_same_phi},
                            {"n_add_SQL", d.n_add_sql}};
  }
  if (a.chi) {
    ChiOptions co;
    co.resolution = a.resolution;
    co.threads = o.threads;
    co.squeezed_axes = o.axes;
    ChiResult r = enhancement_chi(cfg, co);
    j["chi"] = {{"chi", r.chi}, {"reference", to_json(r.reference)}, {"squeezed", to_json(r.squeezed)}};
  }
  if (a.xi) {
    XiOptions xo;
    xo.resolution = a.resolution;
    xo.threads = o.threads;
    XiResult r = response_enhancement_xi(cfg, xo);
    j["xi"] = {{"xi", r.xi},
               {"max_response", r.max_response},
               {"max_response_standard", r.max_response_standard},
               {"G_over_kappa", r.G_over_kappa},
               {"C_over_CSQL", r.C_over_CSQL},
               {"phi_rad", r.phi},
               {"stable_points", r.stable_points}};
  }
  Run run("optimize", c);
  run.add("optimum.json", j);
  run.commit(resolved_json(s, cfg), out);
}

// ---- opo --------------------------------------------------------------------

struct OpoArgs {
  std::string nu, Delta_p, p_min = "1 mW", p_max = "10 W";
  int points = 200;
  bool linear = false;
};

void cmd_opo(const Common& c, const OpoArgs& a, std::ostream& out) {
  Scenario s = load(c);
  Configuration cfg = resolve(s);
  double nu = a.nu.empty() ? cfg.sq.nu.value_or(0.0) : rate(a.nu);
  double Dp = a.Delta_p.empty() ? cfg.sq.Delta_p.value_or(0.0) : rate(a.Delta_p);
  if (!(nu > 0.0)) throw parameter_error("nu must be positive (set nu in the scenario or pass --nu)");
  if (a.points < 1) throw parameter_error("--points must be >= 1");
  double lo = power(a.p_min), hi = power(a.p_max);
  if (!(lo >= 0.0 && hi >= lo)) throw parameter_error("pump power range must be ascending and non-negative");
  bool log = !a.linear && lo > 0.0 && hi > lo;
  std::vector<double> grid = AxisRange{Axis::phi, lo, hi, a.points, log}.values();

  PowerCurve pc = power_curve(cfg.sys, nu, Dp, grid, cfg.sq.eta_p);
  CsvTable t({"P_p_W", "G_rad_s", "G_over_kappa", "in_domain"});
  for (const auto& p : pc.points) t.add_row({p.P_p, p.G, p.G / cfg.sys.kappa, p.in_domain ? 1.0 : 0.0});
  json j = {{"nu_rad_s", nu},
            {"Delta_p_rad_s", Dp},
            {"tau_opo", pc.points.empty() ? nan : pc.points.front().tau_opo},
            {"P_zero_crossing_W", pc.thresholds.P_zero_crossing},
            {"P_domain_boundary_W", pc.thresholds.P_domain_boundary},
            {"G_max_rad_s", pc.thresholds.G_max},
            {"G_max_over_kappa", pc.thresholds.G_max / cfg.sys.kappa},
            {"P_quarter_kappa_W", pc.P_quarter_kappa ? json(*pc.P_quarter_kappa) : json(nullptr)}};
  Run run("opo", c);
  run.add("opo.csv", t);
  run.add("opo.json", j);
  run.commit(resolved_json(s, cfg), out);
}

// ---- wigner -----------------------------------------------------------------

struct WignerArgs {
  std::string pair = "p_c,q_m";
  double extent = 6.0;
  int points = 101;
  bool vacuum = false;
};

int quadrature_index(const std::string& name) {
  static const char* names[] = {"q_c", "p_c", "q_m", "p_m"};
  for (int i = 0; i < 4; ++i)
    if (name == names[i]) return i;
  throw parameter_error("unknown quadrature '" + name + "' (q_c, p_c, q_m, p_m)");
}

void cmd_wigner(const Common& c, const WignerArgs& a, std::ostream& out) {
  Scenario s = load(c);
  Configuration cfg = resolve(s);
  auto comma = a.pair.find(',');
  if (comma == std::string::npos) throw parameter_error("--pair expects two quadratures, e.g. p_c,q_m");
  int i = quadrature_index(a.pair.substr(0, comma)), k = quadrature_index(a.pair.substr(comma + 1));
  if (i == k) throw parameter_error("--pair needs two different quadratures");
  if (a.points < 2) throw parameter_error("--points must be >= 2");
  if (!(a.extent > 0.0)) throw parameter_error("--extent must be positive");

  CovarianceState st;
  if (a.vacuum) {
    st.V = 0.5 * Eigen::Matrix4d::Identity();
    st.D_diff = Eigen::Matrix4d::Zero();
  } else {
    st = lyapunov_solve(cfg.sys, cfg.sq);
  }
  Eigen::Matrix4d V = st.V;
  Eigen::Matrix2d V2 = marginal(V, i, k);
  double sx = std::sqrt(V2(0, 0)), sy = std::sqrt(V2(1, 1));
  CsvTable t({"x", "y", "W"});
  for (int u = 0; u < a.points; ++u) {
    double x = -a.extent * sx + 2.0 * a.extent * sx * u / (a.points - 1);
    for (int v = 0; v < a.points; ++v) {
      double y = -a.extent * sy + 2.0 * a.extent * sy * v / (a.points - 1);
      t.add_row({x, y, wigner_marginal(V2, Eigen::Vector2d(x, y))});
    }
  }
  json Vj = json::array();
  for (int r = 0; r < 4; ++r) Vj.push_back({V(r, 0), V(r, 1), V(r, 2), V(r, 3)});
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(V2);
  json j = {{"V", Vj},
            {"pair", a.pair},
            {"marginal_min_eigenvalue", es.eigenvalues()(0)},
            {"peak_W4", wigner(V, Eigen::Vector4d::Zero())},
            {"peak_W2", wigner_marginal(V2, Eigen::Vector2d::Zero())},
            {"residual", st.residual},
            {"low_occupancy", st.low_occupancy},
            {"vacuum_test_hook", a.vacuum}};
  Run run("wigner", c);
  run.add("wigner.csv", t);
  run.add("covariance.json", j);
  run.commit(resolved_json(s, cfg), out);
}

// ---- snr --------------------------------------------------------------------

struct SnrArgs {
  std::vector<double> n_bar;
  std::vector<std::string> axes;
  int resolution = 128;
  std::string window;
};

void cmd_snr(const Common& c, const SnrArgs& a, std::ostream& out) {
  Scenario s = load(c);
  Configuration cfg = resolve(s);
  int threads = thread_count(c);
  std::vector<double> nbars = a.n_bar;
  if (nbars.empty()) nbars.push_back(cfg.sys.n_bar);

  // n_add does not depend on n_bar, so one optimization serves every row
  Configuration point = cfg;
  json opt_json = nullptr;
  if (!a.axes.empty()) {
    OptimizeOptions o;
    o.objective = Objective::n_add;
    o.resolution = a.resolution;
    o.threads = threads;
    for (const auto& ax : a.axes) o.axes.push_back(parse_axis_bounds(ax));
    OptimumReport rep = optimize(cfg, o);
    point = rep.at;
    opt_json = to_json(rep);
  }

  std::optional<std::pair<double, double>> window;
  if (!a.window.empty()) {
    auto colon = a.window.find(':');
    if (colon == std::string::npos) throw parameter_error("--window expects LO:HI");
    window = std::make_pair(rate(a.window.substr(0, colon)), rate(a.window.substr(colon + 1)));
  }

  std::vector<std::string> header = {"n_bar", "SN", "SN_SQL", "I", "S_FF_N2_Hz", "S_FF_SQL_N2_Hz",
                                     "n_add", "phi_rad", "theta_rad", "C_over_CSQL"};
  if (window) header.push_back("V_qq");
  CsvTable t(header);
  for (double nb : nbars) {
    if (nb < 0.0) throw parameter_error("n_bar must be non-negative");
    Configuration p = point;
    p.sys.n_bar = nb;
    p.sys.temperature.reset();
    double sn = snr(p, s.S_sig), I = snr_enhancement(p, s.S_sig);
    double n_add = added_noise(p.sys, p.sq, p.Omega, p.phi);
    double n_sql = sql(p.sys, p.Omega).n_add_sql;
    std::vector<double> row = {nb, sn, sn / I, I, force_psd(p.sys, n_add), force_psd(p.sys, n_sql),
                               n_add, p.phi, p.sq.theta, axis_value(p, Axis::C_over_CSQL)};
    if (window) row.push_back(quadrature_variance(p, window->first, window->second).value);
    t.add_row(row);
  }
  Run run("snr", c);
  run.add("snr.csv", t);
  if (!opt_json.is_null()) run.add("snr_optimum.json", opt_json);
  run.commit(resolved_json(s, cfg), out);
}

// ---- compare-linear ---------------------------------------------------------

struct CompareArgs {
  std::string omega_min, omega_max;
  int points = 1;
};

void cmd_compare_linear(const Common& c, const CompareArgs& a, std::ostream& out) {
  Scenario s = load(c);
  Configuration cfg = resolve(s);
  if (a.points < 1) throw parameter_error("--points must be >= 1");
  double lo = a.omega_min.empty() ? cfg.Omega : rate(a.omega_min);
  double hi = a.omega_max.empty() ? lo : rate(a.omega_max);
  if (!(lo > 0.0 && hi > 0.0)) throw parameter_error("Omega range must exclude 0 and be positive");
  CsvTable t({"Omega_rad_s", "chi_m_abs", "chi_s_abs", "ratio", "n_add_SQL_quadratic", "n_add_SQL_linear",
              "S_FF_SQL_quadratic_N2_Hz", "S_FF_SQL_linear_N2_Hz"});
  for (double W : AxisRange{Axis::phi, lo, hi, a.points, lo != hi}.values()) {
    TransferCoefficients sus = susceptibilities(cfg.sys, cfg.sq, W);
    LinearBaseline lin = linear_baseline_added_noise(cfg.sys, W);
    SqlPoint q = sql(cfg.sys, W);
    double cm = std::abs(sus.chi_m);
    t.add_row({W, cm, lin.chi_s_abs, cm / lin.chi_s_abs, q.n_add_sql, lin.n_add_sql,
               force_psd(cfg.sys, q.n_add_sql), force_psd(cfg.sys, lin.n_add_sql)});
  }
  Run run("compare-linear", c);
  run.add("compare_linear.csv", t);
  run.commit(resolved_json(s, cfg), out);
}

}  // namespace

AxisBounds parse_axis_bounds(const std::string& text) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    size_t colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  AxisBounds b = default_bounds(parse_axis(parts[0]));
  if (parts.size() == 1) return b;
  if (parts.size() < 3 || parts.size() > 4) throw parameter_error("axis spec '" + text + "' must be NAME[:LO:HI[:log]]");
  auto num = [&](const std::string& p) {
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(p, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != p.size()) throw parameter_error("axis spec '" + text + "': bad number '" + p + "'");
    return v;
  };
  b.lo = num(parts[1]);
  b.hi = num(parts[2]);
  b.log = false;
  if (parts.size() == 4) {
    if (parts[3] == "log")
      b.log = true;
    else if (parts[3] != "lin")
      throw parameter_error("axis spec '" + text + "': last field must be log or lin");
  }
  if (b.log && !(b.lo * b.hi > 0.0)) throw parameter_error("log axis '" + text + "' needs bounds of one sign");
  return b;
}

json to_json(const OptimumReport& r) {
  json axes = json::array();
  for (Axis a : r.axes) axes.push_back(axis_name(a));
  const Configuration& c = r.at;
  return {{"objective", r.objective},
          {"value", r.value},
          {"n_add", r.n_add},
          {"Omega_rad_s", c.Omega},
          {"axes", axes},
          {"coordinates",
           {{"phi_rad", c.phi},
            {"phi_deg", c.phi * 180.0 / pi},
            {"coop", c.sys.coop},
            {"C_over_CSQL", axis_value(c, Axis::C_over_CSQL)},
            {"G_rad_s", c.sq.G},
            {"G_over_kappa", axis_value(c, Axis::G_over_kappa)},
            {"theta_rad", c.sq.theta}}},
          {"stability_verified", r.stability_verified},
          {"marginal", r.marginal},
          {"phi_closed_form", r.phi_closed_form},
          {"grid_resolution", r.grid_resolution},
          {"grid_points", r.grid_points},
          {"feasible_points", r.feasible_points},
          {"refinement_iterations", r.refinement_iterations},
          {"sweeps", r.sweeps}};
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"squeezed quadratic optomechanics toolkit", "sqom"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(toolkit_version));

  Common common;
  SpectrumArgs sa;
  MapArgs ma, sta;
  OptimizeArgs oa;
  OpoArgs pa;
  WignerArgs wa;
  SnrArgs na;
  CompareArgs ca;

  auto* spectrum = app.add_subcommand("spectrum", "spectra, added noise and force PSD over Omega and phi");
  add_common(spectrum, common);
  spectrum->add_option("--omega-min", sa.omega_min, "lowest Omega, e.g. '10 Hz' (default: scenario Omega)");
  spectrum->add_option("--omega-max", sa.omega_max, "highest Omega");
  spectrum->add_option("--points", sa.points, "Omega grid points (log spaced)");
  spectrum->add_flag("--linear", sa.linear, "linear Omega spacing");
  spectrum->add_option("--phi", sa.phi, "homodyne angle with unit, e.g. '90 deg' (repeatable)")->expected(1, -1);
  spectrum->add_option("--phi-deg", sa.phi_deg, "homodyne angles in degrees")->expected(1, -1);
  spectrum->add_flag("--phi-opt", sa.phi_opt, "append the n_add-minimizing angle at each Omega");

  auto add_map_opts = [](CLI::App* sub, MapArgs& m) {
    sub->add_option("--x", m.x, "first axis, NAME[:LO:HI[:log]]")->capture_default_str();
    sub->add_option("--y", m.y, "second axis, NAME[:LO:HI[:log]]")->capture_default_str();
    sub->add_option("--resolution", m.resolution, "points per axis")->capture_default_str();
    sub->add_option("--nx", m.nx, "points on x (overrides --resolution)");
    sub->add_option("--ny", m.ny, "points on y (overrides --resolution)");
  };
  auto* map = app.add_subcommand("map", "PSD raster over two axes with stability partition");
  add_common(map, common);
  add_map_opts(map, ma);
  auto* stability = app.add_subcommand("stability", "Routh-Hurwitz map and boundary polyline");
  add_common(stability, common);
  add_map_opts(stability, sta);

  auto* optimize_cmd = app.add_subcommand("optimize", "constrained optimum over phi, C, G, theta");
  add_common(optimize_cmd, common);
  optimize_cmd->add_option("--objective", oa.objective, "n_add, S_FF, SN or R_m")->capture_default_str();
  optimize_cmd->add_option("--axis", oa.axes, "NAME[:LO:HI[:log]] (repeatable; default phi and C_over_CSQL)");
  optimize_cmd->add_option("--resolution", oa.resolution, "grid points per axis")->capture_default_str();
  optimize_cmd->add_option("--policy", oa.policy, "strict or allow_marginal")->capture_default_str();
  optimize_cmd->add_flag("--chi", oa.chi, "also compute the enhancement factor chi");
  optimize_cmd->add_flag("--xi", oa.xi, "also compute the response enhancement xi");
  optimize_cmd->add_flag("--depth", oa.depth, "also report the squeezing depth in dB");

  auto* opo = app.add_subcommand("opo", "OPO power curve and thresholds");
  add_common(opo, common);
  opo->add_option("--nu", pa.nu, "second-order nonlinearity, e.g. '300 Hz'");
  opo->add_option("--Delta-p", pa.Delta_p, "SH-mode detuning, e.g. '0.5 GHz'");
  opo->add_option("--p-min", pa.p_min, "lowest pump power")->capture_default_str();
  opo->add_option("--p-max", pa.p_max, "highest pump power")->capture_default_str();
  opo->add_option("--points", pa.points, "grid points")->capture_default_str();
  opo->add_flag("--linear", pa.linear, "linear power spacing");

  auto* wig = app.add_subcommand("wigner", "steady-state covariance and Wigner raster of a quadrature pair");
  add_common(wig, common);
  wig->add_option("--pair", wa.pair, "two of q_c, p_c, q_m, p_m")->capture_default_str();
  wig->add_option("--extent", wa.extent, "half-width in standard deviations")->capture_default_str();
  wig->add_option("--points", wa.points, "points per axis")->capture_default_str();
  wig->add_flag("--vacuum", wa.vacuum, "use V = I/2 instead of solving (test hook)");

  auto* snr_cmd = app.add_subcommand("snr", "signal-to-noise ratio and its enhancement");
  add_common(snr_cmd, common);
  snr_cmd->add_option("--n-bar", na.n_bar, "thermal occupancies (repeatable)");
  snr_cmd->add_option("--axis", na.axes, "optimize n_add over NAME[:LO:HI[:log]] first (repeatable)");
  snr_cmd->add_option("--resolution", na.resolution, "grid points per axis")->capture_default_str();
  snr_cmd->add_option("--window", na.window, "Omega window LO:HI for the quadrature variance");

  auto* cmp = app.add_subcommand("compare-linear", "quadratic vs Lorentzian susceptibility and SQL");
  add_common(cmp, common);
  cmp->add_option("--omega-min", ca.omega_min, "lowest Omega (default: scenario Omega)");
  cmp->add_option("--omega-max", ca.omega_max, "highest Omega");
  cmp->add_option("--points", ca.points, "Omega grid points (log spaced)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (spectrum->parsed()) cmd_spectrum(common, sa, out);
    else if (map->parsed()) cmd_map(common, ma, out);
    else if (stability->parsed()) cmd_stability(common, sta, out);
    else if (optimize_cmd->parsed()) cmd_optimize(common, oa, out);
    else if (opo->parsed()) cmd_opo(common, pa, out);
    else if (wig->parsed()) cmd_wigner(common, wa, out);
    else if (snr_cmd->parsed()) cmd_snr(common, na, out);
    else if (cmp->parsed()) cmd_compare_linear(common, ca, out);
  } catch (const parameter_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace sqom
