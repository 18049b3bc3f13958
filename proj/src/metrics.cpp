#include "sqom/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "sqom/constants.hpp"
#include "sqom/errors.hpp"
#include "sqom/parallel.hpp"
#include "sqom/spectra.hpp"
#include "sqom/stability.hpp"

namespace sqom {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

struct Eval {
  bool ok = false;
  bool marginal = false;
  double score = inf;
  double value = 0.0;
  double n_add = 0.0;
  double phi = 0.0;
};

bool maximizing(Objective o) { return o == Objective::SN || o == Objective::R_m; }

Eval evaluate(const Configuration& cfg, const OptimizeOptions& opt, bool phi_closed) {
  Eval e;
  RouthHurwitz rh = routh_hurwitz(drift_matrix(cfg.sys, cfg.sq).coeffs);
  if (!rh.stable && !(opt.policy == StabilityPolicy::allow_marginal && rh.marginal)) return e;
  e.marginal = !rh.stable;
  try {
    TransferCoefficients t = transfer_coefficients(cfg.sys, cfg.sq, cfg.Omega);
    double R;
    if (phi_closed && opt.objective == Objective::R_m) {
      PhiExtremum m = max_response_over_phi(t);
      e.phi = m.phi;
      R = m.value;
      e.n_add = R > 0.0 ? added_noise(t, e.phi) : inf;
    } else if (phi_closed) {
      PhiExtremum m = min_added_noise_over_phi(t);
      e.phi = m.phi;
      e.n_add = m.value;
      R = mechanical_response(t, e.phi);
    } else {
      e.phi = cfg.phi;
      R = mechanical_response(t, e.phi);
      e.n_add = added_noise(t, e.phi);
    }
    switch (opt.objective) {
      case Objective::n_add: e.value = e.n_add; break;
      case Objective::S_FF: e.value = force_psd(cfg.sys, e.n_add); break;
      case Objective::SN: e.value = 1.0 + opt.S_sig / force_psd(cfg.sys, e.n_add); break;
      case Objective::R_m: e.value = R; break;
    }
  } catch (const domain_error&) {
    return Eval{};
  }
  e.score = maximizing(opt.objective) ? -e.value : e.value;
  e.ok = std::isfinite(e.score);
  if (!e.ok) e.score = inf;
  return e;
}

// Internal coordinate: log|v| on log axes.
struct Coord {
  AxisBounds b;
  double sign = 1.0;
  double lo = 0.0, hi = 0.0;

  explicit Coord(const AxisBounds& bounds) : b(bounds) {
    if (b.log) {
      if (!(b.lo * b.hi > 0.0)) throw parameter_error("log axis " + axis_name(b.axis) + " needs bounds of one sign");
      sign = b.lo > 0.0 ? 1.0 : -1.0;
      lo = std::log(std::min(std::abs(b.lo), std::abs(b.hi)));
      hi = std::log(std::max(std::abs(b.lo), std::abs(b.hi)));
    } else {
      lo = std::min(b.lo, b.hi);
      hi = std::max(b.lo, b.hi);
    }
  }
  double value(double u) const { return b.log ? sign * std::exp(u) : u; }
  double grid(int i, int n) const { return n <= 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (n - 1); }
};

struct GoldenResult {
  double u, f;
};

GoldenResult golden_section(const std::function<double(double)>& f, double a, double b, int iters) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? GoldenResult{c, fc} : GoldenResult{d, fd};
}

}  // namespace

double snr(const Configuration& cfg, double S_sig) {
  double S = force_psd(cfg.sys, added_noise(cfg.sys, cfg.sq, cfg.Omega, cfg.phi));
  if (!(S > 0.0)) throw domain_error("S_FF", "zero noise PSD, SNR undefined");
  return 1.0 + S_sig / S;
}

double snr_enhancement(const Configuration& cfg, double S_sig) {
  double S_sql = force_psd(cfg.sys, sql(cfg.sys, cfg.Omega).n_add_sql);
  if (!(S_sql > 0.0)) throw domain_error("S_FF_SQL", "zero SQL noise PSD");
  return snr(cfg, S_sig) / (1.0 + S_sig / S_sql);
}

Objective parse_objective(const std::string& name) {
  if (name == "n_add") return Objective::n_add;
  if (name == "S_FF") return Objective::S_FF;
  if (name == "SN") return Objective::SN;
  if (name == "R_m") return Objective::R_m;
  throw parameter_error("unknown objective '" + name + "' (expected n_add, S_FF, SN, R_m)");
}

std::string objective_name(Objective o) {
  switch (o) {
    case Objective::n_add: return "n_add";
    case Objective::S_FF: return "S_FF";
    case Objective::SN: return "SN";
    case Objective::R_m: return "R_m";
  }
  return "?";
}

OptimumReport optimize(const Configuration& base, const OptimizeOptions& opt) {
  if (opt.resolution < 1) throw parameter_error("optimizer resolution must be >= 1");
  bool phi_closed = false;
  std::vector<Coord> coords;
  for (const AxisBounds& b : opt.axes) {
    for (const Coord& c : coords)
      if (c.b.axis == b.axis) throw parameter_error("axis " + axis_name(b.axis) + " given twice");
    if (b.axis == Axis::phi && !b.log && std::abs(b.hi - b.lo) >= pi * (1.0 - 1e-12)) {
      phi_closed = true;
      continue;
    }
    if (b.axis == Axis::G_over_kappa && std::min(b.lo, b.hi) < 0.0)
      throw parameter_error("G_over_kappa bounds must be non-negative");
    coords.emplace_back(b);
  }

  const int k = static_cast<int>(coords.size());
  const int n = opt.resolution;
  long total = 1;
  for (int i = 0; i < k; ++i) {
    total *= n;
    if (total > 50'000'000L) throw parameter_error("optimizer grid exceeds 5e7 points; lower the resolution");
  }

  auto config_at = [&](const std::vector<double>& u) {
    Configuration c = base;
    for (int i = 0; i < k; ++i) c = with_axis(c, coords[i].b.axis, coords[i].value(u[i]));
    return c;
  };

  std::vector<double> scores(total, inf);
  const int chunks = static_cast<int>(std::min<long>(total, 4096));
  parallel_for(chunks, opt.threads, [&](int ch) {
    long begin = total * ch / chunks, end = total * (ch + 1) / chunks;
    std::vector<double> u(k);
    for (long idx = begin; idx < end; ++idx) {
      long r = idx;
      for (int i = k - 1; i >= 0; --i) {
        u[i] = coords[i].grid(static_cast<int>(r % n), n);
        r /= n;
      }
      scores[idx] = evaluate(config_at(u), opt, phi_closed).score;
    }
  });

  long best = -1, feasible = 0;
  for (long idx = 0; idx < total; ++idx) {
    if (scores[idx] == inf) continue;
    ++feasible;
    if (best < 0 || scores[idx] < scores[best]) best = idx;
  }
  if (best < 0) throw optimizer_error("stability", "no stable grid point for objective " + objective_name(opt.objective));

  std::vector<double> u(k), step(k);
  {
    long r = best;
    for (int i = k - 1; i >= 0; --i) {
      u[i] = coords[i].grid(static_cast<int>(r % n), n);
      r /= n;
    }
  }
  for (int i = 0; i < k; ++i)
    step[i] = n > 1 ? (coords[i].hi - coords[i].lo) / (n - 1) : 0.5 * (coords[i].hi - coords[i].lo);

  double fbest = scores[best];
  int iters = 0, sweeps = 0;
  for (; sweeps < opt.max_sweeps && k > 0; ++sweeps) {
    const double f_start = fbest;
    for (int i = 0; i < k; ++i) {
      if (step[i] <= 0.0) continue;
      double a = std::max(coords[i].lo, u[i] - step[i]);
      double b = std::min(coords[i].hi, u[i] + step[i]);
      auto line = [&](double ui) {
        std::vector<double> w = u;
        w[i] = ui;
        return evaluate(config_at(w), opt, phi_closed).score;
      };
      GoldenResult g = golden_section(line, a, b, opt.iterations);
      iters += opt.iterations;
      if (g.f < fbest) {
        double moved = std::abs(g.u - u[i]);
        u[i] = g.u;
        fbest = g.f;
        step[i] = std::clamp(2.0 * moved, step[i] / 8.0, step[i]);
      } else {
        step[i] *= 0.5;  // rejected or no gain
      }
    }
    if (std::abs(f_start - fbest) <= opt.tolerance * std::abs(fbest)) {
      ++sweeps;
      break;
    }
  }

  Configuration at = config_at(u);
  Eval e = evaluate(at, opt, phi_closed);
  if (!e.ok) {
    std::string last;
    for (int i = 0; i < k; ++i)
      last += " " + axis_name(coords[i].b.axis) + "=" + std::to_string(coords[i].value(u[i]));
    throw optimizer_error("stability", "refined optimum failed the stability re-check, last iterate:" + last);
  }
  at.phi = e.phi;

  OptimumReport rep;
  rep.objective = objective_name(opt.objective);
  rep.value = e.value;
  rep.n_add = e.n_add;
  rep.at = at;
  for (const Coord& c : coords) rep.axes.push_back(c.b.axis);
  if (phi_closed) rep.axes.push_back(Axis::phi);
  rep.stability_verified = true;
  rep.marginal = e.marginal;
  rep.phi_closed_form = phi_closed;
  rep.grid_resolution = n;
  rep.grid_points = total;
  rep.feasible_points = feasible;
  rep.refinement_iterations = iters;
  rep.sweeps = sweeps;
  return rep;
}

ChiResult enhancement_chi(const Configuration& cfg, const ChiOptions& opt) {
  std::vector<AxisBounds> defaults = {{Axis::phi, -pi / 2, pi / 2, false},
                                      {Axis::C_over_CSQL, default_c_min, default_c_max, true}};
  OptimizeOptions o;
  o.objective = Objective::n_add;
  o.resolution = opt.resolution;
  o.threads = opt.threads;

  ChiResult r;
  Configuration ref = cfg;
  ref.sq.G = 0.0;
  o.axes = opt.reference_axes.empty() ? defaults : opt.reference_axes;
  o.policy = StabilityPolicy::allow_marginal;  // free mechanics at G = 0 has a zero eigenvalue
  r.reference = optimize(ref, o);

  o.axes = opt.squeezed_axes.empty() ? defaults : opt.squeezed_axes;
  o.policy = StabilityPolicy::strict;
  r.squeezed = optimize(cfg, o);
  r.chi = r.reference.n_add / r.squeezed.n_add;
  return r;
}

SqueezingDepth squeezing_depth(const Configuration& point, const AxisBounds& C_bounds,
                               int resolution, int threads) {
  SqueezingDepth d;
  d.n_add = added_noise(point.sys, point.sq, point.Omega, point.phi);
  d.n_add_sql = sql(point.sys, point.Omega).n_add_sql;

  Configuration ref = point;
  ref.sq.G = 0.0;
  OptimizeOptions o;
  o.objective = Objective::n_add;
  o.axes = {C_bounds};
  o.resolution = resolution;
  o.threads = threads;
  o.policy = StabilityPolicy::allow_marginal;
  d.reference = optimize(ref, o);
  d.n_add_same_phi = d.reference.n_add;
  d.same_phi_dB = 10.0 * std::log10(d.n_add_same_phi / d.n_add);
  d.standard_phase_dB = 10.0 * std::log10(d.n_add_sql / d.n_add);
  return d;
}

XiResult response_enhancement_xi(const Configuration& cfg, const XiOptions& opt) {
  const int n = opt.resolution;
  if (n < 1) throw parameter_error("xi resolution must be >= 1");
  AxisRange ga{Axis::G_over_kappa, opt.G.lo, opt.G.hi, n, opt.G.log};
  AxisRange ca{Axis::C_over_CSQL, opt.C.lo, opt.C.hi, n, opt.C.log};
  std::vector<double> gv = ga.values(), cv = ca.values();
  const long total = static_cast<long>(n) * n;
  std::vector<double> num(total, -1.0), den(total, -1.0), arg_phi(total, 0.0);

  parallel_for(n, opt.threads, [&](int i) {
    Configuration ci = with_axis(cfg, Axis::G_over_kappa, gv[i]);
    for (int j = 0; j < n; ++j) {
      Configuration c = with_axis(ci, Axis::C_over_CSQL, cv[j]);
      if (!is_stable(c.sys, c.sq)) continue;
      TransferCoefficients t;
      try {
        t = transfer_coefficients(c.sys, c.sq, c.Omega);
      } catch (const domain_error&) {
        continue;
      }
      long k = static_cast<long>(i) * n + j;
      den[k] = mechanical_response(t, pi / 2);
      if (opt.numerator_fixed_phi) {
        num[k] = den[k];
        arg_phi[k] = pi / 2;
      } else {
        PhiExtremum m = max_response_over_phi(t);
        num[k] = m.value;
        arg_phi[k] = m.phi;
      }
    }
  });

  XiResult r;
  long best = -1;
  for (long k = 0; k < total; ++k) {
    if (num[k] < 0.0) continue;
    ++r.stable_points;
    if (best < 0 || num[k] > num[best]) best = k;
    r.max_response_standard = std::max(r.max_response_standard, den[k]);
  }
  if (best < 0) throw optimizer_error("stability", "empty stable domain for the response sweep");
  r.max_response = num[best];
  r.G_over_kappa = gv[best / n];
  r.C_over_CSQL = cv[best % n];
  r.phi = arg_phi[best];
  if (!(r.max_response_standard > 0.0)) throw domain_error("R_m_phi", "standard-phase response vanishes on the sweep");
  r.xi = r.max_response / r.max_response_standard;
  return r;
}

VarianceResult quadrature_variance(const Configuration& cfg, double lo, double hi, double rel_tol,
                                   int max_depth) {
  if (!(hi > lo)) throw parameter_error("integration window must have Omega_hi > Omega_lo");
  if (lo <= 0.0 && hi >= 0.0) throw singularity_error("chi_m", "integration window contains Omega = 0");
  VarianceResult r;
  r.Omega_lo = lo;
  r.Omega_hi = hi;
  auto f = [&](double W) {
    ++r.evaluations;
    return rotated_spectrum(raw_output_spectra(cfg.sys, cfg.sq, W), cfg.phi) / two_pi;
  };

  struct Panel {
    double a, b, fa, fm, fb, s;
  };
  auto simpson = [](double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  };

  // coarse composite estimate sets the absolute tolerance
  const int panels = 64;
  std::vector<Panel> ps;
  double coarse = 0.0;
  for (int i = 0; i < panels; ++i) {
    double a = lo + (hi - lo) * i / panels, b = lo + (hi - lo) * (i + 1) / panels;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    Panel p{a, b, fa, fm, fb, simpson(a, b, fa, fm, fb)};
    coarse += p.s;
    ps.push_back(p);
  }
  const double tol = rel_tol * std::max(std::abs(coarse), std::numeric_limits<double>::min());

  std::function<double(const Panel&, double, int, double&)> refine =
      [&](const Panel& p, double eps, int depth, double& err) -> double {
    double m = 0.5 * (p.a + p.b);
    double lm = f(0.5 * (p.a + m)), rm = f(0.5 * (m + p.b));
    double sl = simpson(p.a, m, p.fa, lm, p.fm), sr = simpson(m, p.b, p.fm, rm, p.fb);
    double diff = sl + sr - p.s;
    if (std::abs(diff) <= 15.0 * eps) {
      err += std::abs(diff) / 15.0;
      return sl + sr + diff / 15.0;  // Richardson
    }
    if (depth >= max_depth) throw domain_error("V_qq", "adaptive quadrature exceeded the maximum depth");
    return refine({p.a, m, p.fa, lm, p.fm, sl}, eps / 2.0, depth + 1, err) +
           refine({m, p.b, p.fm, rm, p.fb, sr}, eps / 2.0, depth + 1, err);
  };

  double err = 0.0, total = 0.0;
  for (const Panel& p : ps) total += refine(p, tol / panels, 0, err);
  r.value = total;
  r.error_estimate = err;
  return r;
}

}  // namespace sqom
