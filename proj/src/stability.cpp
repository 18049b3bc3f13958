#include "sqom/stability.hpp"

#include <cmath>
#include <limits>

#include "sqom/constants.hpp"
#include "sqom/errors.hpp"
#include "sqom/parallel.hpp"

namespace sqom {

DriftModel drift_matrix(const SystemParams& sys, const SqueezerParams& sq) {
  const double s = std::sin(sq.theta), c = std::cos(sq.theta);
  const double sp = sys.Delta + 2.0 * sq.G * s, sm = sys.Delta - 2.0 * sq.G * s;
  const double rp = sys.kappa / 2.0 + 2.0 * sq.G * c, rm = sys.kappa / 2.0 - 2.0 * sq.G * c;
  const double g2 = 2.0 * sys.g;

  DriftModel d;
  d.M << -rm, sp, 0.0, 0.0,
      -sm, -rp, g2, 0.0,
      0.0, 0.0, 0.0, sys.Omega_m,
      g2, 0.0, 0.0, -sys.Gamma_m;

  // Expanded det(lambda I - M) for this block structure. The optical pair
  // enters only through rho_- + rho_+ = kappa and a = rho_- rho_+ + sigma_+ sigma_-.
  const double a = rm * rp + sp * sm;
  const double Gm = sys.Gamma_m;
  d.coeffs = {rm + rp + Gm, Gm * (rm + rp) + a, Gm * a,
              -4.0 * sys.Omega_m * sys.g * sys.g * sp};
  d.D_amp << std::sqrt(sys.kappa), std::sqrt(sys.kappa), 0.0, std::sqrt(2.0 * Gm);
  return d;
}

std::complex<double> characteristic_polynomial(const std::array<double, 4>& k,
                                               const std::complex<double>& x) {
  return (((x + k[0]) * x + k[1]) * x + k[2]) * x + k[3];
}

RouthHurwitz routh_hurwitz(const std::array<double, 4>& coeffs) {
  const long double M3 = coeffs[0], M2 = coeffs[1], M1 = coeffs[2], M0 = coeffs[3];
  RouthHurwitz r;
  const long double h2 = M3 * M2 - M1;
  // M3 M2 M1 - (M1^2 + M3^2 M0), grouped to keep the large terms apart
  const long double th1 = M1 * h2 - M3 * M3 * M0;
  r.Theta1 = static_cast<double>(th1);
  r.conditions = {M3 > 0, h2 > 0, M0 > 0, th1 > 0};
  r.stable = r.conditions[0] && r.conditions[1] && r.conditions[2] && r.conditions[3];
  r.marginal = !r.stable && r.conditions[0] && r.conditions[1] && M0 == 0 && r.conditions[3];
  return r;
}

ThetaValues theta_functions(const SystemParams& sys, const SqueezerParams& sq) {
  ThetaValues v;
  v.Theta1 = routh_hurwitz(drift_matrix(sys, sq).coeffs).Theta1;
  double P = sq.P_s ? *sq.P_s : matched_signal_power(sys, sq);
  double eps = signal_drive(sys, P);
  if (eps == 0.0) throw singularity_error("eps_c", "Theta2 divides by the signal drive, which is zero");
  v.Theta2 = 1.0 - std::abs(std::sqrt(sys.n_c) / (2.0 * eps) *
                            (sys.kappa - 4.0 * sq.G * std::cos(sq.theta)));
  v.sign1 = v.Theta1 > 0 ? 1 : (v.Theta1 < 0 ? -1 : 0);
  v.sign2 = v.Theta2 > 0 ? 1 : (v.Theta2 < 0 ? -1 : 0);
  return v;
}

bool is_stable(const SystemParams& sys, const SqueezerParams& sq) {
  return routh_hurwitz(drift_matrix(sys, sq).coeffs).stable;
}

bool resonance_allowed(const SystemParams& sys, const SqueezerParams& sq) {
  return sq.G / sys.kappa < 0.25 && sq.theta > -pi && sq.theta < 0.0;
}

StabilityMap stability_map(const Configuration& cfg, const AxisRange& a1, const AxisRange& a2,
                           int threads) {
  StabilityMap m;
  m.axis1 = a1;
  m.axis2 = a2;
  m.x = a1.values();
  m.y = a2.values();
  const int nx = static_cast<int>(m.x.size()), ny = static_cast<int>(m.y.size());
  if (nx == 0 || ny == 0) throw parameter_error("empty stability grid");
  const size_t n = static_cast<size_t>(nx) * ny;
  m.Theta1.assign(n, 0.0);
  m.Theta2.assign(n, 0.0);
  m.stable.assign(n, 0);
  m.allowed.assign(n, 0);
  std::vector<double> field(n, 0.0);

  parallel_for(nx, threads, [&](int i) {
    Configuration ci = with_axis(cfg, a1.axis, m.x[i]);
    for (int j = 0; j < ny; ++j) {
      Configuration c = with_axis(ci, a2.axis, m.y[j]);
      size_t k = static_cast<size_t>(i) * ny + j;
      RouthHurwitz rh = routh_hurwitz(drift_matrix(c.sys, c.sq).coeffs);
      m.Theta1[k] = rh.Theta1;
      double P = c.sq.P_s ? *c.sq.P_s : matched_signal_power(c.sys, c.sq);
      double eps = signal_drive(c.sys, P);
      m.Theta2[k] = eps > 0.0 ? 1.0 - std::abs(std::sqrt(c.sys.n_c) / (2.0 * eps) *
                                               (c.sys.kappa - 4.0 * c.sq.G * std::cos(c.sq.theta)))
                              : -std::numeric_limits<double>::infinity();
      m.stable[k] = rh.stable ? 1 : 0;
      m.allowed[k] = resonance_allowed(c.sys, c.sq) ? 1 : 0;
      double mag = std::max(std::abs(rh.Theta1), std::numeric_limits<double>::min());
      field[k] = rh.stable ? rh.Theta1 : -mag;
    }
  });
  m.boundary = marching_squares(m.x, m.y, field);
  return m;
}

std::vector<BoundarySegment> marching_squares(const std::vector<double>& x,
                                              const std::vector<double>& y,
                                              const std::vector<double>& f) {
  std::vector<BoundarySegment> out;
  const size_t nx = x.size(), ny = y.size();
  if (nx < 2 || ny < 2) return out;
  auto val = [&](size_t i, size_t j) { return f[i * ny + j]; };
  auto inside = [](double v) { return v > 0.0; };
  struct P {
    double x, y;
  };
  auto lerp = [&](double xa, double ya, double va, double xb, double yb, double vb) {
    double t = va / (va - vb);
    return P{xa + t * (xb - xa), ya + t * (yb - ya)};
  };

  for (size_t i = 0; i + 1 < nx; ++i) {
    for (size_t j = 0; j + 1 < ny; ++j) {
      // corners counter-clockwise: 00, 10, 11, 01
      const double cx[4] = {x[i], x[i + 1], x[i + 1], x[i]};
      const double cy[4] = {y[j], y[j], y[j + 1], y[j + 1]};
      const double cv[4] = {val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1)};
      P pts[4];
      bool hit[4] = {false, false, false, false};
      int count = 0;
      for (int e = 0; e < 4; ++e) {
        int a = e, b = (e + 1) % 4;
        if (inside(cv[a]) != inside(cv[b])) {
          pts[e] = lerp(cx[a], cy[a], cv[a], cx[b], cy[b], cv[b]);
          hit[e] = true;
          ++count;
        }
      }
      if (count == 2) {
        P q[2];
        int k = 0;
        for (int e = 0; e < 4; ++e)
          if (hit[e]) q[k++] = pts[e];
        out.push_back({q[0].x, q[0].y, q[1].x, q[1].y});
      } else if (count == 4) {
        double centre = 0.25 * (cv[0] + cv[1] + cv[2] + cv[3]);
        if (inside(centre) == inside(cv[0])) {
          out.push_back({pts[0].x, pts[0].y, pts[1].x, pts[1].y});
          out.push_back({pts[2].x, pts[2].y, pts[3].x, pts[3].y});
        } else {
          out.push_back({pts[3].x, pts[3].y, pts[0].x, pts[0].y});
          out.push_back({pts[1].x, pts[1].y, pts[2].x, pts[2].y});
        }
      }
    }
  }
  return out;
}

}  // namespace sqom
