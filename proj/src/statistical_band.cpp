// Copyright 2026 The qedge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qedge/statistical_band.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qedge/errors.hpp"
#include "qedge/parallel.hpp"
#include "qedge/profiles.hpp"
#include "qedge/quadrature.hpp"

namespace qedge {
namespace {

const cplx kI(0.0, 1.0);

// e^z - 1 - z without cancellation for small |z|.
cplx expm1_minus_z(cplx z) {
  if (std::abs(z) < 0.05) {
    cplx term = z * z * 0.5, sum = term;
    for (int k = 3; k < 16; ++k) {
      term *= z / static_cast<double>(k);
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  return std::exp(z) - 1.0 - z;
}

cplx log_neg(cplx z) { return std::log(-z); }

void check_off_cut(cplx z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw InvalidArgument(std::string(what) + " must be finite");
  if (z.imag() == 0.0 && z.real() >= 0.0)
    throw DomainError(std::string(what) + " lies on the band [0, inf); give it an imaginary part");
}

std::vector<double> trapezoid_weights(const TabulatedCoupling& s) {
  const std::size_t n = s.v.size();
  std::vector<double> c(n, 0.0);
  if (n == 1) {
    c[0] = s.g[0];  // a single node is read as a point mass
    return c;
  }
  for (std::size_t j = 0; j + 1 < n; ++j) {
    double h = 0.5 * (s.v[j + 1] - s.v[j]);
    c[j] += h * s.g[j];
    c[j + 1] += h * s.g[j + 1];
  }
  return c;
}

std::vector<double> energy_breaks(std::initializer_list<double> scales) {
  std::vector<double> br{0.0};
  for (double s : scales) {
    if (!(s > 0.0) || !std::isfinite(s)) continue;
    for (double f : {1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0, 1e3}) br.push_back(s * f);
  }
  br.push_back(std::numeric_limits<double>::infinity());
  return br;
}

template <class Fn>
cplx integrate_energy(Fn&& f, std::initializer_list<double> scales) {
  QuadResult info;
  cplx r = integrate_panels<cplx>(f, energy_breaks(scales), 1e-12, &info);
  if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
    throw NumericError("statistical band: energy quadrature diverged");
  return r;
}

// e^{x^2} erfc(x) for x >= 0.
double erfcx(double x) {
  if (x < 25.0) return std::exp(x * x) * std::erfc(x);
  double r = 1.0 / (x * x), s = 1.0 - 0.5 * r * (1.0 - 1.5 * r * (1.0 - 2.5 * r));
  return s / (x * std::sqrt(M_PI));
}

// (b / pi) * sqrt(pi / a) * int_0^inf exp(-k s - (d + s b)^2 / (4 a)) ds, k >= 0.
double gauss_laplace(double k, double d, double a, double b) {
  double z = (k + d * b / (2.0 * a)) * std::sqrt(a) / b;
  if (z < 0.0) return std::exp(k * k * a / (b * b) + k * d / b) * std::erfc(z);
  return std::exp(-d * d / (4.0 * a)) * erfcx(z);
}

}  // namespace

double TabulatedCoupling::moment(int k) const {
  validate();
  auto c = trapezoid_weights(*this);
  double m = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) m += c[j] * std::pow(v[j], k);
  return m;
}

void TabulatedCoupling::validate() const {
  if (v.empty() || v.size() != g.size()) throw InvalidArgument("tabulated coupling: v and g must match and be non-empty");
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (!(g[j] >= 0.0) || !std::isfinite(v[j])) throw InvalidArgument("tabulated coupling: g must be >= 0");
    if (j > 0 && !(v[j] > v[j - 1])) throw InvalidArgument("tabulated coupling: v must be ascending");
  }
}

TabulatedCoupling tabulate(const PowerLawStatistics& s, std::size_t n) {
  if (n < 2) throw InvalidArgument("tabulate: need at least two nodes");
  if (!(s.v_min > 0.0) || !(s.v_max > s.v_min)) throw InvalidArgument("tabulate: need 0 < v_min < v_max");
  // Normalization of V^-alpha on [v_min, v_max].
  double norm;
  if (std::abs(s.alpha - 1.0) < 1e-12)
    norm = std::log(s.v_max / s.v_min);
  else
    norm = (std::pow(s.v_max, 1.0 - s.alpha) - std::pow(s.v_min, 1.0 - s.alpha)) / (1.0 - s.alpha);
  TabulatedCoupling t;
  t.v = linspace(s.v_min, s.v_max, n);
  for (double v : t.v) t.g.push_back(s.density * std::pow(v, -s.alpha) / norm);
  return t;
}

cplx delta_F(double u, cplx eps, cplx xi, double theta, double tau) {
  check_off_cut(eps, "eps");
  check_off_cut(xi, "xi");
  cplx cross;
  cplx d = xi - eps;
  if (std::abs(d) < 1e-7 * std::abs(eps)) {
    // (log(-eps) - log(-xi)) / (xi - eps) -> -1/eta to second order.
    cplx eta = 0.5 * (eps + xi);
    cross = -1.0 / eta - d * d / (12.0 * eta * eta * eta);
  } else {
    cross = (log_neg(eps) - log_neg(xi)) / d;
  }
  return 0.5 * u * (theta * theta / xi + tau * tau / eps + 2.0 * theta * tau * cross);
}

cplx delta_F_printed(double u, cplx eps, cplx xi, double theta, double tau) {
  return -2.0 * delta_F(u, eps, xi, theta, tau);
}

cplx eval_F(const MomentStatistics& s, cplx eps, cplx xi, double theta, double tau) {
  if (!(s.w > 0.0) || !(s.u >= 0.0)) throw InvalidArgument("moment statistics: need w > 0, u >= 0");
  check_off_cut(eps, "eps");
  check_off_cut(xi, "xi");
  cplx lin = kI * s.w * (theta * log_neg(xi) - tau * log_neg(eps));
  return lin + delta_F(s.u, eps, xi, theta, tau);
}

cplx eval_F(const TabulatedCoupling& s, cplx eps, cplx xi, double theta, double tau) {
  s.validate();
  check_off_cut(eps, "eps");
  check_off_cut(xi, "xi");
  const auto c = trapezoid_weights(s);
  const double w = s.moment(2);
  cplx lin = kI * w * (theta * log_neg(xi) - tau * log_neg(eps));
  if (theta == 0.0 && tau == 0.0) return lin;
  auto f = [&](double e) {
    cplx x = kI * theta / (xi - e) - kI * tau / (eps - e);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) acc += c[j] * expm1_minus_z(s.v[j] * s.v[j] * x);
    return acc;
  };
  double vmax2 = s.v.back() * s.v.back();
  return lin + integrate_energy(f, {std::abs(eps), std::abs(xi), vmax2 * (theta + tau), eps.real(), xi.real()});
}

GJ eval_G_J(const MomentStatistics& s, double x, double eta) {
  if (!(eta < 0.0)) throw DomainError("G, J: eta must be negative");
  if (!(s.w > 0.0) || !(s.u >= 0.0)) throw InvalidArgument("moment statistics: need w > 0, u >= 0");
  GJ r;
  r.g = kI * x * s.w * std::log(-eta) + s.u * x * x / (2.0 * eta);
  r.j = -s.w / eta - kI * x * s.u / (2.0 * eta * eta);
  return r;
}

GJ eval_G_J(const TabulatedCoupling& s, double x, double eta) {
  if (!(eta < 0.0)) throw DomainError("G, J: eta must be negative");
  s.validate();
  const auto c = trapezoid_weights(s);
  const double w = s.moment(2);
  double vmax2 = s.v.back() * s.v.back();
  GJ r;
  r.g = kI * x * w * std::log(-eta);
  if (x != 0.0) {
    r.g += integrate_energy(
        [&](double e) {
          cplx acc = 0.0;
          for (std::size_t j = 0; j < c.size(); ++j) acc += c[j] * expm1_minus_z(kI * x * s.v[j] * s.v[j] / (eta - e));
          return acc;
        },
        {-eta, vmax2 * std::abs(x)});
  }
  r.j = integrate_energy(
      [&](double e) {
        double d = eta - e;
        cplx acc = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j) {
          double v2 = s.v[j] * s.v[j];
          acc += c[j] * v2 * std::exp(kI * x * v2 / d);
        }
        return acc / (d * d);
      },
      {-eta, vmax2 * std::abs(x)});
  return r;
}

double stationary_x_integral(const MomentStatistics& s, double ebar_o, double eta) {
  if (!(eta < 0.0)) throw DomainError("stationary distribution: eta must be negative");
  if (!(s.u > 0.0)) throw DomainError("stationary distribution: needs u > 0");
  const double y = -eta, w = s.w;
  const double a = s.u / (2.0 * y), b = s.u / (2.0 * y * y), c = 1.0 - w / y;
  const double d = eta - w * std::log(y) + ebar_o;
  // 1 / (c + i b x) is the y integral int_0^inf exp(-s (c + i b x)) ds. It
  // converges, and the zeta = 0 pole lies below the contour, only for
  // c > 0; otherwise the pole gives no stationary part.
  if (c <= 0.0) return 0.0;
  return M_PI / b * gauss_laplace(c, d, a, b);
}

double stationary_x_integral_numeric(const MomentStatistics& s, double ebar_o, double eta) {
  if (!(eta < 0.0)) throw DomainError("stationary distribution: eta must be negative");
  const double y = -eta, w = s.w;
  const double a = s.u / (2.0 * y), b = s.u / (2.0 * y * y), c = 1.0 - w / y;
  const double d = eta - w * std::log(y) + ebar_o;
  // Symmetric in x: the integrand at -x is the conjugate of that at x.
  auto f = [&](double x) {
    cplx v = std::exp(cplx(-a * x * x, -x * d)) / cplx(c, b * x);
    return 2.0 * v.real();
  };
  double sx = 1.0 / std::sqrt(a);
  std::vector<double> br{0.0};
  for (double k : {0.01, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0}) br.push_back(k * sx);
  if (d != 0.0)
    for (double k = 1.0; k * 2.0 * M_PI / std::abs(d) < 10.0 * sx && k < 2000.0; k += 1.0)
      br.push_back(k * 2.0 * M_PI / std::abs(d));
  if (c != 0.0) br.push_back(std::abs(c) / b);
  br.push_back(12.0 * sx);
  return integrate_panels<double>(f, br, 1e-12);
}

bool intermediate_regime(double v, double g, double t) {
  return v * g >= 10.0 && t >= 10.0 / v && t <= g / 10.0;
}

namespace {

// Root y0 > 0 of y + w log y = ebar_o, i.e. eta* = -y0 where D vanishes.
double reference_root(double w, double ebar_o) { return w * lambert_w0_exp(ebar_o / w - std::log(w)); }

void finish_profile(StationaryDistribution& d) {
  const auto& e = d.energies;
  const auto& r = d.rho;
  d.normalization = 0.0;
  for (std::size_t i = 0; i + 1 < e.size(); ++i) d.normalization += 0.5 * (r[i] + r[i + 1]) * (e[i + 1] - e[i]);
  d.half_width = std::numeric_limits<double>::quiet_NaN();
  const double h = 0.5 * d.rho_edge;
  for (std::size_t i = 0; i + 1 < e.size(); ++i) {
    if (r[i] >= h && r[i + 1] < h) {
      d.half_width = e[i] + (r[i] - h) / (r[i] - r[i + 1]) * (e[i + 1] - e[i]);
      break;
    }
  }
  if (e.size() >= 2) d.w50 = moments_density(e, r, e.front(), e.back()).w50;
}

void check_grid(const std::vector<double>& e_grid) {
  if (e_grid.empty()) throw InvalidArgument("energy grid is empty");
  for (std::size_t i = 0; i < e_grid.size(); ++i) {
    if (!(e_grid[i] >= 0.0) || !std::isfinite(e_grid[i])) throw InvalidArgument("energy grid must lie in [0, inf)");
    if (i > 0 && !(e_grid[i] > e_grid[i - 1])) throw InvalidArgument("energy grid must be ascending");
  }
}

}  // namespace

StationaryDistribution stationary_distribution(const MomentStatistics& s, double ebar_o,
                                               const std::vector<double>& e_grid, double v_probe) {
  if (!(s.w > 0.0) || !(s.u > 0.0)) throw InvalidArgument("stationary distribution: need w > 0, u > 0");
  if (!std::isfinite(ebar_o)) throw InvalidArgument("stationary distribution: ebar_o must be finite");
  check_grid(e_grid);
  const double w = s.w;
  const double y0 = reference_root(w, ebar_o);
  if (!(y0 > w))
    throw DomainError("stationary distribution: reference energy above -w where 1 - J changes sign; "
                      "outside the model regime");
  const double sy = std::sqrt(s.u / y0) / (1.0 + w / y0);
  std::vector<double> br{w};
  for (double k : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
    br.push_back(y0 + k * sy);
    if (y0 - k * sy > w) br.push_back(y0 - k * sy);
  }
  for (int k = 0; k <= 4; ++k) br.push_back(y0 * std::pow(10.0, k));
  for (double f : {1.001, 1.01, 1.1, 1.5}) br.push_back(w * f);
  br.push_back(std::numeric_limits<double>::infinity());
  std::sort(br.begin(), br.end());

  StationaryDistribution d;
  d.energies = e_grid;
  d.rho.assign(e_grid.size(), 0.0);
  const double v2 = v_probe * v_probe;
  auto rho_at = [&](double e) {
    auto f = [&](double y) {
      if (y <= w) return 0.0;
      double den = y + e;
      return stationary_x_integral(s, ebar_o, -y) / (den * den);
    };
    return v2 * integrate_panels<double>(f, br, 1e-10);
  };
  parallel_for(e_grid.size(), [&](std::size_t i) { d.rho[i] = rho_at(e_grid[i]); });
  d.rho_edge = e_grid.front() == 0.0 ? d.rho.front() : rho_at(0.0);
  for (double r : d.rho)
    if (!(r > 0.0) || !std::isfinite(r))
      throw DomainError("stationary distribution: non-positive density, parameters outside the model regime");
  finish_profile(d);
  return d;
}

double phi_less(double w, double u, double ebar_o, double eta) {
  const double l = std::log(-eta), e = ebar_o;
  return eta * (7.0 * eta * eta + e * e - 5.0 * e * eta + 3.0 * w * w - 3.0 * e * w + 9.0 * eta * w) / u +
         eta * w * w * l * l / u + eta * w * l * (-2.0 * e + 5.0 * eta + 3.0 * w) / u;
}

namespace {

struct TractableSetup {
  std::vector<double> breaks;
};

TractableSetup tractable_setup(double w, double u, double ebar_o) {
  if (!(w > 0.0) || !(u > 0.0)) throw InvalidArgument("tractable profile: need w > 0, u > 0");
  if (!std::isfinite(ebar_o)) throw InvalidArgument("tractable profile: ebar_o must be finite");
  // Phi < 0 on the whole negative axis iff the bracket multiplying eta is
  // positive; scan it on a wide logarithmic grid.
  const double scale = std::max({w, std::abs(ebar_o), std::cbrt(u)});
  double peak_y = scale, peak_val = -std::numeric_limits<double>::infinity();
  for (double y : logspace(1e-12 * scale, 1e4 * scale, 3200)) {
    double phi = phi_less(w, u, ebar_o, -y);
    if (phi > 0.0 && phi > 1e-13 * y * scale * scale / u)
      throw DomainError("tractable profile: exponent positive on eta < 0, outside the saddle-point regime");
    double lv = 2.0 * std::log(y) + phi;
    if (lv > peak_val) {
      peak_val = lv;
      peak_y = y;
    }
  }
  TractableSetup t;
  t.breaks = {0.0};
  for (int k = -10; k <= 3; ++k) t.breaks.push_back(peak_y * std::pow(10.0, k));
  for (double f : {0.25, 0.5, 0.75, 1.5, 2.0, 3.0}) t.breaks.push_back(peak_y * f);
  t.breaks.push_back(std::numeric_limits<double>::infinity());
  return t;
}

}  // namespace

StationaryDistribution tractable_profile(double w, double u, double ebar_o, const std::vector<double>& e_grid,
                                         const TractableOptions& opt) {
  check_grid(e_grid);
  const TractableSetup ts = tractable_setup(w, u, ebar_o);
  auto rho_at = [&](double e) {
    auto f = [&](double y) {
      if (y <= 0.0) return 0.0;
      double r = y / (y + e);
      return opt.coefficient / u * r * r * std::exp(phi_less(w, u, ebar_o, -y));
    };
    std::vector<double> br = ts.breaks;
    if (e > 0.0) br.push_back(e);
    return integrate_panels<double>(f, br, 1e-11);
  };
  StationaryDistribution d;
  d.energies = e_grid;
  d.rho.assign(e_grid.size(), 0.0);
  parallel_for(e_grid.size(), [&](std::size_t i) { d.rho[i] = rho_at(e_grid[i]); });
  d.rho_edge = rho_at(0.0);
  finish_profile(d);
  return d;
}

double tractable_tail_coefficient(double w, double u, double ebar_o, const TractableOptions& opt) {
  const TractableSetup ts = tractable_setup(w, u, ebar_o);
  auto f = [&](double y) {
    if (y <= 0.0) return 0.0;
    return opt.coefficient / u * y * y * std::exp(phi_less(w, u, ebar_o, -y));
  };
  return integrate_panels<double>(f, ts.breaks, 1e-11);
}

namespace {

// S(t) = int_0^inf sin(2 eta T) / T d eta, T = t + K(eta) / (4 pi u).
struct DecayIntegrand {
  double w, u, e, t;
  double k_of(double eta) const {
    double r = eta - e + w * std::log(eta);
    return (M_PI * M_PI * w * w + r * r) / (4.0 * M_PI * u);
  }
  double big_t(double eta) const { return t + k_of(eta); }
  double dt(double eta) const { return (eta - e + w * std::log(eta)) * (1.0 + w / eta) / (2.0 * M_PI * u); }
  double phase(double eta) const { return 2.0 * eta * big_t(eta); }
  double dphase(double eta) const { return 2.0 * big_t(eta) + 2.0 * eta * dt(eta); }
  double amp(double eta) const { return 1.0 / big_t(eta); }
};

double decay_integral(const DecayIntegrand& g) {
  const double scale = std::max({g.w, std::abs(g.e), std::sqrt(g.u)});
  // Numerical part up to eta1, where the oscillation is fast relative to the
  // variation of the amplitude; the rest by two integrations by parts.
  double eta1 = 1e-3 * scale;
  while (g.dphase(eta1) * eta1 < 4000.0 || g.dphase(eta1) <= 0.0) {
    eta1 *= 1.5;
    if (eta1 > 1e12 * scale) throw NumericError("decay branch: no oscillatory region found");
  }
  std::vector<double> br{0.0};
  for (int k = -14; k <= 0; ++k) br.push_back(eta1 * std::pow(10.0, k));
  // A break per half period of the phase.
  {
    double eta = 1e-6 * eta1, ph0 = g.phase(eta);
    while (eta < eta1) {
      double dp = std::max(g.dphase(eta), 1e-300);
      eta += std::min(0.25 * M_PI / dp, 0.05 * eta1);
      if (g.phase(eta) - ph0 >= M_PI) {
        br.push_back(eta);
        ph0 = g.phase(eta);
      }
      if (br.size() > 200000) throw NumericError("decay branch: too many oscillations");
    }
  }
  br.push_back(eta1);
  std::sort(br.begin(), br.end());
  br.erase(std::remove_if(br.begin(), br.end(), [&](double x) { return x > eta1; }), br.end());
  auto f = [&](double eta) { return eta <= 0.0 ? 0.0 : std::sin(g.phase(eta)) * g.amp(eta); };
  double body = integrate_panels<double>(f, br, 1e-11);
  // int_eta1^inf A sin(phi) = A cos(phi)/phi' - B sin(phi)/phi', B = (A/phi')'.
  auto ratio = [&](double eta) { return g.amp(eta) / g.dphase(eta); };
  const double h = 1e-4 * eta1;
  const double bb = (ratio(eta1 + h) - ratio(eta1 - h)) / (2.0 * h);
  const double p1 = g.phase(eta1), dp1 = g.dphase(eta1);
  return body + ratio(eta1) * std::cos(p1) - bb * std::sin(p1) / dp1;
}

}  // namespace

DecaySeries decay_of_positive_eta_branch(double w, double u, double ebar_o, const std::vector<double>& t_grid) {
  if (!(w > 0.0) || !(u > 0.0)) throw InvalidArgument("decay branch: need w > 0, u > 0");
  for (double t : t_grid)
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("decay branch: times must be >= 0");
  DecaySeries out;
  out.t = t_grid;
  out.value.resize(t_grid.size());
  out.magnitude.resize(t_grid.size());
  const cplx pref = -M_PI * w / u * cplx(1.0, 1.0);
  parallel_for(t_grid.size(), [&](std::size_t i) {
    DecayIntegrand g{w, u, ebar_o, t_grid[i]};
    out.value[i] = pref * decay_integral(g);
    out.magnitude[i] = std::abs(out.value[i]);
  });
  std::vector<double> tx, my;
  for (std::size_t i = 0; i < t_grid.size(); ++i)
    if (t_grid[i] > 0.0 && out.magnitude[i] > 0.0) {
      tx.push_back(t_grid[i]);
      my.push_back(out.magnitude[i]);
    }
  out.exponent = tx.size() >= 2 ? loglog_slope(tx, my) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace qedge
