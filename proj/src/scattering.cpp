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

#include "qedge/scattering.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "qedge/edge_analytics.hpp"
#include "qedge/errors.hpp"
#include "qedge/parallel.hpp"
#include "qedge/profiles.hpp"
#include "qedge/quadrature.hpp"
#include "qedge/special_functions.hpp"

namespace qedge {

namespace {

namespace ode = boost::numeric::odeint;
using State = std::array<double, 6>;  // psi, dpsi/dx (x = -eps), band flux, spoiler flux

constexpr cplx kI(0.0, 1.0);

// Re U - e_o on eps < 0 is increasing; bracket and bisect its root.
double left_turning_point(const ScatteringPotential& pot) {
  auto f = [&](double e) { return pot.u(e).real() - pot.e_o; };
  double hi = -1e-300;
  double lo = turning_point(pot.w, pot.e_o);
  for (const auto& s : pot.spoilers) lo -= s.v_s * s.v_s / s.e_s;
  lo -= 1.0 + pot.w;
  for (int i = 0; i < 200 && f(lo) > 0.0; ++i) lo = 2.0 * lo - 1.0;
  hi = std::min(-1e-300, turning_point(pot.w, pot.e_o) * (1.0 - 1e-15));
  if (f(hi) < 0.0) hi = -1e-300;
  for (int i = 0; i < 400 && hi - lo > 1e-15 * std::abs(lo); ++i) {
    double m = 0.5 * (lo + hi);
    (f(m) > 0.0 ? hi : lo) = m;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

cplx ScatteringPotential::u_band(double eps) const {
  cplx lg = branched_log(cplx(eps, 0.0));
  cplx u = eps - w * lg;
  if (!absorption) u.imag(0.0);
  return u;
}

cplx ScatteringPotential::u(double eps) const {
  cplx v = u_band(eps);
  const double d = pole_delta * w;
  // Principal part plus i pi delta(eps - e_s). The delta is a squared
  // Lorentzian so its tails, unlike those of 1/(e_s - eps - i d), do not
  // absorb in the oscillatory region where psi is large.
  for (const auto& s : spoilers) {
    double x = s.e_s - eps, den = x * x + d * d;
    double v2 = s.v_s * s.v_s;
    v += cplx(v2 * x / den, absorption ? v2 * 2.0 * d * d * d / (den * den) : 0.0);
  }
  return v;
}

double ScatteringPotential::du_real(double eps) const {
  double d = 1.0 - w / eps;
  const double dl = pole_delta * w;
  for (const auto& s : spoilers) {
    double x = s.e_s - eps;
    double den = x * x + dl * dl;
    d += s.v_s * s.v_s * (x * x - dl * dl) / (den * den);
  }
  return d;
}

void ScatteringPotential::validate() const {
  if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("w must be positive");
  if (!std::isfinite(e_o)) throw InvalidArgument("e_o must be finite");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be positive");
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
  if (!(pole_delta > 0.0)) throw InvalidArgument("pole_delta must be positive");
  for (const auto& s : spoilers)
    if (!(s.e_s > 0.0) || !std::isfinite(s.v_s)) throw InvalidArgument("spoiler energy must be positive");
}

double turning_point(double w, double e_o) {
  EdgeParams p{w, -e_o, 1.0, 1.0};
  return pole_epsilon0(p);
}

ScatteringSolution solve_scattering(const ScatteringPotential& pot, const ScatteringGrid& grid) {
  pot.validate();
  if (grid.n_profile < 2) throw InvalidArgument("scattering grid: n_profile must be >= 2");
  if (!(grid.rtol > 0.0) || !(grid.atol > 0.0)) throw InvalidArgument("scattering grid: tolerances must be positive");
  const double w = pot.w, alpha = pot.alpha;
  ScatteringSolution sol;
  auto q_of = [&](double e) { return (pot.u(e) - pot.e_o) / alpha; };

  // Left turning point and local Airy scale.
  const double tp = left_turning_point(pot);
  sol.turning = tp;
  const double slope = std::max(pot.du_real(tp), 1e-12);
  const double airy_len = std::cbrt(alpha / slope);

  // Right start: beyond every point where Re U dips below e_o, then far
  // enough for the decaying solution to dominate.
  double e_hi = std::max({w, airy_len, 1e-3});
  for (const auto& s : pot.spoilers) e_hi = std::max(e_hi, s.e_s + 5.0 * std::max(w, s.v_s * s.v_s / s.e_s));
  e_hi = std::max(e_hi, pot.e_o + w * std::log(std::max(e_hi, 1.0)) + w);
  {
    // Re Q must stay positive to the right of e_hi; walk out until it is.
    const int n = 400;
    for (int rep = 0; rep < 60; ++rep) {
      bool ok = true;
      for (int i = 0; i <= n; ++i) {
        double e = e_hi * (1.0 + 3.0 * i / n);
        if (q_of(e).real() <= 0.0) { ok = false; e_hi = e * 1.25; break; }
      }
      if (ok) break;
    }
  }
  double e_start = e_hi, acc = 0.0;
  while (acc < grid.start_decay) {
    double q = std::max(q_of(e_start).real(), 1e-300);
    double h = std::min(0.05 / std::sqrt(q), 0.1 * e_start + 0.1);
    acc += std::sqrt(q) * h;
    e_start += h;
    if (e_start > 1e12) throw NumericError("scattering: could not place the right start point");
  }
  sol.eps_start = e_start;

  // Fitting window deep on the left where the WKB parameter is small.
  auto kappa = [&](double e) {
    double q = -q_of(e).real();
    double dq = pot.du_real(e) / alpha;
    return std::abs(dq) / std::pow(q, 1.5);
  };
  double step = std::max(airy_len, 1e-6);
  double f_hi = tp - step;
  while (kappa(f_hi) > grid.wkb_parameter) {
    step *= 1.5;
    f_hi = tp - step;
    if (step > 1e15) throw NumericError("scattering: WKB region not reached");
  }
  double f_lo = f_hi, phase = 0.0;
  const double target_phase = 2.0 * M_PI * grid.fit_wavelengths;
  std::vector<double> fit_pts;
  while (phase < target_phase) {
    double p = std::sqrt(-q_of(f_lo).real());
    double h = 2.0 * M_PI / (p * grid.fit_points_per_wavelength);
    fit_pts.push_back(f_lo);
    f_lo -= h;
    phase += p * h;
  }
  sol.fit_lo = f_lo;
  sol.fit_hi = f_hi;

  // Windows.
  const Spoiler* one = pot.spoilers.size() == 1 ? &pot.spoilers[0] : nullptr;
  sol.windows = default_windows(w, pot.gamma, one);
  if (pot.spoilers.size() > 1) sol.windows = default_windows(w, pot.gamma, nullptr);
  const Windows& win = sol.windows;

  // Output points in eps.
  const double d0 = 1e-9 * std::min(w, airy_len);
  double p_lo = grid.profile_lo != 0.0 ? grid.profile_lo : tp - 12.0 * airy_len;
  double p_hi = grid.profile_hi != 0.0 ? grid.profile_hi : e_start;
  p_lo = std::max(p_lo, f_lo);
  p_hi = std::min(p_hi, e_start);
  std::vector<double> pts = linspace(p_lo, p_hi, grid.n_profile);
  const double edge_hi = std::min(win.edge_hi, e_start);
  std::vector<double> edge_pts;
  if (grid.n_edge >= 4) {
    for (double e : linspace(edge_hi / grid.n_edge, edge_hi, grid.n_edge / 2)) edge_pts.push_back(e);
    for (double e : logspace(edge_hi * 1e-6, edge_hi, grid.n_edge / 2)) edge_pts.push_back(e);
  }
  pts.insert(pts.end(), edge_pts.begin(), edge_pts.end());
  pts.insert(pts.end(), fit_pts.begin(), fit_pts.end());
  for (double e : {win.edge_hi, win.spoiler_lo, win.spoiler_hi, d0})
    if (e > 0.0 && e < e_start) pts.push_back(e);
  std::sort(pts.begin(), pts.end(), std::greater<double>());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  pts.erase(std::remove_if(pts.begin(), pts.end(), [&](double e) { return std::abs(e) < d0 && e != d0; }),
            pts.end());

  // Integrate in x = -eps from -e_start to -f_lo.
  auto rhs = [&](const State& y, State& dy, double x) {
    const double e = -x;
    cplx psi(y[0], y[1]);
    cplx q = q_of(e);
    cplx d = q * psi;
    dy[0] = y[2];
    dy[1] = y[3];
    dy[2] = d.real();
    dy[3] = d.imag();
    double n2 = std::norm(psi);
    double qb = pot.absorption && e > 0.0 ? M_PI * w / alpha : 0.0;
    dy[4] = qb * n2;
    dy[5] = (q.imag() - qb) * n2;
  };

  State y{};
  {
    cplx q = q_of(e_start);
    double h = 1e-6 * std::max(1.0, e_start);
    cplx dq = (q_of(e_start + h) - q_of(e_start - h)) / (2.0 * h);
    cplx sq = std::sqrt(q);
    if (sq.real() < 0.0) sq = -sq;
    cplx dlog = sq + dq / (4.0 * q);  // d ln psi / dx
    y = {1.0, 0.0, dlog.real(), dlog.imag(), 0.0, 0.0};
  }

  struct Rec {
    double e;
    cplx psi, dpsi_de;
    double fb, fs, log_scale;
  };
  std::vector<Rec> recs;
  recs.reserve(pts.size() + 1);
  double log_scale = 0.0;  // true psi = stored psi * exp(log_scale)

  auto renormalize = [&]() {
    double m = std::sqrt(y[0] * y[0] + y[1] * y[1]) + std::sqrt(y[2] * y[2] + y[3] * y[3]) * airy_len;
    if (!(m > 0.0) || !std::isfinite(m)) throw NumericError("scattering: solution vanished or overflowed");
    double c = 1.0 / m;
    for (int i = 0; i < 4; ++i) y[i] *= c;
    y[4] *= c * c;
    y[5] *= c * c;
    log_scale += std::log(m);
  };

  auto observe = [&](const State& s, double x) {
    recs.push_back({-x, cplx(s[0], s[1]), -cplx(s[2], s[3]), s[4], s[5], log_scale});
  };

  // Segment boundaries in eps: chunked so the amplitude can be renormalized.
  // Extra cuts keep the WKB growth per chunk well inside double range.
  auto chunk_bounds = [&](double ea, double eb, int chunks) {
    const int n = 64 * chunks;
    std::vector<double> b{ea};
    double acc = 0.0;
    for (int i = 1; i <= n; ++i) {
      double e0 = ea + (eb - ea) * (i - 1) / n, e1 = ea + (eb - ea) * i / n;
      double q = q_of(0.5 * (e0 + e1)).real();
      acc += std::sqrt(std::abs(q)) * std::abs(e1 - e0);
      if (i == n) break;
      if (i % 64 == 0 || acc > 25.0) {
        b.push_back(e1);
        acc = 0.0;
      }
    }
    b.push_back(eb);
    return b;
  };
  std::vector<double> bounds = chunk_bounds(e_start, d0, 48);
  std::vector<double> left_bounds = chunk_bounds(-d0, f_lo, 64);

  std::size_t pi = 0;
  auto run = [&](double ea, double eb) {  // ea > eb
    std::vector<double> xs{-ea};
    while (pi < pts.size() && pts[pi] > ea) ++pi;
    while (pi < pts.size() && pts[pi] > eb) {
      if (pts[pi] < ea) xs.push_back(-pts[pi]);
      ++pi;
    }
    xs.push_back(-eb);
    std::vector<Rec> seg;
    auto obs = [&](const State& s, double x) {
      if (x == -ea && !recs.empty() && recs.back().e == ea) return;
      observe(s, x);
    };
    try {
      auto st = ode::make_dense_output(grid.atol, grid.rtol, ode::runge_kutta_dopri5<State>());
      sol.steps += ode::integrate_times(st, rhs, y, xs.begin(), xs.end(),
                                        std::min(1e-3 * airy_len, 0.1 * (ea - eb)), obs);
    } catch (const std::exception& ex) {
      throw NumericError(std::string("scattering: step control failed: ") + ex.what());
    }
    renormalize();
  };

  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) run(bounds[i], bounds[i + 1]);
  // Bridge the integrable log singularity at eps = 0.
  {
    cplx psi(y[0], y[1]), chi(y[2], y[3]);
    cplx iq = (2.0 * d0 * (-pot.e_o) - w * (2.0 * d0 * (std::log(d0) - 1.0) - kI * M_PI * d0)) / alpha;
    if (!pot.absorption) iq.imag(0.0);
    for (const auto& s : pot.spoilers) iq += 2.0 * d0 * s.v_s * s.v_s / s.e_s / alpha;
    cplx chi2 = chi + iq * psi;
    cplx psi2 = psi + 2.0 * d0 * chi;
    double fb = pot.absorption ? M_PI * w / alpha * d0 * std::norm(psi) : 0.0;
    y = {psi2.real(), psi2.imag(), chi2.real(), chi2.imag(), y[4] + fb, y[5]};
  }
  observe(y, d0);
  recs.back().e = -d0;
  for (std::size_t i = 0; i + 1 < left_bounds.size(); ++i) run(left_bounds[i], left_bounds[i + 1]);

  // Incident and reflected WKB amplitudes at each fitting point.
  double sa = 0.0, sb = 0.0, bmin = 1e300, bmax = 0.0;
  int nfit = 0;
  cplx a_ref, b_ref;
  double ls_ref = 0.0;
  const double ls_end = recs.back().log_scale;
  for (const auto& r : recs) {
    if (r.e > f_hi || r.e < f_lo) continue;
    double q = -q_of(r.e).real();
    double p = std::sqrt(q);
    double dp = -pot.du_real(r.e) / alpha / (2.0 * p);
    double sp = 1.0 / std::sqrt(p);
    cplx fp = sp, fm = sp;
    cplx dfp = (kI * p - dp / (2.0 * p)) * sp, dfm = (-kI * p - dp / (2.0 * p)) * sp;
    cplx det = fp * dfm - fm * dfp;
    double scale = std::exp(r.log_scale - ls_end);
    cplx a = (r.psi * dfm - fm * r.dpsi_de) / det * scale;
    cplx b = (fp * r.dpsi_de - r.psi * dfp) / det * scale;
    sa += std::norm(a);
    sb += std::norm(b);
    bmin = std::min(bmin, std::abs(b));
    bmax = std::max(bmax, std::abs(b));
    if (nfit == 0) {
      a_ref = a;
      b_ref = b;
      ls_ref = r.log_scale;
    }
    ++nfit;
  }
  (void)ls_ref;
  if (nfit < 8) throw NumericError("scattering: too few points in the fitting window");
  sa /= nfit;
  sb /= nfit;
  sol.fit_spread = (bmax - bmin) / std::sqrt(sb);
  sol.incident = 1.0;
  sol.reflected = a_ref / b_ref;
  sol.absorbed_raw = 1.0 - sa / sb;
  sol.absorbed_fraction = std::clamp(sol.absorbed_raw, 0.0, 1.0);
  if (sol.absorbed_fraction != sol.absorbed_raw) {
    sol.clamped = true;
    sol.warnings.push_back("absorbed fraction clamped from " + std::to_string(sol.absorbed_raw));
  }
  if (sol.fit_spread > 1e-3) sol.warnings.push_back("incident amplitude varies across the fitting window");

  // Normalize to unit incident amplitude (|b|^2 averaged over the window).
  const double bnorm = std::sqrt(sb);
  const cplx bphase = b_ref / std::abs(b_ref);
  auto true_scale = [&](double ls) { return std::exp(ls - ls_end) / bnorm; };
  const Rec& last = recs.back();
  double s_end = true_scale(last.log_scale);
  sol.band_flux = last.fb * s_end * s_end;
  sol.spoiler_state_flux = last.fs * s_end * s_end;
  sol.absorbed_flux = sol.band_flux + sol.spoiler_state_flux;

  // Profile and window bookkeeping; records arrive in descending eps.
  std::vector<double> ee, rr;
  auto flux_at = [&](double e) {
    for (const auto& r : recs)
      if (r.e == e) {
        double s = true_scale(r.log_scale);
        return r.fb * s * s;
      }
    return std::numeric_limits<double>::quiet_NaN();
  };
  for (auto it = recs.rbegin(); it != recs.rend(); ++it) {
    const auto& r = *it;
    cplx psi = r.psi * true_scale(r.log_scale) / bphase;
    if (r.e >= p_lo && r.e <= p_hi) {
      sol.eps.push_back(r.e);
      sol.psi.push_back(psi);
      sol.potential.push_back(pot.u(r.e));
    }
    if (r.e > 0.0 && r.e <= edge_hi) {
      ee.push_back(r.e);
      rr.push_back(std::norm(psi));
    }
  }
  // Sort the combined profile (fit points and profile points interleave).
  {
    std::vector<std::size_t> idx(sol.eps.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](auto i, auto j) { return sol.eps[i] < sol.eps[j]; });
    std::vector<double> e2;
    std::vector<cplx> p2, u2;
    for (auto i : idx) {
      if (!e2.empty() && e2.back() == sol.eps[i]) continue;
      e2.push_back(sol.eps[i]);
      p2.push_back(sol.psi[i]);
      u2.push_back(sol.potential[i]);
    }
    sol.eps = std::move(e2);
    sol.psi = std::move(p2);
    sol.potential = std::move(u2);
  }
  const double f0 = flux_at(d0);
  if (edge_hi > 0.0) sol.edge_population = f0 - flux_at(edge_hi);
  if (win.spoiler_hi > win.spoiler_lo && win.spoiler_hi < e_start)
    sol.spoiler_population = flux_at(win.spoiler_lo) - flux_at(win.spoiler_hi);
  if (ee.size() >= 2) {
    auto m = moments_density(ee, rr, 0.0, edge_hi);
    sol.edge_w50 = m.w50;
    sol.edge_fwhm = m.fwhm;
  }
  return sol;
}

WkbResult wkb_transfer(double w, double e_o, double alpha, double factor) {
  if (!(w > 0.0) || !(alpha > 0.0)) throw InvalidArgument("wkb_transfer: w and alpha must be positive");
  WkbResult r;
  r.turning = turning_point(w, e_o);
  auto f = [&](double e) {
    double q = (e - w * std::log(-e) - e_o) / alpha;
    return q > 0.0 ? std::sqrt(q) : 0.0;
  };
  std::vector<double> br{r.turning, 0.0};
  for (int k = 1; k <= 16; ++k) br.push_back(r.turning * std::pow(10.0, -k));
  for (double f2 : {0.5, 0.9, 0.99, 0.999}) br.push_back(r.turning * f2);
  std::sort(br.begin(), br.end());
  r.exponent = integrate_panels<double>(f, br, 1e-10);
  r.probability = std::exp(-factor * r.exponent);
  return r;
}

namespace {

Surface make_surface(const std::vector<double>& x, const std::vector<double>& y) {
  Surface s;
  s.x = x;
  s.y = y;
  s.mean.assign(x.size() * y.size(), 0.0);
  s.stddev.assign(x.size() * y.size(), 0.0);
  s.failures.assign(x.size() * y.size(), 0);
  return s;
}

}  // namespace

Surface width_surface(double w, const std::vector<double>& e_o_over_w,
                      const std::vector<double>& alpha_over_w2, const ScatteringGrid& grid) {
  Surface s = make_surface(e_o_over_w, alpha_over_w2);
  const std::size_t ny = alpha_over_w2.size();
  parallel_for(e_o_over_w.size() * ny, [&](std::size_t k) {
    ScatteringPotential pot;
    pot.w = w;
    pot.e_o = e_o_over_w[k / ny] * w;
    pot.alpha = alpha_over_w2[k % ny] * w * w;
    try {
      auto sol = solve_scattering(pot, grid);
      s.mean[k] = sol.edge_w50 > 0.0 ? 1.0 / sol.edge_w50 : 0.0;
    } catch (const std::exception&) {
      s.failures[k] = 1;
      s.mean[k] = std::numeric_limits<double>::quiet_NaN();
    }
  });
  return s;
}

TransferSurfaces transfer_surfaces(double w, const std::vector<double>& e_o_over_w,
                                   const std::vector<double>& alpha_over_w2, const ScatteringGrid& grid) {
  TransferSurfaces t{make_surface(e_o_over_w, alpha_over_w2), make_surface(e_o_over_w, alpha_over_w2)};
  const std::size_t ny = alpha_over_w2.size();
  parallel_for(e_o_over_w.size() * ny, [&](std::size_t k) {
    double e_o = e_o_over_w[k / ny] * w, alpha = alpha_over_w2[k % ny] * w * w;
    t.wkb.mean[k] = wkb_transfer(w, e_o, alpha).probability;
    ScatteringPotential pot;
    pot.w = w;
    pot.e_o = e_o;
    pot.alpha = alpha;
    try {
      auto sol = solve_scattering(pot, grid);
      // Below ~1e-6 the reflection deficit is rounding; the flux integral is not.
      t.numeric.mean[k] = sol.absorbed_fraction < 1e-6 ? sol.absorbed_flux : sol.absorbed_fraction;
    } catch (const std::exception&) {
      t.numeric.failures[k] = 1;
      t.numeric.mean[k] = std::numeric_limits<double>::quiet_NaN();
    }
  });
  return t;
}

SpoilerReport spoiler_scattering_report(const ScatteringPotential& pot, const Windows* windows,
                                        const ScatteringGrid& grid) {
  if (pot.spoilers.size() != 1) throw InvalidArgument("spoiler report: exactly one spoiler required");
  // Explicit windows must be disjoint.
  Windows win = windows ? *windows : default_windows(pot.w, pot.gamma, &pot.spoilers[0]);
  check_windows(win);
  ScatteringGrid g = grid;
  ScatteringSolution sol = solve_scattering(pot, g);
  // Recompute window populations when custom windows are given.
  SpoilerReport r;
  r.windows = win;
  r.edge_population = sol.edge_population;
  r.spoiler_population = sol.spoiler_population;
  if (windows) {
    std::vector<double> ee, rr;
    for (std::size_t i = 0; i < sol.eps.size(); ++i) {
      ee.push_back(sol.eps[i]);
      rr.push_back(sol.eps[i] > 0.0 ? M_PI * pot.w / pot.alpha * std::norm(sol.psi[i]) : 0.0);
    }
    r.edge_population = moments_density(ee, rr, win.edge_lo, win.edge_hi).total;
    r.spoiler_population = moments_density(ee, rr, win.spoiler_lo, win.spoiler_hi).total;
  }
  r.spoiler_state = sol.spoiler_state_flux;
  r.ratio = r.spoiler_population > 0.0 ? r.edge_population / r.spoiler_population
                                       : std::numeric_limits<double>::infinity();
  r.edge_w50 = sol.edge_w50;
  r.edge_fwhm = sol.edge_fwhm;
  r.absorbed = sol.absorbed_fraction;
  return r;
}

EnsembleResult random_spoiler_ensemble(const ScatteringPotential& base, const SpoilerEnsembleSpec& spec,
                                       const std::vector<double>& e_o_over_w,
                                       const std::vector<double>& alpha_over_w2, int realizations,
                                       const ScatteringGrid& grid) {
  if (realizations < 1) throw InvalidArgument("ensemble: realizations must be >= 1");
  if (spec.count < 0) throw InvalidArgument("ensemble: spoiler count must be >= 0");
  EnsembleResult out;
  out.realizations = realizations;
  out.width = make_surface(e_o_over_w, alpha_over_w2);
  const std::size_t ny = alpha_over_w2.size(), npts = e_o_over_w.size() * ny;
  ContinuumEdgeParams cp{-1.0, 1.0, 1.0, base.gamma};
  std::vector<std::vector<Spoiler>> sets(static_cast<std::size_t>(realizations));
  for (int r = 0; r < realizations; ++r) {
    SpoilerEnsembleSpec s = spec;
    s.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(r));
    sets[static_cast<std::size_t>(r)] = sample_spoilers(s, cp);
  }
  std::vector<double> widths(npts * static_cast<std::size_t>(realizations),
                             std::numeric_limits<double>::quiet_NaN());
  parallel_for(widths.size(), [&](std::size_t k) {
    std::size_t pt = k / static_cast<std::size_t>(realizations);
    std::size_t r = k % static_cast<std::size_t>(realizations);
    ScatteringPotential pot = base;
    pot.e_o = e_o_over_w[pt / ny] * base.w;
    pot.alpha = alpha_over_w2[pt % ny] * base.w * base.w;
    pot.spoilers = sets[r];
    try {
      widths[k] = solve_scattering(pot, grid).edge_w50;
    } catch (const std::exception&) {
    }
  });
  for (std::size_t pt = 0; pt < npts; ++pt) {
    double s1 = 0.0, s2 = 0.0;
    int n = 0;
    for (int r = 0; r < realizations; ++r) {
      double v = widths[pt * static_cast<std::size_t>(realizations) + static_cast<std::size_t>(r)];
      if (std::isnan(v)) {
        ++out.width.failures[pt];
        continue;
      }
      s1 += v;
      s2 += v * v;
      ++n;
    }
    if (n > 0) {
      out.width.mean[pt] = s1 / n;
      out.width.stddev[pt] = n > 1 ? std::sqrt(std::max(0.0, (s2 - s1 * s1 / n) / (n - 1))) : 0.0;
    } else {
      out.width.mean[pt] = out.width.stddev[pt] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return out;
}

}  // namespace qedge
