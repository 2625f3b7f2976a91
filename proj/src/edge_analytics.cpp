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

#include "qedge/edge_analytics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qedge/errors.hpp"
#include "qedge/parallel.hpp"
#include "qedge/quadrature.hpp"
#include "qedge/special_functions.hpp"

namespace qedge {

namespace {

constexpr cplx kI(0.0, 1.0);
// e^{-40} < 1e-16 bounds the truncation of the u = y t integrals.
constexpr double kUMax = 40.0;

}  // namespace

EdgeParams EdgeParams::from_continuum(const ContinuumEdgeParams& p) {
  p.validate();
  return {p.w(), p.ebar0(), p.v, p.gamma};
}

double EdgeParams::e0() const { return -ebar0 + w * std::log(gamma); }

void EdgeParams::validate() const {
  if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("w must be positive");
  if (!std::isfinite(ebar0)) throw InvalidArgument("ebar0 must be finite");
  if (!(v != 0.0) || !std::isfinite(v)) throw InvalidArgument("v must be nonzero");
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
}

double pole_epsilon0(const EdgeParams& p) {
  p.validate();
  double eps = -p.w * lambert_w0_exp(p.ebar0 / p.w - std::log(p.w));
  // One Newton polish on eps - w ln(-eps) + ebar0.
  double f = eps - p.w * std::log(-eps) + p.ebar0;
  double d = 1.0 - p.w / eps;
  double next = eps - f / d;
  if (next < 0.0) eps = next;
  return eps;
}

double residue_weight_edge(const EdgeParams& p) { return 1.0 / (1.0 - p.w / pole_epsilon0(p)); }

EdgeResolvent::EdgeResolvent(const EdgeParams& p, std::optional<Spoiler> s) : p_(p), sp_(s) {
  p_.validate();
  if (sp_ && sp_->v_s == 0.0) sp_.reset();
  if (sp_ && !(sp_->e_s > 0.0)) throw InvalidArgument("spoiler energy must be positive");
  const double eps0 = pole_epsilon0(p_);
  if (!sp_) {
    poles_ = {cplx(eps0, 0.0)};
    add_complex_roots();
    return;
  }
  const double es = sp_->e_s, vs2 = sp_->v_s * sp_->v_s;
  // Real root below the edge: D increases on (-inf, 0) and the spoiler term
  // pushes it below eps0.
  auto dreal = [&](double e) { return e - p_.w * std::log(-e) + p_.ebar0 + vs2 / (es - e); };
  double hi = eps0, lo = eps0 - vs2 / es - 1.0;
  for (int i = 0; i < 200 && dreal(lo) > 0.0; ++i) lo = eps0 - 2.0 * (eps0 - lo);
  if (dreal(lo) > 0.0) throw NumericError("spoiler: could not bracket the real root");
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double f = dreal(x);
    if (f > 0.0) hi = x; else lo = x;
    double d = 1.0 - p_.w / x + vs2 / ((es - x) * (es - x));
    double xn = x - f / d;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    double step = std::abs(xn - x);
    x = xn;
    if (step <= 1e-16 * std::abs(x) || hi - lo <= 1e-16 * std::abs(x)) break;
  }
  poles_ = {cplx(x, 0.0)};

  add_complex_roots();
}

cplx EdgeResolvent::pole_free(cplx eps) const {
  cplx d = eps - p_.w * branched_log(eps) + p_.ebar0;
  if (!sp_) return d;
  return (sp_->e_s - eps) * d + sp_->v_s * sp_->v_s;
}

cplx EdgeResolvent::pole_free_derivative(cplx eps) const {
  cplx d1 = 1.0 - p_.w / eps;
  if (!sp_) return d1;
  cplx d = eps - p_.w * branched_log(eps) + p_.ebar0;
  return -d + (sp_->e_s - eps) * d1;
}

// Zeros of D continued through the band into Re > 0, Im < 0. On that sheet
// Im D = 0 forces -1.5 pi w < Im eps < 0, and |eps| is bounded by the linear
// term, so a finite box holds them all.
void EdgeResolvent::add_complex_roots() {
  const double w = p_.w;
  const double es = sp_ ? sp_->e_s : 0.0;
  const double vs2 = sp_ ? sp_->v_s * sp_->v_s : 0.0;
  const double im_lo = -1.5 * M_PI * w * (1.0 + 1e-9);
  const double big = std::abs(p_.ebar0) + es + std::sqrt(vs2);
  const double re_hi = 2.0 * big + 10.0 * w * (1.0 + std::log1p(big / w)) + 10.0 * w;

  std::vector<cplx> seeds;
  if (sp_) seeds.push_back(es + vs2 / (es - p_.w * branched_log(cplx(es, 0.0)) + p_.ebar0));
  const int nre = 48, nim = 6;
  for (int i = 1; i <= nre; ++i) {
    double x = re_hi * std::pow(1e-4, 1.0 - double(i) / nre);
    for (int j = 1; j <= nim; ++j) seeds.emplace_back(x, im_lo * j / (nim + 0.5));
  }

  std::vector<cplx> found;
  for (cplx z : seeds) {
    double fz = std::abs(pole_free(z));
    for (int it = 0; it < 200; ++it) {
      cplx step = pole_free(z) / pole_free_derivative(z);
      double lam = 1.0;
      cplx zn = z;
      double fn = fz;
      for (int h = 0; h < 40; ++h) {
        zn = z - lam * step;
        if (zn.real() <= 0.0) zn.real(0.5 * z.real());
        fn = std::abs(pole_free(zn));
        if (fn < fz) break;
        lam *= 0.5;
      }
      if (!(fn < fz)) break;
      double move = std::abs(zn - z);
      z = zn;
      fz = fn;
      if (move <= 1e-15 * std::abs(z)) break;
    }
    if (!(z.imag() < 0.0 && z.real() > 0.0)) continue;
    // Residual of the pole-free form; near e_s the difference e_s - eps is
    // itself too inexact to test D directly.
    double sz = std::abs(z) + std::abs(p_.ebar0) + w * std::abs(branched_log(z)) + 1.0;
    if (sp_) sz = sz * (std::abs(es - z) + 1e-4 * es) + vs2;  // rounding floor of e_s - eps
    if (!(std::abs(pole_free(z)) <= 1e-11 * sz)) continue;
    bool dup = false;
    for (const auto& f : found)
      if (std::abs(f - z) <= 1e-8 * std::max(1.0, std::abs(z))) dup = true;
    if (!dup) found.push_back(z);
  }

  // Argument principle on a box around the search region.
  const double h = 0.25 * w;
  const double eta = 1e-9 * std::min(w, big > 0.0 ? big : w);
  const cplx c0(eta, h), c1(eta, 1.2 * im_lo), c2(re_hi, 1.2 * im_lo), c3(re_hi, h);
  double wind = 0.0;
  auto seg = [&](cplx a, cplx b) {
    const int n0 = 64;
    cplx prev = a;
    cplx fprev = denominator(a);
    for (int i = 1; i <= n0; ++i) {
      cplx next = a + (b - a) * (double(i) / n0);
      std::vector<std::pair<cplx, cplx>> stack{{prev, next}};
      cplx fa = fprev;
      while (!stack.empty()) {
        auto [pa, pb] = stack.back();
        cplx fb = denominator(pb);
        double d = std::arg(fb / fa);
        if (std::abs(d) > 0.2 && std::abs(pb - pa) > 1e-14 * std::abs(b - a)) {
          stack.push_back({pa, 0.5 * (pa + pb)});
          continue;
        }
        wind += d;
        fa = fb;
        stack.pop_back();
        if (!stack.empty()) stack.back().first = pb;
      }
      prev = next;
      fprev = fa;
    }
  };
  seg(c0, c1);
  seg(c1, c2);
  seg(c2, c3);
  seg(c3, c0);
  long count = std::lround(wind / (2.0 * M_PI)) + (sp_ ? 1 : 0);
  if (count != long(found.size()))
    throw NumericError("resolvent: found " + std::to_string(found.size()) +
                       " complex roots, argument principle counts " + std::to_string(count));
  std::sort(found.begin(), found.end(), [&](cplx a, cplx b) {
    return std::abs(a - es) < std::abs(b - es);
  });
  for (const auto& z : found) poles_.push_back(z);
}

cplx EdgeResolvent::denominator(cplx eps) const {
  cplx d = eps - p_.w * branched_log(eps) + p_.ebar0;
  if (sp_) d += sp_->v_s * sp_->v_s / (sp_->e_s - eps);
  return d;
}

cplx EdgeResolvent::denominator_derivative(cplx eps) const {
  cplx d = 1.0 - p_.w / eps;
  if (sp_) {
    cplx x = sp_->e_s - eps;
    d += sp_->v_s * sp_->v_s / (x * x);
  }
  return d;
}

cplx EdgeResolvent::denominator_cut(double y, bool left) const {
  cplx lg = left ? cut_log_left(y) : cut_log_right(y);
  cplx eps(0.0, -y);
  cplx d = eps - p_.w * lg + p_.ebar0;
  if (sp_) d += sp_->v_s * sp_->v_s / (sp_->e_s - eps);
  return d;
}

template <class Amp>
cplx EdgeResolvent::cut_integral(Amp amp, double t, std::vector<double> scales) const {
  scales.push_back(p_.w);
  scales.push_back(std::abs(p_.ebar0));
  for (const auto& e : poles_) scales.push_back(std::abs(e));
  if (sp_) scales.push_back(sp_->e_s);
  const double w = p_.w;
  auto kernel = [&](double y) {
    return amp(cplx(0.0, -y)) / (denominator_cut(y, true) * denominator_cut(y, false));
  };
  std::vector<double> br;
  double smallest = std::numeric_limits<double>::infinity();
  if (t > 0.0) {
    br = {0.0, kUMax};
    for (double s : scales) {
      if (!(s > 0.0)) continue;
      for (double f : {0.1, 0.3, 1.0, 3.0, 10.0}) {
        double u = t * s * f;
        if (u > 0.0 && u < kUMax) br.push_back(u);
      }
    }
    for (double b : br)
      if (b > 0.0) smallest = std::min(smallest, b);
    for (int k = 1; k <= 16; ++k) br.push_back(smallest * std::pow(10.0, -k));
    auto f = [&](double u) { return std::exp(-u) * kernel(u / t); };
    cplx val = integrate_panels<cplx>(f, br, quad_rtol);
    return -kI * w / t * val;
  }
  br = {0.0, std::numeric_limits<double>::infinity()};
  for (double s : scales) {
    if (!(s > 0.0)) continue;
    for (double f : {0.1, 0.3, 1.0, 3.0, 10.0, 100.0}) br.push_back(s * f);
  }
  for (double b : br)
    if (b > 0.0) smallest = std::min(smallest, b);
  for (int k = 1; k <= 16; ++k) br.push_back(smallest * std::pow(10.0, -k));
  cplx val = integrate_panels<cplx>(kernel, br, quad_rtol);
  return -kI * w * val;
}

cplx EdgeResolvent::cut0(double t) const {
  if (t < 0.0) throw InvalidArgument("psi0: t must be >= 0");
  return cut_integral([](cplx) { return cplx(1.0, 0.0); }, t, {});
}

cplx EdgeResolvent::psi0(double t) const {
  cplx s = cut0(t);
  for (std::size_t k = 0; k < poles_.size(); ++k)
    s += std::exp(-kI * poles_[k] * t) * residue_weight(k);
  return s;
}

cplx EdgeResolvent::psiE(double e, double t) const {
  if (!(e > 0.0)) throw InvalidArgument("psiE: E must be positive");
  if (t < 0.0) throw InvalidArgument("psiE: t must be >= 0");
  const double v = p_.v;
  cplx s = cut_integral([&](cplx eps) { return v / (eps - e); }, t, {e});
  for (std::size_t k = 0; k < poles_.size(); ++k)
    s += v * std::exp(-kI * poles_[k] * t) * residue_weight(k) / (poles_[k] - e);
  s += v * std::exp(-kI * e * t) / denominator(cplx(e, 0.0));
  return s;
}

cplx EdgeResolvent::psiS(double t) const {
  if (!sp_) return {0.0, 0.0};
  if (t < 0.0) throw InvalidArgument("psiS: t must be >= 0");
  const double es = sp_->e_s, vs = sp_->v_s;
  cplx s = cut_integral([&](cplx eps) { return vs / (eps - es); }, t, {es});
  for (std::size_t k = 0; k < poles_.size(); ++k)
    s += vs * std::exp(-kI * poles_[k] * t) * residue_weight(k) / (poles_[k] - es);
  return s;
}

double EdgeResolvent::rho0_infinity() const { return std::norm(residue_weight(0)); }

double EdgeResolvent::rhoS_infinity() const {
  if (!sp_) return 0.0;
  return std::norm(sp_->v_s * residue_weight(0) / (poles_[0] - sp_->e_s));
}

double EdgeResolvent::rho_stationary(double e) const {
  const double v = p_.v;
  cplx a = v * residue_weight(0) / (poles_[0] - e);
  cplx b = v / denominator(cplx(e, 0.0));
  return std::norm(a) + std::norm(b);
}

cplx psi0_edge(const EdgeParams& p, double t) { return EdgeResolvent(p).psi0(t); }

cplx psiE_edge(const EdgeParams& p, double e, double t) { return EdgeResolvent(p).psiE(e, t); }

std::vector<double> stationary_profile(const EdgeParams& p, const std::vector<double>& e_grid) {
  EdgeResolvent r(p);
  std::vector<double> out(e_grid.size());
  for (std::size_t i = 0; i < e_grid.size(); ++i) {
    if (!(e_grid[i] > 0.0)) throw InvalidArgument("stationary_profile: energies must be > 0");
    out[i] = r.rho_stationary(e_grid[i]);
  }
  return out;
}

double stationary_population(const EdgeResolvent& r, double a, double b) {
  if (!(b > a) || a < 0.0) throw InvalidArgument("stationary_population: bad interval");
  const auto& p = r.params();
  std::vector<double> br{a, b};
  std::vector<double> scales{p.w, std::abs(r.poles()[0].real()), std::abs(p.ebar0)};
  if (r.has_spoiler()) {
    scales.push_back(r.spoiler().e_s);
    double es = r.spoiler().e_s;
    double hw = std::max(p.w, r.spoiler().v_s * r.spoiler().v_s / es);
    for (double f : {-1.0, -0.1, -0.01, 0.0, 0.01, 0.1, 1.0}) br.push_back(es + f * hw);
  }
  for (double s : scales)
    for (double f : {1e-12, 1e-9, 1e-6, 1e-3, 0.01, 0.1, 0.3, 1.0, 3.0, 10.0, 100.0})
      br.push_back(s * f);
  std::vector<double> clipped;
  for (double x : br)
    if (x >= a && x <= b) clipped.push_back(x);
  auto f = [&](double e) { return e > 0.0 ? r.density_stationary(e) : 0.0; };
  return integrate_panels<double>(f, clipped, 1e-10);
}

TailFit tail_law_fit(const EdgeParams& p, const std::vector<double>& t_grid) {
  EdgeResolvent r(p);
  TailFit fit;
  const double z = std::abs(r.residue_weight(0));
  std::vector<double> ratio;
  for (double t : t_grid) {
    double wt = p.w * t;
    if (!(wt > M_E)) throw InvalidArgument("tail_law_fit: times must satisfy w t > e");
    cplx c = r.cut0(t);
    double ex = 2.0 * z * std::abs(c) + std::norm(c);
    fit.times.push_back(t);
    fit.excess.push_back(ex);
    ratio.push_back(ex * wt * std::log(wt));
  }
  double m = 0.0;
  for (double x : ratio) m += x;
  fit.c = m / ratio.size();
  double s = 0.0;
  for (double x : ratio) s += (x / fit.c - 1.0) * (x / fit.c - 1.0);
  fit.rel_residual = std::sqrt(s / ratio.size());
  fit.regime_warning = fit.rel_residual > 0.2;
  return fit;
}

EdgeSurface edge_transfer_surface(double w, double v, double gamma,
                                  const std::vector<double>& gaps_over_w,
                                  const std::vector<double>& e_over_w) {
  EdgeSurface s;
  s.gaps = gaps_over_w;
  s.energies = e_over_w;
  s.density.assign(gaps_over_w.size() * e_over_w.size(), 0.0);
  s.window_population.assign(gaps_over_w.size(), 0.0);
  parallel_for(gaps_over_w.size(), [&](std::size_t i) {
    EdgeParams p{w, gaps_over_w[i] * w + w * std::log(gamma), v, gamma};
    EdgeResolvent r(p);
    for (std::size_t j = 0; j < e_over_w.size(); ++j)
      s.density[i * e_over_w.size() + j] = r.density_stationary(e_over_w[j] * w);
    s.window_population[i] = stationary_population(r, 0.0, gamma / 100.0);
  });
  return s;
}

}  // namespace qedge
