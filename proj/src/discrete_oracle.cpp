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

#include "qedge/discrete_oracle.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "qedge/errors.hpp"
#include "qedge/parallel.hpp"

namespace qedge {

ArrowheadEigenSystem::ArrowheadEigenSystem(const DiscreteBand& band) : band_(band) {
  for (std::size_t i = 1; i < band_.levels.size(); ++i)
    if (band_.levels[i].e < band_.levels[i - 1].e)
      throw InvalidArgument("arrowhead: band levels must be sorted by energy");
  map_.assign(band_.levels.size(), -1);
  for (std::size_t i = 0; i < band_.levels.size(); ++i) {
    const auto& lv = band_.levels[i];
    if (!std::isfinite(lv.e) || !std::isfinite(lv.v)) throw InvalidArgument("arrowhead: non-finite level");
    if (lv.v == 0.0) continue;
    // Deflation of exactly coincident energies.
    if (!re_.empty() && lv.e == re_.back()) {
      rv2_.back() += lv.v * lv.v;
    } else {
      re_.push_back(lv.e);
      rv2_.push_back(lv.v * lv.v);
    }
    map_[i] = static_cast<std::ptrdiff_t>(re_.size() - 1);
  }
  solve();
}

double ArrowheadEigenSystem::secular(double lambda) const {
  double s = 0.0;
  for (std::size_t m = 0; m < re_.size(); ++m) s += rv2_[m] / (lambda - re_[m]);
  return lambda - band_.e0 - s;
}

void ArrowheadEigenSystem::solve() {
  const std::size_t r = re_.size();
  const double e0 = band_.e0;
  if (r == 0) {
    // Isolated level alone; anchor the root on e0 through a sentinel entry.
    re_.push_back(e0);
    rv2_.push_back(0.0);
    base_ = {0};
    delta_ = {0.0};
    apex_ = {1.0};
    return;
  }
  double vnorm2 = 0.0;
  for (double x : rv2_) vnorm2 += x;
  const double vnorm = std::sqrt(vnorm2);

  base_.resize(r + 1);
  delta_.resize(r + 1);
  apex_.resize(r + 1);

  // phi(d) = d * f(E_b + d) with the E_b pole divided out; phi(0) = -v_b^2 < 0.
  auto phi = [&](std::size_t b, double d, double& dphi) {
    double s = 0.0, s2 = 0.0;
    const double eb = re_[b];
    for (std::size_t m = 0; m < r; ++m) {
      if (m == b) continue;
      double x = 1.0 / ((eb - re_[m]) + d);
      double y = rv2_[m] * x;
      s += y;
      s2 += y * x;
    }
    double g = (eb - e0) + d - s;
    dphi = g + d * (1.0 + s2);
    return d * g - rv2_[b];
  };

  auto solve_root = [&](std::size_t k, std::size_t b, double far) {
    double dd;
    double pfar = phi(b, far, dd);
    double a = 0.0, c = far;  // phi(a) < 0 <= phi(c)
    double d = far * rv2_[b] / (rv2_[b] + std::max(pfar, 0.0));
    if (!(d != 0.0) || std::abs(d) >= std::abs(far)) d = 0.5 * far;
    for (int it = 0; it < 200; ++it) {
      double dp;
      double p = phi(b, d, dp);
      if (p < 0.0) a = d; else c = d;
      if (p == 0.0) break;
      double dn = d - p / dp;
      bool inside = (dn - a) * (dn - c) < 0.0;
      if (!inside || !std::isfinite(dn)) dn = 0.5 * (a + c);
      double step = std::abs(dn - d);
      d = dn;
      if (step <= 2e-16 * std::abs(d) || std::abs(c - a) <= 2e-16 * std::abs(d)) break;
    }
    base_[k] = b;
    delta_[k] = d;
  };

  // Below the band.
  {
    double lo = std::min(e0, re_[0]) - vnorm - 1e-12 * (1.0 + std::abs(re_[0]));
    solve_root(0, 0, lo - re_[0]);
  }
  // One root inside each gap between consecutive reduced energies.
  for (std::size_t j = 0; j + 1 < r; ++j) {
    const double h = re_[j + 1] - re_[j];
    const double mid = re_[j] + 0.5 * h;
    if (secular(mid) > 0.0) solve_root(j + 1, j, mid - re_[j]);
    else solve_root(j + 1, j + 1, mid - re_[j + 1]);
  }
  // Above the band.
  {
    double hi = std::max(e0, re_[r - 1]) + vnorm + 1e-12 * (1.0 + std::abs(re_[r - 1]));
    solve_root(r, r - 1, hi - re_[r - 1]);
  }
  for (std::size_t k = 0; k <= r; ++k) {
    double s = 1.0;
    for (std::size_t m = 0; m < r; ++m) {
      double gp = gap(k, m);
      s += rv2_[m] / (gp * gp);
    }
    apex_[k] = 1.0 / std::sqrt(s);
  }
}

std::vector<double> ArrowheadEigenSystem::eigenvalues() const {
  std::vector<double> ev;
  ev.reserve(band_.levels.size() + 1);
  for (std::size_t k = 0; k < num_roots(); ++k) ev.push_back(root(k));
  // Decoupled levels and the dark partners of merged levels.
  std::vector<int> seen(re_.size(), 0);
  for (std::size_t n = 0; n < band_.levels.size(); ++n) {
    auto j = map_[n];
    if (j < 0) ev.push_back(band_.levels[n].e);
    else if (seen[static_cast<std::size_t>(j)]++) ev.push_back(band_.levels[n].e);
  }
  std::sort(ev.begin(), ev.end());
  return ev;
}

namespace {

std::vector<cplx> phases(const ArrowheadEigenSystem& es, double t) {
  std::vector<cplx> ph(es.num_roots());
  for (std::size_t k = 0; k < ph.size(); ++k) ph[k] = std::polar(1.0, -es.root(k) * t);
  return ph;
}

}  // namespace

std::vector<cplx> band_amplitudes(const ArrowheadEigenSystem& es, double t) {
  const auto& band = es.band();
  std::vector<cplx> out(band.levels.size(), cplx(0.0, 0.0));
  bool any = false;
  for (std::size_t n = 0; n < out.size(); ++n) any = any || es.reduced_index(n) >= 0;
  if (!any) return out;
  auto ph = phases(es, t);
  const std::size_t nk = es.num_roots();
  std::vector<cplx> red(es.reduced_size());
  std::vector<double> w2(nk);
  for (std::size_t k = 0; k < nk; ++k) w2[k] = es.apex(k) * es.apex(k);
  std::vector<double> re(nk), im(nk);
  for (std::size_t k = 0; k < nk; ++k) {
    re[k] = w2[k] * ph[k].real();
    im[k] = w2[k] * ph[k].imag();
  }
  for (std::size_t j = 0; j < red.size(); ++j) {
    double sr = 0.0, si = 0.0;
    for (std::size_t k = 0; k < nk; ++k) {
      double x = 1.0 / es.gap(k, j);
      sr += re[k] * x;
      si += im[k] * x;
    }
    red[j] = {sr, si};
  }
  for (std::size_t n = 0; n < out.size(); ++n) {
    auto j = es.reduced_index(n);
    if (j >= 0) out[n] = band.levels[n].v * red[static_cast<std::size_t>(j)];
  }
  return out;
}

AmplitudeTrajectory evolve_static(const ArrowheadEigenSystem& es, const std::vector<double>& t,
                                  bool with_band) {
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] < t[i - 1]) throw InvalidArgument("evolve_static: time grid must ascend");
  AmplitudeTrajectory tr;
  tr.times = t;
  tr.psi0.resize(t.size());
  const std::size_t nk = es.num_roots();
  std::vector<double> w2(nk), lam(nk);
  double wsum = 0.0;
  for (std::size_t k = 0; k < nk; ++k) {
    w2[k] = es.apex(k) * es.apex(k);
    lam[k] = es.root(k);
    wsum += w2[k];
  }
  tr.norm_drift = std::abs(wsum - 1.0);
  parallel_for(t.size(), [&](std::size_t i) {
    double sr = 0.0, si = 0.0;
    for (std::size_t k = 0; k < nk; ++k) {
      double a = -lam[k] * t[i];
      sr += w2[k] * std::cos(a);
      si += w2[k] * std::sin(a);
    }
    tr.psi0[i] = {sr, si};
  });
  if (with_band) {
    tr.psi_band.resize(t.size());
    std::vector<double> drift(t.size(), 0.0);
    parallel_for(t.size(), [&](std::size_t i) {
      tr.psi_band[i] = band_amplitudes(es, t[i]);
      double nrm = std::norm(tr.psi0[i]);
      for (const auto& a : tr.psi_band[i]) nrm += std::norm(a);
      drift[i] = std::abs(nrm - 1.0);
    });
    for (double d : drift) tr.norm_drift = std::max(tr.norm_drift, d);
  }
  return tr;
}

namespace {

using State = std::vector<cplx>;

struct Reduced {
  std::vector<double> e, v, v2;
  std::vector<std::ptrdiff_t> map;
};

Reduced reduce(const DiscreteBand& band) {
  Reduced r;
  r.map.assign(band.levels.size(), -1);
  for (std::size_t i = 0; i < band.levels.size(); ++i) {
    const auto& lv = band.levels[i];
    if (lv.v == 0.0) continue;
    if (!r.e.empty() && lv.e == r.e.back()) {
      r.v2.back() += lv.v * lv.v;
    } else {
      r.e.push_back(lv.e);
      r.v2.push_back(lv.v * lv.v);
    }
    r.map[i] = static_cast<std::ptrdiff_t>(r.e.size() - 1);
  }
  for (double x : r.v2) r.v.push_back(std::sqrt(x));
  return r;
}

// Lab-frame eigenvector of the lowest root for the level held at energy e_level.
std::vector<cplx> dressed_state(const Reduced& r, double e_level) {
  DiscreteBand b;
  b.e0 = e_level;
  for (std::size_t j = 0; j < r.e.size(); ++j) b.levels.push_back({r.e[j], r.v[j]});
  ArrowheadEigenSystem es(b);
  std::vector<cplx> s(r.e.size() + 1);
  s[0] = es.apex(0);
  for (std::size_t j = 0; j < r.e.size(); ++j) s[j + 1] = r.v[j] * es.apex(0) / es.gap(0, j);
  return s;
}

// Interaction picture: c0 = psi0 exp(i Phi(t)), c_j = psi_j exp(i E_j t).
template <class PhaseFn, class LevelFn>
MovingResult evolve_interaction(const DiscreteBand& band, PhaseFn phase, LevelFn lab_level,
                                double t_begin,
                                double t_end, const std::vector<double>& t_out,
                                const MovingOptions& opt) {
  namespace ode = boost::numeric::odeint;
  if (!(t_end > t_begin)) throw InvalidArgument("evolve_moving: empty time span");
  if (!(opt.rtol > 0.0) || !(opt.atol > 0.0)) throw InvalidArgument("evolve_moving: tolerances must be positive");
  Reduced r = reduce(band);
  const std::size_t nr = r.e.size();

  State y(nr + 1, cplx(0.0, 0.0));
  if (opt.dressed_start && nr > 0) {
    auto s = dressed_state(r, lab_level(t_begin));
    y[0] = s[0] * std::polar(1.0, phase(t_begin));
    for (std::size_t j = 0; j < nr; ++j) y[j + 1] = s[j + 1] * std::polar(1.0, r.e[j] * t_begin);
  } else {
    y[0] = std::polar(1.0, phase(t_begin));
  }

  std::vector<cplx> ph(nr);
  auto rhs = [&](const State& x, State& dx, double t) {
    const double p = phase(t);
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < nr; ++j) {
      ph[j] = std::polar(r.v[j], p - r.e[j] * t);
      acc += ph[j] * x[j + 1];
    }
    dx[0] = cplx(acc.imag(), -acc.real());
    const cplx c0 = x[0];
    for (std::size_t j = 0; j < nr; ++j) {
      cplx z = std::conj(ph[j]) * c0;
      dx[j + 1] = cplx(z.imag(), -z.real());
    }
  };

  std::vector<double> times;
  times.push_back(t_begin);
  for (double t : t_out)
    if (t > t_begin && t < t_end) times.push_back(t);
  std::sort(times.begin(), times.end());
  times.push_back(t_end);

  MovingResult res;
  auto& tr = res.trajectory;
  double max_drift = 0.0;
  auto observer = [&](const State& x, double t) {
    double nrm = 0.0;
    for (const auto& a : x) nrm += std::norm(a);
    max_drift = std::max(max_drift, std::abs(nrm - 1.0));
    tr.times.push_back(t);
    tr.psi0.push_back(x[0] * std::polar(1.0, -phase(t)));
  };
  try {
    auto stepper = ode::make_dense_output(opt.atol, opt.rtol, ode::runge_kutta_dopri5<State>());
    res.steps = ode::integrate_times(stepper, rhs, y, times.begin(), times.end(),
                                     opt.initial_step, observer);
  } catch (const std::exception& ex) {
    throw NumericError(std::string("evolve_moving: step control failed: ") + ex.what());
  }
  // Initial norm of a dressed start is 1 to rounding; drift is relative to it.
  tr.norm_drift = max_drift;
  if (tr.norm_drift > 1e-6)
    throw NumericError("evolve_moving: norm drift " + std::to_string(tr.norm_drift));

  res.band_population.assign(band.levels.size(), 0.0);
  for (std::size_t n = 0; n < band.levels.size(); ++n) {
    auto j = r.map[n];
    if (j < 0) continue;
    auto ju = static_cast<std::size_t>(j);
    double share = band.levels[n].v * band.levels[n].v / r.v2[ju];
    res.band_population[n] = std::norm(y[ju + 1]) * share;
    res.transferred += res.band_population[n];
  }
  if (nr > 0) {
    auto s = dressed_state(r, lab_level(t_end));
    cplx ov = std::conj(s[0]) * y[0] * std::polar(1.0, -phase(t_end));
    for (std::size_t j = 0; j < nr; ++j) ov += std::conj(s[j + 1]) * y[j + 1] * std::polar(1.0, -r.e[j] * t_end);
    res.transferred_dressed = 1.0 - std::norm(ov);
  }
  return res;
}

}  // namespace

MovingResult evolve_moving(const DiscreteBand& band, double e_o, double alpha, double t_begin,
                           double t_end, const std::vector<double>& t_out,
                           const MovingOptions& opt) {
  if (!(alpha >= 0.0)) throw InvalidArgument("evolve_moving: alpha must be >= 0");
  auto phase = [=](double t) { return e_o * t - alpha * t * t * t / 3.0; };
  auto level = [=](double t) { return e_o - alpha * t * t; };
  return evolve_interaction(band, phase, level, t_begin, t_end, t_out, opt);
}

MovingResult evolve_linear(const DiscreteBand& band, double e_o, double rate, double t_begin,
                           double t_end, const MovingOptions& opt) {
  auto phase = [=](double t) { return e_o * t + 0.5 * rate * t * t; };
  auto level = [=](double t) { return e_o + rate * t; };
  return evolve_interaction(band, phase, level, t_begin, t_end, {}, opt);
}

PopulationMoments population_moments(const DiscreteBand& band, const std::vector<double>& rho,
                                     double lo, double hi) {
  std::vector<double> e(band.levels.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = band.levels[i].e;
  return moments_discrete(e, rho, lo, hi);
}

DecayScan power_law_decay_scan(const PowerLawStatistics& stats, std::size_t m, double e_lo,
                               double e_hi, double e0, const std::vector<double>& t,
                               int realizations, std::uint64_t seed) {
  if (realizations < 1) throw InvalidArgument("decay scan: realizations must be >= 1");
  DecayScan out;
  out.times = t;
  out.rho0_mean.assign(t.size(), 0.0);
  std::vector<std::vector<double>> per(static_cast<std::size_t>(realizations));
  std::vector<double> plateau(per.size(), 0.0);
  parallel_for(per.size(), [&](std::size_t r) {
    if (m == 0) {
      per[r].assign(t.size(), 1.0);
      plateau[r] = 1.0;
      return;
    }
    auto band = sample_power_law_band(stats, m, e_lo, e_hi, e0, derive_seed(seed, r));
    ArrowheadEigenSystem es(band);
    auto tr = evolve_static(es, t);
    per[r].resize(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) per[r][i] = std::norm(tr.psi0[i]);
    // Infinite-time average of |psi0|^2.
    double p = 0.0;
    for (std::size_t k = 0; k < es.num_roots(); ++k) p += std::pow(es.apex(k), 4);
    plateau[r] = p;
  });
  for (std::size_t r = 0; r < per.size(); ++r) {
    for (std::size_t i = 0; i < t.size(); ++i) out.rho0_mean[i] += per[r][i] / realizations;
    out.plateau += plateau[r] / realizations;
  }
  out.local_slope.assign(t.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    double a = out.rho0_mean[i - 1] - out.plateau, b = out.rho0_mean[i + 1] - out.plateau;
    if (a > 0.0 && b > 0.0 && t[i - 1] > 0.0)
      out.local_slope[i] = std::log(b / a) / std::log(t[i + 1] / t[i - 1]);
  }
  return out;
}

}  // namespace qedge
