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

#include "qedge/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "qedge/errors.hpp"

namespace qedge {

double DiscreteBand::mean_spacing() const {
  if (levels.size() < 2) throw InvalidArgument("mean spacing needs at least two levels");
  return (levels.back().e - levels.front().e) / static_cast<double>(levels.size() - 1);
}

double DiscreteBand::heisenberg_time() const { return 2.0 * M_PI / mean_spacing(); }

double ContinuumEdgeParams::ebar0() const { return -e0 + w() * std::log(gamma); }

void ContinuumEdgeParams::validate() const {
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
  if (!(g > 0.0)) throw InvalidArgument("g must be positive");
  if (!(v != 0.0) || !std::isfinite(v)) throw InvalidArgument("v must be nonzero and finite");
  if (!(e0 < 0.0)) throw InvalidArgument("e0 must lie below the band edge");
}

namespace {

// int_{a}^{b} V^p dV written to stay accurate for p near -1.
double power_integral(double p, double a, double b) {
  double l = std::log(b / a);
  double s = (p + 1.0) * l;
  if (std::abs(s) < 1e-12) return std::pow(a, p + 1.0) * l;
  return std::pow(a, p + 1.0) * std::expm1(s) / (p + 1.0);
}

}  // namespace

double PowerLawStatistics::moment(int k) const {
  return power_integral(k - alpha, v_min, v_max) / power_integral(-alpha, v_min, v_max);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finalizer over (base, index).
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

DiscreteBand build_uniform_edge_band(const ContinuumEdgeParams& p, std::size_t m) {
  if (m < 2) throw InvalidArgument("build_uniform_edge_band: m must be >= 2");
  if (!(p.gamma > 0.0)) throw InvalidArgument("build_uniform_edge_band: gamma must be positive");
  DiscreteBand b;
  b.e0 = p.e0;
  b.levels.resize(m);
  const double h = p.gamma / static_cast<double>(m - 1);
  for (std::size_t i = 0; i < m; ++i) b.levels[i] = {h * static_cast<double>(i), p.v};
  b.levels.back().e = p.gamma;
  return b;
}

DiscreteBand sample_power_law_band(const PowerLawStatistics& s, std::size_t m, double e_lo,
                                   double e_hi, double e0, std::uint64_t seed) {
  if (!(s.v_min > 0.0)) throw InvalidArgument("power law: v_min must be > 0");
  if (!(s.v_max > s.v_min)) throw InvalidArgument("power law: v_max must exceed v_min");
  if (m < 1) throw InvalidArgument("power law: m must be >= 1");
  if (!(e_hi > e_lo)) throw InvalidArgument("power law: empty energy span");
  Rng rng(seed);
  const double beta = 1.0 - s.alpha;
  const double l = std::log(s.v_max / s.v_min);
  DiscreteBand b;
  b.e0 = e0;
  b.levels.resize(m);
  for (auto& lv : b.levels) {
    lv.e = rng.uniform(e_lo, e_hi);
    double u = rng.uniform();
    double bl = beta * l;
    double logv = std::abs(bl) < 1e-12 ? u * l : std::log1p(u * std::expm1(bl)) / beta;
    lv.v = s.v_min * std::exp(logv);
  }
  std::sort(b.levels.begin(), b.levels.end(),
            [](const Level& a, const Level& c) { return a.e < c.e; });
  return b;
}

std::vector<Spoiler> sample_spoilers(const SpoilerEnsembleSpec& spec,
                                     const ContinuumEdgeParams& base) {
  if (spec.count < 0) throw InvalidArgument("sample_spoilers: negative count");
  if (!(spec.v_max >= 0.0)) throw InvalidArgument("sample_spoilers: negative v_max");
  Rng rng(spec.seed);
  std::vector<Spoiler> out(static_cast<std::size_t>(spec.count));
  for (auto& s : out) {
    // Open interval (0, gamma).
    double u;
    do u = rng.uniform(); while (u == 0.0);
    s.e_s = u * base.gamma;
    s.v_s = rng.uniform(0.0, spec.v_max);
  }
  return out;
}

std::vector<SpinTerm> spin_ensemble_terms(const SpinEnsembleSpec& spec) {
  if (spec.n_atoms < 1) throw InvalidArgument("spin ensemble: n_atoms must be >= 1");
  if (spec.n_atoms > 16) throw ResourceLimit("spin ensemble: n_atoms > 16");
  const int n = spec.n_atoms;
  Rng rng(spec.seed);
  std::vector<SpinTerm> terms;
  auto add_order = [&](int order, double scale) {
    if (scale == 0.0) return;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (std::popcount(mask) != order) continue;
      terms.push_back({mask, rng.uniform(-scale, scale)});
    }
  };
  add_order(2, spec.scale2);
  add_order(3, spec.scale3);
  add_order(4, spec.scale4);
  return terms;
}

SpinSpectrum spin_spectrum_from_terms(int n, double omega, const std::vector<SpinTerm>& terms) {
  if (n < 1) throw InvalidArgument("spin ensemble: n_atoms must be >= 1");
  if (n > 16) throw ResourceLimit("spin ensemble: n_atoms > 16");
  const std::size_t ns = std::size_t{1} << n;
  std::vector<std::pair<double, int>> states(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    const auto us = static_cast<unsigned>(s);
    int up = std::popcount(us);
    double e = omega * 0.5 * (2 * up - n);
    for (const auto& t : terms) {
      // Product of +-1/2 over the spins in the term.
      int down = std::popcount(t.mask & ~us);
      double prod = std::ldexp(1.0, -std::popcount(t.mask));
      e += (down % 2 ? -prod : prod) * t.c;
    }
    states[s] = {e, up};
  }
  std::stable_sort(states.begin(), states.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  SpinSpectrum out;
  out.energies.reserve(ns);
  out.excitations.reserve(ns);
  for (const auto& [e, up] : states) {
    out.energies.push_back(e);
    out.excitations.push_back(up);
  }
  return out;
}

SpinSpectrum spin_ensemble_spectrum(const SpinEnsembleSpec& spec) {
  return spin_spectrum_from_terms(spec.n_atoms, spec.omega, spin_ensemble_terms(spec));
}

DiscreteBand with_extra_levels(DiscreteBand band, const std::vector<Level>& extra) {
  band.levels.insert(band.levels.end(), extra.begin(), extra.end());
  std::stable_sort(band.levels.begin(), band.levels.end(),
                   [](const Level& a, const Level& b) { return a.e < b.e; });
  return band;
}

}  // namespace qedge
