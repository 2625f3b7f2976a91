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

#include "qedge/spoiler_analytics.hpp"

#include <algorithm>
#include <cmath>

#include "qedge/errors.hpp"

namespace qedge {

namespace {

EdgeResolvent make(const EdgeParams& p, const Spoiler& s) {
  if (!(s.e_s > 0.0 && s.e_s < p.gamma)) throw InvalidArgument("spoiler energy must lie in (0, gamma)");
  return EdgeResolvent(p, s);
}

}  // namespace

SpoilerRoots find_spoiler_roots(const EdgeParams& p, const Spoiler& s) {
  if (s.v_s == 0.0) throw InvalidArgument("find_spoiler_roots: v_s must be nonzero");
  EdgeResolvent r = make(p, s);
  const auto& poles = r.poles();
  if (poles.size() < 2) throw NumericError("find_spoiler_roots: no complex root found");
  SpoilerRoots out;
  out.eps1 = poles[0].real();
  out.eps2 = poles[1];
  out.other.assign(poles.begin() + 2, poles.end());
  out.weight1 = r.residue_weight(0);
  out.weight2 = r.residue_weight(1);
  out.residual1 = std::abs(r.denominator(poles[0]));
  out.residual2 = std::abs(r.denominator(poles[1]));
  return out;
}

cplx psi0_spoiler(const EdgeParams& p, const Spoiler& s, double t) { return make(p, s).psi0(t); }

cplx psiE_spoiler(const EdgeParams& p, const Spoiler& s, double e, double t) {
  return make(p, s).psiE(e, t);
}

cplx psiS_spoiler(const EdgeParams& p, const Spoiler& s, double t) { return make(p, s).psiS(t); }

Windows default_windows(double w, double gamma, const Spoiler* s) {
  Windows win;
  if (!s || s->v_s == 0.0) {
    win.edge_hi = gamma / 20.0;
    if (s) {
      double half = 5.0 * w;
      win.spoiler_lo = std::max(win.edge_hi, s->e_s - half);
      win.spoiler_hi = std::min(gamma, s->e_s + half);
    }
    return win;
  }
  win.edge_hi = s->e_s / 2.0;
  double half = 5.0 * std::max(w, s->v_s * s->v_s / s->e_s);
  // Strong or low-lying spoilers reach into the edge window; the vicinity
  // then starts where the edge window ends.
  win.spoiler_lo = std::max(win.edge_hi, s->e_s - half);
  win.spoiler_hi = std::min(gamma, s->e_s + half);
  return win;
}

void check_windows(const Windows& w) {
  if (!(w.edge_hi > w.edge_lo)) throw InvalidArgument("edge window is empty");
  if (w.spoiler_hi > w.spoiler_lo && w.spoiler_lo < w.edge_hi && w.spoiler_hi > w.edge_lo)
    throw InvalidArgument("edge and spoiler windows overlap");
}

SpoilerProfile spoiler_profile(const EdgeParams& p, const Spoiler& s,
                               const std::vector<double>& e_grid, double t_large) {
  EdgeResolvent r = make(p, s);
  SpoilerProfile out;
  out.energies = e_grid;
  out.rho.resize(e_grid.size());
  out.excluded.assign(e_grid.size(), false);
  for (std::size_t i = 0; i < e_grid.size(); ++i) {
    double e = e_grid[i];
    if (!(e > 0.0 && e <= p.gamma)) throw InvalidArgument("spoiler_profile: energies must lie in (0, gamma]");
    if (r.has_spoiler() && std::abs(e - s.e_s) < 1e-9 * s.e_s) {
      out.excluded[i] = true;
      continue;
    }
    out.rho[i] = r.rho_stationary(e);
  }
  out.rho0 = r.rho0_infinity();
  out.rho_s = r.rhoS_infinity();
  for (std::size_t k = 1; k < r.poles().size(); ++k)
    if (std::exp(2.0 * r.poles()[k].imag() * t_large) > 1e-6) out.stationary = false;
  out.windows = default_windows(p.w, p.gamma, r.has_spoiler() ? &s : nullptr);
  // Overlapping defaults are resolved in favour of the edge window here.
  out.windows.spoiler_lo = std::max(out.windows.spoiler_lo, out.windows.edge_hi);
  const Windows& w = out.windows;
  out.edge_population = stationary_population(r, 0.0, w.edge_hi);
  double total = stationary_population(r, 0.0, p.gamma);
  if (w.spoiler_hi > w.spoiler_lo)
    out.spoiler_population = stationary_population(r, w.spoiler_lo, w.spoiler_hi);
  out.remainder = total - out.edge_population - out.spoiler_population;
  return out;
}

}  // namespace qedge
