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

#ifndef QEDGE_SPOILER_ANALYTICS_HPP_
#define QEDGE_SPOILER_ANALYTICS_HPP_

#include <vector>

#include "qedge/edge_analytics.hpp"

namespace qedge {

struct SpoilerRoots {
  double eps1 = 0.0;               // real, below the edge
  cplx eps2;                       // resonance that tends to e_s as v_s -> 0
  std::vector<cplx> other;         // remaining zeros on the continued sheet
  cplx weight1, weight2;           // 1/D'(eps_k)
  double residual1 = 0.0, residual2 = 0.0;
};

SpoilerRoots find_spoiler_roots(const EdgeParams& p, const Spoiler& s);

cplx psi0_spoiler(const EdgeParams& p, const Spoiler& s, double t);
cplx psiE_spoiler(const EdgeParams& p, const Spoiler& s, double e, double t);
cplx psiS_spoiler(const EdgeParams& p, const Spoiler& s, double t);

struct Windows {
  double edge_lo = 0.0, edge_hi = 0.0;
  double spoiler_lo = 0.0, spoiler_hi = 0.0;
};

// Edge window (0, e_s/2], or (0, gamma/20] without a spoiler; spoiler
// vicinity |E - e_s| <= 5 max(w, v_s^2/e_s), clipped to start above the
// edge window.
Windows default_windows(double w, double gamma, const Spoiler* s);
void check_windows(const Windows& w);  // throws InvalidArgument on overlap

struct SpoilerProfile {
  std::vector<double> energies;
  std::vector<double> rho;   // per band state, interference averaged
  std::vector<bool> excluded;  // grid points too close to e_s
  double rho0 = 0.0;         // |psi0|^2 at long times
  double rho_s = 0.0;        // spoiler population at long times
  Windows windows;
  double edge_population = 0.0;
  double spoiler_population = 0.0;  // band states in the spoiler vicinity
  double remainder = 0.0;           // rest of (0, gamma]
  bool stationary = true;    // resonances decayed by t_large
};

SpoilerProfile spoiler_profile(const EdgeParams& p, const Spoiler& s,
                               const std::vector<double>& e_grid, double t_large);

}  // namespace qedge

#endif  // QEDGE_SPOILER_ANALYTICS_HPP_
