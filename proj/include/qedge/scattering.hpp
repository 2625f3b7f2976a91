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

#ifndef QEDGE_SCATTERING_HPP_
#define QEDGE_SCATTERING_HPP_

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qedge/model.hpp"
#include "qedge/spoiler_analytics.hpp"

namespace qedge {

using cplx = std::complex<double>;

// alpha psi'' = (U(eps) - e_o) psi with U = eps - w log(-eps) + sum v^2/(e_s - eps).
// e_o is the renormalized peak energy, E_o - w ln(gamma).
struct ScatteringPotential {
  double w = 1.0;
  double e_o = -1.0;
  double alpha = 1.0;
  double gamma = 40.0;  // only sets the edge window without spoilers
  std::vector<Spoiler> spoilers;
  bool absorption = true;
  double pole_delta = 1e-4;  // spoiler pole width, in units of w

  cplx u(double eps) const;
  cplx u_band(double eps) const;     // without spoiler terms
  double du_real(double eps) const;  // d Re U / d eps
  void validate() const;
};

// Left turning point: the root of eps - w ln(-eps) = e_o.
double turning_point(double w, double e_o);

struct ScatteringGrid {
  std::size_t n_profile = 2000;
  double profile_lo = 0.0;  // 0 selects turning point minus 12 local Airy lengths
  double profile_hi = 0.0;  // 0 selects the right start point
  std::size_t n_edge = 800;  // extra samples across the edge window
  double rtol = 1e-9;
  double atol = 1e-11;
  double wkb_parameter = 1e-3;  // |Q'|/|Q|^1.5 at the fitting window
  double fit_wavelengths = 20.0;
  int fit_points_per_wavelength = 16;
  double start_decay = 30.0;  // int sqrt(Q) from the right turning point to the start
};

struct ScatteringSolution {
  std::vector<double> eps;
  std::vector<cplx> psi;  // unit incident amplitude
  std::vector<cplx> potential;
  cplx incident, reflected;
  double absorbed_fraction = 0.0;  // 1 - |reflected/incident|^2, clamped
  double absorbed_raw = 0.0;
  bool clamped = false;
  double absorbed_flux = 0.0;      // (1/alpha) int Im U |psi|^2
  double band_flux = 0.0;          // part absorbed by the band (eps > 0)
  double spoiler_state_flux = 0.0; // part absorbed by the spoiler poles
  double fit_spread = 0.0;         // relative spread of |incident| across the window
  double fit_lo = 0.0, fit_hi = 0.0;
  double turning = 0.0;
  double eps_start = 0.0;
  Windows windows;
  double edge_population = 0.0;     // band absorption in the edge window
  double spoiler_population = 0.0;  // band absorption in the spoiler vicinity
  double edge_w50 = 0.0, edge_fwhm = 0.0;
  std::vector<std::string> warnings;
  std::size_t steps = 0;
};

ScatteringSolution solve_scattering(const ScatteringPotential& pot, const ScatteringGrid& grid = {});

struct WkbResult {
  double probability = 1.0;
  double exponent = 0.0;  // int sqrt(Q) over the barrier
  double turning = 0.0;
  bool under_barrier = true;
};

// exp(-factor * int_tp^0 sqrt((eps - w ln(-eps) - e_o)/alpha) d eps).
WkbResult wkb_transfer(double w, double e_o, double alpha, double factor = 1.0);

struct Surface {
  std::vector<double> x, y;  // row-major values[i * y.size() + j] at (x[i], y[j])
  std::vector<double> mean, stddev;
  std::vector<int> failures;
};

// Inverse W50 edge width over (e_o/w, alpha/w^2).
Surface width_surface(double w, const std::vector<double>& e_o_over_w,
                      const std::vector<double>& alpha_over_w2, const ScatteringGrid& grid = {});

// Numerical absorbed fraction and the WKB estimate over the same axes.
struct TransferSurfaces {
  Surface numeric, wkb;
};
TransferSurfaces transfer_surfaces(double w, const std::vector<double>& e_o_over_w,
                                   const std::vector<double>& alpha_over_w2,
                                   const ScatteringGrid& grid = {});

struct SpoilerReport {
  Windows windows;
  double edge_population = 0.0;
  double spoiler_population = 0.0;  // band states near e_s
  double spoiler_state = 0.0;       // the spoiler level itself
  double ratio = 0.0;               // edge / spoiler vicinity
  double edge_w50 = 0.0, edge_fwhm = 0.0;
  double absorbed = 0.0;
};

SpoilerReport spoiler_scattering_report(const ScatteringPotential& pot, const Windows* windows = nullptr,
                                        const ScatteringGrid& grid = {});

struct EnsembleResult {
  Surface width;  // mean and stddev of the edge W50 per grid point
  int realizations = 0;
};

// Random spoilers over (e_o/w, alpha/w^2); spoiler energies uniform on
// (0, gamma), couplings uniform on [0, v_max].
EnsembleResult random_spoiler_ensemble(const ScatteringPotential& base, const SpoilerEnsembleSpec& spec,
                                       const std::vector<double>& e_o_over_w,
                                       const std::vector<double>& alpha_over_w2, int realizations,
                                       const ScatteringGrid& grid = {});

}  // namespace qedge

#endif  // QEDGE_SCATTERING_HPP_
