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
#ifndef QEDGE_DISCRETE_ORACLE_HPP_
#define QEDGE_DISCRETE_ORACLE_HPP_

#include <complex>
#include <cstdint>
#include <vector>

#include "qedge/model.hpp"
#include "qedge/profiles.hpp"

namespace qedge {

using cplx = std::complex<double>;

// Exact eigensystem of the level-band (arrowhead) Hamiltonian.
//
// Levels with zero coupling are split off, and coupled levels sharing an
// energy are merged into one bright level of coupling sqrt(sum v^2); the
// secular equation is solved on this reduced band. Each root is stored as an
// offset from one reduced band energy so that lambda_k - E_n keeps full
// relative precision for neighbouring levels.
class ArrowheadEigenSystem {
 public:
  explicit ArrowheadEigenSystem(const DiscreteBand& band);

  std::size_t num_roots() const { return delta_.size(); }
  double root(std::size_t k) const { return re_[base_[k]] + delta_[k]; }
  // lambda_k - e_j for reduced index j.
  double gap(std::size_t k, std::size_t j) const { return (re_[base_[k]] - re_[j]) + delta_[k]; }
  double apex(std::size_t k) const { return apex_[k]; }  // <k|0>, positive

  // All M+1 eigenvalues (coupled roots and decoupled band energies), ascending.
  std::vector<double> eigenvalues() const;
  // Secular function f(lambda) = lambda - E0 - sum v^2/(lambda - E).
  double secular(double lambda) const;

  const DiscreteBand& band() const { return band_; }
  std::size_t reduced_size() const { return re_.size(); }
  double reduced_energy(std::size_t j) const { return re_[j]; }
  // Reduced index of original level n, or -1 for a decoupled level.
  std::ptrdiff_t reduced_index(std::size_t n) const { return map_[n]; }

 private:
  void solve();

  DiscreteBand band_;
  std::vector<double> re_, rv2_;
  std::vector<std::ptrdiff_t> map_;
  std::vector<std::size_t> base_;
  std::vector<double> delta_, apex_;
};

struct AmplitudeTrajectory {
  std::vector<double> times;
  std::vector<cplx> psi0;
  // psi_band[i][n]: amplitude of level n at times[i]; empty unless requested.
  std::vector<std::vector<cplx>> psi_band;
  double norm_drift = 0.0;
};

// Switch-on at t = 0 with psi0(0) = 1. Band amplitudes are stored when
// with_band is set (cost O(M^2) per stored time).
AmplitudeTrajectory evolve_static(const ArrowheadEigenSystem& es, const std::vector<double>& t,
                                  bool with_band = false);

// Band amplitudes at a single time.
std::vector<cplx> band_amplitudes(const ArrowheadEigenSystem& es, double t);

struct MovingOptions {
  double rtol = 1e-10;
  double atol = 1e-11;
  double initial_step = 1e-3;
  double min_step = 1e-12;
  // Start in the dressed level eigenstate at -T rather than bare |0>.
  bool dressed_start = false;
};

struct MovingResult {
  AmplitudeTrajectory trajectory;  // psi0 at the requested output times
  std::vector<double> band_population;  // rho_n(+T)
  double transferred = 0.0;           // sum_n rho_n(+T)
  // 1 - |<dressed(+T)|psi(+T)>|^2, insensitive to the adiabatic dressing cloud.
  double transferred_dressed = 0.0;
  std::size_t steps = 0;
};

// E0(t) = e_o - alpha t^2 over [t_begin, t_end] (band.e0 is ignored).
MovingResult evolve_moving(const DiscreteBand& band, double e_o, double alpha, double t_begin,
                           double t_end, const std::vector<double>& t_out,
                           const MovingOptions& opt = {});

// Same, with a linear sweep E0(t) = e_o + rate t.
MovingResult evolve_linear(const DiscreteBand& band, double e_o, double rate, double t_begin,
                           double t_end, const MovingOptions& opt = {});

PopulationMoments population_moments(const DiscreteBand& band, const std::vector<double>& rho,
                                     double lo, double hi);

struct DecayScan {
  std::vector<double> times;
  std::vector<double> rho0_mean;
  double plateau = 0.0;
  std::vector<double> local_slope;  // d ln(rho0 - plateau) / d ln t
};

// Ensemble-averaged decay for power-law coupling statistics.
DecayScan power_law_decay_scan(const PowerLawStatistics& stats, std::size_t m, double e_lo,
                               double e_hi, double e0, const std::vector<double>& t,
                               int realizations, std::uint64_t seed);

}  // namespace qedge

#endif  // QEDGE_DISCRETE_ORACLE_HPP_
