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

#ifndef QEDGE_MODEL_HPP_
#define QEDGE_MODEL_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace qedge {

struct Level {
  double e;
  double v;
};

// Isolated level e0 plus band levels sorted by energy.
struct DiscreteBand {
  double e0 = 0.0;
  std::vector<Level> levels;

  std::size_t size() const { return levels.size(); }
  double mean_spacing() const;
  double heisenberg_time() const;  // 2*pi / spacing
};

// Uniform semi-infinite band with edge at E = 0, cutoff gamma.
struct ContinuumEdgeParams {
  double e0 = -1.0;
  double g = 100.0;
  double v = 0.05;
  double gamma = 40.0;

  double w() const { return g * v * v; }
  double ebar0() const;
  void validate() const;
};

struct Spoiler {
  double e_s = 0.0;
  double v_s = 0.0;
};

struct SpoilerEnsembleSpec {
  int count = 0;
  double v_max = 0.0;
  std::uint64_t seed = 0;
};

// Truncated power law g(V) ~ V^-alpha on [v_min, v_max].
struct PowerLawStatistics {
  double alpha = 0.0;
  double v_min = 0.0;
  double v_max = 1.0;
  double density = 1.0;  // levels per unit energy

  double moment(int k) const;  // <V^k> of the normalized law
};

struct MomentStatistics {
  double w = 1.0;  // int g(V) V^2 dV
  double u = 0.0;  // int g(V) V^4 dV
};

struct SpinEnsembleSpec {
  int n_atoms = 7;
  double omega = 1.0;
  // Interaction strength per order 2, 3, 4; zero switches an order off.
  double scale2 = 0.0;
  double scale3 = 0.0;
  double scale4 = 0.0;
  std::uint64_t seed = 0;
};

struct SpinSpectrum {
  std::vector<double> energies;  // ascending
  std::vector<int> excitations;  // number of up spins, same order
};

// Deterministic generator: mt19937_64 output is fixed by the standard; the
// conversions below are ours so every platform sees the same doubles.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  // (0, 1], safe for logarithms.
  double uniform_pos() { return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53; }
  std::uint64_t next() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

// Per-task seed derived from a base seed, independent of scheduling.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

DiscreteBand build_uniform_edge_band(const ContinuumEdgeParams& p, std::size_t m);
DiscreteBand sample_power_law_band(const PowerLawStatistics& s, std::size_t m, double e_lo,
                                   double e_hi, double e0, std::uint64_t seed);
std::vector<Spoiler> sample_spoilers(const SpoilerEnsembleSpec& spec,
                                     const ContinuumEdgeParams& base);
SpinSpectrum spin_ensemble_spectrum(const SpinEnsembleSpec& spec);

// One interaction term c * prod_{i in mask} sigma_z,i.
struct SpinTerm {
  unsigned mask;
  double c;
};
// Random terms of spin_ensemble_spectrum, in generation order.
std::vector<SpinTerm> spin_ensemble_terms(const SpinEnsembleSpec& spec);
SpinSpectrum spin_spectrum_from_terms(int n_atoms, double omega, const std::vector<SpinTerm>& terms);

// Adds explicit extra levels (e.g. spoilers) and keeps the order.
DiscreteBand with_extra_levels(DiscreteBand band, const std::vector<Level>& extra);

}  // namespace qedge

#endif  // QEDGE_MODEL_HPP_
