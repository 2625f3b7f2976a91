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


#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>

#include "qedge/discrete_oracle.hpp"
#include "qedge/errors.hpp"
#include "qedge/model.hpp"

using namespace qedge;

namespace {

DiscreteBand random_band(std::size_t m, std::uint64_t seed, double e0) {
  Rng rng(seed);
  DiscreteBand b;
  b.e0 = e0;
  for (std::size_t i = 0; i < m; ++i) b.levels.push_back({rng.uniform(0.0, 4.0), rng.uniform(0.01, 0.2)});
  std::sort(b.levels.begin(), b.levels.end(), [](const Level& x, const Level& y) { return x.e < y.e; });
  return b;
}

Eigen::MatrixXd dense(const DiscreteBand& b) {
  const auto m = static_cast<Eigen::Index>(b.levels.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m + 1);
  h(0, 0) = b.e0;
  for (Eigen::Index n = 0; n < m; ++n) {
    h(n + 1, n + 1) = b.levels[static_cast<std::size_t>(n)].e;
    h(0, n + 1) = h(n + 1, 0) = b.levels[static_cast<std::size_t>(n)].v;
  }
  return h;
}

// Exact propagation from |0> by dense diagonalization.
Eigen::VectorXcd dense_state(const DiscreteBand& b, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(b));
  Eigen::VectorXcd c(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < c.size(); ++k)
    c(k) = std::exp(cplx(0.0, -es.eigenvalues()(k) * t)) * es.eigenvectors()(0, k);
  return es.eigenvectors().cast<cplx>() * c;
}

}  // namespace

TEST_CASE("arrowhead eigenvalues match dense diagonalization") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    DiscreteBand b = random_band(150, seed, 1.7);
    ArrowheadEigenSystem es(b);
    auto ev = es.eigenvalues();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(dense(b));
    REQUIRE(ev.size() == static_cast<std::size_t>(ref.eigenvalues().size()));
    for (std::size_t k = 0; k < ev.size(); ++k)
      CHECK(std::abs(ev[k] - ref.eigenvalues()(static_cast<Eigen::Index>(k))) < 1e-10);
  }
}

TEST_CASE("coupled roots interlace the band energies") {
  DiscreteBand b = random_band(200, 11, 2.0);
  ArrowheadEigenSystem es(b);
  REQUIRE(es.num_roots() == b.levels.size() + 1);
  CHECK(es.root(0) < b.levels.front().e);
  for (std::size_t k = 1; k < b.levels.size(); ++k) {
    CHECK(es.root(k) > b.levels[k - 1].e);
    CHECK(es.root(k) < b.levels[k].e);
  }
  CHECK(es.root(b.levels.size()) > b.levels.back().e);
  // The secular function is steep next to its poles, so check for a sign
  // change across a few ulps instead of a small residual.
  for (std::size_t k = 0; k < es.num_roots(); ++k) {
    double x = es.root(k), d = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
    CHECK(es.secular(x - d) * es.secular(x + d) <= 0.0);
  }
}

TEST_CASE("deflation of decoupled and degenerate levels") {
  DiscreteBand b;
  b.e0 = 0.3;
  b.levels = {{0.0, 0.1}, {0.5, 0.0}, {1.0, 0.1}, {1.0, 0.2}, {2.0, 0.1}};
  ArrowheadEigenSystem es(b);
  auto ev = es.eigenvalues();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(dense(b));
  REQUIRE(ev.size() == 6);
  for (std::size_t k = 0; k < 6; ++k) CHECK(std::abs(ev[k] - ref.eigenvalues()(static_cast<Eigen::Index>(k))) < 1e-12);
  CHECK(es.reduced_index(1) == -1);
  // Both degenerate levels map onto one reduced level.
  CHECK(es.reduced_index(2) == es.reduced_index(3));
  for (double t : {0.5, 3.0, 17.0}) {
    auto amp = band_amplitudes(es, t);
    auto d = dense_state(b, t);
    CHECK(std::abs(amp[1]) == 0.0);
    for (std::size_t n = 0; n < 5; ++n) CHECK(std::abs(amp[n] - d(static_cast<Eigen::Index>(n + 1))) < 1e-10);
    // Degenerate partners carry amplitudes in the ratio of their couplings.
    CHECK(std::abs(amp[3] - 2.0 * amp[2]) < 1e-12);
  }
}

TEST_CASE("static propagation matches dense exponentiation") {
  DiscreteBand b = random_band(100, 5, 1.1);
  ArrowheadEigenSystem es(b);
  std::vector<double> t = {0.0, 0.3, 1.0, 4.0, 25.0, 120.0};
  auto tr = evolve_static(es, t, true);
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto d = dense_state(b, t[i]);
    CHECK(std::abs(tr.psi0[i] - d(0)) < 1e-10);
    for (std::size_t n = 0; n < b.levels.size(); ++n)
      CHECK(std::abs(tr.psi_band[i][n] - d(static_cast<Eigen::Index>(n + 1))) < 1e-10);
  }
  CHECK(tr.norm_drift <= 1e-8);
}

TEST_CASE("single level: Rabi oscillation") {
  const double delta = 0.7, v = 0.25;
  DiscreteBand b;
  b.e0 = 0.0;
  b.levels = {{delta, v}};
  ArrowheadEigenSystem es(b);
  const double om = std::sqrt(delta * delta + 4 * v * v);
  std::vector<double> t;
  for (int i = 0; i <= 50; ++i) t.push_back(0.4 * i);
  auto tr = evolve_static(es, t);
  for (std::size_t i = 0; i < t.size(); ++i) {
    double s = std::sin(0.5 * om * t[i]);
    CHECK(std::norm(tr.psi0[i]) == doctest::Approx(1.0 - 4 * v * v / (om * om) * s * s).epsilon(1e-12));
  }
}

TEST_CASE("linear sweep through one level: Landau-Zener survival") {
  DiscreteBand b;
  b.levels = {{0.0, 0.1}};
  for (double rate : {0.05, 0.1, 0.3}) {
    // the truncated sweep converges slowly in the span at small rates
    MovingResult r = evolve_linear(b, 0.0, rate, -3000.0, 3000.0);
    double lz = std::exp(-2.0 * M_PI * 0.01 / rate);
    CHECK(std::abs((1.0 - r.transferred) - lz) / lz < 0.02);
    CHECK(r.trajectory.norm_drift <= 1e-8);
  }
}

TEST_CASE("alpha = 0 reduces moving propagation to the static one") {
  DiscreteBand b = random_band(60, 9, 1.3);
  ArrowheadEigenSystem es(b);
  std::vector<double> t = {0.0, 1.0, 5.0, 20.0};
  auto ref = evolve_static(es, t);
  MovingResult r = evolve_moving(b, 1.3, 0.0, 0.0, 20.0, t);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(std::abs(std::abs(r.trajectory.psi0[i]) - std::abs(ref.psi0[i])) < 1e-7);
  auto amp = band_amplitudes(es, 20.0);
  for (std::size_t n = 0; n < b.levels.size(); ++n) CHECK(std::abs(r.band_population[n] - std::norm(amp[n])) < 1e-7);
  CHECK(r.trajectory.norm_drift <= 1e-8);
}

TEST_CASE("uniform band: population returns near the Heisenberg time") {
  // Level shifts move the revival off t_H by O(1/m^2); m = 800 puts it well inside 5%.
  ContinuumEdgeParams p{1.0, 0.0, 0.02, 4.0};
  const std::size_t m = 800;
  p.g = (m - 1) / p.gamma;
  p.e0 = 2.0;  // mid band
  auto b = build_uniform_edge_band(p, m);
  ArrowheadEigenSystem es(b);
  const double th = b.heisenberg_time();
  std::vector<double> t;
  for (int i = 0; i <= 400; ++i) t.push_back(th * (0.4 + 0.8 * i / 400.0));
  auto tr = evolve_static(es, t);
  double mid = std::norm(tr.psi0[0]), peak = 0.0, t_peak = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (std::norm(tr.psi0[i]) > peak) {
      peak = std::norm(tr.psi0[i]);
      t_peak = t[i];
    }
  CHECK(peak > 10.0 * mid);
  CHECK(std::abs(t_peak - th) / th < 0.05);
}

TEST_CASE("oracle input validation") {
  DiscreteBand b;
  b.levels = {{1.0, 0.1}, {0.5, 0.1}};
  CHECK_THROWS_AS(ArrowheadEigenSystem{b}, InvalidArgument);
  b.levels = {{0.0, 0.1}};
  CHECK_THROWS_AS(evolve_moving(b, 0.0, -1.0, 0.0, 1.0, {}), InvalidArgument);
  CHECK_THROWS_AS(evolve_moving(b, 0.0, 1.0, 1.0, 1.0, {}), InvalidArgument);
  ArrowheadEigenSystem es(b);
  CHECK_THROWS_AS(evolve_static(es, {1.0, 0.5}), InvalidArgument);
}

TEST_CASE("power-law decay scan is a pure function of its seed") {
  PowerLawStatistics s{1.5, 0.01, 0.1, 50.0};
  std::vector<double> t = {1.0, 10.0, 50.0};
  auto a = power_law_decay_scan(s, 200, 0.0, 4.0, 1.0, t, 4, 77);
  auto b = power_law_decay_scan(s, 200, 0.0, 4.0, 1.0, t, 4, 77);
  REQUIRE(a.rho0_mean.size() == t.size());
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(a.rho0_mean[i] == b.rho0_mean[i]);
  CHECK(a.rho0_mean[0] <= 1.0);
}
