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

#include <cmath>
#include <vector>

#include "qedge/errors.hpp"
#include "qedge/parallel.hpp"
#include "qedge/scattering.hpp"

using namespace qedge;

namespace {

// Barrier integral with eps = tp exp(-y^2): smooth at both ends, so a plain
// trapezoid converges fast.
double barrier_integral(double w, double e_o, double alpha, double tp) {
  const int n = 20000;
  const double ymax = 9.0, h = ymax / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    double y = i * h, ey = std::exp(-y * y);
    double q = (-tp * (1.0 - ey) + w * y * y) / alpha;
    double f = std::sqrt(std::max(q, 0.0)) * 2.0 * y * (-tp) * ey;
    sum += (i == 0 || i == n) ? 0.5 * f : f;
  }
  return sum * h;
}

}  // namespace

TEST_CASE("scattering potential") {
  ScatteringPotential p;
  p.w = 0.7;
  CHECK(p.u(-2.0).real() == doctest::Approx(-2.0 - 0.7 * std::log(2.0)));
  CHECK(p.u(-2.0).imag() == 0.0);
  CHECK(p.u(3.0).real() == doctest::Approx(3.0 - 0.7 * std::log(3.0)));
  CHECK(p.u(3.0).imag() == doctest::Approx(M_PI * 0.7));
  p.absorption = false;
  CHECK(p.u(3.0).imag() == 0.0);
  p.absorption = true;
  p.spoilers = {{5.0, 2.0}};
  const double d = p.pole_delta * p.w;
  // away from e_s the spoiler is a principal-value shift
  CHECK(p.u(1.0).real() == doctest::Approx(1.0 - 0.7 * std::log(1.0) + 4.0 * 4.0 / (16.0 + d * d)));
  // The absorbing part integrates to pi v_s^2.
  double area = 0.0, h = d / 200.0;
  for (double e = 5.0 - 400.0 * d; e <= 5.0 + 400.0 * d; e += h) area += (p.u(e) - p.u_band(e)).imag() * h;
  CHECK(area == doctest::Approx(M_PI * 4.0).epsilon(1e-4));
  double e = -0.8, hh = 1e-6;
  CHECK(p.du_real(e) == doctest::Approx((p.u(e + hh).real() - p.u(e - hh).real()) / (2 * hh)).epsilon(1e-7));
}

TEST_CASE("turning point and barrier integral") {
  for (double w : {0.3, 1.0, 3.0}) {
    for (double e_o : {-8.0, -2.0, 0.0, 1.5}) {
      double tp = turning_point(w, e_o);
      CHECK(tp < 0.0);
      CHECK(std::abs(tp - w * std::log(-tp) - e_o) < 1e-10 * (1.0 + std::abs(e_o)));
      for (double alpha : {0.1, 1.0}) {
        WkbResult r = wkb_transfer(w, e_o, alpha);
        double ref = barrier_integral(w, e_o, alpha, tp);
        CHECK(r.exponent == doctest::Approx(ref).epsilon(1e-8));
        CHECK(r.probability == doctest::Approx(std::exp(-ref)).epsilon(1e-8));
        CHECK(wkb_transfer(w, e_o, alpha, 2.0).probability == doctest::Approx(std::exp(-2.0 * ref)).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("no absorption: total reflection") {
  ScatteringPotential p;
  p.e_o = -1.0;
  p.absorption = false;
  ScatteringSolution s = solve_scattering(p);
  CHECK(s.absorbed_raw < 1e-6);
  CHECK(std::abs(s.absorbed_flux) < 1e-6);
}

TEST_CASE("absorbed fraction: bounds, flux balance and growth with e_o") {
  double prev = -1.0;
  for (double e_o : {-6.0, -4.0, -2.0, -1.0, 0.0, 1.0}) {
    ScatteringPotential p;
    p.e_o = e_o;
    ScatteringSolution s = solve_scattering(p);
    CAPTURE(e_o);
    CHECK(s.absorbed_fraction >= 0.0);
    CHECK(s.absorbed_fraction <= 1.0);
    CHECK(!s.clamped);
    // Reflection coefficient and the absorbed flux are independent tallies.
    CHECK(std::abs(s.absorbed_flux - s.absorbed_raw) < 1e-5 + 1e-4 * s.absorbed_raw);
    CHECK(s.absorbed_fraction > prev);
    prev = s.absorbed_fraction;
    CHECK(s.edge_w50 > 0.0);
  }
}

TEST_CASE("spoiler pole width does not matter") {
  ScatteringPotential p;
  p.e_o = -1.0;
  p.spoilers = {{5.0, std::sqrt(5.0)}};
  SpoilerReport a = spoiler_scattering_report(p);
  p.pole_delta *= 2.0;
  SpoilerReport b = spoiler_scattering_report(p);
  CHECK(std::abs(a.absorbed - b.absorbed) < 0.01 * a.absorbed);
  CHECK(std::abs(a.spoiler_state - b.spoiler_state) < 0.01 * a.spoiler_state + 1e-9);
  CHECK(std::abs(a.edge_population - b.edge_population) < 0.01 * a.edge_population);
  CHECK(a.windows.spoiler_lo >= a.windows.edge_hi);
}

TEST_CASE("custom windows must be disjoint") {
  ScatteringPotential p;
  p.spoilers = {{5.0, 1.0}};
  Windows w{0.0, 3.0, 2.0, 8.0};
  CHECK_THROWS_AS(spoiler_scattering_report(p, &w), InvalidArgument);
}

TEST_CASE("ensemble: result does not depend on the worker count") {
  ScatteringPotential base;
  SpoilerEnsembleSpec spec;
  spec.count = 6;
  spec.v_max = 1.0;
  spec.seed = 42;
  set_parallelism(1);
  EnsembleResult a = random_spoiler_ensemble(base, spec, {-1.0, 0.0}, {1.0}, 4);
  set_parallelism(4);
  EnsembleResult b = random_spoiler_ensemble(base, spec, {-1.0, 0.0}, {1.0}, 4);
  set_parallelism(1);
  REQUIRE(a.width.mean.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(a.width.mean[i] == b.width.mean[i]);
    CHECK(a.width.stddev[i] == b.width.stddev[i]);
    CHECK(a.width.failures[i] == 0);
  }
  spec.seed = 43;
  EnsembleResult c = random_spoiler_ensemble(base, spec, {-1.0, 0.0}, {1.0}, 4);
  CHECK(c.width.mean[0] != a.width.mean[0]);
}

TEST_CASE("scattering input validation") {
  ScatteringPotential p;
  p.alpha = 0.0;
  CHECK_THROWS_AS(solve_scattering(p), InvalidArgument);
  p.alpha = 1.0;
  p.w = -1.0;
  CHECK_THROWS_AS(solve_scattering(p), InvalidArgument);
  CHECK_THROWS_AS(wkb_transfer(1.0, 0.0, 0.0), InvalidArgument);
}
