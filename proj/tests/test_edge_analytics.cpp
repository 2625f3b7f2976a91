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

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <vector>

#include "qedge/edge_analytics.hpp"
#include "qedge/errors.hpp"

using namespace qedge;

namespace {

double bisect_pole(double w, double ebar0) {
  auto f = [&](double e) { return e - w * std::log(-e) + ebar0; };
  double lo = -1.0, hi = -1e-300;
  while (f(lo) > 0.0) lo *= 2.0;
  for (int i = 0; i < 400 && hi - lo > 1e-15 * std::abs(lo); ++i) {
    double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// Spectral weight on the real axis: w / |D(E + i0)|^2.
double spectral(const EdgeParams& p, double e) {
  return p.w / std::norm(cplx(e - p.w * std::log(e) + p.ebar0, M_PI * p.w));
}

// Z e^{-i eps0 t} + int_0^inf A(E) e^{-iEt} dE, by panels on a log grid
// fine enough to resolve the oscillation.
cplx psi0_spectral(const EdgeParams& p, double t) {
  double eps0 = bisect_pole(p.w, p.ebar0);
  cplx sum = std::exp(cplx(0.0, -eps0 * t)) / (1.0 - p.w / eps0);
  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  double a = 0.0, e_max = 1e5;
  double step0 = 1e-6;
  while (a < e_max) {
    double b = std::min(e_max, std::max(a + step0, std::min(2.0 * a, a + 1.0 / (1.0 + t))));
    auto re = [&](double e) { return spectral(p, e) * std::cos(e * t); };
    auto im = [&](double e) { return -spectral(p, e) * std::sin(e * t); };
    sum += cplx(GK::integrate(re, a, b, 0, 1e-13), GK::integrate(im, a, b, 0, 1e-13));
    a = b;
  }
  // Leading tail: A ~ w/E^2 past e_max.
  double tail = p.w / e_max;
  sum += t == 0.0 ? cplx(tail, 0.0) : cplx(0.0, 0.0);
  return sum;
}

}  // namespace

TEST_CASE("real pole agrees with bisection and moves down as ebar0 grows") {
  double prev = 0.0;
  bool first = true;
  for (double w : {0.05, 1.0, 7.0}) {
    first = true;
    for (double eb = -4.0; eb <= 12.0; eb += 0.5) {
      EdgeParams p{w, eb * w, 0.1, 40.0};
      double e = pole_epsilon0(p);
      CHECK(e < 0.0);
      CHECK(std::abs(e - bisect_pole(w, p.ebar0)) <= 1e-12 * std::abs(e));
      if (!first) CHECK(e < prev);
      prev = e;
      first = false;
      double z = residue_weight_edge(p);
      CHECK(z > 0.0);
      CHECK(z < 1.0);
      EdgeResolvent r(p);
      CHECK(r.rho0_infinity() == doctest::Approx(z * z).epsilon(1e-12));
    }
  }
}

TEST_CASE("initial conditions") {
  for (double eb : {-2.0, 1.0, 5.0}) {
    EdgeParams p{1.0, eb, 0.1, 40.0};
    EdgeResolvent r(p);
    CHECK(std::abs(r.psi0(0.0) - 1.0) < 1e-9);
    for (double e : {1e-3, 0.5, 3.0, 30.0}) CHECK(std::abs(r.psiE(e, 0.0)) < 1e-9);
  }
}

TEST_CASE("psi0 matches the real-axis spectral integral") {
  for (double eb : {-1.0, 1.0, 4.0}) {
    EdgeParams p{1.0, eb, 0.1, 40.0};
    EdgeResolvent r(p);
    for (double t : {0.0, 0.7, 3.0, 20.0}) {
      cplx a = r.psi0(t), b = psi0_spectral(p, t);
      CHECK(std::abs(a - b) < 2e-6);
    }
  }
}

TEST_CASE("stationary sum rule and unitarity at finite time") {
  for (double eb : {-1.0, 0.5, 3.0}) {
    EdgeParams p{1.0, eb, 0.1, 40.0};
    EdgeResolvent r(p);
    double z = residue_weight_edge(p);
    CHECK(std::abs(z * z + stationary_population(r, 0.0, 1e12) - 1.0) < 1e-9);
  }
  // |psi0|^2 + g int |psiE|^2 = 1; the finite upper limit costs about w V^2 g / E.
  EdgeParams p{1.0, 1.0, 0.1, 40.0};
  EdgeResolvent r(p);
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  for (double t : {0.5, 4.0}) {
    double total = std::norm(r.psi0(t));
    std::vector<double> br = {0.0, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 200.0};
    for (std::size_t i = 0; i + 1 < br.size(); ++i)
      total += p.g() * GK::integrate([&](double e) { return std::norm(r.psiE(e, t)); }, br[i], br[i + 1], 8, 1e-9);
    double missing = p.g() * p.v * p.v * 2.0 / 200.0;  // rho ~ V^2 (1 + Z^2) / E^2 tail
    CHECK(std::abs(total + missing - 1.0) < 5e-3);
  }
}

TEST_CASE("stationary profile tail") {
  EdgeParams p{0.5, 2.0, 0.2, 40.0};
  double z = residue_weight_edge(p);
  auto prof = stationary_profile(p, {1e7, 1e8});
  double lim = p.v * p.v * (z * z + 1.0);
  CHECK(prof[1] * 1e16 == doctest::Approx(lim).epsilon(1e-5));
  // Slow log approach: the correction shrinks with E.
  CHECK(std::abs(prof[1] * 1e16 - lim) < std::abs(prof[0] * 1e14 - lim));
  for (double e : {1e-4, 0.1, 1.0, 10.0}) CHECK(stationary_profile(p, {e})[0] > 0.0);
}

TEST_CASE("free functions agree with the resolvent") {
  EdgeParams p{1.0, 1.5, 0.1, 40.0};
  EdgeResolvent r(p);
  for (double t : {0.3, 5.0}) {
    CHECK(std::abs(psi0_edge(p, t) - r.psi0(t)) < 1e-12);
    CHECK(std::abs(psiE_edge(p, 0.4, t) - r.psiE(0.4, t)) < 1e-12);
  }
  CHECK(r.density_stationary(0.4) == doctest::Approx(p.g() * r.rho_stationary(0.4)));
}

TEST_CASE("slow tail law fit") {
  EdgeParams p{1.0, 1.0, 0.1, 40.0};
  std::vector<double> t;
  for (int i = 0; i < 40; ++i) t.push_back(20.0 * std::pow(100.0, i / 39.0));
  TailFit f = tail_law_fit(p, t);
  CHECK(f.c > 0.0);
  CHECK(f.rel_residual < 0.1);
}

TEST_CASE("window population decreases with the gap") {
  EdgeSurface s = edge_transfer_surface(1.0, 0.1, 40.0, {0.2, 0.5, 1.0, 2.0, 5.0, 10.0}, {0.1, 1.0});
  REQUIRE(s.window_population.size() == 6);
  for (std::size_t i = 1; i < 6; ++i) CHECK(s.window_population[i] < s.window_population[i - 1]);
  CHECK(s.density.size() == 12);
}

TEST_CASE("edge parameter validation") {
  CHECK_THROWS_AS(EdgeResolvent(EdgeParams{0.0, 1.0, 0.1, 40.0}), InvalidArgument);
  CHECK_THROWS_AS(EdgeResolvent(EdgeParams{1.0, 1.0, 0.1, -1.0}), InvalidArgument);
  CHECK_THROWS_AS(EdgeResolvent(EdgeParams{1.0, std::nan(""), 0.1, 40.0}), InvalidArgument);
}
