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
#include <random>
#include <vector>

#include "qedge/errors.hpp"
#include "qedge/statistical_band.hpp"

using namespace qedge;

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

template <class F>
cplx integrate_half_line(F f) {
  double inf = std::numeric_limits<double>::infinity();
  double re = 0.0, im = 0.0;
  for (auto [a, b] : {std::pair{0.0, 1.0}, std::pair{1.0, 10.0}, std::pair{10.0, inf}}) {
    re += GK::integrate([&](double e) { return f(e).real(); }, a, b, 12, 1e-13);
    im += GK::integrate([&](double e) { return f(e).imag(); }, a, b, 12, 1e-13);
  }
  return {re, im};
}

// Exponent written out from the closed form.
double phi_ref(double w, double u, double e, double h) {
  double l = std::log(-h);
  return h * (7 * h * h + e * e - 5 * e * h + 3 * w * w - 3 * e * w + 9 * h * w) / u + h * w * w * l * l / u +
         h * w * l * (-2 * e + 5 * h + 3 * w) / u;
}

// (18 pi/u) int eta^2 e^Phi/(eta - E)^2 with eta = -e^s, trapezoid in s.
double tractable_ref(double w, double u, double eb, double e) {
  const double lo = -40.0, hi = 8.0, h = 1e-3;
  double sum = 0.0;
  for (double s = lo; s <= hi; s += h) {
    double y = std::exp(s);
    double f = y * y * y * std::exp(phi_ref(w, u, eb, -y)) / ((y + e) * (y + e));
    sum += f;
  }
  return 18.0 * M_PI / u * sum * h;
}

}  // namespace

TEST_CASE("F vanishes for an empty exponent") {
  MomentStatistics m{1.0, 0.5};
  cplx eps(-1.0, 0.3), xi(0.5, 0.2);
  CHECK(eval_F(m, eps, xi, 0.0, 0.0) == cplx(0.0, 0.0));
  TabulatedCoupling t = tabulate(PowerLawStatistics{1.5, 0.01, 0.1, 50.0}, 64);
  CHECK(std::abs(eval_F(t, eps, xi, 0.0, 0.0)) == 0.0);
  CHECK_THROWS_AS(eval_F(m, cplx(1.0, 0.0), xi, 1.0, 1.0), DomainError);
}

TEST_CASE("second-order term agrees with direct E quadrature") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(-3.0, 3.0), im(0.05, 2.0), th(0.0, 2.0);
  for (int k = 0; k < 20; ++k) {
    cplx eps(re(rng), im(rng)), xi(re(rng), -im(rng));
    if (k % 2) xi = std::conj(xi);
    double theta = th(rng), tau = th(rng), u = 0.7;
    cplx num = integrate_half_line([&](double e) {
      cplx z = cplx(0.0, 1.0) * theta / (xi - e) - cplx(0.0, 1.0) * tau / (eps - e);
      return 0.5 * u * z * z;
    });
    cplx df = delta_F(u, eps, xi, theta, tau);
    CHECK(std::abs(df - num) <= 1e-8 * std::abs(num));
    // Closed form with the opposite sign and twice the scale.
    cplx printed = -u * theta * theta / xi - u * tau * tau / eps -
                   u * 2.0 * theta * tau * (std::log(-eps) - std::log(-xi)) / (xi - eps);
    CHECK(std::abs(delta_F_printed(u, eps, xi, theta, tau) - printed) <= 1e-12 * std::abs(printed));
    CHECK(std::abs(delta_F_printed(u, eps, xi, theta, tau) + 2.0 * df) <= 1e-12 * std::abs(df));
    // The moment model is exactly the linear logs plus this term.
    MomentStatistics m{1.3, u};
    cplx lin = cplx(0.0, 1.3) * (theta * std::log(-xi) - tau * std::log(-eps));
    CHECK(std::abs(eval_F(m, eps, xi, theta, tau) - lin - num) <= 1e-8 * (std::abs(lin) + std::abs(num)));
  }
  // Coincident points use the series branch.
  cplx e(-0.8, 0.1);
  CHECK(std::abs(delta_F(1.0, e, e, 1.0, 1.0) - delta_F(1.0, e, e + cplx(1e-5, 0.0), 1.0, 1.0)) < 1e-4);
}

TEST_CASE("weak tabulated couplings reduce to the two-moment law") {
  TabulatedCoupling t = tabulate(PowerLawStatistics{1.0, 0.005, 0.05, 200.0}, 200);
  MomentStatistics m{t.moment(2), t.moment(4)};
  cplx eps(-1.0, 0.5), xi(-0.5, -0.7);
  double theta = 1.0, tau = 0.6;
  cplx ft = eval_F(t, eps, xi, theta, tau), fm = eval_F(m, eps, xi, theta, tau);
  cplx d2 = delta_F(m.u, eps, xi, theta, tau);
  // What is left is third order in V^2, well below the second-order term.
  CHECK(std::abs(ft - fm) < 0.02 * std::abs(d2));
  // And first order alone is the uniform-band log pair.
  MomentStatistics lin{m.w, 0.0};
  CHECK(std::abs(eval_F(lin, eps, xi, theta, tau) - cplx(0.0, m.w) * (theta * std::log(-xi) - tau * std::log(-eps))) <
        1e-14);
}

TEST_CASE("G and J kernels") {
  MomentStatistics m{0.8, 0.3};
  for (double eta : {-0.1, -1.0, -5.0}) {
    GJ z = eval_G_J(m, 0.0, eta);
    CHECK(std::abs(z.g) == 0.0);
    CHECK(z.j.real() == doctest::Approx(0.8 / -eta));
    CHECK(z.j.imag() == 0.0);
  }
  TabulatedCoupling t = tabulate(PowerLawStatistics{0.5, 0.01, 0.08, 100.0}, 128);
  GJ zt = eval_G_J(t, 0.0, -2.0);
  CHECK(zt.j.real() == doctest::Approx(t.moment(2) / 2.0).epsilon(1e-8));
  // Small x: tabulated and moment forms share the first two orders.
  MomentStatistics mt{t.moment(2), t.moment(4)};
  double x = 0.05, eta = -1.5;
  GJ a = eval_G_J(t, x, eta), b = eval_G_J(mt, x, eta);
  CHECK(std::abs(a.g - b.g) < 1e-3 * std::abs(b.g));
  CHECK(std::abs(a.j - b.j) < 1e-3 * std::abs(b.j));
  CHECK_THROWS_AS(eval_G_J(m, 1.0, 0.0), DomainError);
}

TEST_CASE("x integral: closed form against quadrature") {
  MomentStatistics m{1.0, 0.5};
  for (double eb : {2.0, 4.0}) {
    for (double eta : {-1.5, -3.0, -6.0}) {
      double a = stationary_x_integral(m, eb, eta), b = stationary_x_integral_numeric(m, eb, eta);
      CHECK(a == doctest::Approx(b).epsilon(1e-6));
    }
    // Between -w and 0 the pole gives no stationary part.
    CHECK(stationary_x_integral(m, eb, -0.5) == 0.0);
  }
}

TEST_CASE("stationary distribution: positive and tends to the single-pole shape as u -> 0") {
  std::vector<double> grid;
  for (int i = 1; i <= 40; ++i) grid.push_back(0.05 * i);
  double lo = -100.0, hi = -1e-12;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (mid - std::log(-mid) + 3.0 > 0.0 ? hi : lo) = mid;
  }
  const double ref = 0.5 * (lo + hi);
  double prev = 1.0;
  for (double u : {1e-1, 1e-2, 1e-3}) {
    StationaryDistribution d = stationary_distribution(MomentStatistics{1.0, u}, 3.0, grid, 0.1);
    double err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(d.rho[i] > 0.0);
      double shape = (ref - grid[0]) * (ref - grid[0]) / ((ref - grid[i]) * (ref - grid[i]));
      err = std::max(err, std::abs(d.rho[i] / d.rho[0] - shape));
    }
    CHECK(err < 0.2 * prev);
    prev = err;
  }
  CHECK(prev < 1e-4);
  CHECK_THROWS_AS(stationary_distribution(MomentStatistics{1.0, 0.01}, 1.0, grid, 0.1), DomainError);
}

TEST_CASE("tractable profile against independent quadrature") {
  for (auto [w, u, eb] : {std::tuple{1.0, 1.0, 1.0}, std::tuple{1.0, 5.0, 3.0}, std::tuple{0.5, 0.3, 2.0}}) {
    std::vector<double> grid = {0.01, 0.3, 1.0, 4.0};
    StationaryDistribution d = tractable_profile(w, u, eb, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK(d.rho[i] == doctest::Approx(tractable_ref(w, u, eb, grid[i])).epsilon(1e-7));
    for (double h : {-0.01, -0.5, -2.0, -9.0}) CHECK(phi_less(w, u, eb, h) == doctest::Approx(phi_ref(w, u, eb, h)));
    // E^2 rho -> int (18 pi/u) eta^2 e^Phi
    double big = 1e6;
    double tail = tractable_profile(w, u, eb, {big}).rho[0] * big * big;
    CHECK(tail == doctest::Approx(tractable_tail_coefficient(w, u, eb)).epsilon(1e-4));
    CHECK(d.normalization > 0.0);
    CHECK(std::isfinite(d.normalization));
  }
  TractableOptions o;
  o.coefficient = 1.0;
  CHECK(tractable_profile(1.0, 1.0, 1.0, {0.5}, o).rho[0] * 18.0 * M_PI ==
        doctest::Approx(tractable_profile(1.0, 1.0, 1.0, {0.5}).rho[0]));
}

TEST_CASE("tractable width grows with u and shrinks with the gap") {
  std::vector<double> grid;
  for (int i = 0; i <= 400; ++i) grid.push_back(10.0 * i / 400.0);
  double prev = 0.0;
  for (double u : {0.3, 1.0, 3.0, 10.0, 30.0}) {
    double w50 = tractable_profile(1.0, u, 1.0, grid).w50;
    CHECK(w50 > prev);
    prev = w50;
  }
  prev = 1e300;
  for (double eb : {1.0, 2.0, 4.0, 6.0, 10.0}) {
    double w50 = tractable_profile(1.0, 1.0, eb, grid).w50;
    CHECK(w50 < prev);
    prev = w50;
  }
  // Normalizable with Phi < 0 across a sweep.
  for (double w : {0.3, 1.0, 3.0})
    for (double eb : {-5.0, -1.0, 0.0, 2.0, 8.0})
      for (double h : {-1e-3, -0.2, -1.0, -4.0, -30.0}) CHECK(phi_less(w, 1.0, eb, h) <= 0.0);
}

TEST_CASE("positive-eta branch dies off as 1/t^2") {
  std::vector<double> t;
  for (int i = 0; i <= 20; ++i) t.push_back(100.0 * std::pow(10.0, i / 20.0));
  DecaySeries d = decay_of_positive_eta_branch(1.0, 1.0, 1.0, t);
  CHECK(d.exponent > -2.2);
  CHECK(d.exponent < -1.8);
  DecaySeries z = decay_of_positive_eta_branch(1.0, 1.0, 1.0, {0.0, 1e6});
  CHECK(std::isfinite(z.magnitude[0]));
  CHECK(z.magnitude[1] < 1e-6 * z.magnitude[0]);
}

TEST_CASE("intermediate time window") {
  CHECK(intermediate_regime(0.1, 1e5, 1e3));
  CHECK_FALSE(intermediate_regime(0.1, 1e5, 10.0));
  CHECK_FALSE(intermediate_regime(0.1, 1e5, 1e5));
  CHECK_FALSE(intermediate_regime(0.1, 50.0, 100.0));
}
