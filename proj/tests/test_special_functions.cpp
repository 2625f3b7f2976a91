#include <doctest.h>

#include <boost/math/special_functions/airy.hpp>
#include <cmath>

#include "qedge/errors.hpp"
#include "qedge/special_functions.hpp"

using namespace qedge;

namespace {

// Bisection on w e^w - x over [lo, hi].
double bisect_w(double x, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid * std::exp(mid) - x > 0.0) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Ai from the Gamma-function Maclaurin form, independent of the library series.
double airy_gamma_series(double x) {
  long double s = 0.0L;
  const long double c = std::cbrt(3.0L) * x;
  long double p = 1.0L;
  for (int k = 0; k < 120; ++k) {
    long double term = std::tgamma((k + 1) / 3.0L) / std::tgamma(k + 1.0L) * p *
                       std::sin(2.0L * (k + 1) * M_PIl / 3.0L);
    s += term;
    p *= c;
  }
  return static_cast<double>(s / (M_PIl * std::pow(3.0L, 2.0L / 3.0L)));
}

}  // namespace

TEST_CASE("lambert_w0 closed-form points") {
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK(lambert_w0(M_E) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lambert_w0(-1.0 / M_E) == doctest::Approx(-1.0).epsilon(1e-7));
}

TEST_CASE("lambert_w0 matches bisection oracle") {
  const double oracle = bisect_w(1.0, 0.0, 1.0);
  CHECK(oracle == doctest::Approx(0.5671432904097838).epsilon(1e-15));
  CHECK(std::abs(lambert_w0(1.0) - oracle) < 1e-15);
  for (double x : {-0.3, -0.1, 0.5, 2.0, 10.0, 1e3, 1e6}) {
    double lo = -1.0, hi = std::max(1.0, std::log(x + 1.0) + 1.0);
    CHECK(std::abs(lambert_w0(x) - bisect_w(x, lo, hi)) < 1e-13 * std::max(1.0, std::abs(lambert_w0(x))));
  }
}

TEST_CASE("lambert_w0 inverse residual on a log grid") {
  const double x0 = -1.0 / M_E + 1e-6;
  double prev = -2.0;
  // Negative part then log-spaced positive part up to 1e6.
  for (int i = 0; i <= 200; ++i) {
    double x = x0 + (0.0 - x0) * i / 200.0;
    double w = lambert_w0(x);
    CHECK(std::abs(w * std::exp(w) - x) <= 1e-13 * std::max(1.0, std::abs(x)));
    CHECK(w >= prev);
    prev = w;
  }
  for (int i = 0; i <= 400; ++i) {
    double x = std::pow(10.0, -12.0 + 18.0 * i / 400.0);
    double w = lambert_w0(x);
    CHECK(std::abs(w * std::exp(w) - x) <= 1e-13 * std::max(1.0, std::abs(x)));
    CHECK(w > prev);
    prev = w;
  }
}

TEST_CASE("lambert_w0 rejects arguments below -1/e") {
  CHECK_THROWS_AS(lambert_w0(-0.5), DomainError);
  CHECK_THROWS_AS(lambert_w0(std::nan("")), DomainError);
}

TEST_CASE("lambert_w0_exp agrees with the direct form and handles huge arguments") {
  for (double a = -5.0; a <= 50.0; a += 0.25)
    CHECK(lambert_w0_exp(a) == doctest::Approx(lambert_w0(std::exp(a))).epsilon(1e-14));
  for (double a : {800.0, 1e4, 1e8}) {
    double w = lambert_w0_exp(a);
    CHECK(std::abs(w + std::log(w) - a) < 1e-13 * a);
  }
}

TEST_CASE("airy_ai at zero") {
  const double ai0 = std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0);
  CHECK(airy_ai(0.0) == doctest::Approx(ai0).epsilon(1e-15));
}

TEST_CASE("airy_ai at one against an independent series") {
  CHECK(std::abs(airy_ai(1.0) - airy_gamma_series(1.0)) < 1e-14);
  CHECK(std::abs(airy_ai(-2.5) - airy_gamma_series(-2.5)) < 1e-12);
}

TEST_CASE("airy_ai satisfies the Airy equation") {
  const double h = 5e-4;
  for (double x = -6.0; x <= 6.0; x += 0.37) {
    double d2 = (airy_ai(x + h) - 2.0 * airy_ai(x) + airy_ai(x - h)) / (h * h);
    CHECK(std::abs(d2 - x * airy_ai(x)) < 1e-6);
  }
}

TEST_CASE("airy_ai absolute accuracy over the supported range") {
  double worst = 0.0;
  for (double x = -30.0; x <= 30.0; x += 0.0137) {
    worst = std::max(worst, std::abs(airy_ai(x) - boost::math::airy_ai(x)));
  }
  CHECK(worst < 1e-10);
  // Both sides of the series/asymptotic switch.
  for (double x : {-8.0001, -7.9999, 7.9999, 8.0001})
    CHECK(std::abs(airy_ai(x) - boost::math::airy_ai(x)) < 1e-12);
  CHECK_THROWS_AS(airy_ai(30.5), DomainError);
}

TEST_CASE("branched_log conventions") {
  auto a = branched_log({-2.0, 0.0});
  CHECK(a.real() == doctest::Approx(std::log(2.0)));
  CHECK(a.imag() == 0.0);
  auto b = branched_log({2.0, 0.0});
  CHECK(b.real() == doctest::Approx(std::log(2.0)));
  CHECK(b.imag() == doctest::Approx(-M_PI));
  CHECK_THROWS_AS(branched_log({0.0, 0.0}), DomainError);
}

TEST_CASE("branched_log jumps by 2 pi i only across the negative imaginary axis") {
  const double eta = 1e-12;
  for (double y : {1e-3, 0.5, 3.0, 100.0}) {
    // An offset eta off an axis moves the argument by about eta / y.
    const double tol = 1e-12 + 4.0 * eta / y;
    cplx left = branched_log({-eta, -y}), right = branched_log({eta, -y});
    CHECK(std::abs((left - right) - cplx(0.0, 2.0 * M_PI)) < tol);
    CHECK(std::abs(left - cut_log_left(y)) < tol);
    CHECK(std::abs(right - cut_log_right(y)) < tol);
    // Positive imaginary axis.
    CHECK(std::abs(branched_log({-eta, y}) - branched_log({eta, y})) < tol);
    // Real axis, both signs.
    CHECK(std::abs(branched_log({y, eta}) - branched_log({y, -eta})) < tol);
    CHECK(std::abs(branched_log({-y, eta}) - branched_log({-y, -eta})) < tol);
  }
}
