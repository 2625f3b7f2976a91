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

#include "qedge/special_functions.hpp"

#include <cmath>
#include <limits>

#include "qedge/errors.hpp"

namespace qedge {

namespace {

constexpr double kInvE = 0.36787944117144233;

double w0_guess(double x) {
  if (x < -0.25) {
    // Branch-point series in p = sqrt(2(ex+1)).
    double p = std::sqrt(std::max(0.0, 2.0 * (M_E * x + 1.0)));
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
  }
  if (x < 3.0) {
    double l = std::log1p(x);
    return l * (1.0 - std::log1p(l) / (2.0 + l));
  }
  double l1 = std::log(x);
  double l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x)) throw DomainError("lambert_w0: NaN argument");
  if (x < -kInvE) {
    // Allow the rounded value of -1/e itself.
    if (x < -kInvE * (1.0 + 4 * std::numeric_limits<double>::epsilon()))
      throw DomainError("lambert_w0: argument below -1/e");
    return -1.0;
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;
  if (x > 1e300) return lambert_w0_exp(std::log(x));

  double w = w0_guess(x);
  for (int it = 0; it < 12; ++it) {
    double ew = std::exp(w);
    double f = w * ew - x;
    double wp1 = w + 1.0;
    if (wp1 <= 0.0) break;  // sitting on the branch point
    double denom = ew * wp1 - 0.5 * (w + 2.0) * f / wp1;
    double dw = f / denom;
    w -= dw;
    if (std::abs(dw) <= 4e-16 * (1.0 + std::abs(w))) break;
  }
  return w;
}

double lambert_w0_exp(double a) {
  if (!std::isfinite(a)) throw DomainError("lambert_w0_exp: non-finite argument");
  if (a < 1.0) return lambert_w0(std::exp(a));
  // Solve w + ln w = a by Halley; f' = 1 + 1/w, f'' = -1/w^2.
  double w = a - std::log(a);
  if (w < 0.5) w = 0.5;
  for (int it = 0; it < 20; ++it) {
    double f = w + std::log(w) - a;
    double f1 = 1.0 + 1.0 / w;
    double f2 = -1.0 / (w * w);
    double dw = f / (f1 - 0.5 * f * f2 / f1);
    w -= dw;
    if (std::abs(dw) <= 4e-16 * w) break;
  }
  return w;
}

namespace {

// Maclaurin series, carried in long double to tame the cancellation of
// exponentially large terms on the positive axis.
double airy_series(double xd) {
  using ld = long double;
  const ld c1 = 0.355028053887817239260063186004183176L;   // Ai(0)
  const ld c2 = 0.258819403792806798405183560189203963L;   // -Ai'(0)
  const ld x = xd;
  const ld x3 = x * x * x;
  ld f = 1.0L, g = x;
  ld tf = 1.0L, tg = x;
  for (int k = 1; k < 400; ++k) {
    tf *= x3 / ((3.0L * k - 1.0L) * (3.0L * k));
    tg *= x3 / ((3.0L * k) * (3.0L * k + 1.0L));
    f += tf;
    g += tg;
    if (std::abs(tf) < 1e-22L * std::abs(f) && std::abs(tg) < 1e-22L * (std::abs(g) + 1e-300L))
      break;
  }
  return static_cast<double>(c1 * f - c2 * g);
}

// u_k coefficients of the Airy asymptotic expansions.
double airy_u(int k) {
  double u = 1.0;
  for (int j = 1; j <= k; ++j)
    u *= (6.0 * j - 5.0) * (6.0 * j - 3.0) * (6.0 * j - 1.0) / ((2.0 * j - 1.0) * 216.0 * j);
  return u;
}

double airy_asymptotic_pos(double x) {
  double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  double sum = 0.0, term = 1.0, prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 60; ++k) {
    term = airy_u(k) / std::pow(zeta, k) * ((k % 2) ? -1.0 : 1.0);
    if (std::abs(term) > prev) break;  // divergent tail
    sum += term;
    prev = std::abs(term);
    if (prev < 1e-17 * std::abs(sum)) break;
  }
  return std::exp(-zeta) / (2.0 * std::sqrt(M_PI) * std::pow(x, 0.25)) * sum;
}

double airy_asymptotic_neg(double x) {
  double ax = -x;
  double zeta = 2.0 / 3.0 * ax * std::sqrt(ax);
  double p = 0.0, q = 0.0, prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 60; ++k) {
    double te = airy_u(2 * k) / std::pow(zeta, 2 * k) * ((k % 2) ? -1.0 : 1.0);
    double to = airy_u(2 * k + 1) / std::pow(zeta, 2 * k + 1) * ((k % 2) ? -1.0 : 1.0);
    double mag = std::max(std::abs(te), std::abs(to));
    if (mag > prev) break;
    p += te;
    q += to;
    prev = mag;
    if (mag < 1e-17) break;
  }
  double ph = zeta + 0.25 * M_PI;
  return (std::sin(ph) * p - std::cos(ph) * q) / (std::sqrt(M_PI) * std::pow(ax, 0.25));
}

}  // namespace

double airy_ai(double x) {
  if (!(std::abs(x) <= 30.0)) throw DomainError("airy_ai: |x| > 30");
  if (x > 8.0) return airy_asymptotic_pos(x);
  if (x < -8.0) return airy_asymptotic_neg(x);
  return airy_series(x);
}

cplx branched_log(cplx eps) {
  if (eps == cplx(0.0, 0.0)) throw DomainError("branched_log: eps = 0");
  double phi = std::atan2(eps.imag(), eps.real());
  if (phi <= -0.5 * M_PI) phi += 2.0 * M_PI;
  return {std::log(std::abs(eps)), phi - M_PI};
}

}  // namespace qedge
