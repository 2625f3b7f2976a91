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

#include "qedge/profiles.hpp"

#include <algorithm>
#include <cmath>

#include "qedge/errors.hpp"

namespace qedge {

namespace {

double fwhm_of(const std::vector<double>& e, const std::vector<double>& r) {
  if (e.size() < 2) return 0.0;
  std::size_t imax = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
  const double half = 0.5 * r[imax];
  if (!(half > 0.0)) return 0.0;
  double left = e.front();
  for (std::size_t i = imax; i > 0; --i) {
    if (r[i - 1] < half) {
      double f = (half - r[i - 1]) / (r[i] - r[i - 1]);
      left = e[i - 1] + f * (e[i] - e[i - 1]);
      break;
    }
  }
  double right = e.back();
  for (std::size_t i = imax; i + 1 < e.size(); ++i) {
    if (r[i + 1] < half) {
      double f = (r[i] - half) / (r[i] - r[i + 1]);
      right = e[i] + f * (e[i + 1] - e[i]);
      break;
    }
  }
  return right - left;
}

}  // namespace

PopulationMoments moments_discrete(const std::vector<double>& e, const std::vector<double>& rho,
                                   double lo, double hi) {
  if (e.size() != rho.size()) throw InvalidArgument("moments: size mismatch");
  std::vector<double> we, wr;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i] >= lo && e[i] <= hi) {
      we.push_back(e[i]);
      wr.push_back(rho[i]);
    }
  if (we.empty()) throw InvalidArgument("moments: empty window");
  PopulationMoments m;
  double s1 = 0.0;
  for (std::size_t i = 0; i < we.size(); ++i) {
    m.total += wr[i];
    s1 += wr[i] * we[i];
  }
  if (!(m.total > 0.0)) return m;
  m.mean = s1 / m.total;
  double cum = 0.0;
  for (std::size_t i = 0; i < we.size(); ++i) {
    cum += wr[i];
    if (cum >= 0.5 * m.total) {
      m.w50 = we[i] - lo;
      break;
    }
  }
  m.fwhm = fwhm_of(we, wr);
  return m;
}

PopulationMoments moments_density(const std::vector<double>& e, const std::vector<double>& rho,
                                  double lo, double hi) {
  if (e.size() != rho.size()) throw InvalidArgument("moments: size mismatch");
  std::vector<double> we, wr;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i] >= lo && e[i] <= hi) {
      we.push_back(e[i]);
      wr.push_back(rho[i]);
    }
  if (we.size() < 2) throw InvalidArgument("moments: window holds fewer than two samples");
  PopulationMoments m;
  std::vector<double> cum(we.size(), 0.0);
  double s1 = 0.0;
  for (std::size_t i = 1; i < we.size(); ++i) {
    double h = we[i] - we[i - 1];
    cum[i] = cum[i - 1] + 0.5 * h * (wr[i] + wr[i - 1]);
    s1 += 0.5 * h * (wr[i] * we[i] + wr[i - 1] * we[i - 1]);
  }
  m.total = cum.back();
  if (!(m.total > 0.0)) return m;
  m.mean = s1 / m.total;
  const double half = 0.5 * m.total;
  auto it = std::lower_bound(cum.begin(), cum.end(), half);
  std::size_t k = static_cast<std::size_t>(it - cum.begin());
  if (k == 0) {
    m.w50 = we[0] - lo;
  } else {
    double f = (half - cum[k - 1]) / (cum[k] - cum[k - 1]);
    m.w50 = we[k - 1] + f * (we[k] - we[k - 1]) - lo;
  }
  m.fwhm = fwhm_of(we, wr);
  return m;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("loglog_slope: bad sizes");
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = a;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
    out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  out.back() = b;
  return out;
}

std::vector<double> logspace(double a, double b, std::size_t n) {
  auto l = linspace(std::log(a), std::log(b), n);
  for (auto& x : l) x = std::exp(x);
  if (n > 1) {
    l.front() = a;
    l.back() = b;
  }
  return l;
}

}  // namespace qedge
