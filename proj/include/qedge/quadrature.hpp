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
#ifndef QEDGE_QUADRATURE_HPP_
#define QEDGE_QUADRATURE_HPP_

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "qedge/errors.hpp"

namespace qedge {

struct QuadResult {
  double abs_error = 0.0;
  double l1 = 0.0;
};

// Globally adaptive Gauss-Kronrod (7/15) seeded with the panels
// [b_i, b_{i+1}]; the last break may be +inf. The worst panel is bisected
// until the summed error estimate is below rtol times the L1 norm, so panels
// with negligible content are left alone. Real or complex integrands.
template <class T, class F>
T integrate_panels(F&& f, std::vector<double> breaks, double rtol, QuadResult* info = nullptr,
                   unsigned max_depth = 48) {
  using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
  struct Panel {
    double a, b;  // in s = (y - y0) / (1 + y - y0) for the tail panel
    bool tail;
    T val;
    double err, l1;
    unsigned depth;
    bool operator<(const Panel& o) const { return err < o.err; }
  };
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  double y0 = 0.0;
  auto tail_f = [&](double s) {
    if (s >= 1.0) return T{};
    double d = 1.0 - s;
    return T(f(y0 + s / d) / (d * d));
  };
  auto eval = [&](double a, double b, bool tail, unsigned depth) {
    Panel p{a, b, tail, T{}, 0.0, 0.0, depth};
    if (tail)
      p.val = gk::integrate(tail_f, a, b, 0, 0.0, &p.err, &p.l1);
    else
      p.val = gk::integrate(f, a, b, 0, 0.0, &p.err, &p.l1);
    // Boost leaves the single-panel error in [-1, 1] units.
    p.err *= 0.5 * (b - a);
    if (!std::isfinite(p.err)) p.err = std::numeric_limits<double>::max();
    return p;
  };
  std::priority_queue<Panel> heap;
  std::vector<Panel> done;
  double err = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    bool tail = std::isinf(breaks[i + 1]);
    if (tail) y0 = breaks[i];
    Panel p = tail ? eval(0.0, 1.0, true, 0) : eval(breaks[i], breaks[i + 1], false, 0);
    err += p.err;
    l1 += p.l1;
    heap.push(p);
  }
  std::size_t iters = 0;
  while (!heap.empty() && err > rtol * l1 && iters < 200000) {
    Panel p = heap.top();
    heap.pop();
    double m = 0.5 * (p.a + p.b);
    if (p.depth >= max_depth || !(m > p.a && m < p.b)) {
      done.push_back(p);
      continue;
    }
    Panel lft = eval(p.a, m, p.tail, p.depth + 1), rgt = eval(m, p.b, p.tail, p.depth + 1);
    err += lft.err + rgt.err - p.err;
    l1 += lft.l1 + rgt.l1 - p.l1;
    heap.push(lft);
    heap.push(rgt);
    ++iters;
  }
  // Sum in a fixed order so results do not depend on heap layout.
  for (; !heap.empty(); heap.pop()) done.push_back(heap.top());
  std::sort(done.begin(), done.end(), [](const Panel& x, const Panel& y) {
    return x.tail != y.tail ? !x.tail : x.a < y.a;
  });
  T total{};
  err = 0.0;
  l1 = 0.0;
  for (const auto& p : done) {
    total += p.val;
    err += p.err;
    l1 += p.l1;
  }
  if (!std::isfinite(std::abs(total)))
    throw NumericError("quadrature produced a non-finite value");
  if (info) {
    info->abs_error = err;
    info->l1 = l1;
  }
  return total;
}

// Breaks at scale*10^k for k in [lo, hi], clipped to (a, b), plus a and b.
inline std::vector<double> geometric_breaks(double a, double b, double scale, int lo, int hi) {
  std::vector<double> br{a, b};
  for (int k = lo; k <= hi; ++k) {
    double x = scale * std::pow(10.0, k);
    if (x > a && x < b) br.push_back(x);
  }
  return br;
}

}  // namespace qedge

#endif  // QEDGE_QUADRATURE_HPP_
