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
#ifndef QEDGE_PROFILES_HPP_
#define QEDGE_PROFILES_HPP_

#include <vector>

namespace qedge {

// Population bookkeeping over an energy window [lo, hi].
//   w50:  smallest E* with half of the window population below it, minus lo
//   fwhm: full width at half maximum of the (interpolated) profile
struct PopulationMoments {
  double total = 0.0;
  double mean = 0.0;
  double fwhm = 0.0;
  double w50 = 0.0;
};

// Discrete level populations rho_n at energies e_n (ascending).
PopulationMoments moments_discrete(const std::vector<double>& e, const std::vector<double>& rho,
                                   double lo, double hi);

// Density rho(E) sampled on an ascending grid; trapezoidal integration.
PopulationMoments moments_density(const std::vector<double>& e, const std::vector<double>& rho,
                                  double lo, double hi);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

std::vector<double> linspace(double a, double b, std::size_t n);
std::vector<double> logspace(double a, double b, std::size_t n);  // endpoints a, b > 0

}  // namespace qedge

#endif  // QEDGE_PROFILES_HPP_
