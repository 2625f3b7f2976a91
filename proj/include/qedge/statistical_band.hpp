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


#ifndef QEDGE_STATISTICAL_BAND_HPP_
#define QEDGE_STATISTICAL_BAND_HPP_

#include <vector>

#include "qedge/model.hpp"
#include "qedge/special_functions.hpp"

namespace qedge {

// Coupling density g(V) sampled on an ascending V grid (trapezoid weights).
struct TabulatedCoupling {
  std::vector<double> v;
  std::vector<double> g;

  double moment(int k) const;  // int g(V) V^k dV
  void validate() const;
};

// g(V) = density * normalized power law, sampled on n points.
TabulatedCoupling tabulate(const PowerLawStatistics& s, std::size_t n);

// F(eps, xi, theta, tau) with the linear term's cutoff logarithm absorbed in
// the level energy: i w (theta log(-xi) - tau log(-eps)) plus the higher
// orders integrated over E in (0, inf). eps and xi must avoid [0, inf).
cplx eval_F(const MomentStatistics& s, cplx eps, cplx xi, double theta, double tau);
cplx eval_F(const TabulatedCoupling& s, cplx eps, cplx xi, double theta, double tau);

// Second-order part of F for the two-moment law:
// (u/2) int_0^inf (i theta/(xi-E) - i tau/(eps-E))^2 dE.
cplx delta_F(double u, cplx eps, cplx xi, double theta, double tau);
// The same term in the sign and scale convention of the printed closed
// form; equals -2 * delta_F.
cplx delta_F_printed(double u, cplx eps, cplx xi, double theta, double tau);

struct GJ {
  cplx g;
  cplx j;
};

// Zeroth-order coefficients in the small-frequency expansion of F at
// eps = xi = eta < 0, with x = theta - tau.
GJ eval_G_J(const MomentStatistics& s, double x, double eta);
GJ eval_G_J(const TabulatedCoupling& s, double x, double eta);

struct StationaryDistribution {
  std::vector<double> energies;
  std::vector<double> rho;     // unnormalized
  double normalization = 0.0;  // trapezoid integral over the grid
  double rho_edge = 0.0;       // value at E = 0
  double half_width = 0.0;     // first E with rho = rho_edge / 2
  double w50 = 0.0;            // median of the grid-normalized profile
};

// Intermediate-time ensemble profile for the two-moment law; ebar_o is the
// renormalized gap. Needs the reference root of D below -w.
StationaryDistribution stationary_distribution(const MomentStatistics& s, double ebar_o,
                                               const std::vector<double>& e_grid, double v_probe);

// x integral of the stationary distribution at one eta in closed form; zero
// where Re(1 - J) <= 0, i.e. -w <= eta < 0. The numeric version is the raw
// symmetric x quadrature with no pole selection.
double stationary_x_integral(const MomentStatistics& s, double ebar_o, double eta);
double stationary_x_integral_numeric(const MomentStatistics& s, double ebar_o, double eta);

// Times between hbar/V and hbar*g for V*g >> 1 (factor 10 margins).
bool intermediate_regime(double v, double g, double t);

// Saddle-point exponent for eta < 0.
double phi_less(double w, double u, double ebar_o, double eta);

struct TractableOptions {
  double coefficient = 18.0 * M_PI;  // prefactor of eta^2 e^Phi / u
};

StationaryDistribution tractable_profile(double w, double u, double ebar_o,
                                         const std::vector<double>& e_grid,
                                         const TractableOptions& opt = {});
// Limit of E^2 rho(E) for E -> inf.
double tractable_tail_coefficient(double w, double u, double ebar_o, const TractableOptions& opt = {});

struct DecaySeries {
  std::vector<double> t;
  std::vector<cplx> value;
  std::vector<double> magnitude;
  double exponent = 0.0;  // log-log slope of magnitude over t > 0
};

// Band-integrated eta > 0 contribution with 1/D = zeta/(4 pi u) and the
// first-order exponent. eps sits above the real axis and xi below; the zeta
// transform of the band sum then reduces to -2 pi (1 + i) sin(2 eta T)/T
// with T = t + K(eta)/(4 pi u).
DecaySeries decay_of_positive_eta_branch(double w, double u, double ebar_o,
                                         const std::vector<double>& t_grid);

}  // namespace qedge

#endif  // QEDGE_STATISTICAL_BAND_HPP_
