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
#ifndef QEDGE_EDGE_ANALYTICS_HPP_
#define QEDGE_EDGE_ANALYTICS_HPP_

#include <complex>
#include <optional>
#include <vector>

#include "qedge/model.hpp"

namespace qedge {

using cplx = std::complex<double>;

// Continuum edge in reduced form: w = g V^2, ebar0 = -E0 + w ln(gamma).
struct EdgeParams {
  double w = 1.0;
  double ebar0 = 1.0;
  double v = 0.1;  // per-state coupling; g = w / v^2
  double gamma = 40.0;

  static EdgeParams from_continuum(const ContinuumEdgeParams& p);
  double g() const { return w / (v * v); }
  double e0() const;  // bare level energy implied by ebar0
  void validate() const;
};

// Resolvent of the isolated level coupled to the edge band and, optionally,
// one strongly coupled level at e_s. Amplitudes are sums of pole residues and
// one branch-cut integral along the negative imaginary axis:
//   D(eps) = eps - w log(-eps) + ebar0 + v_s^2/(e_s - eps)
//   psi_x(t) = sum_k a_x(eps_k) e^{-i eps_k t} / D'(eps_k) [+ pole at E]
//              - i w int_0^inf e^{-y t} a_x(-iy) / (D_L(y) D_R(y)) dy
// with a_0 = 1, a_E = V/(eps - E), a_S = v_s/(eps - e_s). psi0(0) = 1.
class EdgeResolvent {
 public:
  explicit EdgeResolvent(const EdgeParams& p, std::optional<Spoiler> s = std::nullopt);

  const EdgeParams& params() const { return p_; }
  bool has_spoiler() const { return sp_.has_value(); }
  const Spoiler& spoiler() const { return *sp_; }

  cplx denominator(cplx eps) const;
  cplx denominator_derivative(cplx eps) const;
  // Boundary values on the two sides of the cut at eps = -i y.
  cplx denominator_cut(double y, bool left) const;

  // Real root first, then the complex zeros of the continued denominator,
  // nearest to the spoiler energy first.
  const std::vector<cplx>& poles() const { return poles_; }
  cplx residue_weight(std::size_t k) const { return 1.0 / denominator_derivative(poles_[k]); }

  cplx psi0(double t) const;
  cplx psiE(double e, double t) const;
  cplx psiS(double t) const;

  // Branch-cut parts alone (the pole terms subtracted).
  cplx cut0(double t) const;

  // t -> inf limits; cross terms between different frequencies averaged out.
  double rho0_infinity() const;
  double rhoS_infinity() const;
  double rho_stationary(double e) const;   // per band state
  double density_stationary(double e) const { return p_.g() * rho_stationary(e); }

  double quad_rtol = 1e-10;

 private:
  cplx pole_free(cplx eps) const;  // D times (e_s - eps) when a spoiler is present
  cplx pole_free_derivative(cplx eps) const;
  void add_complex_roots();

  template <class Amp>
  cplx cut_integral(Amp amp, double t, std::vector<double> scales) const;

  EdgeParams p_;
  std::optional<Spoiler> sp_;
  std::vector<cplx> poles_;
};

// Stark-shifted level position -w W0(exp(ebar0/w)/w).
double pole_epsilon0(const EdgeParams& p);
double residue_weight_edge(const EdgeParams& p);  // 1/(1 - w/eps0)

cplx psi0_edge(const EdgeParams& p, double t);
cplx psiE_edge(const EdgeParams& p, double e, double t);
std::vector<double> stationary_profile(const EdgeParams& p, const std::vector<double>& e_grid);

// Population g int_a^b rho(E) dE of the stationary profile.
double stationary_population(const EdgeResolvent& r, double a, double b);

struct TailFit {
  double c = 0.0;             // amplitude of c/(wt ln wt)
  double rel_residual = 0.0;  // rms of (data - fit)/fit
  bool regime_warning = false;
  std::vector<double> times, excess;
};

// Fit of the slowly decaying part of rho0 against c/(w t ln(w t)). The
// excess is the envelope 2|Z||C(t)| + |C(t)|^2 of rho0(t) - rho0(inf), C the
// cut part of psi0, which strips the e^{-i eps0 t} beat.
TailFit tail_law_fit(const EdgeParams& p, const std::vector<double>& t_grid);

struct EdgeSurface {
  std::vector<double> gaps;      // |E0|/w
  std::vector<double> energies;  // E/w
  std::vector<double> density;   // g rho(E), row-major [gap][energy]
  std::vector<double> window_population;  // g int_0^{gamma/100} rho per gap
};

EdgeSurface edge_transfer_surface(double w, double v, double gamma,
                                  const std::vector<double>& gaps_over_w,
                                  const std::vector<double>& e_over_w);

}  // namespace qedge

#endif  // QEDGE_EDGE_ANALYTICS_HPP_
