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

#ifndef QEDGE_SPECIAL_FUNCTIONS_HPP_
#define QEDGE_SPECIAL_FUNCTIONS_HPP_

#include <complex>

namespace qedge {

using cplx = std::complex<double>;

// Principal branch W0 on [-1/e, inf). Throws DomainError below -1/e.
double lambert_w0(double x);

// W0(exp(a)) without forming exp(a); valid for any finite a.
double lambert_w0_exp(double a);

// Airy Ai on |x| <= 30.
double airy_ai(double x);

// log(-eps) with the cut of log along the negative imaginary axis of eps:
// real for eps < 0, ln(eps) - i*pi for eps > 0.
cplx branched_log(cplx eps);

// The two boundary values of log(-eps) at eps = -i*y, y > 0.
inline cplx cut_log_left(double y) { return {std::log(y), 0.5 * M_PI}; }
inline cplx cut_log_right(double y) { return {std::log(y), -1.5 * M_PI}; }

}  // namespace qedge

#endif  // QEDGE_SPECIAL_FUNCTIONS_HPP_
