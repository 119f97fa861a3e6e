// Copyright 2026 The hcvx Authors.
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

// Chebyshev center of an intersection of balls: the convex weight problem
// over the simplex, the interiority measure gamma and a certified interval on
// the worst-case squared distance from the returned center.

#ifndef HCVX_CHEBYSHEV_HPP_
#define HCVX_CHEBYSHEV_HPP_

#include "hcvx/cone.hpp"
#include "hcvx/model.hpp"
#include "hcvx/recover.hpp"

namespace hcvx {

// Interiority tolerance: gamma must stay below 1 - kInteriorMargin.
inline constexpr double kInteriorMargin = 1e-6;

struct WeightCenter {
  Vector z;       // sum_i lambda_i a_i
  Vector lambda;  // on the simplex
  double value = 0.0;
  bool polished = false;  // lambda refined on its support after the solve
  SolverResult solve;
};

// min_lambda sum lambda_i (r_i^2 - ||a_i||^2) + ||sum lambda_i a_i||^2 over
// the simplex, solved as a cone program with an epigraph for the norm term.
WeightCenter weight_center(const BallIntersection& balls, const SolverOptions& opts = {});

struct GammaResult {
  double gamma = 0.0;  // min_x max_i ||x - a_i|| / r_i
  Vector x;            // minimizer
  bool nonempty = true;      // gamma <= 1 (within solver accuracy)
  bool has_interior = true;  // gamma < 1 - kInteriorMargin
};
GammaResult gamma_balls(const BallIntersection& balls, const SolverOptions& opts = {});

// sqrt(n / (2 (n + 1))) * d_max / r_min.
double gamma_upper(const BallIntersection& balls);

struct ChebyshevResult {
  Vector z_bar;
  Vector lambda;
  double v_dcc = 0.0;
  double gamma = 0.0;
  double gamma_upper = 0.0;
  Vector interior_point;  // gamma_balls minimizer, used as the origin
  // Interval on max_{x in Omega} ||x - z_bar||^2.
  double lower = 0.0;
  double upper = 0.0;
  Vector witness;  // point of Omega attaining `lower`
  double guaranteed_ratio = 0.0;
  // upper computed from the translated inner relaxation against v_dcc; these
  // agree in exact arithmetic and are both reported.
  double translation_residual = 0.0;
  bool chain_holds = false;
  Approximation inner;
};

// Throws PreconditionViolated when gamma >= 1 - kInteriorMargin.
ChebyshevResult chebyshev_certified(const BallIntersection& balls,
                                    const SolverOptions& opts = {}, double tol = 1e-5);

// Inner problem max ||x - z||^2 over Omega in coordinates centered at
// `origin`, as a UQ with Q = I and d_0 = 0; `constant` is ||origin - z||^2.
struct InnerProblem {
  UqInstance inst;
  double constant = 0.0;
};
InnerProblem chebyshev_inner(const BallIntersection& balls, const Vector& z, const Vector& origin);

}  // namespace hcvx

#endif  // HCVX_CHEBYSHEV_HPP_
