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

#include "hcvx/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>
#include <string>

#include "hcvx/error.hpp"

namespace hcvx {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

Vector centroid(const BallIntersection& balls) {
  Vector c = Vector::Zero(balls.n);
  for (const auto& a : balls.centers) c += a;
  return c / balls.p();
}

void require_optimal(const SolverResult& res, const char* what) {
  if (res.status != SolveStatus::kOptimal) {
    throw Error(ErrorCode::kSolverFailure, std::string(what) + " solve ended " +
                                               std::string(solve_status_name(res.status)));
  }
}

// Interior-point weights leave z = A lambda accurate only to about the
// square root of the gap. On the support S of lambda the optimality
// conditions are linear: c_i + 2 a_i'A_S lambda_S = mu, sum lambda_S = 1.
// Solved exactly, the result is kept only if it is still optimal.
std::optional<Vector> polish_weights(const Matrix& A, const Vector& c, const Vector& lambda,
                                     double value) {
  const int p = static_cast<int>(lambda.size());
  std::vector<int> support;
  for (int i = 0; i < p; ++i) {
    if (lambda(i) > 1e-7) support.push_back(i);
  }
  const int s = static_cast<int>(support.size());
  Matrix AS(A.rows(), s);
  Vector cS(s);
  for (int k = 0; k < s; ++k) {
    AS.col(k) = A.col(support[k]);
    cS(k) = c(support[k]);
  }
  Matrix K = Matrix::Zero(s + 1, s + 1);
  K.topLeftCorner(s, s) = 2.0 * AS.transpose() * AS;
  K.topRightCorner(s, 1).setConstant(-1.0);
  K.bottomLeftCorner(1, s).setOnes();
  Vector rhs(s + 1);
  rhs.head(s) = -cS;
  rhs(s) = 1.0;
  // Affinely dependent centers make K singular; z stays unique.
  const Vector sol = K.completeOrthogonalDecomposition().solve(rhs);
  const double scale = 1.0 + c.cwiseAbs().maxCoeff() + A.squaredNorm();
  if ((K * sol - rhs).norm() > 1e-10 * scale) return std::nullopt;
  if (sol.head(s).minCoeff() < -1e-12) return std::nullopt;

  Vector out = Vector::Zero(p);
  for (int k = 0; k < s; ++k) out(support[k]) = std::max(sol(k), 0.0);
  out /= out.sum();
  const double mu = sol(s);
  const Vector grad = c + 2.0 * A.transpose() * (A * out);
  if ((grad.array() < mu - 1e-9 * scale).any()) return std::nullopt;
  if (c.dot(out) + (A * out).squaredNorm() > value + 1e-12 * scale) return std::nullopt;
  return out;
}

}  // namespace

WeightCenter weight_center(const BallIntersection& balls, const SolverOptions& opts) {
  balls.validate();
  const int n = balls.n;
  const int p = balls.p();
  // The weight problem is shift invariant; centering keeps the data small.
  const Vector shift = centroid(balls);
  Matrix A(n, p);
  Vector lin(p + 1);
  for (int i = 0; i < p; ++i) {
    A.col(i) = balls.centers[i] - shift;
    lin(i) = balls.radii[i] * balls.radii[i] - A.col(i).squaredNorm();
  }
  lin(p) = 1.0;

  // Variables (lambda, s): min lin'lambda + s, ||A lambda||^2 <= s.
  ConeProgram prog(p + 1);
  prog.set_objective(lin);
  Vector ones = Vector::Zero(p + 1);
  ones.head(p).setOnes();
  prog.add_eq(ones, 1.0);
  for (int i = 0; i < p; ++i) prog.add_geq(Vector::Unit(p + 1, i), 0.0);
  add_quadratic_epigraph(prog, A, 0, p);

  WeightCenter out;
  out.solve = solve(prog, opts);
  require_optimal(out.solve, "weight problem");

  Vector lambda = out.solve.z.head(p).cwiseMax(0.0);
  lambda /= lambda.sum();
  const Vector c = lin.head(p);
  double value = c.dot(lambda) + (A * lambda).squaredNorm();
  if (auto polished = polish_weights(A, c, lambda, value)) {
    lambda = *polished;
    value = c.dot(lambda) + (A * lambda).squaredNorm();
    out.polished = true;
  }
  out.lambda = lambda;
  out.value = value;
  out.z = A * lambda + shift;
  return out;
}

GammaResult gamma_balls(const BallIntersection& balls, const SolverOptions& opts) {
  balls.validate();
  const int n = balls.n;
  const Vector shift = centroid(balls);

  // Variables (x, s): min s, ||x - a_i|| <= r_i s.
  ConeProgram prog(n + 1);
  prog.set_objective(Vector::Unit(n + 1, n));
  Matrix pick = Matrix::Zero(n, n + 1);
  pick.leftCols(n).setIdentity();
  for (int i = 0; i < balls.p(); ++i) {
    prog.add_soc(pick, shift - balls.centers[i], balls.radii[i] * Vector::Unit(n + 1, n), 0.0);
  }
  const SolverResult res = solve(prog, opts);
  require_optimal(res, "gamma");

  GammaResult out;
  out.x = res.z.head(n) + shift;
  // Re-evaluate at the returned point so gamma is attained exactly.
  out.gamma = 0.0;
  for (int i = 0; i < balls.p(); ++i) {
    out.gamma = std::max(out.gamma, (out.x - balls.centers[i]).norm() / balls.radii[i]);
  }
  out.nonempty = out.gamma <= 1.0 + 1e-7;
  out.has_interior = out.gamma < 1.0 - kInteriorMargin;
  return out;
}

double gamma_upper(const BallIntersection& balls) {
  balls.validate();
  double d_max = 0.0;
  for (int i = 0; i < balls.p(); ++i) {
    for (int j = i + 1; j < balls.p(); ++j) {
      d_max = std::max(d_max, (balls.centers[i] - balls.centers[j]).norm());
    }
  }
  const double r_min = *std::min_element(balls.radii.begin(), balls.radii.end());
  const double n = balls.n;
  return std::sqrt(n / (2.0 * (n + 1.0))) * d_max / r_min;
}

InnerProblem chebyshev_inner(const BallIntersection& balls, const Vector& z,
                             const Vector& origin) {
  balls.validate();
  const int n = balls.n;
  if (z.size() != n || origin.size() != n) {
    throw Error(ErrorCode::kInvalidInput, "center or origin has the wrong length");
  }
  // ||w + origin - z||^2 = w'w + 2 (origin - z)'w + ||origin - z||^2, and
  // ||w - (a_i - origin)||^2 <= r_i^2.
  InnerProblem out;
  UqInstance& u = out.inst;
  u.n = n;
  u.Q = SymMatrix::identity(n);
  u.b.push_back(origin - z);
  u.d.push_back(0.0);
  for (int i = 0; i < balls.p(); ++i) {
    const Vector a = balls.centers[i] - origin;
    u.b.push_back(-a);
    u.d.push_back(a.squaredNorm());
    u.bounds.push_back(Bound::at_most(balls.radii[i] * balls.radii[i]));
  }
  out.constant = (origin - z).squaredNorm();
  return out;
}

ChebyshevResult chebyshev_certified(const BallIntersection& balls, const SolverOptions& opts,
                                    double tol) {
  balls.validate();
  const GammaResult g = gamma_balls(balls, opts);
  if (!g.has_interior) {
    throw Error(ErrorCode::kPreconditionViolated,
                "intersection has no interior (gamma = " + std::to_string(g.gamma) + ")");
  }
  const WeightCenter weights = weight_center(balls, opts);

  ChebyshevResult out;
  out.z_bar = weights.z;
  out.lambda = weights.lambda;
  out.v_dcc = weights.value;
  out.gamma = g.gamma;
  out.gamma_upper = gamma_upper(balls);
  out.interior_point = g.x;
  out.guaranteed_ratio = std::pow((1.0 - g.gamma) / (kSqrt2 + g.gamma), 2);

  const InnerProblem inner = chebyshev_inner(balls, weights.z, g.x);
  out.inner = approx_uq(inner.inst, opts, tol);
  out.lower = out.inner.certificate.lower + inner.constant;
  out.upper = out.inner.certificate.upper + inner.constant;
  out.witness = out.inner.x + g.x;
  out.translation_residual = out.upper - out.v_dcc;

  const double slack = tol * (1.0 + std::abs(out.v_dcc));
  out.chain_holds = out.guaranteed_ratio * out.v_dcc - slack <= out.lower &&
                    out.lower <= out.upper + slack && out.upper <= out.v_dcc + slack;
  return out;
}

}  // namespace hcvx
