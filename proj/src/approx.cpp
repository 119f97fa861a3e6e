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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hcvx/error.hpp"
#include "hcvx/recover.hpp"

namespace hcvx {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

void require_convex_one_sided(const UqInstance& inst) {
  inst.validate();
  if (!is_pd(inst.Q)) throw Error(ErrorCode::kNotPositiveDefinite, "Q is not positive definite");
  for (int i = 0; i < inst.p(); ++i) {
    const Bound& bd = inst.bounds[i];
    if (bd.lower.is_finite() || !bd.upper.is_finite()) {
      throw Error(ErrorCode::kWrongShape,
                  "row " + std::to_string(i + 1) + " must have the form f_i(x) <= u_i with u_i finite");
    }
  }
}

// Q^{-1/2} through the eigendecomposition.
Matrix inverse_sqrt(const SymMatrix& Q) {
  const auto eig = sym_eig(Q);
  return eig.vectors * eig.values.cwiseSqrt().cwiseInverse().asDiagonal() *
         eig.vectors.transpose();
}

// ||Q^{-1/2} b_i||^2 for every row.
std::vector<double> centered_norms(const UqInstance& inst, const Matrix& qis) {
  std::vector<double> out;
  for (int i = 1; i <= inst.p(); ++i) out.push_back((qis * inst.b[i]).squaredNorm());
  return out;
}

// max_i sqrt((f_i(x) - d_i + |b_i|^2_{Q^-1}) / (u_i - d_i + |b_i|^2_{Q^-1})): how
// far x sits from the ellipsoid centers relative to the ellipsoid radii.
double ellipsoid_ratio(const UqInstance& inst, const std::vector<double>& bnorm, const Vector& x) {
  double worst = 0.0;
  for (int i = 1; i <= inst.p(); ++i) {
    const double num = eval_f(inst, i, x) - inst.d[i] + bnorm[i - 1];
    const double den = inst.bounds[i - 1].upper.value() - inst.d[i] + bnorm[i - 1];
    worst = std::max(worst, std::sqrt(std::max(num, 0.0) / den));
  }
  return worst;
}

}  // namespace

double gamma_uq(const UqInstance& inst) {
  require_convex_one_sided(inst);
  const std::vector<double> bnorm = centered_norms(inst, inverse_sqrt(inst.Q));
  double g = 0.0;
  for (int i = 1; i <= inst.p(); ++i) {
    const double den = inst.bounds[i - 1].upper.value() - inst.d[i] + bnorm[i - 1];
    if (!(den > 0.0)) {
      throw Error(ErrorCode::kInvalidInstance,
                  "u_i - d_i + |b_i|^2 is not positive in row " + std::to_string(i));
    }
    g = std::max(g, std::sqrt(bnorm[i - 1] / den));
  }
  return g;
}

double tau_bar(const UqInstance& inst, const Vector& x) {
  require_convex_one_sided(inst);
  if (x.size() != inst.n) throw Error(ErrorCode::kInvalidInput, "point has the wrong length");
  const Matrix Q = inst.Q.dense();
  const double a = x.dot(Q * x);
  double tau = 1.0;
  for (int i = 1; i <= inst.p(); ++i) {
    // a tau^2 + 2 (b_i'x) tau + (d_i - u_i) <= 0 holds on [0, largest root].
    const double c = inst.d[i] - inst.bounds[i - 1].upper.value();
    if (c > 0.0) {
      throw Error(ErrorCode::kPreconditionViolated,
                  "origin violates row " + std::to_string(i));
    }
    const double b = inst.b[i].dot(x);
    double root;
    if (a <= 0.0) {
      root = b > 0.0 ? -c / (2.0 * b) : std::numeric_limits<double>::infinity();
    } else {
      const double disc = std::sqrt(std::max(b * b - a * c, 0.0));
      // Stable form of (-b + disc) / a.
      root = b > 0.0 ? -c / (b + disc) : (-b + disc) / a;
    }
    tau = std::min(tau, root);
  }
  return std::clamp(tau, 0.0, 1.0);
}

Approximation approx_uq(const UqInstance& inst, const SolverOptions& solver, double tol) {
  require_convex_one_sided(inst);
  if (inst.d[0] != 0.0) {
    throw Error(ErrorCode::kPreconditionViolated, "objective constant d_0 must be zero");
  }
  for (int i = 1; i <= inst.p(); ++i) {
    if (!(inst.d[i] < inst.bounds[i - 1].upper.value())) {
      throw Error(ErrorCode::kPreconditionViolated,
                  "origin is not strictly inside row " + std::to_string(i) +
                      "; translate to an interior point first");
    }
  }
  const double gamma = gamma_uq(inst);

  const int n = inst.n;
  const Matrix Q = inst.Q.dense();
  const Matrix qis = inverse_sqrt(inst.Q);
  const std::vector<double> bnorm = centered_norms(inst, qis);
  const Vector& b0 = inst.b[0];

  Approximation out;
  const Relaxation relax = build_socp_uq(inst);
  out.solve = solve(relax.program, solver);
  if (out.solve.status != SolveStatus::kOptimal) {
    throw Error(ErrorCode::kSolverFailure, std::string("relaxation solve ended ") +
                                               std::string(solve_status_name(out.solve.status)));
  }
  ApproxTrace& tr = out.trace;
  tr.gamma = gamma;
  tr.x_star = relax.meta.back_map(out.solve.z);
  tr.t_star = out.solve.z(relax.meta.t_var[0]);
  const Vector& xs = tr.x_star;
  const double ts = tr.t_star;
  const double v = ts + 2.0 * b0.dot(xs);
  const double gap = ts - xs.dot(Q * xs);

  out.certificate.upper = v;
  out.certificate.guaranteed_ratio = std::pow((1.0 - gamma) / (kSqrt2 + gamma), 2);

  if (gap <= 1e-8 * (1.0 + std::abs(ts))) {
    // Relaxation already tight: x* solves the source problem.
    tr.shortcut = true;
    tr.degenerate_root = gap > 0.0;
    tr.s1 = xs;
    tr.s2 = Vector::Zero(n);
    tr.y = Vector::Zero(n);
    tr.x_bar = xs;
    tr.rho1 = ellipsoid_ratio(inst, bnorm, xs);
    out.x = xs;
  } else {
    // Split (x*, t*) into two rank-one pieces carrying the same objective.
    tr.y = std::sqrt(gap) * qis.col(0);
    const Vector& y = tr.y;
    const double qa = y.dot(Q * y);
    const double qb = y.dot(Q * xs) + b0.dot(y);
    const double qc = -gap;
    const double disc = std::sqrt(std::max(qb * qb - qa * qc, 0.0));
    tr.alpha = qb < 0.0 ? (-qb + disc) / qa : -qc / (qb + disc);
    const double alpha = tr.alpha;
    const double norm = std::sqrt(1.0 + alpha * alpha);
    tr.s1 = (xs + alpha * y) / norm;
    tr.s2 = (alpha * xs - y) / norm;
    tr.t1 = 1.0 / norm;
    tr.t2 = alpha / norm;

    const double n1 = tr.s1.dot(Q * tr.s1) + 2.0 * tr.t1 * b0.dot(tr.s1);
    const double n2 = tr.s2.dot(Q * tr.s2) + 2.0 * tr.t2 * b0.dot(tr.s2);
    tr.identity_residual = n1 + n2 - v;
    tr.energy_residual = tr.s1.dot(Q * tr.s1) + tr.s2.dot(Q * tr.s2) - ts;
    tr.identity_ok = std::abs(tr.identity_residual) <= 1e-8 * (1.0 + std::abs(v)) &&
                     std::abs(tr.energy_residual) <= 1e-8 * (1.0 + std::abs(ts));

    const bool second = alpha >= 1e-10;
    const Vector p1 = tr.s1 / tr.t1;
    const Vector p2 = second ? Vector(tr.s2 / tr.t2) : Vector::Zero(n);
    tr.rho1 = ellipsoid_ratio(inst, bnorm, p1);
    tr.rho2 = second ? ellipsoid_ratio(inst, bnorm, p2) : std::numeric_limits<double>::infinity();
    const double limit = kSqrt2 * (1.0 + 1e-7);
    const bool ok1 = tr.rho1 <= limit;
    const bool ok2 = second && tr.rho2 <= limit;
    tr.selection_ok = ok1 || ok2;
    if (!second) {
      tr.j_bar = 1;
    } else if (ok1 && ok2) {
      tr.j_bar = b0.dot(p2) > b0.dot(p1) ? 2 : 1;
    } else if (ok1 || ok2) {
      tr.j_bar = ok1 ? 1 : 2;
    } else {
      tr.j_bar = tr.rho2 < tr.rho1 ? 2 : 1;
    }
    tr.x_bar = tr.j_bar == 1 ? p1 : p2;
    if (b0.dot(tr.x_bar) < 0.0) tr.x_bar = -tr.x_bar;
    tr.tau_bar = tau_bar(inst, tr.x_bar);
    out.x = tr.tau_bar * tr.x_bar;
  }

  out.certificate.lower = eval_f(inst, 0, out.x);
  out.worst_violation = check_feasibility(inst, out.x).worst_violation;
  out.certificate.ratio_holds =
      out.certificate.lower >= out.certificate.guaranteed_ratio * v - tol * (1.0 + std::abs(v));
  return out;
}

}  // namespace hcvx
