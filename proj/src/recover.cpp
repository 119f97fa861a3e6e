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
#include <utility>

#include "hcvx/error.hpp"
#include "hcvx/recover.hpp"

namespace hcvx {

namespace {

// Roots of a e^2 + 2 b e + c = 0 with a > 0 and c <= 0, as (nonpositive,
// nonnegative).
std::pair<double, double> straddling_roots(double a, double b, double c) {
  const double disc = std::sqrt(std::max(b * b - a * c, 0.0));
  const double q = -(b + std::copysign(disc, b));
  if (q == 0.0) return {0.0, 0.0};
  const double r1 = q / a;
  const double r2 = c / q;
  return {std::min(r1, r2), std::max(r1, r2)};
}

void require_optimal(const SolverResult& res) {
  if (res.status != SolveStatus::kOptimal) {
    throw Error(ErrorCode::kPreconditionViolated,
                std::string("recovery needs an optimal relaxation, solver reported ") +
                    std::string(solve_status_name(res.status)));
  }
}

double bound_scale(const Bound& bd) {
  double s = 1.0;
  if (bd.lower.is_finite()) s += std::abs(bd.lower.value());
  if (bd.upper.is_finite()) s += std::abs(bd.upper.value());
  return s;
}

std::string describe(const TightenTrace& trace) {
  return std::to_string(trace.steps.size()) + " steps, gap " + std::to_string(trace.initial_gap) +
         " -> " + std::to_string(trace.final_gap);
}

}  // namespace

Recovery tighten_uq(const UqInstance& inst, const Relaxation& relax, const SolverResult& res,
                    const TightenOptions& opts) {
  inst.validate();
  require_optimal(res);
  if (!is_pd(inst.Q)) throw Error(ErrorCode::kNotPositiveDefinite, "tightening needs Q positive definite");
  const CertificateReport cert = check_as3(inst, opts.tol_rank);
  if (!cert.holds) throw Error(ErrorCode::kConditionNotMet, cert.reason);
  if (relax.meta.t_var.size() != 1) {
    throw Error(ErrorCode::kInvalidInput, "relaxation does not come from build_socp_uq");
  }

  const int n = inst.n;
  const int p = inst.p();
  const Matrix Q = inst.Q.dense();
  Vector x = relax.meta.back_map(res.z);
  double t = res.z(relax.meta.t_var[0]);
  Recovery out;
  TightenTrace& trace = out.trace;
  auto gap_of = [&] { return t - x.dot(Q * x); };
  trace.initial_gap = gap_of();

  bool closed = gap_of() <= opts.gap_tol * (1.0 + std::abs(t));
  for (int pass = 0; pass <= n + p && !closed; ++pass) {
    Vector rows(p);
    for (int i = 1; i <= p; ++i) rows(i - 1) = t + 2.0 * inst.b[i].dot(x) + inst.d[i];

    // Active rows, and a maximal linearly independent subset of their b's.
    std::vector<int> indep;
    std::vector<double> delta;
    std::vector<Vector> basis;
    for (int i = 1; i <= p; ++i) {
      const Bound& bd = inst.bounds[i - 1];
      const double lim = opts.active_tol * bound_scale(bd);
      double level;
      if (bd.upper.is_finite() && bd.upper.value() - rows(i - 1) <= lim) {
        level = bd.upper.value();
      } else if (bd.lower.is_finite() && rows(i - 1) - bd.lower.value() <= lim) {
        level = bd.lower.value();
      } else {
        continue;
      }
      basis.push_back(inst.b[i]);
      if (numerical_rank(basis, opts.tol_rank) == static_cast<int>(basis.size())) {
        indep.push_back(i);
        delta.push_back(level);
      } else {
        basis.pop_back();
      }
    }
    trace.active_history.push_back(indep);

    if (static_cast<int>(indep.size()) == n) {
      if (p != n) {
        throw Error(ErrorCode::kTightenFailed, "active rows span R^n with p != n; " + describe(trace));
      }
      // Every row is active: x(tau) = B^{-1}(delta - d - tau e) and the gap
      // closes at a root of g(tau) = x(tau)'Q x(tau) - tau.
      Matrix B(n, n);
      Vector rhs(n);
      for (int k = 0; k < n; ++k) {
        B.row(k) = 2.0 * inst.b[indep[k]].transpose();
        rhs(k) = delta[k] - inst.d[indep[k]];
      }
      const auto lu = B.fullPivLu();
      const Vector v = lu.solve(rhs);
      const Vector w = lu.solve(Vector::Ones(n));
      const double a2 = w.dot(Q * w);
      const double b2 = -(2.0 * w.dot(Q * v) + 1.0) / 2.0;
      const double c2 = v.dot(Q * v);
      const double disc = b2 * b2 - a2 * c2;
      if (!(a2 > 0.0) || disc < 0.0) {
        throw Error(ErrorCode::kTightenFailed, "no real root for the line through the active rows; " +
                                                   describe(trace));
      }
      const double sq = std::sqrt(disc);
      const double q = -(b2 + std::copysign(sq, b2));
      const double tau1 = q / a2;
      const double tau2 = q != 0.0 ? c2 / q : tau1;
      auto value = [&](double tau) { return tau + 2.0 * inst.b[0].dot(v - tau * w) + inst.d[0]; };
      const double f1 = value(tau1), f2 = value(tau2);
      double tau;
      if (std::abs(f1 - f2) <= 1e-12 * (1.0 + std::abs(f1))) {
        tau = std::abs(tau1 - t) <= std::abs(tau2 - t) ? tau1 : tau2;
      } else {
        tau = f1 > f2 ? tau1 : tau2;
      }
      x = v - tau * w;
      t = tau;
      trace.steps.push_back({"line-root", -w, tau, -1, gap_of()});
      closed = true;
      break;
    }

    // Direction orthogonal to the active b's, and to b_0 when possible.
    Matrix cols(n, static_cast<Eigen::Index>(indep.size()) + 1);
    for (std::size_t k = 0; k < indep.size(); ++k) cols.col(k) = inst.b[indep[k]];
    cols.col(indep.size()) = inst.b[0];
    SubspaceBasis comp = orthogonal_complement(n, cols, opts.tol_rank);
    if (comp.dim() == 0) comp = orthogonal_complement(n, cols.leftCols(indep.size()), opts.tol_rank);
    if (comp.dim() == 0) {
      throw Error(ErrorCode::kTightenFailed, "no direction orthogonal to active rows; " + describe(trace));
    }
    const Vector dir = comp.columns.col(0);

    // Interval of steps keeping every row within its bounds.
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    int lo_row = -1, hi_row = -1;
    for (int i = 1; i <= p; ++i) {
      const double s = 2.0 * inst.b[i].dot(dir);
      if (std::abs(s) <= 1e-12 * (1.0 + 2.0 * inst.b[i].norm())) continue;
      const Bound& bd = inst.bounds[i - 1];
      const double r = rows(i - 1);
      if (bd.upper.is_finite()) {
        const double lim = std::max(bd.upper.value() - r, 0.0) / s;
        if (s > 0.0 && lim < hi) { hi = lim; hi_row = i; }
        if (s < 0.0 && lim > lo) { lo = lim; lo_row = i; }
      }
      if (bd.lower.is_finite()) {
        const double lim = -std::max(r - bd.lower.value(), 0.0) / s;
        if (s > 0.0 && lim > lo) { lo = lim; lo_row = i; }
        if (s < 0.0 && lim < hi) { hi = lim; hi_row = i; }
      }
    }
    const double qa = dir.dot(Q * dir);
    const double qb = dir.dot(Q * x);
    const double qc = x.dot(Q * x) - t;
    const auto [neg, pos] = straddling_roots(qa, qb, qc);
    const bool pos_ok = pos <= hi;
    const bool neg_ok = neg >= lo;
    if (pos_ok || neg_ok) {
      // The shorter step when both roots fit; a near-tight point then moves
      // only as far as the solver tolerance demands.
      const double e = pos_ok && (!neg_ok || pos <= -neg) ? pos : neg;
      x += e * dir;
      trace.steps.push_back({"root", dir, e, -1, gap_of()});
      closed = true;
    } else {
      // Both ends of the interval are finite; the convex gap function is
      // largest (the cone gap smallest) at one of them.
      auto q = [&](double e) { return qa * e * e + 2.0 * qb * e + qc; };
      const bool go_hi = q(hi) >= q(lo);
      const double e = go_hi ? hi : lo;
      x += e * dir;
      trace.steps.push_back({"endpoint", dir, e, go_hi ? hi_row : lo_row, gap_of()});
    }
  }
  trace.final_gap = gap_of();
  if (!closed || std::abs(trace.final_gap) > 1e-6 * (1.0 + std::abs(t))) {
    throw Error(ErrorCode::kTightenFailed, "cone gap did not close; " + describe(trace));
  }
  out.x = x;
  out.objective = eval_f(inst, 0, x);
  out.worst_violation = check_feasibility(inst, x).worst_violation;
  return out;
}

Recovery tighten_qcqp(const QcqpInstance& inst, const Relaxation& relax, const SolverResult& res,
                      const TightenOptions& opts) {
  inst.validate();
  require_optimal(res);
  if (!relax.certificate.holds) {
    throw Error(ErrorCode::kConditionNotMet, relax.certificate.reason);
  }
  const int n = inst.n;
  const double obj_sign = inst.sense == Sense::kMax ? -1.0 : 1.0;
  const Vector b0 = obj_sign * inst.b[0];
  const std::vector<Vector> bs(inst.b.begin() + 1, inst.b.end());
  std::vector<SubspaceBasis> ranges, nulls;
  for (const auto& Qj : inst.blocks) {
    ranges.push_back(range_basis(Qj, opts.tol_rank));
    nulls.push_back(null_basis(Qj, opts.tol_rank));
  }

  Vector x = relax.meta.back_map(res.z);
  Recovery out;
  TightenTrace& trace = out.trace;
  auto gap_total = [&] {
    double g = 0.0;
    for (int j : relax.meta.lifted) {
      const int tv = relax.meta.t_of_block(j);
      const Matrix Qj = inst.blocks[j - 1].dense();
      g += std::max(res.z(tv) - x.dot(Qj * x), 0.0);
    }
    return g;
  };
  trace.initial_gap = gap_total();

  for (int j : relax.meta.lifted) {
    const int tv = relax.meta.t_of_block(j);
    if (tv < 0) continue;
    const Matrix Qj = inst.blocks[j - 1].dense();
    const double tj = res.z(tv);
    const double gap = tj - x.dot(Qj * x);
    if (gap <= opts.gap_tol * (1.0 + std::abs(tj))) continue;

    std::vector<SubspaceBasis> bases{nulls[j - 1]};
    for (int i = 1; i <= inst.m(); ++i) {
      if (i != j) bases.push_back(ranges[i - 1]);
    }
    const SubspaceBasis comp =
        orthogonal_complement(n, stack_columns(n, bases, bs), opts.tol_rank);
    if (comp.dim() == 0) {
      throw Error(ErrorCode::kConditionNotMet,
                  "block " + std::to_string(j) + ": no direction left in span{b}^perp, R(Q_j) and "
                  "the other null spaces (union dimension " +
                      std::to_string(union_dim(bases, bs, opts.tol_rank)) + ")");
    }
    const Vector dir = comp.columns.col(0);
    const double qa = dir.dot(Qj * dir);
    if (!(qa > 0.0)) {
      throw Error(ErrorCode::kConditionNotMet,
                  "block " + std::to_string(j) + ": recovery direction lies in N(Q_j)");
    }
    const auto [neg, pos] = straddling_roots(qa, dir.dot(Qj * x), -gap);
    // Prefer the root that does not raise the (min-sense) objective.
    const double slope = b0.dot(dir);
    double alpha;
    if (std::abs(slope) <= 1e-12 * (1.0 + b0.norm())) {
      alpha = std::abs(neg) <= std::abs(pos) ? neg : pos;
    } else {
      alpha = slope > 0.0 ? neg : pos;
    }
    x += alpha * dir;
    trace.steps.push_back({"block-root", dir, alpha, j, tj - x.dot(Qj * x)});
  }
  trace.final_gap = gap_total();
  if (trace.final_gap > 1e-6 * (1.0 + trace.initial_gap)) {
    throw Error(ErrorCode::kTightenFailed, "lifted gaps did not close; " + describe(trace));
  }
  out.x = x;
  out.objective = eval_g(inst, 0, x);
  out.worst_violation = check_feasibility(inst, x).worst_violation;
  return out;
}

Recovery recover_wd(const DispersionProblem& wd, const Relaxation& relax, const SolverResult& res,
                    const TightenOptions& opts) {
  wd.validate();
  require_optimal(res);
  if (!relax.certificate.holds) throw Error(ErrorCode::kConditionNotMet, relax.certificate.reason);
  const int n = static_cast<int>(wd.x0.size());
  Vector y = res.z.head(n);
  Recovery out;
  out.trace.initial_gap = wd.r0 * wd.r0 - y.squaredNorm();
  if (out.trace.initial_gap > opts.gap_tol * (1.0 + wd.r0 * wd.r0)) {
    Matrix offsets(n, static_cast<Eigen::Index>(wd.points.size()));
    for (std::size_t i = 0; i < wd.points.size(); ++i) offsets.col(i) = wd.points[i] - wd.x0;
    const SubspaceBasis comp = orthogonal_complement(n, offsets, opts.tol_rank);
    if (comp.dim() == 0) throw Error(ErrorCode::kConditionNotMet, "points span R^n around the center");
    const Vector dir = comp.columns.col(0);
    const double yd = y.dot(dir);
    const double alpha = -yd + std::sqrt(yd * yd + std::max(out.trace.initial_gap, 0.0));
    y += alpha * dir;
    out.trace.steps.push_back({"root", dir, alpha, -1, wd.r0 * wd.r0 - y.squaredNorm()});
  }
  out.trace.final_gap = wd.r0 * wd.r0 - y.squaredNorm();
  out.x = y + wd.x0;
  out.objective = dispersion_value(wd, out.x);
  out.worst_violation = std::max(0.0, (out.x - wd.x0).norm() - wd.r0);
  return out;
}

}  // namespace hcvx
