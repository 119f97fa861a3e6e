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

#include "hcvx/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "hcvx/error.hpp"

namespace hcvx {

namespace {

constexpr int kMaxGridDim = 4;
constexpr std::int64_t kLeafPoints = 64;

// Interval bounds of one uniform quadratic over an axis-aligned box.
struct RowData {
  Vector b;
  double d = 0.0;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  double tol = 0.0;
};

class UqGrid {
 public:
  // Grid points k h with klo <= k <= khi componentwise.
  UqGrid(const UqInstance& inst, const Eigen::VectorXi& klo, const Eigen::VectorXi& khi, double h)
      : n_(inst.n), Q_(inst.Q.dense()), center_(0.5 * h * (klo + khi).cast<double>()),
        klo_(klo), khi_(khi), h_(h) {
    const auto eig = sym_eig(inst.Q);
    lam_max_ = std::max(eig.values(0), 0.0);
    lam_min_ = std::min(eig.values(n_ - 1), 0.0);
    for (int i = 0; i <= inst.p(); ++i) {
      RowData r;
      r.b = inst.b[i];
      r.d = inst.d[i];
      if (i > 0) {
        r.lo = inst.bounds[i - 1].lower.as_double();
        r.hi = inst.bounds[i - 1].upper.as_double();
      }
      rows_.push_back(r);
    }
  }

  RowData& row(int i) { return rows_[i]; }
  int rows() const { return static_cast<int>(rows_.size()); }

  double value(int i, const Vector& x) const {
    return x.dot(Q_ * x) + 2.0 * rows_[i].b.dot(x) + rows_[i].d;
  }

  // Largest gradient norm of row i over the box center +- w.
  double gradient_bound(int i, const Vector& w) const {
    const double qnorm = std::max(lam_max_, -lam_min_);
    return (2.0 * (Q_ * center_ + rows_[i].b)).norm() + 2.0 * qnorm * w.norm();
  }

  // [min, max] of row i over the box cb +- w, widened by a rounding margin.
  std::pair<double, double> range(int i, const Vector& cb, const Vector& w) const {
    const double fc = value(i, cb);
    const Vector g = 2.0 * (Q_ * cb + rows_[i].b);
    const double lin = g.cwiseAbs().dot(w);
    const double ww = w.squaredNorm();
    const double lo = fc - lin + lam_min_ * ww;
    const double hi = fc + lin + lam_max_ * ww;
    const double margin = 1e-12 * (1.0 + std::abs(fc) + lin + (lam_max_ - lam_min_) * ww);
    return {lo - margin, hi + margin};
  }

  Vector point(const Eigen::VectorXi& k) const { return h_ * k.cast<double>(); }

  GridResult run() {
    GridResult out;
    out.value = -std::numeric_limits<double>::infinity();
    bool found = false;
    Eigen::VectorXi best_k;

    struct Cell { Eigen::VectorXi lo, hi; };
    std::vector<Cell> stack{{klo_, khi_}};
    while (!stack.empty()) {
      Cell cell = std::move(stack.back());
      stack.pop_back();
      const Vector cb = 0.5 * h_ * (cell.lo + cell.hi).cast<double>();
      const Vector w = 0.5 * h_ * (cell.hi - cell.lo).cast<double>();
      if (!cell_may_help(cb, w, found ? out.value : -std::numeric_limits<double>::infinity())) {
        continue;
      }
      std::int64_t count = 1;
      int widest = 0;
      for (int d = 0; d < n_; ++d) {
        count *= cell.hi(d) - cell.lo(d) + 1;
        if (cell.hi(d) - cell.lo(d) > cell.hi(widest) - cell.lo(widest)) widest = d;
      }
      if (count <= kLeafPoints) {
        sweep(cell.lo, cell.hi, out, found, best_k);
        continue;
      }
      const int mid = cell.lo(widest) + (cell.hi(widest) - cell.lo(widest)) / 2;
      Cell left = cell, right = cell;
      left.hi(widest) = mid;
      right.lo(widest) = mid + 1;
      // Visit the half with the larger objective bound first.
      const auto ub = [&](const Cell& c) {
        return range(0, 0.5 * h_ * (c.lo + c.hi).cast<double>(),
                     0.5 * h_ * (c.hi - c.lo).cast<double>()).second;
      };
      if (ub(left) >= ub(right)) {
        stack.push_back(std::move(right));
        stack.push_back(std::move(left));
      } else {
        stack.push_back(std::move(left));
        stack.push_back(std::move(right));
      }
    }
    if (!found) {
      throw Error(ErrorCode::kEmptyFeasibleGrid, "no grid point satisfies every row");
    }
    out.argmax = point(best_k);
    return out;
  }

  std::int64_t evaluated() const { return evaluated_; }

 private:
  bool cell_may_help(const Vector& cb, const Vector& w, double incumbent) const {
    if (range(0, cb, w).second < incumbent) return false;
    for (int i = 1; i < rows(); ++i) {
      const auto [lo, hi] = range(i, cb, w);
      if (lo > rows_[i].hi + rows_[i].tol || hi < rows_[i].lo - rows_[i].tol) return false;
    }
    return true;
  }

  bool accepted(const Vector& x) const {
    for (int i = 1; i < rows(); ++i) {
      const double f = value(i, x);
      if (f > rows_[i].hi + rows_[i].tol || f < rows_[i].lo - rows_[i].tol) return false;
    }
    return true;
  }

  static bool lex_less(const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
    for (Eigen::Index d = 0; d < a.size(); ++d) {
      if (a(d) != b(d)) return a(d) < b(d);
    }
    return false;
  }

  void sweep(const Eigen::VectorXi& lo, const Eigen::VectorXi& hi, GridResult& out, bool& found,
             Eigen::VectorXi& best_k) {
    Eigen::VectorXi k = lo;
    while (true) {
      const Vector x = point(k);
      ++evaluated_;
      if (accepted(x)) {
        const double v = value(0, x);
        if (!found || v > out.value || (v == out.value && lex_less(k, best_k))) {
          out.value = v;
          best_k = k;
          found = true;
        }
      }
      int d = n_ - 1;
      while (d >= 0 && k(d) == hi(d)) {
        k(d) = lo(d);
        --d;
      }
      if (d < 0) break;
      ++k(d);
    }
  }

  int n_;
  Matrix Q_;
  Vector center_;
  Eigen::VectorXi klo_, khi_;
  double h_;
  double lam_max_ = 0.0;
  double lam_min_ = 0.0;
  std::vector<RowData> rows_;
  std::int64_t evaluated_ = 0;
};

bool in_omega(const BallIntersection& balls, const Vector& x) {
  for (int i = 0; i < balls.p(); ++i) {
    if ((x - balls.centers[i]).norm() > balls.radii[i] + 1e-9 * (1.0 + balls.radii[i])) {
      return false;
    }
  }
  return true;
}

// Boundary points of Omega that do not depend on z: pairwise circle
// intersections (n = 2) or interval ends (n = 1).
std::vector<Vector> omega_vertices(const BallIntersection& balls) {
  std::vector<Vector> out;
  const int p = balls.p();
  if (balls.n == 1) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int i = 0; i < p; ++i) {
      lo = std::max(lo, balls.centers[i](0) - balls.radii[i]);
      hi = std::min(hi, balls.centers[i](0) + balls.radii[i]);
    }
    if (lo <= hi + 1e-9 * (1.0 + std::abs(hi))) {
      out.push_back(Vector::Constant(1, lo));
      out.push_back(Vector::Constant(1, std::max(lo, hi)));
    }
    return out;
  }
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      const Vector delta = balls.centers[j] - balls.centers[i];
      const double dist = delta.norm();
      const double ri = balls.radii[i], rj = balls.radii[j];
      if (dist == 0.0) continue;
      const double a = (ri * ri - rj * rj + dist * dist) / (2.0 * dist);
      double hsq = ri * ri - a * a;
      if (hsq < -1e-9 * (1.0 + ri * ri)) continue;
      hsq = std::max(hsq, 0.0);
      const Vector u = delta / dist;
      const Vector perp = Vector{{-u(1), u(0)}};
      const Vector base = balls.centers[i] + a * u;
      for (double s : {-1.0, 1.0}) {
        const Vector x = base + s * std::sqrt(hsq) * perp;
        if (in_omega(balls, x)) out.push_back(x);
      }
    }
  }
  return out;
}

double farthest_with(const BallIntersection& balls, const std::vector<Vector>& vertices,
                     const Vector& z) {
  double best = -1.0;
  for (const auto& v : vertices) best = std::max(best, (v - z).squaredNorm());
  if (balls.n == 2) {
    for (int i = 0; i < balls.p(); ++i) {
      const Vector off = balls.centers[i] - z;
      const double len = off.norm();
      const Vector dir = len > 1e-14 ? Vector(off / len) : Vector::Unit(2, 0);
      const Vector x = balls.centers[i] + balls.radii[i] * dir;
      if (in_omega(balls, x)) best = std::max(best, (x - z).squaredNorm());
    }
  }
  if (best < 0.0) throw Error(ErrorCode::kEmptyFeasibleGrid, "ball intersection is empty");
  return best;
}

void require_small(const BallIntersection& balls) {
  balls.validate();
  if (balls.n > 2) {
    throw Error(ErrorCode::kInvalidInput, "min-max oracle supports n <= 2");
  }
}

}  // namespace

Box infer_box(const UqInstance& inst) {
  inst.validate();
  const int n = inst.n;
  const auto eig = sym_eig(inst.Q);
  const double lmax = eig.values(0), lmin = eig.values(n - 1);
  const double scale = std::max(std::abs(lmax), std::abs(lmin));
  double sign = 0.0;
  if (lmin > 1e-12 * scale) sign = 1.0;
  if (lmax < -1e-12 * scale) sign = -1.0;
  if (sign == 0.0) {
    throw Error(ErrorCode::kUnboundedBox, "Q is not definite; supply a box");
  }
  // With P = sign Q PD, the usable side is s f_i <= s bound.
  const Matrix P = sign * inst.Q.dense();
  const Matrix P_inv = P.inverse();
  Box box{Vector::Constant(n, -std::numeric_limits<double>::infinity()),
          Vector::Constant(n, std::numeric_limits<double>::infinity())};
  bool any = false;
  for (int i = 1; i <= inst.p(); ++i) {
    const Bound& bd = inst.bounds[i - 1];
    const ExtReal& side = sign > 0 ? bd.upper : bd.lower;
    if (!side.is_finite()) continue;
    const Vector beta = sign * inst.b[i];
    const Vector center = -P_inv * beta;
    const double radius_sq = sign * side.value() - sign * inst.d[i] + beta.dot(P_inv * beta);
    if (radius_sq < 0.0) {
      throw Error(ErrorCode::kEmptyFeasibleGrid, "row " + std::to_string(i) + " is empty");
    }
    const Vector half = 1.1 * (radius_sq * P_inv.diagonal()).cwiseSqrt();
    box.lo = box.lo.cwiseMax(center - half);
    box.hi = box.hi.cwiseMin(center + half);
    any = true;
  }
  if (!any) throw Error(ErrorCode::kUnboundedBox, "no row bounds the feasible set");
  if ((box.lo.array() > box.hi.array()).any()) {
    throw Error(ErrorCode::kEmptyFeasibleGrid, "ellipsoid boxes do not intersect");
  }
  return box;
}

GridResult grid_max_uq(const UqInstance& inst, const GridOptions& opts) {
  inst.validate();
  const int n = inst.n;
  if (n > kMaxGridDim) {
    throw Error(ErrorCode::kInvalidInput, "grid oracle supports n <= " + std::to_string(kMaxGridDim));
  }
  if (!(opts.h > 0.0) || !std::isfinite(opts.h)) {
    throw Error(ErrorCode::kInvalidInput, "grid step must be positive");
  }
  const Box box = opts.box ? *opts.box : infer_box(inst);
  if (box.lo.size() != n || box.hi.size() != n || !box.lo.allFinite() || !box.hi.allFinite() ||
      (box.lo.array() > box.hi.array()).any()) {
    throw Error(ErrorCode::kInvalidInput, "box must be finite with lo <= hi");
  }
  const double h = opts.h;
  Eigen::VectorXi klo(n), khi(n);
  double total = 1.0;
  for (int d = 0; d < n; ++d) {
    const double a = std::ceil(box.lo(d) / h - 1e-9), b = std::floor(box.hi(d) / h + 1e-9);
    if (std::max(std::abs(a), std::abs(b)) > 1e8) {
      throw Error(ErrorCode::kInvalidInput, "grid too fine for the box");
    }
    if (a > b) throw Error(ErrorCode::kEmptyFeasibleGrid, "box holds no grid point");
    klo(d) = static_cast<int>(a);
    khi(d) = static_cast<int>(b);
    total *= b - a + 1.0;
  }

  UqGrid grid(inst, klo, khi, h);
  const Vector reach = 0.5 * h * (khi - klo).cast<double>();
  const double step_to_grid = h * std::sqrt(static_cast<double>(n)) / 2.0;
  double max_tol = 0.0;
  for (int i = 1; i < grid.rows(); ++i) {
    grid.row(i).tol = opts.feas_tol ? *opts.feas_tol : grid.gradient_bound(i, reach) * step_to_grid;
    max_tol = std::max(max_tol, grid.row(i).tol);
  }

  GridResult out = grid.run();
  out.h = h;
  out.box = Box{h * klo.cast<double>(), h * khi.cast<double>()};
  out.lipschitz = grid.gradient_bound(0, reach);
  out.error_bound = out.lipschitz * step_to_grid;
  out.max_feas_tol = max_tol;
  out.total_points = total;
  out.evaluated = grid.evaluated();
  return out;
}

double farthest_sq_distance(const BallIntersection& balls, const Vector& z) {
  require_small(balls);
  if (z.size() != balls.n) throw Error(ErrorCode::kInvalidInput, "z has wrong length");
  return farthest_with(balls, omega_vertices(balls), z);
}

MinMaxResult grid_minmax_cc(const BallIntersection& balls, double h) {
  require_small(balls);
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::kInvalidInput, "grid step must be positive");
  }
  const int n = balls.n;
  const std::vector<Vector> vertices = omega_vertices(balls);
  // The Chebyshev center lies in Omega, so Omega's bounding box suffices.
  Vector lo = Vector::Constant(n, -std::numeric_limits<double>::infinity());
  Vector hi = Vector::Constant(n, std::numeric_limits<double>::infinity());
  for (int i = 0; i < balls.p(); ++i) {
    lo = lo.cwiseMax((balls.centers[i].array() - balls.radii[i]).matrix());
    hi = hi.cwiseMin((balls.centers[i].array() + balls.radii[i]).matrix());
  }
  if ((lo.array() > hi.array() + 1e-12).any()) {
    throw Error(ErrorCode::kEmptyFeasibleGrid, "ball intersection is empty");
  }
  hi = hi.cwiseMax(lo);
  const Vector center = 0.5 * (lo + hi);
  Eigen::VectorXi half(n);
  for (int d = 0; d < n; ++d) {
    const double steps = std::ceil(0.5 * (hi(d) - lo(d)) / h - 1e-9);
    if (steps > 1e5) throw Error(ErrorCode::kInvalidInput, "grid too fine for the box");
    half(d) = static_cast<int>(steps);
  }

  MinMaxResult out;
  out.value = std::numeric_limits<double>::infinity();
  Eigen::VectorXi k = -half;
  while (true) {
    const Vector z = center + h * k.cast<double>();
    const double v = farthest_with(balls, vertices, z);
    if (v < out.value) {
      out.value = v;
      out.z = z;
    }
    int d = n - 1;
    while (d >= 0 && k(d) == half(d)) {
      k(d) = -half(d);
      --d;
    }
    if (d < 0) break;
    ++k(d);
  }
  out.h = h;
  // phi(z) = max ||x - z||^2 moves by at most (2 D + e) e over a step e.
  const double e = h * std::sqrt(static_cast<double>(n)) / 2.0;
  const double diam = (hi - lo).norm() + 2.0 * e;
  out.error_bound = (2.0 * diam + e) * e;
  return out;
}

SampleResult sample_max_uq(const UqInstance& inst, const Vector& start, int count,
                           std::uint64_t seed, double scale) {
  inst.validate();
  if (start.size() != inst.n) throw Error(ErrorCode::kInvalidInput, "start has wrong length");
  SampleResult out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double spreads[] = {scale, 0.1 * scale, 0.01 * scale};
  Vector x(inst.n);
  for (int s = 0; s < count; ++s) {
    for (int d = 0; d < inst.n; ++d) x(d) = start(d) + spreads[s % 3] * normal(rng);
    if (!is_feasible(inst, x, 0.0)) continue;
    ++out.accepted;
    const double v = eval_f(inst, 0, x);
    if (v > out.value) {
      out.value = v;
      out.argmax = x;
    }
  }
  if (out.accepted > 0) out.status = SampleStatus::kOk;
  return out;
}

IlpEnumeration enumerate_ilp(const IlpInstance& ilp) {
  ilp.validate();
  const int n = ilp.n();
  if (n > 20) throw Error(ErrorCode::kInvalidInput, "enumeration supports n <= 20");
  IlpEnumeration out;
  Vector x(n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    for (int j = 0; j < n; ++j) x(j) = (mask >> j) & 1u;
    const Vector lhs = ilp.A * x;
    bool ok = true;
    for (Eigen::Index i = 0; i < lhs.size(); ++i) {
      if (lhs(i) > ilp.rhs(i) + 1e-9 * (1.0 + std::abs(ilp.rhs(i)))) ok = false;
    }
    if (!ok) continue;
    ++out.feasible_count;
    const double v = ilp.c.dot(x);
    if (!out.feasible || v > out.value) {
      out.value = v;
      out.x = x;
      out.feasible = true;
    }
  }
  return out;
}

}  // namespace hcvx
