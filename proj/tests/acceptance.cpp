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


// Acceptance harness: runs every acceptance criterion at its stated
// tolerance and prints one [PASS] or [FAIL] line per criterion. Exit status
// is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hcvx/chebyshev.hpp"
#include "hcvx/cone.hpp"
#include "hcvx/duality.hpp"
#include "hcvx/error.hpp"
#include "hcvx/model.hpp"
#include "hcvx/oracle.hpp"
#include "hcvx/recover.hpp"
#include "hcvx/reformulate.hpp"
#include "support/brute_force.hpp"

namespace hcvx {
namespace {

using testing::grid_max;
using testing::random_pd;
using testing::random_vec;
using testing::trs_min;
using testing::uniform;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Vector vec(std::initializer_list<double> v) {
  return Eigen::Map<const Vector>(v.begin(), static_cast<Eigen::Index>(v.size()));
}

SymMatrix sym(const Matrix& m) { return SymMatrix::symmetrized(m); }

// Collects failures of one criterion; the first few are kept verbatim.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ << (failures_ > 1 ? "; " : "") << what;
  }
  bool ok() const { return failures_ == 0; }
  int checks() const { return checks_; }
  int failures() const { return failures_; }
  std::string notes() const { return notes_.str(); }

 private:
  int checks_ = 0;
  int failures_ = 0;
  std::ostringstream notes_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Relaxation value (source sense) of a UQ instance, with the solve kept for
// the duality check.
struct UqSolve {
  Relaxation relax;
  SolverResult res;
  double value = std::numeric_limits<double>::quiet_NaN();
};

UqSolve solve_uq(const UqInstance& u) {
  UqSolve s{build_socp_uq(u), {}, 0.0};
  s.res = solve(s.relax.program);
  if (s.res.status == SolveStatus::kOptimal) {
    s.value = s.relax.meta.source_objective(s.res.objective);
  }
  return s;
}

// Strong-duality record over every optimal UQ solve made by the harness.
struct DualityLog {
  int solves = 0;
  int failures = 0;
  double worst = 0.0;  // max |d - v| / (1 + |v|)
  std::string first;

  void record(const UqInstance& u, const UqSolve& s, const std::string& tag) {
    if (s.res.status != SolveStatus::kOptimal) return;
    ++solves;
    const DualityReport d = certify_strong_duality(u, s.relax, s.res);
    const double v = s.value;
    const double rel = d.dual.is_finite() ? std::abs(d.dual.value() - v) / (1.0 + std::abs(v))
                                          : std::numeric_limits<double>::infinity();
    worst = std::max(worst, rel);
    if (!(rel <= 1e-5) || std::abs(d.objective - v) > 1e-12 * (1.0 + std::abs(v))) {
      if (failures++ == 0) first = tag + ": |d - v| / (1 + |v|) = " + fmt("%.3g", rel);
    }
  }
};

DualityLog g_duality;

// ------------------------------------------------------------------ 1

UqInstance one_dimensional_gap_instance() {
  // max x^2 s.t. 1 <= x^2 + 2x <= 3, -1 <= x^2 - 2x <= 3. Only x = 1 is
  // feasible; the relaxation reaches 3.
  UqInstance u;
  u.n = 1;
  u.Q = SymMatrix::identity(1);
  u.b = {vec({0.0}), vec({1.0}), vec({-1.0})};
  u.d = {0.0, 0.0, 0.0};
  u.bounds = {Bound::between(1.0, 3.0), Bound::between(-1.0, 3.0)};
  return u;
}

std::string criterion_gap_instance(Check& c) {
  const auto t0 = Clock::now();
  const UqInstance u = one_dimensional_gap_instance();
  GridOptions go;
  go.h = 1e-4;
  const GridResult grid = grid_max_uq(u, go);
  c.expect(std::abs(grid.value - 1.0) <= 2e-4, "oracle value " + fmt("%.9g", grid.value));
  // Independent check: scan the two-row system directly.
  double scan = -std::numeric_limits<double>::infinity();
  for (int k = -40000; k <= 40000; ++k) {
    const double x = k * 1e-4;
    const double f1 = x * x + 2 * x, f2 = x * x - 2 * x;
    if (f1 >= 1.0 - 1e-12 && f1 <= 3.0 && f2 >= -1.0 - 1e-12 && f2 <= 3.0) {
      scan = std::max(scan, x * x);
    }
  }
  c.expect(std::abs(scan - 1.0) <= 2e-4, "direct scan " + fmt("%.9g", scan));
  const UqSolve s = solve_uq(u);
  c.expect(s.res.status == SolveStatus::kOptimal, "relaxation not optimal");
  c.expect(std::abs(s.value - 3.0) <= 1e-6, "relaxation value " + fmt("%.12g", s.value));
  g_duality.record(u, s, "gap instance");
  c.expect(!check_as3(u).holds, "rank condition reported as holding");
  const double t = seconds_since(t0);
  c.expect(t < 1.0, "runtime " + fmt("%.2f s", t));
  return "oracle " + fmt("%.6g", grid.value) + ", relaxation " + fmt("%.9g", s.value) +
         ", rank condition fails, " + fmt("%.3f s", t);
}

// ------------------------------------------------------------------ 2

// PD instance around a known feasible point; row 1 has a finite upper bound
// so the feasible set is bounded; the b_i span at most rank_b dimensions.
UqInstance random_few_rows(std::mt19937& rng, int n, int p, int rank_b) {
  UqInstance u;
  u.n = n;
  u.Q = sym(random_pd(rng, n));
  std::vector<Vector> gens;
  for (int k = 0; k < rank_b; ++k) gens.push_back(random_vec(rng, n));
  u.b.push_back(random_vec(rng, n));
  u.d.push_back(0.0);
  const Vector xhat = random_vec(rng, n, 0.5);
  const Matrix Q = u.Q.dense();
  for (int i = 0; i < p; ++i) {
    Vector bi = Vector::Zero(n);
    for (const auto& g : gens) bi += uniform(rng, -1.0, 1.0) * g;
    u.b.push_back(bi);
    u.d.push_back(uniform(rng, -1.0, 1.0));
  }
  for (int i = 1; i <= p; ++i) {
    const double f = xhat.dot(Q * xhat) + 2.0 * u.b[i].dot(xhat) + u.d[i];
    const double up = f + uniform(rng, 0.3, 2.0);
    const double lo = f - uniform(rng, 0.3, 2.0);
    const int kind = i == 1 ? 0 : static_cast<int>(uniform(rng, 0.0, 3.0));
    u.bounds.push_back(kind == 0 ? Bound::at_most(up)
                                 : kind == 1 ? Bound::between(lo, up) : Bound::at_least(lo));
  }
  return u;
}

std::string criterion_exactness(Check& c) {
  const auto t0 = Clock::now();
  double worst_oracle = 0.0, worst_obj = 0.0, worst_gap = 0.0;
  for (int k = 0; k < 200; ++k) {
    std::mt19937 rng(10000 + k);
    const int n = 2 + k % 2;
    const int p = 1 + static_cast<int>(rng() % (n - 1));
    const int rank_b = 1 + static_cast<int>(rng() % (n - 1));
    const UqInstance u = random_few_rows(rng, n, p, rank_b);
    const std::string tag = "instance " + std::to_string(k);
    c.expect(check_as3(u).holds, tag + ": rank condition fails");
    const UqSolve s = solve_uq(u);
    if (s.res.status != SolveStatus::kOptimal) {
      c.expect(false, tag + ": relaxation " + std::string(solve_status_name(s.res.status)));
      continue;
    }
    g_duality.record(u, s, tag);
    const Recovery rec = tighten_uq(u, s.relax, s.res);
    const double f0 = eval_f(u, 0, rec.x);
    const FeasibilityReport feas = check_feasibility(u, rec.x, 1e-6);
    c.expect(feas.feasible, tag + ": recovered point violates row " +
                                std::to_string(feas.worst_index) + " by " +
                                fmt("%.3g", feas.worst_violation));
    worst_obj = std::max(worst_obj, std::abs(f0 - s.value));
    c.expect(std::abs(f0 - s.value) <= 1e-5, tag + ": |f0(x) - v| = " + fmt("%.3g", f0 - s.value));
    worst_gap = std::max(worst_gap, rec.trace.final_gap);
    c.expect(rec.trace.final_gap <= 1e-6, tag + ": cone gap " + fmt("%.3g", rec.trace.final_gap));
    // Strict-feasibility grid: a lower bound on the true maximum.
    GridOptions go;
    go.h = n == 2 ? 2e-4 : 1e-3;
    go.feas_tol = 0.0;
    const GridResult grid = grid_max_uq(u, go);
    worst_oracle = std::max(worst_oracle, std::abs(s.value - grid.value));
    c.expect(std::abs(s.value - grid.value) <= 2e-3,
             tag + ": |v - oracle| = " + fmt("%.3g", s.value - grid.value));
  }
  const double t = seconds_since(t0);
  c.expect(t < 120.0, "runtime " + fmt("%.1f s", t));
  return "200 instances, max |v - oracle| " + fmt("%.2g", worst_oracle) + ", max |f0 - v| " +
         fmt("%.2g", worst_obj) + ", max cone gap " + fmt("%.2g", worst_gap) + ", " +
         fmt("%.1f s", t);
}

// ------------------------------------------------------------------ 3

// Convex rows f_i(x) <= u_i around an interior origin (d_i < u_i).
UqInstance random_convex_rows(std::mt19937& rng, int n, int p) {
  UqInstance u;
  u.n = n;
  u.Q = sym(random_pd(rng, n, 0.2));
  u.b.push_back(random_vec(rng, n));
  u.d.push_back(0.0);
  for (int i = 0; i < p; ++i) {
    u.b.push_back(random_vec(rng, n));
    u.d.push_back(uniform(rng, -1.0, 1.0));
    u.bounds.push_back(Bound::at_most(u.d.back() + uniform(rng, 0.05, 3.0)));
  }
  return u;
}

// Rows (x - a_i)'Q(x - a_i) <= rho_i^2 around the origin and the objective
// (x - abar)'Q(x - abar) + const with abar a convex combination of the a_i:
// a farthest-point problem, where the relaxation is typically loose.
UqInstance random_farthest_point(std::mt19937& rng, int n, int p) {
  UqInstance u;
  u.n = n;
  const Matrix Q = random_pd(rng, n, 0.3);
  u.Q = sym(Q);
  u.b.push_back(Vector::Zero(n));
  u.d.push_back(0.0);
  const double spread = uniform(rng, 0.3, 1.0);
  double wsum = 0.0;
  for (int i = 0; i < p; ++i) {
    const Vector a = random_vec(rng, n).normalized() * spread;
    const double qa = a.dot(Q * a);
    const double w = uniform(rng, 0.0, 1.0);
    u.b[0] -= w * (Q * a);
    wsum += w;
    u.b.push_back(-(Q * a));
    u.d.push_back(qa);
    // The origin sits at Q-distance^2 qa from a_i; the radius keeps it inside.
    u.bounds.push_back(Bound::at_most(qa * uniform(rng, 1.05, 1.5)));
  }
  u.b[0] /= wsum;
  return u;
}

std::string criterion_ratio(Check& c) {
  const auto t0 = Clock::now();
  double worst_margin = std::numeric_limits<double>::infinity();
  double max_gamma = 0.0;
  int rounded = 0;
  for (int k = 0; k < 200; ++k) {
    std::mt19937 rng(20000 + k);
    const int n = 2 + k % 9;
    const int p = n + 2 + (k / 9) % 5;
    const UqInstance u =
        k % 2 == 0 ? random_convex_rows(rng, n, p) : random_farthest_point(rng, n, p);
    const std::string tag = "instance " + std::to_string(k);
    const Approximation a = approx_uq(u);
    const double v = a.certificate.upper;
    const double scale = 1.0 + std::abs(v);
    const double gamma = a.trace.gamma;
    max_gamma = std::max(max_gamma, gamma);
    c.expect(gamma >= 0.0 && gamma < 1.0, tag + ": gamma " + fmt("%.6g", gamma));
    const double ratio = std::pow((1.0 - gamma) / (std::sqrt(2.0) + gamma), 2);
    const double f0 = eval_f(u, 0, a.x);
    const FeasibilityReport feas = check_feasibility(u, a.x, 1e-6);
    c.expect(feas.feasible, tag + ": violation " + fmt("%.3g", feas.worst_violation));
    c.expect(f0 >= ratio * v - 1e-5 * scale,
             tag + ": f0 " + fmt("%.9g", f0) + " below ratio * v " + fmt("%.9g", ratio * v));
    worst_margin = std::min(worst_margin, (f0 - ratio * v) / scale);
    c.expect(a.trace.selection_ok, tag + ": piece selection failed");
    c.expect(a.trace.identity_ok, tag + ": split identity failed");
    if (!a.trace.shortcut) ++rounded;
    // Same relaxation solved independently feeds the duality record.
    const UqSolve s = solve_uq(u);
    c.expect(s.res.status == SolveStatus::kOptimal && std::abs(s.value - v) <= 1e-6 * scale,
             tag + ": relaxation value differs between solves");
    g_duality.record(u, s, tag);
  }
  const double t = seconds_since(t0);
  c.expect(rounded >= 40, "only " + std::to_string(rounded) + " instances needed rounding");
  c.expect(t < 120.0, "runtime " + fmt("%.1f s", t));
  return "200 instances (" + std::to_string(rounded) + " rounded), max gamma " +
         fmt("%.3g", max_gamma) + ", min (f0 - ratio v) / scale " + fmt("%.3g", worst_margin) +
         ", " + fmt("%.1f s", t);
}

// ------------------------------------------------------------------ 4

std::string criterion_duality(Check& c) {
  // Extra rank-deficient and singular-direction instances beyond the ones
  // solved by the other suites.
  for (int k = 0; k < 50; ++k) {
    std::mt19937 rng(30000 + k);
    const int n = 2 + k % 4;
    const UqInstance u = random_few_rows(rng, n, 1 + k % (n + 2), 1 + k % n);
    const UqSolve s = solve_uq(u);
    g_duality.record(u, s, "extra " + std::to_string(k));
  }
  c.expect(g_duality.solves >= 400, "only " + std::to_string(g_duality.solves) + " solves");
  c.expect(g_duality.failures == 0,
           std::to_string(g_duality.failures) + " failures, first " + g_duality.first);
  return std::to_string(g_duality.solves) + " optimal solves, max |d - v| / (1 + |v|) " +
         fmt("%.2g", g_duality.worst);
}

// ------------------------------------------------------------------ 5

BallIntersection random_balls(std::mt19937& rng, int n, int p) {
  BallIntersection b{n, {}, {}};
  for (int i = 0; i < p; ++i) {
    b.centers.push_back(random_vec(rng, n, 0.4));
    b.radii.push_back(uniform(rng, 1.0, 1.5));
  }
  return b;
}

// Golden-section minimum of a convex function on [a, b].
double golden_min(const std::function<double(double)>& f, double a, double b) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 90; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    }
  }
  return std::min(f1, f2);
}

// min_x max_i ||x - a_i|| / r_i for n = 2 by nested golden sections; the
// function is convex and its minimizer lies in the hull of the centers.
double gamma_by_search(const BallIntersection& b) {
  Vector lo = b.centers[0], hi = b.centers[0];
  for (const auto& a : b.centers) {
    lo = lo.cwiseMin(a);
    hi = hi.cwiseMax(a);
  }
  auto g = [&](double x, double y) {
    double v = 0.0;
    for (int i = 0; i < b.p(); ++i) {
      v = std::max(v, std::hypot(x - b.centers[i](0), y - b.centers[i](1)) / b.radii[i]);
    }
    return v;
  };
  return golden_min(
      [&](double x) { return golden_min([&](double y) { return g(x, y); }, lo(1), hi(1)); },
      lo(0), hi(0));
}

std::string criterion_chebyshev(Check& c) {
  const auto t0 = Clock::now();
  double worst_a = 0.0, worst_chain = -std::numeric_limits<double>::infinity();
  double worst_c = 0.0;
  // (a) p <= n: the weight problem is exact.
  for (int k = 0; k < 20; ++k) {
    std::mt19937 rng(40000 + k);
    const BallIntersection b = random_balls(rng, 2, 2);
    const ChebyshevResult r = chebyshev_certified(b);
    const MinMaxResult grid = grid_minmax_cc(b, 1e-3);
    worst_a = std::max(worst_a, std::abs(r.v_dcc - grid.value));
    c.expect(std::abs(r.v_dcc - grid.value) <= 5e-3,
             "(a) " + std::to_string(k) + ": |v_dcc - grid| = " + fmt("%.3g", r.v_dcc - grid.value));
  }
  // (b) p > n: the full chain, recomputed here with the exact inner maximum.
  for (int k = 0; k < 30; ++k) {
    std::mt19937 rng(41000 + k);
    const BallIntersection b = random_balls(rng, 2, 4 + k % 3);
    const ChebyshevResult r = chebyshev_certified(b, {}, 1e-4);
    const std::string tag = "(b) " + std::to_string(k);
    const double tol = 1e-4 * (1.0 + r.v_dcc);
    const double attained = farthest_sq_distance(b, r.z_bar);
    const double ratio = std::pow((1.0 - r.gamma) / (std::sqrt(2.0) + r.gamma), 2);
    const bool chain = ratio * r.v_dcc <= r.lower + tol && r.lower <= attained + tol &&
                       attained <= r.upper + tol && r.upper <= r.v_dcc + tol;
    worst_chain = std::max({worst_chain, ratio * r.v_dcc - r.lower, r.lower - attained,
                            attained - r.upper, r.upper - r.v_dcc});
    c.expect(chain && r.chain_holds, tag + ": chain broken");
    // The witness is a point of Omega with the claimed distance.
    for (int i = 0; i < b.p(); ++i) {
      c.expect((r.witness - b.centers[i]).norm() <= b.radii[i] + 1e-6, tag + ": witness outside");
    }
    c.expect(std::abs((r.witness - r.z_bar).squaredNorm() - r.lower) <= tol,
             tag + ": witness distance differs from the lower end");
    c.expect(r.gamma <= r.gamma_upper + 1e-9, tag + ": gamma above its bound");
    const double g_ref = gamma_by_search(b);
    c.expect(std::abs(r.gamma - g_ref) <= 1e-6,
             tag + ": gamma " + fmt("%.9g", r.gamma) + " vs search " + fmt("%.9g", g_ref));
  }
  // (c) translation invariance.
  for (int k = 0; k < 20; ++k) {
    std::mt19937 rng(42000 + k);
    const BallIntersection b = random_balls(rng, 2 + k % 2, 4);
    const Vector shift = random_vec(rng, b.n, 3.0);
    BallIntersection moved = b;
    for (auto& a : moved.centers) a += shift;
    const ChebyshevResult r = chebyshev_certified(b);
    const ChebyshevResult t = chebyshev_certified(moved);
    const double dz = (t.z_bar - shift - r.z_bar).norm();
    const double dv = std::abs(t.v_dcc - r.v_dcc);
    const double dg = std::abs(t.gamma - r.gamma);
    worst_c = std::max({worst_c, dz, dv, dg});
    c.expect(dz <= 1e-7 && dv <= 1e-7 && dg <= 1e-7,
             "(c) " + std::to_string(k) + ": drift " + fmt("%.3g", std::max({dz, dv, dg})));
  }
  const double t = seconds_since(t0);
  c.expect(t < 120.0, "runtime " + fmt("%.1f s", t));
  return "(a) max |v_dcc - grid| " + fmt("%.2g", worst_a) + ", (b) worst chain excess " +
         fmt("%.2g", worst_chain) + ", (c) max drift " + fmt("%.2g", worst_c) + ", " +
         fmt("%.1f s", t);
}

// ------------------------------------------------------------------ 6

// Value of a relaxation in the source sense; NaN unless optimal.
double relaxed_value(const Relaxation& r) {
  const SolverResult res = solve(r.program);
  if (res.status != SolveStatus::kOptimal) return std::numeric_limits<double>::quiet_NaN();
  return r.meta.source_objective(res.objective);
}

struct Circle {
  Vector center;
  double radius;
};
struct Line {  // a'x = beta
  Vector a;
  double beta;
};

// Max of obj over a planar set bounded by circles and lines: dense samples
// of every boundary piece, every pairwise boundary intersection and a
// zooming interior grid.
double planar_max(const std::function<double(const Vector&)>& obj,
                  const std::function<bool(const Vector&, double)>& feasible, const Vector& lo,
                  const Vector& hi, const std::vector<Circle>& circles,
                  const std::vector<Line>& lines) {
  constexpr double kBoundaryTol = 1e-9;
  double best = -std::numeric_limits<double>::infinity();
  auto take = [&](const Vector& x) {
    if (feasible(x, kBoundaryTol)) best = std::max(best, obj(x));
  };
  const int steps = 100000;
  for (const auto& c : circles) {
    for (int k = 0; k < steps; ++k) {
      const double th = 2.0 * M_PI * k / steps;
      take(c.center + c.radius * vec({std::cos(th), std::sin(th)}));
    }
  }
  const double diag = (hi - lo).norm();
  for (const auto& l : lines) {
    const Vector p0 = l.a * (l.beta / l.a.squaredNorm());
    const Vector dir = vec({-l.a(1), l.a(0)}).normalized();
    const double reach = diag + p0.norm();
    for (int k = 0; k <= steps; ++k) take(p0 + (-reach + 2.0 * reach * k / steps) * dir);
  }
  // Boundary intersections.
  for (std::size_t i = 0; i < circles.size(); ++i) {
    for (std::size_t j = i + 1; j < circles.size(); ++j) {
      const Vector d = circles[j].center - circles[i].center;
      const double L = d.norm();
      if (L == 0.0) continue;
      const double r1 = circles[i].radius, r2 = circles[j].radius;
      const double a = (r1 * r1 - r2 * r2 + L * L) / (2.0 * L);
      const double h2 = r1 * r1 - a * a;
      if (h2 < 0.0) continue;
      const Vector m = circles[i].center + a * d / L;
      const Vector perp = vec({-d(1), d(0)}) / L;
      take(m + std::sqrt(h2) * perp);
      take(m - std::sqrt(h2) * perp);
    }
    for (const auto& l : lines) {
      const double s = l.a.norm();
      const double dist = (l.beta - l.a.dot(circles[i].center)) / s;
      const double h2 = circles[i].radius * circles[i].radius - dist * dist;
      if (h2 < 0.0) continue;
      const Vector m = circles[i].center + dist * l.a / s;
      const Vector dir = vec({-l.a(1), l.a(0)}) / s;
      take(m + std::sqrt(h2) * dir);
      take(m - std::sqrt(h2) * dir);
    }
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      Matrix M(2, 2);
      M.row(0) = lines[i].a.transpose();
      M.row(1) = lines[j].a.transpose();
      if (std::abs(M.determinant()) < 1e-12) continue;
      take(M.partialPivLu().solve(vec({lines[i].beta, lines[j].beta})));
    }
  }
  const auto grid = grid_max(lo, hi, obj, [&](const Vector& x) { return feasible(x, 0.0); }, 201);
  if (grid.found()) best = std::max(best, grid.value);
  return best;
}

// A = R diag(lo_eig, hi_eig) R' in the plane; returns A and the top
// eigenvector.
std::pair<Matrix, Vector> planar_indefinite(std::mt19937& rng) {
  const Matrix R = testing::random_rotation(rng, 2);
  const double l1 = uniform(rng, -2.0, -0.3), l2 = uniform(rng, 0.2, 2.0);
  return {R * vec({l1, l2}).asDiagonal() * R.transpose(), R.col(1)};
}

std::string criterion_corollaries(Check& c) {
  const auto t0 = Clock::now();
  double worst_trs = 0.0, worst_grid = 0.0;
  int trs = 0, etrs = 0, ttrs = 0, vtrs = 0, wd = 0;

  // TRS against the secular-equation oracle, hard case included.
  std::vector<std::pair<Matrix, Vector>> trs_cases;
  trs_cases.push_back({Matrix(vec({-1.0, -1.0, 0.0}).asDiagonal()), vec({0.0, 0.0, 1e-3})});
  trs_cases.push_back({Matrix(vec({-2.0, 1.0}).asDiagonal()), vec({0.0, 0.5})});
  for (int k = 0; k < 30; ++k) {
    std::mt19937 rng(50000 + k);
    const int n = 2 + k % 4;
    const Matrix M = Eigen::Map<const Matrix>(random_vec(rng, n * n).data(), n, n);
    trs_cases.push_back({0.5 * (M + M.transpose()), random_vec(rng, n, k % 3 == 0 ? 0.01 : 1.0)});
  }
  for (std::size_t k = 0; k < trs_cases.size(); ++k) {
    const auto& [A, b] = trs_cases[k];
    const Relaxation r = build_cr(build_trs(sym(A), b));
    const double v = relaxed_value(r), want = trs_min(A, b);
    worst_trs = std::max(worst_trs, std::abs(v - want));
    c.expect(std::abs(v - want) <= 1e-6,
             "trs " + std::to_string(k) + ": " + fmt("%.10g", v) + " vs " + fmt("%.10g", want));
    ++trs;
  }

  auto grid_check = [&](const std::string& tag, double v, double want) {
    worst_grid = std::max(worst_grid, std::abs(v - want));
    c.expect(std::abs(v - want) <= 2e-3,
             tag + ": " + fmt("%.8g", v) + " vs oracle " + fmt("%.8g", want));
  };

  // Ellipsoidal TRS: a ball around x0 cut by a line along the top
  // eigenvector.
  for (int k = 0; k < 12; ++k) {
    std::mt19937 rng(51000 + k);
    const auto [A, top] = planar_indefinite(rng);
    const Vector a = random_vec(rng, 2), x0 = random_vec(rng, 2);
    const double u = uniform(rng, 0.5, 2.0);
    std::vector<Vector> rows;
    std::vector<double> beta;
    if (k % 3 != 0) {
      rows.push_back(top * uniform(rng, 0.5, 2.0));
      beta.push_back(rows[0].dot(x0) + rows[0].norm() * std::sqrt(u) * uniform(rng, -0.5, 0.8));
    }
    const StructuredInstance s = build_etrs(sym(A), a, x0, u, rows, beta);
    if (!s.certificate.holds) {
      c.expect(false, "etrs " + std::to_string(k) + ": condition fails: " + s.certificate.reason);
      continue;
    }
    const double v = relaxed_value(build_cr(s.instance));
    auto feasible = [&](const Vector& x, double tol) {
      if ((x - x0).squaredNorm() > u + tol) return false;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].dot(x) > beta[i] + tol) return false;
      }
      return true;
    };
    std::vector<Line> lines;
    for (std::size_t i = 0; i < rows.size(); ++i) lines.push_back({rows[i], beta[i]});
    const double r = std::sqrt(u) * 1.01;
    const double best = planar_max([&](const Vector& x) { return -(x.dot(A * x) + a.dot(x)); },
                                   feasible, x0.array() - r, x0.array() + r,
                                   {{x0, std::sqrt(u)}}, lines);
    grid_check("etrs " + std::to_string(k), v, -best);
    ++etrs;
  }

  // Two-sided TRS alpha <= |x|^2 <= beta, planar and spatial.
  for (int k = 0; k < 12; ++k) {
    std::mt19937 rng(52000 + k);
    const int n = 2 + k % 2;
    const Matrix M = Eigen::Map<const Matrix>(random_vec(rng, n * n).data(), n, n);
    const Matrix A = 0.5 * (M + M.transpose());
    const Vector b = random_vec(rng, n, 0.7);
    const double alpha = uniform(rng, 0.2, 1.0), beta = alpha + uniform(rng, 0.3, 2.0);
    const Relaxation r = build_ttrs(sym(A), b, alpha, beta);
    if (!r.certificate.holds) {
      c.expect(false, "ttrs " + std::to_string(k) + ": condition fails");
      continue;
    }
    const double v = relaxed_value(r);
    auto obj = [&](const Vector& x) { return -(0.5 * x.dot(A * x) + b.dot(x)); };
    double best = -std::numeric_limits<double>::infinity();
    // Interior critical points are saddles or maxima of obj unless A is PD.
    Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    if (es.eigenvalues()(0) > 0.0) {
      const Vector xs = -A.ldlt().solve(b);
      if (xs.squaredNorm() >= alpha && xs.squaredNorm() <= beta) best = obj(xs);
    }
    for (double rad : {std::sqrt(alpha), std::sqrt(beta)}) {
      if (n == 2) {
        for (int s = 0; s < 200000; ++s) {
          const double th = 2.0 * M_PI * s / 200000;
          best = std::max(best, obj(rad * vec({std::cos(th), std::sin(th)})));
        }
      } else {
        const int N = 900;
        for (int i = 0; i <= N; ++i) {
          const double th = M_PI * i / N;
          for (int j = 0; j < 2 * N; ++j) {
            const double ph = M_PI * j / N;
            best = std::max(best, obj(rad * vec({std::sin(th) * std::cos(ph),
                                                 std::sin(th) * std::sin(ph), std::cos(th)})));
          }
        }
      }
    }
    grid_check("ttrs " + std::to_string(k), v, -best);
    ++ttrs;
  }

  // Ball-constrained TRS with an excluded ball: both centers on the top
  // eigenvector line.
  for (int k = 0; k < 12; ++k) {
    std::mt19937 rng(53000 + k);
    const auto [A, top] = planar_indefinite(rng);
    const Vector cvec = random_vec(rng, 2, 0.5);
    const std::vector<Ball> in{{top * uniform(rng, -0.5, 0.5), uniform(rng, 1.5, 2.5)}};
    std::vector<Ball> out;
    if (k % 4 != 0) out.push_back({top * uniform(rng, -1.0, 1.0), uniform(rng, 0.2, 0.6)});
    std::vector<Vector> rows;
    std::vector<double> rhs;
    if (k % 3 == 1) {
      rows.push_back(top);
      rhs.push_back(uniform(rng, 0.0, 1.0));
    }
    const Relaxation r = build_vtrs(sym(A), cvec, in, out, rows, rhs);
    if (!r.certificate.holds) {
      c.expect(false, "vtrs " + std::to_string(k) + ": condition fails: " + r.certificate.reason);
      continue;
    }
    const double v = relaxed_value(r);
    auto feasible = [&](const Vector& x, double tol) {
      for (const auto& bl : in) {
        if ((x - bl.center).squaredNorm() > bl.radius * bl.radius + tol) return false;
      }
      for (const auto& bl : out) {
        if ((x - bl.center).squaredNorm() < bl.radius * bl.radius - tol) return false;
      }
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].dot(x) > rhs[i] + tol) return false;
      }
      return true;
    };
    std::vector<Circle> circles;
    for (const auto& bl : in) circles.push_back({bl.center, bl.radius});
    for (const auto& bl : out) circles.push_back({bl.center, bl.radius});
    std::vector<Line> lines;
    for (std::size_t i = 0; i < rows.size(); ++i) lines.push_back({rows[i], rhs[i]});
    const double rr = in[0].radius * 1.01;
    const double best = planar_max([&](const Vector& x) { return -(x.dot(A * x) + cvec.dot(x)); },
                                   feasible, in[0].center.array() - rr,
                                   in[0].center.array() + rr, circles, lines);
    grid_check("vtrs " + std::to_string(k), v, -best);
    ++vtrs;
  }

  // Weighted dispersion with the points on a line through the ball center.
  for (int k = 0; k < 12; ++k) {
    std::mt19937 rng(54000 + k);
    DispersionProblem p;
    p.x0 = random_vec(rng, 2);
    p.r0 = uniform(rng, 0.8, 1.5);
    const Vector dir = random_vec(rng, 2).normalized();
    const int m = 2 + k % 2;
    for (int i = 0; i < m; ++i) {
      p.points.push_back(p.x0 + uniform(rng, -p.r0, p.r0) * dir);
      p.weights.push_back(uniform(rng, 0.5, 2.0));
    }
    const Relaxation r = build_wd(p);
    if (!r.certificate.holds) {
      c.expect(false, "wd " + std::to_string(k) + ": condition fails: " + r.certificate.reason);
      continue;
    }
    const double v = relaxed_value(r);
    auto value = [&](const Vector& x) {
      double m_val = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < p.points.size(); ++i) {
        m_val = std::min(m_val, p.weights[i] * (x - p.points[i]).squaredNorm());
      }
      return m_val;
    };
    auto feasible = [&](const Vector& x, double tol) {
      return (x - p.x0).squaredNorm() <= p.r0 * p.r0 + tol;
    };
    const double rr = p.r0 * 1.01;
    const double best = planar_max(value, feasible, p.x0.array() - rr, p.x0.array() + rr,
                                   {{p.x0, p.r0}}, {});
    grid_check("wd " + std::to_string(k), v, best);
    ++wd;
  }
  const double t = seconds_since(t0);
  return std::to_string(trs) + " trs (max err " + fmt("%.2g", worst_trs) + "), " +
         std::to_string(etrs) + " etrs, " + std::to_string(ttrs) + " ttrs, " +
         std::to_string(vtrs) + " vtrs, " + std::to_string(wd) + " wd (max err " +
         fmt("%.2g", worst_grid) + "), " + fmt("%.1f s", t);
}

// ------------------------------------------------------------------ 7

std::string criterion_ilp(Check& c) {
  int feasible = 0;
  for (int k = 0; k < 20; ++k) {
    std::mt19937 rng(60000 + k);
    const int n = 2 + k % 3;
    const int m = 1 + k % 3;
    auto integer = [&](int lo, int hi) {
      return static_cast<double>(lo + static_cast<int>(rng() % (hi - lo + 1)));
    };
    IlpInstance ilp;
    ilp.c.resize(n);
    for (int j = 0; j < n; ++j) ilp.c(j) = integer(-4, 9);
    ilp.A.resize(m, n);
    Vector xr(n);
    for (int j = 0; j < n; ++j) xr(j) = integer(0, 1);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) ilp.A(i, j) = integer(-3, 5);
    }
    ilp.rhs = ilp.A * xr;
    for (int i = 0; i < m; ++i) ilp.rhs(i) += integer(k % 5 == 4 ? -20 : 0, 2);
    const std::string tag = "ilp " + std::to_string(k);

    // Plain enumeration, written here.
    double want = -std::numeric_limits<double>::infinity();
    for (int mask = 0; mask < (1 << n); ++mask) {
      Vector x(n);
      for (int j = 0; j < n; ++j) x(j) = (mask >> j) & 1;
      if (((ilp.A * x - ilp.rhs).array() <= 0.0).all()) want = std::max(want, ilp.c.dot(x));
    }
    const IlpEnumeration e = enumerate_ilp(ilp);
    c.expect(e.feasible == std::isfinite(want) && (!e.feasible || e.value == want),
             tag + ": library enumeration disagrees");

    const UqInstance u = ilp_to_uq(ilp);
    GridOptions go;
    go.h = 0.25;
    go.feas_tol = 1e-12;
    if (!std::isfinite(want)) {
      bool empty = false;
      try {
        grid_max_uq(u, go);
      } catch (const Error& err) {
        empty = err.code() == ErrorCode::kEmptyFeasibleGrid;
      }
      c.expect(empty, tag + ": infeasible ILP but the grid found a point");
      continue;
    }
    ++feasible;
    const GridResult g = grid_max_uq(u, go);
    c.expect(g.value == want, tag + ": reduced oracle " + fmt("%.17g", g.value) + " vs " +
                                  fmt("%.17g", want));
  }
  c.expect(feasible >= 10, "too few feasible ILPs");
  return "20 ILPs (" + std::to_string(feasible) + " feasible), exact match";
}

// ------------------------------------------------------------------ 8

struct CorpusProblem {
  std::string name;
  ConeProgram prog;
  std::optional<double> known;  // closed-form optimum when available
};

std::vector<CorpusProblem> cone_corpus() {
  std::vector<CorpusProblem> out;
  for (int k = 0; k < 30; ++k) {
    std::mt19937 rng(70000 + k);
    const int n = 2 + k % 5;
    if (k % 3 == 0) {
      // min c'x over ||x - a|| <= r: c'a - r |c|.
      const Vector cv = random_vec(rng, n), a = random_vec(rng, n);
      const double r = uniform(rng, 0.5, 3.0);
      ConeProgram p(n);
      p.set_objective(cv);
      p.add_soc(Matrix::Identity(n, n), -a, Vector::Zero(n), r);
      out.push_back({"ball-lp-" + std::to_string(k), p, cv.dot(a) - r * cv.norm()});
    } else if (k % 3 == 1) {
      // min c'x over a box with redundant cuts: sum_i min(c_i lo_i, c_i hi_i).
      const Vector cv = random_vec(rng, n);
      const Vector lo = random_vec(rng, n) - Vector::Ones(n);
      const Vector hi = lo + (Vector::Ones(n) + random_vec(rng, n).cwiseAbs());
      ConeProgram p(n);
      p.set_objective(cv);
      double want = 0.0;
      for (int j = 0; j < n; ++j) {
        p.add_leq(Vector::Unit(n, j), hi(j));
        p.add_geq(Vector::Unit(n, j), lo(j));
        want += std::min(cv(j) * lo(j), cv(j) * hi(j));
      }
      for (int cut = 0; cut < 3; ++cut) {
        const Vector a = random_vec(rng, n);
        double top = 0.0;
        for (int j = 0; j < n; ++j) top += std::max(a(j) * lo(j), a(j) * hi(j));
        p.add_leq(a, top + uniform(rng, 0.1, 1.0));
      }
      out.push_back({"box-lp-" + std::to_string(k), p, want});
    } else {
      // Relaxations of random uniform instances: mixed rows and cones.
      const UqInstance u = random_few_rows(rng, n, 1 + k % 4, n);
      out.push_back({"uq-relaxation-" + std::to_string(k), build_socp_uq(u).program, {}});
    }
  }
  return out;
}

// Largest violation of any row or cone at z, recomputed from the data.
double program_violation(const ConeProgram& prog, const Vector& z) {
  double worst = 0.0;
  if (prog.num_ineq() > 0) worst = std::max(worst, (prog.G() * z - prog.h()).maxCoeff());
  if (prog.num_eq() > 0) worst = std::max(worst, (prog.E() * z - prog.f()).cwiseAbs().maxCoeff());
  for (const auto& s : prog.socs()) {
    worst = std::max(worst, (s.A * z + s.b).norm() - (s.c.dot(z) + s.d));
  }
  return worst;
}

std::string criterion_solver(Check& c) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const auto& cp : cone_corpus()) {
    const SolverResult a = solve(cp.prog);
    const SolverResult b = solve(cp.prog);
    if (a.status != SolveStatus::kOptimal) {
      c.expect(false, cp.name + ": " + std::string(solve_status_name(a.status)));
      continue;
    }
    const double scale = 1.0 + std::abs(a.objective);
    const double viol = std::max(0.0, program_violation(cp.prog, a.z));
    const double err = cp.known ? std::abs(a.objective - *cp.known) : 0.0;
    const double m = std::max({a.gap, a.primal_residual, a.dual_residual, viol, err}) / scale;
    worst = std::max(worst, m);
    c.expect(m <= 1e-7, cp.name + ": worst of gap/residuals/violation/value error " +
                            fmt("%.3g", m * scale));
    bool same = a.status == b.status && a.iterations == b.iterations &&
                std::memcmp(&a.objective, &b.objective, sizeof(double)) == 0 &&
                a.z.size() == b.z.size();
    for (Eigen::Index i = 0; same && i < a.z.size(); ++i) {
      same = std::memcmp(&a.z(i), &b.z(i), sizeof(double)) == 0;
    }
    c.expect(same, cp.name + ": repeated solve differs");
  }
  return "30 programs, worst scaled gap/residual " + fmt("%.2g", worst) +
         ", bit-identical reruns, " + fmt("%.2f s", seconds_since(t0));
}

}  // namespace
}  // namespace hcvx

int main() {
  using Fn = std::string (*)(hcvx::Check&);
  struct Entry {
    const char* name;
    Fn fn;
  };
  const Entry entries[] = {
      {"1 one-dimensional gap instance", hcvx::criterion_gap_instance},
      {"2 exactness with few rows", hcvx::criterion_exactness},
      {"3 rounding ratio", hcvx::criterion_ratio},
      {"4 strong duality", hcvx::criterion_duality},
      {"5 Chebyshev center", hcvx::criterion_chebyshev},
      {"6 structured builders", hcvx::criterion_corollaries},
      {"7 ILP reduction", hcvx::criterion_ilp},
      {"8 cone solver corpus", hcvx::criterion_solver},
  };
  int failed = 0;
  for (const auto& e : entries) {
    hcvx::Check check;
    std::string summary;
    try {
      summary = e.fn(check);
    } catch (const std::exception& ex) {
      check.expect(false, std::string("exception: ") + ex.what());
    }
    if (!check.ok()) ++failed;
    std::printf("[%s] %s: %s%s%s\n", check.ok() ? "PASS" : "FAIL", e.name, summary.c_str(),
                check.ok() ? "" : (summary.empty() ? "" : " | "),
                check.ok() ? ""
                           : (std::to_string(check.failures()) + "/" +
                              std::to_string(check.checks()) + " checks failed: " + check.notes())
                                 .c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
