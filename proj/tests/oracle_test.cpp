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

#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "hcvx/error.hpp"
#include "hcvx/reformulate.hpp"
#include "support/brute_force.hpp"
#include "support/util.hpp"

namespace hcvx {
namespace {

using testing::balls;
using testing::error_of;
using testing::example_one;
using testing::random_pd;
using testing::random_vec;
using testing::uniform;
using testing::vec;

// Every grid point, no pruning, same acceptance rule as the oracle.
GridResult plain_sweep(const UqInstance& u, const Box& box, double h, double tol) {
  const int n = u.n;
  Eigen::VectorXi lo(n), hi(n);
  for (int d = 0; d < n; ++d) {
    lo(d) = static_cast<int>(std::ceil(box.lo(d) / h - 1e-9));
    hi(d) = static_cast<int>(std::floor(box.hi(d) / h + 1e-9));
  }
  GridResult best;
  best.value = -std::numeric_limits<double>::infinity();
  Eigen::VectorXi k = lo;
  while (true) {
    const Vector x = h * k.cast<double>();
    bool ok = true;
    for (int i = 1; i <= u.p(); ++i) {
      const double f = eval_f(u, i, x);
      if (f > u.bounds[i - 1].upper.as_double() + tol ||
          f < u.bounds[i - 1].lower.as_double() - tol) {
        ok = false;
      }
    }
    if (ok) {
      const double v = eval_f(u, 0, x);
      if (v > best.value) {
        best.value = v;
        best.argmax = x;
      }
    }
    int d = n - 1;
    while (d >= 0 && k(d) == hi(d)) {
      k(d) = lo(d);
      --d;
    }
    if (d < 0) break;
    ++k(d);
  }
  return best;
}

UqInstance random_instance(std::mt19937& rng, int n, int p, bool indefinite) {
  UqInstance u;
  u.n = n;
  if (indefinite) {
    Matrix Q = random_pd(rng, n);
    Q(0, 0) -= 3.0;
    u.Q = SymMatrix::symmetrized(Q);
  } else {
    u.Q = SymMatrix::symmetrized(random_pd(rng, n));
  }
  u.b = {random_vec(rng, n)};
  u.d = {0.0};
  for (int i = 0; i < p; ++i) {
    u.b.push_back(random_vec(rng, n, 0.5));
    u.d.push_back(uniform(rng, -1.0, 0.0));
    u.bounds.push_back(i == 0 ? Bound::at_most(uniform(rng, 1.0, 2.0))
                              : Bound::between(-2.0, uniform(rng, 0.5, 2.0)));
  }
  return u;
}

TEST(GridMaxTest, ExampleOneValueIsOne) {
  GridOptions opts;
  opts.h = 1e-4;
  const GridResult g = grid_max_uq(example_one(), opts);
  EXPECT_NEAR(g.value, 1.0, 2e-4);
  EXPECT_NEAR(g.argmax(0), 1.0, 2e-4);
  EXPECT_LE(g.evaluated, static_cast<std::int64_t>(g.total_points));
}

TEST(GridMaxTest, UnboundedWithoutFiniteRows) {
  UqInstance u = balls({vec({0.0, 0.0})}, {1.0}, vec({1.0, 0.0}));
  u.bounds[0] = Bound::free();
  EXPECT_EQ(error_of([&] { grid_max_uq(u); }), ErrorCode::kUnboundedBox);
  u.bounds[0] = Bound::at_least(1.0);
  EXPECT_EQ(error_of([&] { grid_max_uq(u); }), ErrorCode::kUnboundedBox);
}

TEST(GridMaxTest, IndefiniteNeedsBox) {
  UqInstance u = balls({vec({0.0, 0.0})}, {1.0}, vec({1.0, 0.0}));
  u.Q = testing::diag({1.0, -1.0});
  EXPECT_EQ(error_of([&] { grid_max_uq(u); }), ErrorCode::kUnboundedBox);
  GridOptions opts;
  opts.box = Box{vec({-2.0, -2.0}), vec({2.0, 2.0})};
  EXPECT_NO_THROW(grid_max_uq(u, opts));
}

TEST(GridMaxTest, SingleCenteredBallGivesRadiusSquared) {
  for (double r : {0.5, 1.0, 2.0}) {
    const UqInstance u = balls({vec({0.0, 0.0})}, {r}, vec({0.0, 0.0}));
    GridOptions opts;
    opts.h = 1e-3;
    const GridResult g = grid_max_uq(u, opts);
    EXPECT_NEAR(g.value, r * r, g.error_bound + g.max_feas_tol);
    EXPECT_NEAR(g.value, r * r, 1e-2 * r * r);
  }
}

TEST(GridMaxTest, EmptyRowIsReported) {
  const UqInstance u = balls({vec({0.0, 0.0}), vec({3.0, 0.0})}, {1.0, 1.0}, vec({0.0, 0.0}));
  GridOptions opts;
  opts.feas_tol = 0.0;
  EXPECT_EQ(error_of([&] { grid_max_uq(u, opts); }), ErrorCode::kEmptyFeasibleGrid);
}

TEST(GridMaxTest, RejectsLargeDimension) {
  const UqInstance u = balls({Vector::Zero(5)}, {1.0}, Vector::Zero(5));
  EXPECT_EQ(error_of([&] { grid_max_uq(u); }), ErrorCode::kInvalidInput);
}

TEST(GridMaxTest, PrunedSearchEqualsPlainSweep) {
  for (int seed = 0; seed < 30; ++seed) {
    std::mt19937 rng(seed);
    const int n = 2 + seed % 2;
    const bool indefinite = seed % 3 == 0;
    const UqInstance u = random_instance(rng, n, 2, indefinite);
    GridOptions opts;
    opts.h = n == 2 ? 0.01 : 0.05;
    opts.box = Box{Vector::Constant(n, -2.0), Vector::Constant(n, 2.0)};
    opts.feas_tol = 1e-3;
    GridResult fast;
    try {
      fast = grid_max_uq(u, opts);
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), ErrorCode::kEmptyFeasibleGrid);
      EXPECT_EQ(plain_sweep(u, *opts.box, opts.h, 1e-3).argmax.size(), 0);
      continue;
    }
    const GridResult slow = plain_sweep(u, *opts.box, opts.h, 1e-3);
    EXPECT_EQ(fast.value, slow.value) << "seed " << seed;
    EXPECT_EQ((fast.argmax - slow.argmax).norm(), 0.0) << "seed " << seed;
    EXPECT_LT(fast.evaluated, static_cast<std::int64_t>(fast.total_points));
  }
}

TEST(GridMaxTest, HalvingStepMovesValueWithinBound) {
  for (int seed = 0; seed < 10; ++seed) {
    std::mt19937 rng(100 + seed);
    const int n = 2 + seed % 2;
    const UqInstance u = random_instance(rng, n, 2, false);
    GridOptions coarse;
    coarse.h = 0.02;
    GridOptions fine = coarse;
    fine.h = 0.01;
    const GridResult a = grid_max_uq(u, coarse);
    const GridResult b = grid_max_uq(u, fine);
    EXPECT_LE(std::abs(a.value - b.value), a.lipschitz * coarse.h) << "seed " << seed;
  }
}

TEST(GridMaxTest, NeverExceedsRelaxationBeyondSlack) {
  for (int seed = 0; seed < 10; ++seed) {
    std::mt19937 rng(200 + seed);
    const int n = 2 + seed % 2;
    const UqInstance u = random_instance(rng, n, 3, false);
    GridOptions opts;
    opts.h = 0.01;
    opts.feas_tol = 0.0;
    const GridResult g = grid_max_uq(u, opts);
    const Relaxation r = build_socp_uq(u);
    const SolverResult res = solve(r.program);
    ASSERT_EQ(res.status, SolveStatus::kOptimal);
    EXPECT_LE(g.value, r.meta.source_objective(res.objective) + 1e-6) << "seed " << seed;
  }
}

TEST(GridMaxTest, ReducedIlpMatchesEnumeration) {
  IlpInstance ilp{vec({3.0, -1.0, 2.0}), Matrix{{1.0, 1.0, 1.0}, {2.0, 0.0, 1.0}}, vec({2.0, 2.0})};
  const IlpEnumeration en = enumerate_ilp(ilp);
  ASSERT_TRUE(en.feasible);
  EXPECT_EQ(en.value, 3.0);
  GridOptions opts;
  opts.h = 0.25;
  opts.feas_tol = 1e-12;
  const GridResult g = grid_max_uq(ilp_to_uq(ilp), opts);
  EXPECT_EQ(g.value, en.value);
  EXPECT_EQ((g.argmax - en.x).norm(), 0.0);
}

TEST(EnumerateIlpTest, CountsFeasiblePoints) {
  IlpInstance ilp{vec({1.0, 1.0}), Matrix{{1.0, 1.0}}, vec({1.0})};
  const IlpEnumeration en = enumerate_ilp(ilp);
  EXPECT_EQ(en.feasible_count, 3);
  EXPECT_EQ(en.value, 1.0);
  ilp.rhs = vec({-1.0});
  EXPECT_FALSE(enumerate_ilp(ilp).feasible);
}

TEST(SampleMaxTest, ZeroSamplesIsSentinel) {
  const SampleResult s = sample_max_uq(example_one(), vec({1.0}), 0, 7);
  EXPECT_EQ(s.status, SampleStatus::kNoFeasibleSample);
  EXPECT_TRUE(std::isinf(s.value) && s.value < 0.0);
}

TEST(SampleMaxTest, DeterministicAndBelowGrid) {
  for (int seed = 0; seed < 5; ++seed) {
    std::mt19937 rng(300 + seed);
    const UqInstance u = random_instance(rng, 2, 2, false);
    GridOptions opts;
    opts.h = 0.01;
    const GridResult g = grid_max_uq(u, opts);
    const SampleResult a = sample_max_uq(u, g.argmax * 0.0, 2000, 11, 0.5);
    const SampleResult b = sample_max_uq(u, g.argmax * 0.0, 2000, 11, 0.5);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.accepted, b.accepted);
    if (a.status == SampleStatus::kOk) {
      EXPECT_LE(a.value, g.value + g.error_bound) << "seed " << seed;
    }
  }
}

TEST(MinMaxTest, SingleBallGivesRadiusSquared) {
  BallIntersection b{2, {vec({0.3, -0.2})}, {1.5}};
  const MinMaxResult m = grid_minmax_cc(b, 1e-2);
  EXPECT_NEAR(m.value, 2.25, 1e-9);
  EXPECT_NEAR((m.z - b.centers[0]).norm(), 0.0, 1e-9);
}

TEST(MinMaxTest, FarthestPointMatchesBoundarySampling) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    BallIntersection b{2, {}, {}};
    for (int i = 0; i < 3; ++i) {
      b.centers.push_back(random_vec(rng, 2, 0.4));
      b.radii.push_back(uniform(rng, 1.0, 1.5));
    }
    const Vector z = random_vec(rng, 2, 0.3);
    const auto sampled = testing::circle_max(
        b.centers, b.radii, [&](const Vector& x) { return (x - z).squaredNorm(); },
        [&](const Vector& x) {
          for (int i = 0; i < 3; ++i) {
            if ((x - b.centers[i]).norm() > b.radii[i] + 1e-12) return false;
          }
          return true;
        });
    ASSERT_TRUE(sampled.found());
    const double exact = farthest_sq_distance(b, z);
    EXPECT_GE(exact, sampled.value - 1e-9);
    // Angular step 2 pi / 2e5 on radii <= 1.5 near a vertex.
    EXPECT_NEAR(exact, sampled.value, 5e-4);
  }
}

TEST(MinMaxTest, HalvingStepIsConsistent) {
  BallIntersection b{2, {vec({-0.5, 0.0}), vec({0.5, 0.0})}, {1.0, 1.0}};
  const MinMaxResult a = grid_minmax_cc(b, 2e-2);
  const MinMaxResult c = grid_minmax_cc(b, 1e-2);
  EXPECT_LE(c.value, a.value + 1e-12);
  EXPECT_LE(a.value - c.value, a.error_bound);
  // Omega is a lens with tips (0, +-sqrt(3)/2) and ends (+-0.5, 0).
  EXPECT_NEAR(c.value, 0.75, c.error_bound);
}

TEST(MinMaxTest, EmptyIntersection) {
  BallIntersection b{2, {vec({-2.0, 0.0}), vec({2.0, 0.0})}, {1.0, 1.0}};
  EXPECT_EQ(error_of([&] { grid_minmax_cc(b, 1e-2); }), ErrorCode::kEmptyFeasibleGrid);
  BallIntersection line{1, {vec({0.0}), vec({1.0})}, {1.0, 0.5}};
  EXPECT_NEAR(grid_minmax_cc(line, 1e-3).value, 0.0625, 1e-6);
}

}  // namespace
}  // namespace hcvx
