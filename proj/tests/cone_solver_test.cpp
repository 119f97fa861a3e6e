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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "hcvx/cone.hpp"
#include "hcvx/error.hpp"

namespace hcvx {
namespace {

Vector unit(int n, int i) { return Vector::Unit(n, i); }

TEST(ConeSolverTest, NormOfFixedPoint) {
  // Variables (x1, x2, t): min t, ||x|| <= t, x = (3, 4).
  ConeProgram prog(3);
  prog.set_objective(unit(3, 2));
  prog.add_eq(unit(3, 0), 3.0);
  prog.add_eq(unit(3, 1), 4.0);
  Matrix A = Matrix::Zero(2, 3);
  A(0, 0) = 1.0;
  A(1, 1) = 1.0;
  prog.add_soc(A, Vector::Zero(2), unit(3, 2), 0.0);
  const SolverResult res = solve(prog);
  ASSERT_EQ(res.status, SolveStatus::kOptimal);
  EXPECT_NEAR(res.objective, 5.0, 1e-7);
  EXPECT_NEAR(res.z(2), 5.0, 1e-7);
}

TEST(ConeSolverTest, BoxLpMatchesVertexEnumeration) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3;
    Vector c(n), lo(n), hi(n);
    for (int j = 0; j < n; ++j) {
      c(j) = U(rng);
      lo(j) = U(rng) - 1.0;
      hi(j) = lo(j) + 0.5 + std::abs(U(rng));
    }
    ConeProgram prog(n);
    prog.set_objective(c, 0.25);
    for (int j = 0; j < n; ++j) {
      prog.add_leq(unit(n, j), hi(j));
      prog.add_geq(unit(n, j), lo(j));
    }
    double best = INFINITY;
    for (int mask = 0; mask < (1 << n); ++mask) {
      double v = 0.25;
      for (int j = 0; j < n; ++j) v += c(j) * ((mask >> j) & 1 ? hi(j) : lo(j));
      best = std::min(best, v);
    }
    const SolverResult res = solve(prog);
    ASSERT_EQ(res.status, SolveStatus::kOptimal);
    EXPECT_NEAR(res.objective, best, 1e-7);
  }
}

TEST(ConeSolverTest, DetectsInfeasibleLp) {
  ConeProgram prog(1);
  prog.set_objective(unit(1, 0));
  prog.add_leq(unit(1, 0), -1.0);
  prog.add_geq(unit(1, 0), 1.0);
  const SolverResult res = solve(prog);
  EXPECT_EQ(res.status, SolveStatus::kInfeasible);
  EXPECT_GT(res.certificate.size(), 0);
}

TEST(ConeSolverTest, DetectsUnboundedRay) {
  // min -x1 - x2 with only x1 <= 1: x2 runs off to +inf.
  ConeProgram prog(2);
  Vector c(2);
  c << -1.0, -1.0;
  prog.set_objective(c);
  prog.add_leq(unit(2, 0), 1.0);
  const SolverResult res = solve(prog);
  EXPECT_EQ(res.status, SolveStatus::kUnbounded);
  ASSERT_EQ(res.certificate.size(), 2);
  EXPECT_LT(c.dot(res.certificate), 0.0);
}

TEST(ConeSolverTest, QuadraticEpigraphHelper) {
  // max t + 2x s.t. x^2 <= t, t <= 3 (relaxation of a 1-D problem).
  ConeProgram prog(2);
  Vector c(2);
  c << -2.0, -1.0;
  prog.set_objective(c);
  Vector row(2);
  row << 0.0, 1.0;
  prog.add_leq(row, 3.0);
  add_quadratic_epigraph(prog, Matrix::Identity(1, 1), 0, 1);
  const SolverResult res = solve(prog);
  ASSERT_EQ(res.status, SolveStatus::kOptimal);
  EXPECT_NEAR(res.objective, -(3.0 + 2.0 * std::sqrt(3.0)), 1e-7);
}

TEST(ConeSolverTest, RejectsMismatchedRow) {
  ConeProgram prog(2);
  EXPECT_THROW(prog.add_leq(Vector::Ones(3), 1.0), Error);
  EXPECT_THROW(ConeProgram(0), Error);
}

TEST(ConeSolverTest, RepeatedSolvesAreBitIdentical) {
  ConeProgram prog(3);
  Vector c(3);
  c << 0.3, -0.7, 1.0;
  prog.set_objective(c);
  Matrix A = Matrix::Identity(2, 3);
  prog.add_soc(A, Vector::Zero(2), unit(3, 2), 0.0);
  prog.add_leq(unit(3, 2), 2.0);
  const SolverResult a = solve(prog);
  const SolverResult b = solve(prog);
  ASSERT_EQ(a.status, SolveStatus::kOptimal);
  EXPECT_EQ(a.iterations, b.iterations);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(a.z(i), b.z(i));
}

}  // namespace
}  // namespace hcvx
