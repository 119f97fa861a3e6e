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

// Brute-force ground truth for small instances: grid maxima of uniform
// QCQPs, the Chebyshev min-max value of planar ball intersections, random
// feasible sampling and binary ILP enumeration. Nothing here is used by the
// relaxation pipeline.

#ifndef HCVX_ORACLE_HPP_
#define HCVX_ORACLE_HPP_

#include <cstdint>
#include <optional>

#include "hcvx/model.hpp"

namespace hcvx {

struct Box {
  Vector lo;
  Vector hi;
};

// Bounding box of the ellipsoidal rows (finite upper bound with Q PD, or
// finite lower bound with Q ND), each inflated by 10% about its center and
// intersected. Throws UnboundedBox when no row bounds the feasible set and
// EmptyFeasibleGrid when a row's ellipsoid is empty.
Box infer_box(const UqInstance& inst);

struct GridOptions {
  double h = 1e-2;
  std::optional<Box> box;  // inferred when absent
  // Per-row slack for grid feasibility. Absent: the largest gradient norm
  // of the row over the box times h sqrt(n) / 2, so the grid point nearest
  // to any feasible point is accepted. The feasible set must lie inside the
  // box shrunk by h / 2 for that to hold at the edges.
  std::optional<double> feas_tol;
};

struct GridResult {
  double value = 0.0;
  Vector argmax;
  double h = 0.0;
  Box box;
  double lipschitz = 0.0;    // bound on ||grad f_0|| over the box
  double error_bound = 0.0;  // lipschitz * h * sqrt(n) / 2
  double max_feas_tol = 0.0;
  double total_points = 0.0;
  std::int64_t evaluated = 0;
};

// Maximum of f_0 over the grid points {k h : k integer} in the box that satisfy
// every row within the slack. Cells whose interval bounds rule them out are
// skipped, so the answer equals the exhaustive sweep (ties go to the first
// point in lexicographic index order). n <= 4. Throws EmptyFeasibleGrid.
GridResult grid_max_uq(const UqInstance& inst, const GridOptions& opts = {});

struct MinMaxResult {
  double value = 0.0;  // min over the z grid of max_{x in Omega} ||x - z||^2
  Vector z;
  double h = 0.0;
  double error_bound = 0.0;  // outer grid error
};

// n <= 2. The inner maximum is exact: the farthest point of Omega from z is
// a pairwise boundary intersection or the antipode of z on one sphere.
MinMaxResult grid_minmax_cc(const BallIntersection& balls, double h);
// Exact max_{x in Omega} ||x - z||^2 for n <= 2; EmptyFeasibleGrid if Omega
// is empty.
double farthest_sq_distance(const BallIntersection& balls, const Vector& z);

enum class SampleStatus { kOk, kNoFeasibleSample };

struct SampleResult {
  SampleStatus status = SampleStatus::kNoFeasibleSample;
  double value = -std::numeric_limits<double>::infinity();
  Vector argmax;
  int accepted = 0;
};

// Gaussian rejection sampling around a feasible `start` (not itself counted)
// with spreads scale, scale/10, scale/100 in turn. Deterministic in seed.
SampleResult sample_max_uq(const UqInstance& inst, const Vector& start, int count,
                           std::uint64_t seed, double scale = 1.0);

struct IlpEnumeration {
  bool feasible = false;
  double value = -std::numeric_limits<double>::infinity();
  Vector x;
  int feasible_count = 0;
};
// n <= 20.
IlpEnumeration enumerate_ilp(const IlpInstance& ilp);

}  // namespace hcvx

#endif  // HCVX_ORACLE_HPP_
