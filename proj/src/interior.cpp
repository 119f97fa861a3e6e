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
#include <algorithm>
#include <limits>
#include <string>

#include "hcvx/cone.hpp"
#include "hcvx/error.hpp"
#include "hcvx/model.hpp"

namespace hcvx {

InteriorPoint find_interior_point(const UqInstance& inst, double tol) {
  inst.validate();
  for (const auto& bd : inst.bounds) {
    if (!bd.lower.is_neg_inf()) {
      throw Error(ErrorCode::kPreconditionViolated,
                  "interior point search needs one-sided rows (no finite lower bound)");
    }
  }
  if (!is_pd(inst.Q)) {
    throw Error(ErrorCode::kNotPositiveDefinite, "interior point search needs Q positive definite");
  }
  const int n = inst.n;
  InteriorPoint out;
  bool any_finite = false;
  for (const auto& bd : inst.bounds) any_finite = any_finite || bd.upper.is_finite();
  if (!any_finite) {
    out.x = Vector::Zero(n);
    out.margin = std::numeric_limits<double>::infinity();
    return out;
  }

  // Variables (x, t, s): maximize s.
  const int t = n;
  const int s = n + 1;
  ConeProgram prog(n + 2);
  Vector obj = Vector::Zero(n + 2);
  obj(s) = -1.0;
  prog.set_objective(obj);
  for (int i = 1; i <= inst.p(); ++i) {
    const Bound& bd = inst.bounds[i - 1];
    if (!bd.upper.is_finite()) continue;
    Vector row = Vector::Zero(n + 2);
    row.head(n) = 2.0 * inst.b[i];
    row(t) = 1.0;
    row(s) = 1.0;
    prog.add_leq(row, bd.upper.value() - inst.d[i]);
  }
  add_quadratic_epigraph(prog, psd_sqrt(inst.Q).dense(), 0, t);
  const SolverResult res = solve(prog);
  if (res.status == SolveStatus::kInfeasible) {
    throw Error(ErrorCode::kEmptyInterior, "constraint set is empty");
  }
  if (res.status != SolveStatus::kOptimal) {
    throw Error(ErrorCode::kSolverFailure, std::string("interior point search: ") +
                                               std::string(solve_status_name(res.status)));
  }
  out.x = res.z.head(n);
  out.margin = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= inst.p(); ++i) {
    const Bound& bd = inst.bounds[i - 1];
    if (bd.upper.is_finite()) {
      out.margin = std::min(out.margin, bd.upper.value() - eval_f(inst, i, out.x));
    }
  }
  if (!(out.margin > tol)) {
    throw Error(ErrorCode::kEmptyInterior,
                "largest common slack " + std::to_string(out.margin) + " is not positive");
  }
  return out;
}

}  // namespace hcvx
