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

#include "hcvx/duality.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hcvx/error.hpp"

namespace hcvx {

ExtReal dual_value(const UqInstance& inst, const DualPoint& dual, double zero_tol) {
  inst.validate();
  const int p = inst.p();
  if (dual.lambda.size() != p) throw Error(ErrorCode::kInvalidMultiplier, "need one multiplier per constraint");
  if (!dual.lambda.allFinite()) throw Error(ErrorCode::kInvalidMultiplier, "multiplier not finite");
  if (!is_pd(inst.Q)) throw Error(ErrorCode::kNotPositiveDefinite, "dual needs Q positive definite");

  double sigma = 1.0;
  Vector beta = inst.b[0];
  double kappa = inst.d[0];
  for (int i = 1; i <= p; ++i) {
    const double lam = dual.lambda(i - 1);
    const Bound& bd = inst.bounds[i - 1];
    sigma -= lam;
    beta -= lam * inst.b[i];
    kappa -= lam * inst.d[i];
    if (lam > 0.0) {
      if (!bd.upper.is_finite()) {
        throw Error(ErrorCode::kInvalidMultiplier,
                    "positive multiplier on row " + std::to_string(i) + " with u = +inf");
      }
      kappa += lam * bd.upper.value();
    } else if (lam < 0.0) {
      if (!bd.lower.is_finite()) {
        throw Error(ErrorCode::kInvalidMultiplier,
                    "negative multiplier on row " + std::to_string(i) + " with l = -inf");
      }
      kappa += lam * bd.lower.value();  // -lambda^- l with lambda^- = -lam
    }
  }
  const double scale = 1.0 + dual.lambda.cwiseAbs().sum();
  const bool sigma_zero = std::abs(sigma) <= zero_tol * scale;
  const bool beta_zero = beta.norm() <= zero_tol * scale * (1.0 + inst.b[0].norm());
  if (sigma < 0.0 && !sigma_zero) {
    const Vector qinv_beta = inst.Q.dense().llt().solve(beta);
    return ExtReal::finite(kappa - beta.dot(qinv_beta) / sigma);
  }
  if (sigma_zero && beta_zero) return ExtReal::finite(kappa);
  return ExtReal::pos_inf();
}

DualPoint relaxation_multipliers(const ReformulationMeta& meta, const SolverResult& res) {
  const int p = static_cast<int>(meta.upper_row.size());
  DualPoint dp;
  dp.lambda = Vector::Zero(p);
  for (int i = 0; i < p; ++i) {
    if (meta.eq_row[i] >= 0) {
      dp.lambda(i) = res.eq_duals(meta.eq_row[i]);
      continue;
    }
    if (meta.upper_row[i] >= 0) dp.lambda(i) += res.ineq_duals(meta.upper_row[i]);
    if (meta.lower_row[i] >= 0) dp.lambda(i) -= res.ineq_duals(meta.lower_row[i]);
  }
  return dp;
}

DualityReport certify_strong_duality(const UqInstance& inst, const Relaxation& relax,
                                     const SolverResult& res, double zero_tol) {
  if (res.status != SolveStatus::kOptimal) {
    throw Error(ErrorCode::kSolverFailure, "strong duality check needs an optimal solve");
  }
  DualPoint dp = relaxation_multipliers(relax.meta, res);
  // Multipliers on rows whose bound is infinite are never produced; tiny
  // negative noise from the solver on one-sided rows is clipped here.
  for (int i = 0; i < dp.lambda.size(); ++i) {
    const Bound& bd = inst.bounds[i];
    if (dp.lambda(i) > 0.0 && !bd.upper.is_finite()) dp.lambda(i) = 0.0;
    if (dp.lambda(i) < 0.0 && !bd.lower.is_finite()) dp.lambda(i) = 0.0;
  }
  DualityReport rep;
  rep.objective = relax.meta.source_objective(res.objective);
  rep.dual = dual_value(inst, dp, zero_tol);
  if (rep.dual.is_finite()) {
    rep.gap = rep.dual.value() - rep.objective;
    rep.holds = std::abs(rep.gap) <= 1e-5 * (1.0 + std::abs(rep.objective));
  } else {
    rep.gap = std::numeric_limits<double>::infinity();
  }
  return rep;
}

}  // namespace hcvx
