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

// Closed-form Lagrangian dual of a uniform QCQP with positive definite Q and
// the strong-duality check built on it.

#ifndef HCVX_DUALITY_HPP_
#define HCVX_DUALITY_HPP_

#include "hcvx/cone.hpp"
#include "hcvx/model.hpp"
#include "hcvx/reformulate.hpp"

namespace hcvx {

// Signed multipliers, one per constraint: lambda_i > 0 prices the upper
// bound, lambda_i < 0 the lower bound.
struct DualPoint {
  Vector lambda;
};

// d(lambda) = sup_x L(x, lambda). With sigma = 1 - sum lambda_i and
// beta = b_0 - sum lambda_i b_i, the value is kappa - beta'Q^{-1}beta / sigma
// for sigma < 0, kappa for sigma = beta = 0 and +inf otherwise. |sigma| and
// ||beta|| up to zero_tol count as zero.
ExtReal dual_value(const UqInstance& inst, const DualPoint& dual, double zero_tol = 1e-7);

// Multipliers of the relaxation rows built by build_socp_uq.
DualPoint relaxation_multipliers(const ReformulationMeta& meta, const SolverResult& res);

struct DualityReport {
  ExtReal dual;             // d(lambda) at the recovered multipliers
  double objective = 0.0;   // relaxation value in source units
  double gap = 0.0;         // d(lambda) - objective (+inf if dual infinite)
  bool holds = false;       // |gap| <= 1e-5 (1 + |objective|)
};

DualityReport certify_strong_duality(const UqInstance& inst, const Relaxation& relax,
                                     const SolverResult& res, double zero_tol = 1e-7);

}  // namespace hcvx

#endif  // HCVX_DUALITY_HPP_
