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

// Turning relaxation optima into points of the source problem: exact
// recovery when the relaxation is tight, and the scaled-rounding
// approximation for convex-constrained uniform QCQPs.

#ifndef HCVX_RECOVER_HPP_
#define HCVX_RECOVER_HPP_

#include <string>
#include <vector>

#include "hcvx/cone.hpp"
#include "hcvx/model.hpp"
#include "hcvx/reformulate.hpp"

namespace hcvx {

struct TightenStep {
  std::string action;  // "root", "endpoint", "line-root" or "block-root"
  Vector direction;
  double step = 0.0;
  int index = -1;      // constraint activated (endpoint) or block closed; 1-based
  double gap_after = 0.0;
};

struct TightenTrace {
  std::vector<TightenStep> steps;
  std::vector<std::vector<int>> active_history;  // 1-based active rows per pass
  double initial_gap = 0.0;
  double final_gap = 0.0;
};

struct Recovery {
  Vector x;
  double objective = 0.0;        // source objective at x
  double worst_violation = 0.0;
  TightenTrace trace;
};

struct TightenOptions {
  double tol_rank = kDefaultRankTol;
  double active_tol = 1e-7;  // slack <= active_tol (1 + |u| + |l|) counts as active
  double gap_tol = 1e-9;     // cone gap <= gap_tol (1 + |t|) counts as closed
};

// Moves the relaxation optimum of build_socp_uq(inst) onto x'Qx = t without
// changing the objective. Needs Q PD and the rank condition.
Recovery tighten_uq(const UqInstance& inst, const Relaxation& relax, const SolverResult& res,
                    const TightenOptions& opts = {});

// Same for build_cr / build_cr2: closes each lifted block gap along a
// direction in span{b}^perp, R(Q_j) and the null spaces of the other blocks.
Recovery tighten_qcqp(const QcqpInstance& inst, const Relaxation& relax, const SolverResult& res,
                      const TightenOptions& opts = {});

// Dispersion relaxation: pushes y to the sphere ||y|| = r0 along a direction
// orthogonal to every z_i - x0. Objective is min_i w_i ||x - z_i||^2.
Recovery recover_wd(const DispersionProblem& wd, const Relaxation& relax, const SolverResult& res,
                    const TightenOptions& opts = {});

struct ApproxTrace {
  bool shortcut = false;         // relaxation point already feasible and tight
  bool degenerate_root = false;  // open cone gap but no objective slack
  Vector x_star;
  double t_star = 0.0;
  Vector y;
  double alpha = 0.0;
  Vector s1, s2;
  double t1 = 1.0, t2 = 0.0;
  double rho1 = 0.0, rho2 = 0.0;  // max_i of the normalized distances per s_j
  int j_bar = 1;
  Vector x_bar;
  double tau_bar = 1.0;
  double gamma = 0.0;
  double identity_residual = 0.0;  // (n1) + (n2) against the relaxation value
  double energy_residual = 0.0;    // s1'Qs1 + s2'Qs2 against t*
  bool selection_ok = true;
  bool identity_ok = true;
};

struct ApproxCertificate {
  double lower = 0.0;             // f_0 at the returned point
  double upper = 0.0;             // relaxation value
  double guaranteed_ratio = 0.0;  // ((1 - gamma) / (sqrt 2 + gamma))^2
  bool ratio_holds = false;       // lower >= ratio * upper - tol
};

struct Approximation {
  Vector x;
  double worst_violation = 0.0;
  ApproxTrace trace;
  ApproxCertificate certificate;
  SolverResult solve;
};

// Needs Q PD, every l_i = -inf, every u_i finite, d_0 = 0 and the origin
// strictly feasible.
Approximation approx_uq(const UqInstance& inst, const SolverOptions& solver = {},
                        double tol = 1e-5);

// max_i ||Q^{-1/2} b_i|| / sqrt(u_i - d_i + ||Q^{-1/2} b_i||^2).
double gamma_uq(const UqInstance& inst);
// Largest tau in [0, 1] with f_i(tau x) <= u_i for every i.
double tau_bar(const UqInstance& inst, const Vector& x);

}  // namespace hcvx

#endif  // HCVX_RECOVER_HPP_
