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

// Linear + second-order cone programs and a dense interior-point solver.
//
//   minimize    c'z + offset
//   subject to  G z <= h
//               E z == f
//               ||A_k z + b_k|| <= c_k'z + d_k   for every SOC block k

#ifndef HCVX_CONE_HPP_
#define HCVX_CONE_HPP_

#include <string_view>
#include <vector>

#include "hcvx/linalg.hpp"

namespace hcvx {

struct SocBlock {
  Matrix A;  // rows x N
  Vector b;
  Vector c;  // length N
  double d = 0.0;

  int dim() const { return static_cast<int>(A.rows()) + 1; }
};

class ConeProgram {
 public:
  ConeProgram() = default;
  explicit ConeProgram(int num_vars);

  int num_vars() const { return num_vars_; }
  int num_ineq() const { return static_cast<int>(h_.size()); }
  int num_eq() const { return static_cast<int>(f_.size()); }
  int num_soc() const { return static_cast<int>(socs_.size()); }

  const Vector& objective() const { return c_; }
  double offset() const { return offset_; }
  const Matrix& G() const { return G_; }
  const Vector& h() const { return h_; }
  const Matrix& E() const { return E_; }
  const Vector& f() const { return f_; }
  const std::vector<SocBlock>& socs() const { return socs_; }

  void set_objective(const Vector& c, double offset = 0.0);
  // Each add returns the index of the new row / block.
  int add_leq(const Vector& row, double rhs);
  int add_geq(const Vector& row, double rhs) { return add_leq(-row, -rhs); }
  int add_eq(const Vector& row, double rhs);
  int add_soc(const Matrix& A, const Vector& b, const Vector& c, double d);

  // Throws InvalidProgram on inconsistent dimensions or non-finite data.
  void validate() const;

 private:
  int num_vars_ = 0;
  Vector c_;
  double offset_ = 0.0;
  Matrix G_;
  Vector h_;
  Matrix E_;
  Vector f_;
  std::vector<SocBlock> socs_;
};

// Adds ||(R x, (t - 1)/2)|| <= (t + 1)/2, i.e. ||R x||^2 <= t, where x is
// the variable range [x_start, x_start + R.cols()) and t the variable t_index.
int add_quadratic_epigraph(ConeProgram& prog, const Matrix& R, int x_start, int t_index);

struct SolverOptions {
  double feas_tol = 1e-8;
  double gap_tol = 1e-8;
  int max_iter = 200;
  // Objective below -unbounded_threshold with feasible iterates is reported
  // as Unbounded.
  double unbounded_threshold = 1e12;
  double regularization = 1e-10;
  int refinement_steps = 3;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kMaxIter };
std::string_view solve_status_name(SolveStatus s);

struct SolverResult {
  SolveStatus status = SolveStatus::kMaxIter;
  Vector z;                // primal point
  double objective = 0.0;  // c'z + offset
  // Multipliers for G z <= h (nonnegative), for E z == f (free; the
  // Lagrangian is c'z + u'(Gz - h) + y'(Ez - f) - sum_k w_k'(cone slack)),
  // and per SOC block in (t, v) order matching (c_k'z + d_k, A_k z + b_k).
  Vector ineq_duals;
  Vector eq_duals;
  std::vector<Vector> soc_duals;
  double primal_residual = 0.0;  // relative, see solver source
  double dual_residual = 0.0;
  double gap = 0.0;              // slack'dual at the returned point
  int iterations = 0;
  // Unbounded: improving primal ray. Infeasible: stacked (y, u, w) Farkas
  // multipliers. Empty otherwise.
  Vector certificate;
};

SolverResult solve(const ConeProgram& prog, const SolverOptions& opts = {});

}  // namespace hcvx

#endif  // HCVX_CONE_HPP_
