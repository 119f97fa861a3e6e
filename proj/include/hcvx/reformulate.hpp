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

// Builders that map each supported problem class to a ConeProgram, together
// with executable checks of the rank/dimension conditions under which the
// cone relaxation is exact.

#ifndef HCVX_REFORMULATE_HPP_
#define HCVX_REFORMULATE_HPP_

#include <string>
#include <vector>

#include "hcvx/cone.hpp"
#include "hcvx/model.hpp"

namespace hcvx {

struct CertificateReport {
  std::string condition;  // short name of the checked condition
  bool holds = false;
  int value = 0;          // computed rank or largest union dimension
  int limit = 0;          // value must not exceed this
  // Per-block dimensions for the union-of-subspaces conditions.
  std::vector<int> blocks;  // 1-based block indices
  std::vector<int> dims;
  std::string reason;
};

// Where the pieces of the source problem live inside the cone program.
struct ReformulationMeta {
  int n = 0;
  int x_start = 0;
  std::vector<int> lifted;    // theorem set (J or K), 1-based block indices
  std::vector<int> epigraph;  // every block with a t variable, 1-based
  std::vector<int> t_var;     // program index of t for epigraph[k]
  // Per source constraint i = 1..p (stored at i-1): program row of the
  // upper / lower inequality or of the equality, -1 when absent.
  std::vector<int> upper_row;
  std::vector<int> lower_row;
  std::vector<int> eq_row;
  // Source objective = objective_sign * program objective.
  double objective_sign = 1.0;
  std::vector<double> shifts;  // eigenvalue shifts used by splitting builders

  Vector back_map(const Vector& z) const { return z.segment(x_start, n); }
  // Program point for x with t values listed in epigraph order.
  Vector layout(const Vector& x, const std::vector<double>& t, int num_vars) const;
  double source_objective(double program_objective) const {
    return objective_sign * program_objective;
  }
  int t_of_block(int j) const;  // -1 when block j has no t variable
};

struct Relaxation {
  ConeProgram program;
  ReformulationMeta meta;
  CertificateReport certificate;
};

// Uniform QCQP with PSD Q: variables (x, t), one cone x'Qx <= t. The
// certificate is the rank condition for PD Q and the rank(Q) - 1 bound for
// singular PSD Q. Indefinite Q throws WrongShape.
Relaxation build_socp_uq(const UqInstance& inst, double tol_rank = kDefaultRankTol);
// rank[b_1..b_p] <= n - 1 or p = n.
CertificateReport check_as3(const UqInstance& inst, double tol_rank = kDefaultRankTol);
// rank[b_1..b_p] <= rank(Q) - 1 for PSD Q.
CertificateReport check_psd_rank(const UqInstance& inst, double tol_rank = kDefaultRankTol);

// Sign matrix with the objective row negated for max-sense instances, so
// that every downstream rule reads a minimization.
Eigen::MatrixXi min_sense_signs(const QcqpInstance& inst);
// Blocks with a -1 anywhere in the (min-sense) sign matrix.
std::vector<int> one_sided_lifted_set(const QcqpInstance& inst);
// Blocks with a_0j = -1 or a nonzero constraint coefficient.
std::vector<int> two_sided_lifted_set(const QcqpInstance& inst);
// For each j in `set`: dim(span{b_1..b_p} + N(Q_j) + sum_{i != j} R(Q_i)),
// holds iff all are <= n - 1.
CertificateReport check_union_condition(const QcqpInstance& inst, const std::vector<int>& set,
                                        const std::string& name,
                                        double tol_rank = kDefaultRankTol);

// One-sided instance (every l_i = -inf). Throws WrongShape otherwise.
Relaxation build_cr(const QcqpInstance& inst, double tol_rank = kDefaultRankTol);
Relaxation build_cr2(const QcqpInstance& inst, double tol_rank = kDefaultRankTol);

// An instance of a structured family rewritten as a QcqpInstance, possibly
// in translated coordinates: source x = instance x + shift.
struct StructuredInstance {
  QcqpInstance instance;
  Vector shift;
  CertificateReport certificate;
};

// min x'Ax + 2b'x s.t. ||x||^2 <= 1.
QcqpInstance build_trs(const SymMatrix& A, const Vector& b);
// min x'Ax + a'x s.t. ||x - x0||^2 <= u, rows[i]'x <= beta[i]. Built around
// x0 so the certificate is the dimension bound on
// span{rows} + R(A - lambda_min(A) I).
StructuredInstance build_etrs(const SymMatrix& A, const Vector& a, const Vector& x0, double u,
                              const std::vector<Vector>& rows, const std::vector<double>& beta,
                              double tol_rank = kDefaultRankTol);
// min 1/2 x'Ax + b'x s.t. alpha <= x'x <= beta.
QcqpInstance ttrs_instance(const SymMatrix& A, const Vector& b, double alpha, double beta);
Relaxation build_ttrs(const SymMatrix& A, const Vector& b, double alpha, double beta,
                      double tol_rank = kDefaultRankTol);

struct Ball {
  Vector center;
  double radius = 0.0;
};
// min x'Qx + c'x s.t. ||x - mu_i|| <= r_i (inside), ||x - mu_j|| >= r_j
// (outside), rows[k]'x <= rhs[k].
QcqpInstance vtrs_instance(const SymMatrix& Q, const Vector& c, const std::vector<Ball>& inside,
                           const std::vector<Ball>& outside, const std::vector<Vector>& rows,
                           const std::vector<double>& rhs);
Relaxation build_vtrs(const SymMatrix& Q, const Vector& c, const std::vector<Ball>& inside,
                      const std::vector<Ball>& outside, const std::vector<Vector>& rows,
                      const std::vector<double>& rhs, double tol_rank = kDefaultRankTol);

// Weighted max-min dispersion over the ball ||x - x0|| <= r0. Program
// variables are (y, s) with x = y + x0; maximizes s.
struct DispersionProblem {
  Vector x0;
  double r0 = 0.0;
  std::vector<Vector> points;
  std::vector<double> weights;

  void validate() const;
};
Relaxation build_wd(const DispersionProblem& wd, double tol_rank = kDefaultRankTol);
// min_i w_i ||x - z_i||^2.
double dispersion_value(const DispersionProblem& wd, const Vector& x);

// Q = Q1 - Q2 from the strictly positive / strictly negative eigenpairs.
// Returned as a max-sense two-block instance with signs (1, -1) on every row.
struct SpectralSplit {
  QcqpInstance instance;
  int rank_pos = 0;
  int rank_neg = 0;
};
SpectralSplit split_indefinite(const UqInstance& inst, double tol_rank = kDefaultRankTol);
// Indefinite Q: two lifted blocks; certificate rank[b] <= min(r1, r2) - 1.
// Semidefinite Q throws WrongShape.
Relaxation build_socp_indefinite(const UqInstance& inst, double tol_rank = kDefaultRankTol);
// Any UQ as a one- or two-block QcqpInstance (PSD: single block Q).
QcqpInstance uq_as_qcqp(const UqInstance& inst, double tol_rank = kDefaultRankTol);

}  // namespace hcvx

#endif  // HCVX_REFORMULATE_HPP_
