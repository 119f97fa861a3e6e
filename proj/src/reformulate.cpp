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

#include "hcvx/reformulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hcvx/error.hpp"

namespace hcvx {

Vector ReformulationMeta::layout(const Vector& x, const std::vector<double>& t,
                                 int num_vars) const {
  if (x.size() != n || t.size() != t_var.size()) {
    throw Error(ErrorCode::kInvalidInput, "layout: wrong number of x or t entries");
  }
  Vector z = Vector::Zero(num_vars);
  z.segment(x_start, n) = x;
  for (std::size_t k = 0; k < t.size(); ++k) z(t_var[k]) = t[k];
  return z;
}

int ReformulationMeta::t_of_block(int j) const {
  for (std::size_t k = 0; k < epigraph.size(); ++k) {
    if (epigraph[k] == j) return t_var[k];
  }
  return -1;
}

namespace {

std::vector<Vector> constraint_vectors(const std::vector<Vector>& b) {
  return std::vector<Vector>(b.begin() + 1, b.end());
}

std::string rank_reason(const char* what, int value, int limit, bool holds) {
  return std::string(what) + " = " + std::to_string(value) + (holds ? " <= " : " > ") +
         std::to_string(limit);
}

// Lifts every block that appears anywhere in the sign matrix; blocks outside
// the theorem set only enter with nonnegative coefficients in a minimization
// (objective) or not at all (constraints), so their epigraph is exact.
Relaxation build_lifted(const QcqpInstance& inst, std::vector<int> theorem_set) {
  inst.validate();
  const int n = inst.n;
  const int p = inst.p();
  const Eigen::MatrixXi signs = min_sense_signs(inst);
  const double obj_sign = inst.sense == Sense::kMax ? -1.0 : 1.0;

  Relaxation out;
  ReformulationMeta& meta = out.meta;
  meta.n = n;
  meta.x_start = 0;
  meta.lifted = std::move(theorem_set);
  meta.objective_sign = obj_sign;
  int next = n;
  for (int j = 0; j < inst.m(); ++j) {
    if ((signs.col(j).array() != 0).any()) {
      meta.epigraph.push_back(j + 1);
      meta.t_var.push_back(next++);
    }
  }
  const int N = next;
  ConeProgram prog(N);

  auto row_vector = [&](int i, double scale) {
    Vector row = Vector::Zero(N);
    row.head(n) = 2.0 * scale * inst.b[i];
    for (std::size_t k = 0; k < meta.epigraph.size(); ++k) {
      row(meta.t_var[k]) = signs(i, meta.epigraph[k] - 1);
    }
    return row;
  };
  // Row 0 of `signs` is already in min sense; b_0 and c_0 follow the sign.
  prog.set_objective(row_vector(0, obj_sign), obj_sign * inst.c[0]);

  meta.upper_row.assign(p, -1);
  meta.lower_row.assign(p, -1);
  meta.eq_row.assign(p, -1);
  for (int i = 1; i <= p; ++i) {
    const Bound& bd = inst.bounds[i - 1];
    const Vector row = row_vector(i, 1.0);
    if (bd.is_equality()) {
      meta.eq_row[i - 1] = prog.add_eq(row, bd.upper.value() - inst.c[i]);
      continue;
    }
    if (bd.upper.is_finite()) meta.upper_row[i - 1] = prog.add_leq(row, bd.upper.value() - inst.c[i]);
    if (bd.lower.is_finite()) meta.lower_row[i - 1] = prog.add_geq(row, bd.lower.value() - inst.c[i]);
  }
  for (std::size_t k = 0; k < meta.epigraph.size(); ++k) {
    const SymMatrix root = psd_sqrt(inst.blocks[meta.epigraph[k] - 1]);
    add_quadratic_epigraph(prog, root.dense(), 0, meta.t_var[k]);
  }
  out.program = std::move(prog);
  return out;
}

QcqpInstance single_block(const UqInstance& inst) {
  QcqpInstance q;
  q.n = inst.n;
  q.blocks = {inst.Q};
  q.signs = Eigen::MatrixXi::Ones(inst.p() + 1, 1);
  q.b = inst.b;
  q.c = inst.d;
  q.bounds = inst.bounds;
  q.sense = Sense::kMax;
  return q;
}

// lambda_min split of a symmetric matrix into a PSD part plus a multiple of
// the identity, keeping the multiple's sign in {-1, 0, 1}: the identity block
// is scaled by |lambda| (or left as I when lambda = 0, with sign 0).
struct IdentitySplit {
  SymMatrix shifted;  // M - lambda I
  SymMatrix ident;    // |lambda| I, or I when lambda == 0
  int sign = 0;       // sign(lambda)
  double scale = 1.0; // |lambda|, or 1 when lambda == 0
  double lambda = 0.0;
};

IdentitySplit identity_split(const SymMatrix& M) {
  const int n = M.order();
  IdentitySplit s;
  s.lambda = lambda_min(M);
  s.shifted = M - SymMatrix::identity(n) * s.lambda;
  s.sign = s.lambda > 0.0 ? 1 : (s.lambda < 0.0 ? -1 : 0);
  s.scale = s.lambda == 0.0 ? 1.0 : std::abs(s.lambda);
  s.ident = SymMatrix::identity(n) * s.scale;
  return s;
}

CertificateReport range_condition(const std::string& name, const SymMatrix& shifted,
                                  const std::vector<Vector>& vectors, double tol_rank) {
  const int n = shifted.order();
  CertificateReport rep;
  rep.condition = name;
  const SubspaceBasis range = range_basis(shifted, tol_rank);
  rep.value = union_dim(std::span<const SubspaceBasis>(&range, 1), vectors, tol_rank);
  rep.limit = n - 1;
  rep.holds = rep.value <= rep.limit;
  rep.reason = rank_reason("dim(span{rows} + R(A - lambda_min I))", rep.value, rep.limit,
                           rep.holds);
  return rep;
}

}  // namespace

CertificateReport check_as3(const UqInstance& inst, double tol_rank) {
  CertificateReport rep;
  rep.condition = "as3";
  const auto bs = constraint_vectors(inst.b);
  rep.value = numerical_rank(bs, tol_rank);
  rep.limit = inst.n - 1;
  const bool square = inst.p() == inst.n;
  rep.holds = rep.value <= rep.limit || square;
  if (rep.value <= rep.limit) {
    rep.reason = rank_reason("rank[b_1..b_p]", rep.value, rep.limit, true);
  } else if (square) {
    rep.reason = "p = n = " + std::to_string(inst.n);
  } else {
    rep.reason = rank_reason("rank[b_1..b_p]", rep.value, rep.limit, false) + " and p = " +
                 std::to_string(inst.p()) + " != n = " + std::to_string(inst.n);
  }
  return rep;
}

CertificateReport check_psd_rank(const UqInstance& inst, double tol_rank) {
  CertificateReport rep;
  rep.condition = "psd-rank";
  rep.value = numerical_rank(constraint_vectors(inst.b), tol_rank);
  rep.limit = numerical_rank(inst.Q.dense(), tol_rank) - 1;
  rep.holds = rep.value <= rep.limit;
  rep.reason = rank_reason("rank[b_1..b_p]", rep.value, rep.limit, rep.holds) + " (rank Q - 1)";
  return rep;
}

Relaxation build_socp_uq(const UqInstance& inst, double tol_rank) {
  inst.validate();
  if (!is_psd(inst.Q)) {
    throw Error(ErrorCode::kWrongShape, "Q is indefinite; use the split relaxation");
  }
  const QcqpInstance q = single_block(inst);
  Relaxation out = build_lifted(q, two_sided_lifted_set(q));
  out.certificate = is_pd(inst.Q) ? check_as3(inst, tol_rank) : check_psd_rank(inst, tol_rank);
  return out;
}

Eigen::MatrixXi min_sense_signs(const QcqpInstance& inst) {
  Eigen::MatrixXi s = inst.signs;
  if (inst.sense == Sense::kMax && s.rows() > 0) s.row(0) *= -1;
  return s;
}

std::vector<int> one_sided_lifted_set(const QcqpInstance& inst) {
  const Eigen::MatrixXi s = min_sense_signs(inst);
  std::vector<int> J;
  for (int j = 0; j < s.cols(); ++j) {
    if ((s.col(j).array() == -1).any()) J.push_back(j + 1);
  }
  return J;
}

std::vector<int> two_sided_lifted_set(const QcqpInstance& inst) {
  const Eigen::MatrixXi s = min_sense_signs(inst);
  std::vector<int> K;
  for (int j = 0; j < s.cols(); ++j) {
    bool in = s(0, j) == -1;
    for (int i = 1; i < s.rows(); ++i) in = in || s(i, j) != 0;
    if (in) K.push_back(j + 1);
  }
  return K;
}

CertificateReport check_union_condition(const QcqpInstance& inst, const std::vector<int>& set,
                                        const std::string& name, double tol_rank) {
  const int n = inst.n;
  CertificateReport rep;
  rep.condition = name;
  rep.limit = n - 1;
  const auto bs = constraint_vectors(inst.b);
  std::vector<SubspaceBasis> ranges, nulls;
  for (const auto& Q : inst.blocks) {
    ranges.push_back(range_basis(Q, tol_rank));
    nulls.push_back(null_basis(Q, tol_rank));
  }
  for (int j : set) {
    std::vector<SubspaceBasis> bases{nulls[j - 1]};
    for (int i = 1; i <= inst.m(); ++i) {
      if (i != j) bases.push_back(ranges[i - 1]);
    }
    const int dim = union_dim(bases, bs, tol_rank);
    rep.blocks.push_back(j);
    rep.dims.push_back(dim);
    rep.value = std::max(rep.value, dim);
  }
  rep.holds = rep.value <= rep.limit;
  if (set.empty()) {
    rep.reason = "no lifted blocks";
  } else {
    rep.reason = rank_reason("max_j dim(span{b} + N(Q_j) + R(Q_i, i != j))", rep.value,
                             rep.limit, rep.holds);
  }
  return rep;
}

Relaxation build_cr(const QcqpInstance& inst, double tol_rank) {
  if (!inst.one_sided()) {
    throw Error(ErrorCode::kWrongShape, "instance has a finite lower bound; use build_cr2");
  }
  std::vector<int> J = one_sided_lifted_set(inst);
  Relaxation out = build_lifted(inst, J);
  out.certificate = check_union_condition(inst, J, "c", tol_rank);
  return out;
}

Relaxation build_cr2(const QcqpInstance& inst, double tol_rank) {
  std::vector<int> K = two_sided_lifted_set(inst);
  Relaxation out = build_lifted(inst, K);
  out.certificate = check_union_condition(inst, K, "cc", tol_rank);
  return out;
}

QcqpInstance build_trs(const SymMatrix& A, const Vector& b) {
  const int n = A.order();
  if (b.size() != n) throw Error(ErrorCode::kInvalidInput, "b has wrong length");
  QcqpInstance q;
  q.n = n;
  q.sense = Sense::kMin;
  q.b = {b, Vector::Zero(n)};
  q.c = {0.0, 0.0};
  q.signs.resize(2, 2);
  if (is_psd(A)) {
    q.blocks = {A, SymMatrix::identity(n)};
    q.signs << 1, 0, 0, 1;
    q.bounds = {Bound::at_most(1.0)};
    return q;
  }
  const IdentitySplit s = identity_split(A);
  q.blocks = {s.shifted, s.ident};
  q.signs << 1, -1, 0, 1;
  q.bounds = {Bound::at_most(s.scale)};
  return q;
}

StructuredInstance build_etrs(const SymMatrix& A, const Vector& a, const Vector& x0, double u,
                              const std::vector<Vector>& rows, const std::vector<double>& beta,
                              double tol_rank) {
  const int n = A.order();
  if (a.size() != n || x0.size() != n) throw Error(ErrorCode::kInvalidInput, "vector length mismatch");
  if (!(u > 0.0)) throw Error(ErrorCode::kInvalidInput, "ball radius squared must be positive");
  if (rows.size() != beta.size()) throw Error(ErrorCode::kInvalidInput, "one rhs per row required");
  const IdentitySplit s = identity_split(A);
  const Matrix Ad = A.dense();

  // Coordinates y = x - x0 keep the ball row free of linear terms.
  StructuredInstance out;
  out.shift = x0;
  QcqpInstance& q = out.instance;
  q.n = n;
  q.sense = Sense::kMin;
  q.blocks = {s.shifted, s.ident};
  const int p = 1 + static_cast<int>(rows.size());
  q.signs = Eigen::MatrixXi::Zero(p + 1, 2);
  q.signs(0, 0) = 1;
  q.signs(0, 1) = s.sign;
  q.b.push_back(Ad * x0 + 0.5 * a);
  q.c.push_back(x0.dot(Ad * x0) + a.dot(x0));
  q.signs(1, 1) = 1;
  q.b.push_back(Vector::Zero(n));
  q.c.push_back(0.0);
  q.bounds.push_back(Bound::at_most(s.scale * u));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].size() != n) throw Error(ErrorCode::kInvalidInput, "linear row has wrong length");
    q.b.push_back(0.5 * rows[k]);
    q.c.push_back(0.0);
    q.bounds.push_back(Bound::at_most(beta[k] - rows[k].dot(x0)));
  }
  if (s.sign < 0) {
    out.certificate = range_condition("etrs", s.shifted, rows, tol_rank);
  } else {
    out.certificate.condition = "etrs";
    out.certificate.holds = true;
    out.certificate.limit = n - 1;
    out.certificate.reason = "A is PSD; the problem is already convex";
  }
  return out;
}

QcqpInstance ttrs_instance(const SymMatrix& A, const Vector& b, double alpha, double beta) {
  const int n = A.order();
  if (b.size() != n) throw Error(ErrorCode::kInvalidInput, "b has wrong length");
  if (!(alpha < beta)) throw Error(ErrorCode::kInvalidBounds, "need alpha < beta");
  const IdentitySplit s = identity_split(A * 0.5);
  QcqpInstance q;
  q.n = n;
  q.sense = Sense::kMin;
  q.blocks = {s.shifted, s.ident};
  q.signs.resize(2, 2);
  q.signs << 1, s.sign, 0, 1;
  q.b = {0.5 * b, Vector::Zero(n)};
  q.c = {0.0, 0.0};
  q.bounds = {Bound::between(s.scale * alpha, s.scale * beta)};
  return q;
}

Relaxation build_ttrs(const SymMatrix& A, const Vector& b, double alpha, double beta,
                      double tol_rank) {
  Relaxation out = build_cr2(ttrs_instance(A, b, alpha, beta), tol_rank);
  out.meta.shifts = {lambda_min(A)};
  return out;
}

QcqpInstance vtrs_instance(const SymMatrix& Q, const Vector& c, const std::vector<Ball>& inside,
                           const std::vector<Ball>& outside, const std::vector<Vector>& rows,
                           const std::vector<double>& rhs) {
  const int n = Q.order();
  if (c.size() != n) throw Error(ErrorCode::kInvalidInput, "c has wrong length");
  if (rows.size() != rhs.size()) throw Error(ErrorCode::kInvalidInput, "one rhs per row required");
  const IdentitySplit s = identity_split(Q);
  QcqpInstance q;
  q.n = n;
  q.sense = Sense::kMin;
  q.blocks = {s.shifted, s.ident};
  const int p = static_cast<int>(inside.size() + outside.size() + rows.size());
  q.signs = Eigen::MatrixXi::Zero(p + 1, 2);
  q.signs(0, 0) = 1;
  q.signs(0, 1) = s.sign;
  q.b.push_back(0.5 * c);
  q.c.push_back(0.0);
  int i = 1;
  // ||x - mu||^2 = x'x - 2 mu'x + ||mu||^2 compared with r^2.
  auto add_ball = [&](const Ball& ball, bool in) {
    if (ball.center.size() != n || !(ball.radius > 0.0)) {
      throw Error(ErrorCode::kInvalidInput, "ball needs a length-n center and positive radius");
    }
    q.signs(i++, 1) = 1;
    q.b.push_back(-s.scale * ball.center);
    q.c.push_back(s.scale * ball.center.squaredNorm());
    const double r2 = s.scale * ball.radius * ball.radius;
    q.bounds.push_back(in ? Bound::at_most(r2) : Bound::at_least(r2));
  };
  for (const auto& ball : inside) add_ball(ball, true);
  for (const auto& ball : outside) add_ball(ball, false);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].size() != n) throw Error(ErrorCode::kInvalidInput, "polytope row has wrong length");
    q.b.push_back(0.5 * rows[k]);
    q.c.push_back(0.0);
    q.bounds.push_back(Bound::at_most(rhs[k]));
    ++i;
  }
  return q;
}

Relaxation build_vtrs(const SymMatrix& Q, const Vector& c, const std::vector<Ball>& inside,
                      const std::vector<Ball>& outside, const std::vector<Vector>& rows,
                      const std::vector<double>& rhs, double tol_rank) {
  Relaxation out = build_cr2(vtrs_instance(Q, c, inside, outside, rows, rhs), tol_rank);
  std::vector<Vector> vectors = rows;
  for (const auto& ball : inside) vectors.push_back(ball.center);
  for (const auto& ball : outside) vectors.push_back(ball.center);
  const double lam = lambda_min(Q);
  out.meta.shifts = {lam};
  out.certificate =
      range_condition("vtrs", Q - SymMatrix::identity(Q.order()) * lam, vectors, tol_rank);
  return out;
}

void DispersionProblem::validate() const {
  const Eigen::Index n = x0.size();
  if (n < 1) throw Error(ErrorCode::kInvalidInstance, "dispersion: empty center");
  if (!(r0 > 0.0)) throw Error(ErrorCode::kInvalidInstance, "dispersion: radius must be positive");
  if (points.empty() || points.size() != weights.size()) {
    throw Error(ErrorCode::kInvalidInstance, "dispersion: one weight per point required");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != n) throw Error(ErrorCode::kInvalidInstance, "dispersion: point length");
    if (!(weights[i] > 0.0)) throw Error(ErrorCode::kInvalidInstance, "dispersion: weights must be positive");
  }
}

Relaxation build_wd(const DispersionProblem& wd, double tol_rank) {
  wd.validate();
  const int n = static_cast<int>(wd.x0.size());
  const int s = n;
  Relaxation out;
  ConeProgram prog(n + 1);
  Vector obj = Vector::Zero(n + 1);
  obj(s) = -1.0;
  prog.set_objective(obj);
  ReformulationMeta& meta = out.meta;
  meta.n = n;
  meta.objective_sign = -1.0;
  std::vector<Vector> offsets;
  // s <= w_i (r0^2 - 2 (z_i - x0)'y + ||z_i - x0||^2).
  for (std::size_t i = 0; i < wd.points.size(); ++i) {
    const Vector zi = wd.points[i] - wd.x0;
    offsets.push_back(zi);
    Vector row = Vector::Zero(n + 1);
    row.head(n) = 2.0 * wd.weights[i] * zi;
    row(s) = 1.0;
    meta.upper_row.push_back(prog.add_leq(row, wd.weights[i] * (wd.r0 * wd.r0 + zi.squaredNorm())));
    meta.lower_row.push_back(-1);
    meta.eq_row.push_back(-1);
  }
  Matrix A = Matrix::Zero(n, n + 1);
  A.leftCols(n).setIdentity();
  prog.add_soc(A, Vector::Zero(n), Vector::Zero(n + 1), wd.r0);
  out.program = std::move(prog);

  CertificateReport& rep = out.certificate;
  rep.condition = "wd";
  rep.value = numerical_rank(offsets, tol_rank);
  rep.limit = n - 1;
  rep.holds = rep.value <= rep.limit;
  rep.reason = rank_reason("rank[z_i - x0]", rep.value, rep.limit, rep.holds);
  return out;
}

double dispersion_value(const DispersionProblem& wd, const Vector& x) {
  double v = INFINITY;
  for (std::size_t i = 0; i < wd.points.size(); ++i) {
    v = std::min(v, wd.weights[i] * (x - wd.points[i]).squaredNorm());
  }
  return v;
}

SpectralSplit split_indefinite(const UqInstance& inst, double tol_rank) {
  inst.validate();
  const int n = inst.n;
  const auto eig = sym_eig(inst.Q);
  const double largest = eig.values.cwiseAbs().maxCoeff();
  Matrix Q1 = Matrix::Zero(n, n), Q2 = Matrix::Zero(n, n);
  SpectralSplit out;
  for (int k = 0; k < n; ++k) {
    const double lam = eig.values(k);
    const Vector v = eig.vectors.col(k);
    if (lam > tol_rank * largest) {
      Q1 += lam * v * v.transpose();
      ++out.rank_pos;
    } else if (lam < -tol_rank * largest) {
      Q2 -= lam * v * v.transpose();
      ++out.rank_neg;
    }
  }
  if (out.rank_pos == 0 || out.rank_neg == 0) {
    throw Error(ErrorCode::kWrongShape, "Q is semidefinite; no indefinite split");
  }
  QcqpInstance& q = out.instance;
  q.n = n;
  q.sense = Sense::kMax;
  q.blocks = {SymMatrix::symmetrized(Q1), SymMatrix::symmetrized(Q2)};
  q.signs.resize(inst.p() + 1, 2);
  q.signs.col(0).setOnes();
  q.signs.col(1).setConstant(-1);
  q.b = inst.b;
  q.c = inst.d;
  q.bounds = inst.bounds;
  return out;
}

Relaxation build_socp_indefinite(const UqInstance& inst, double tol_rank) {
  const SpectralSplit split = split_indefinite(inst, tol_rank);
  Relaxation out = build_cr2(split.instance, tol_rank);
  CertificateReport& rep = out.certificate;
  rep = CertificateReport{};
  rep.condition = "indefinite-rank";
  rep.value = numerical_rank(constraint_vectors(inst.b), tol_rank);
  rep.limit = std::min(split.rank_pos, split.rank_neg) - 1;
  rep.holds = rep.value <= rep.limit;
  rep.reason = rank_reason("rank[b_1..b_p]", rep.value, rep.limit, rep.holds) +
               " (min(r1, r2) - 1 with r1 = " + std::to_string(split.rank_pos) +
               ", r2 = " + std::to_string(split.rank_neg) + ")";
  return out;
}

QcqpInstance uq_as_qcqp(const UqInstance& inst, double tol_rank) {
  inst.validate();
  if (is_psd(inst.Q)) return single_block(inst);
  return split_indefinite(inst, tol_rank).instance;
}

}  // namespace hcvx
