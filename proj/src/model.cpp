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

#include "hcvx/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hcvx/error.hpp"

namespace hcvx {

double ExtReal::value() const {
  if (kind_ != Kind::kFinite) {
    throw Error(ErrorCode::kInvalidBounds, "value() on an infinite bound");
  }
  return value_;
}

double Bound::violation(double v) const {
  double worst = 0.0;
  if (lower.is_finite()) worst = std::max(worst, lower.value() - v);
  if (upper.is_finite()) worst = std::max(worst, v - upper.value());
  return worst;
}

void Bound::validate() const {
  if (lower.is_pos_inf() || upper.is_neg_inf()) {
    throw Error(ErrorCode::kInvalidBounds, "bound infinity on the wrong side");
  }
  if (lower.is_finite() && !std::isfinite(lower.value())) {
    throw Error(ErrorCode::kInvalidBounds, "non-finite lower bound value");
  }
  if (upper.is_finite() && !std::isfinite(upper.value())) {
    throw Error(ErrorCode::kInvalidBounds, "non-finite upper bound value");
  }
  if (lower.is_finite() && upper.is_finite() && lower.value() > upper.value()) {
    throw Error(ErrorCode::kInvalidBounds, "lower bound exceeds upper bound");
  }
}

namespace {

void require_vectors(const std::vector<Vector>& vs, std::size_t count, int n,
                     const char* what) {
  if (vs.size() != count) {
    throw Error(ErrorCode::kInvalidInstance,
                std::string(what) + ": expected " + std::to_string(count) +
                    " vectors, got " + std::to_string(vs.size()));
  }
  for (std::size_t k = 0; k < vs.size(); ++k) {
    if (vs[k].size() != n) {
      throw Error(ErrorCode::kInvalidInstance, std::string(what) + "[" +
                                                   std::to_string(k) +
                                                   "] has wrong length");
    }
    if (!vs[k].allFinite()) {
      throw Error(ErrorCode::kInvalidInstance,
                  std::string(what) + "[" + std::to_string(k) + "] not finite");
    }
  }
}

void require_index(int i, int p) {
  if (i < 0 || i > p) {
    throw Error(ErrorCode::kInvalidIndex, "function index " + std::to_string(i) +
                                              " outside 0.." + std::to_string(p));
  }
}

}  // namespace

void UqInstance::validate() const {
  if (n < 1) throw Error(ErrorCode::kInvalidInstance, "n must be positive");
  if (Q.order() != n) throw Error(ErrorCode::kInvalidInstance, "Q has wrong order");
  if (!Q.all_finite()) throw Error(ErrorCode::kInvalidInstance, "Q not finite");
  if (p() < 1) throw Error(ErrorCode::kInvalidInstance, "need at least one constraint");
  require_vectors(b, bounds.size() + 1, n, "b");
  if (d.size() != bounds.size() + 1) {
    throw Error(ErrorCode::kInvalidInstance, "d must have p+1 entries");
  }
  for (const auto& bd : bounds) bd.validate();
}

bool QcqpInstance::one_sided() const {
  return std::all_of(bounds.begin(), bounds.end(),
                     [](const Bound& bd) { return bd.lower.is_neg_inf(); });
}

void QcqpInstance::validate(double psd_tol) const {
  if (n < 1) throw Error(ErrorCode::kInvalidInstance, "n must be positive");
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    if (blocks[j].order() != n) {
      throw Error(ErrorCode::kInvalidInstance,
                  "block " + std::to_string(j + 1) + " has wrong order");
    }
    if (!is_psd(blocks[j], psd_tol)) {
      throw Error(ErrorCode::kNotPsd, "block " + std::to_string(j + 1) + " is not PSD");
    }
  }
  if (signs.rows() != p() + 1 || signs.cols() != m()) {
    throw Error(ErrorCode::kInvalidInstance, "sign matrix must be (p+1) x m");
  }
  for (Eigen::Index r = 0; r < signs.rows(); ++r) {
    for (Eigen::Index c2 = 0; c2 < signs.cols(); ++c2) {
      const int a = signs(r, c2);
      if (a < -1 || a > 1) {
        throw Error(ErrorCode::kInvalidInstance, "sign entries must be -1, 0 or 1");
      }
    }
  }
  require_vectors(b, bounds.size() + 1, n, "b");
  if (c.size() != bounds.size() + 1) {
    throw Error(ErrorCode::kInvalidInstance, "c must have p+1 entries");
  }
  for (const auto& bd : bounds) bd.validate();
}

void BallIntersection::validate() const {
  if (n < 1) throw Error(ErrorCode::kInvalidInstance, "n must be positive");
  if (centers.empty()) throw Error(ErrorCode::kInvalidInstance, "need at least one ball");
  require_vectors(centers, centers.size(), n, "centers");
  if (radii.size() != centers.size()) {
    throw Error(ErrorCode::kInvalidInstance, "one radius per center required");
  }
  for (double r : radii) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw Error(ErrorCode::kInvalidInstance, "radii must be positive and finite");
    }
  }
}

void IlpInstance::validate() const {
  if (c.size() < 1) throw Error(ErrorCode::kInvalidInstance, "ILP needs n >= 1");
  if (A.rows() != rhs.size() || (A.rows() > 0 && A.cols() != c.size())) {
    throw Error(ErrorCode::kInvalidInstance, "ILP dimensions inconsistent");
  }
  if (!c.allFinite() || !A.allFinite() || !rhs.allFinite()) {
    throw Error(ErrorCode::kInvalidInstance, "ILP data must be finite");
  }
}

double eval_f(const UqInstance& inst, int i, const Vector& x) {
  require_index(i, inst.p());
  if (x.size() != inst.n) throw Error(ErrorCode::kInvalidInput, "x has wrong length");
  const Matrix Q = inst.Q.dense();
  return x.dot(Q * x) + 2.0 * inst.b[i].dot(x) + inst.d[i];
}

FeasibilityReport check_feasibility(const UqInstance& inst, const Vector& x, double tol) {
  FeasibilityReport rep;
  for (int i = 1; i <= inst.p(); ++i) {
    const double v = inst.bounds[i - 1].violation(eval_f(inst, i, x));
    if (v > rep.worst_violation) {
      rep.worst_violation = v;
      rep.worst_index = i;
    }
  }
  rep.feasible = rep.worst_violation <= tol;
  return rep;
}

bool is_feasible(const UqInstance& inst, const Vector& x, double tol) {
  return check_feasibility(inst, x, tol).feasible;
}

double eval_g(const QcqpInstance& inst, int i, const Vector& x) {
  require_index(i, inst.p());
  if (x.size() != inst.n) throw Error(ErrorCode::kInvalidInput, "x has wrong length");
  double v = 2.0 * inst.b[i].dot(x) + inst.c[i];
  for (int j = 0; j < inst.m(); ++j) {
    const int a = inst.signs(i, j);
    if (a != 0) v += a * x.dot(inst.blocks[j].dense() * x);
  }
  return v;
}

FeasibilityReport check_feasibility(const QcqpInstance& inst, const Vector& x, double tol) {
  FeasibilityReport rep;
  for (int i = 1; i <= inst.p(); ++i) {
    const double v = inst.bounds[i - 1].violation(eval_g(inst, i, x));
    if (v > rep.worst_violation) {
      rep.worst_violation = v;
      rep.worst_index = i;
    }
  }
  rep.feasible = rep.worst_violation <= tol;
  return rep;
}

Normalization normalize_uq(const UqInstance& inst) {
  inst.validate();
  const auto eig = sym_eig(inst.Q);
  const double smallest = eig.values(inst.n - 1);
  if (!(smallest > 1e-12 * std::max(1.0, eig.values(0)))) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                "Q has eigenvalue " + std::to_string(smallest));
  }
  Normalization out;
  out.q_sqrt = eig.vectors * eig.values.cwiseSqrt().asDiagonal() * eig.vectors.transpose();
  out.q_inv_sqrt =
      eig.vectors * eig.values.cwiseSqrt().cwiseInverse().asDiagonal() * eig.vectors.transpose();
  out.offsets = inst.d;

  UqInstance& u = out.normalized;
  u.n = inst.n;
  u.Q = SymMatrix::identity(inst.n);
  u.d.assign(inst.d.size(), 0.0);
  for (const auto& bi : inst.b) u.b.push_back(out.q_inv_sqrt * bi);
  for (int i = 1; i <= inst.p(); ++i) {
    Bound bd = inst.bounds[i - 1];
    if (bd.lower.is_finite()) bd.lower = ExtReal::finite(bd.lower.value() - inst.d[i]);
    if (bd.upper.is_finite()) bd.upper = ExtReal::finite(bd.upper.value() - inst.d[i]);
    u.bounds.push_back(bd);
  }
  return out;
}

Translation translate_origin(const UqInstance& inst, const Vector& shift) {
  if (shift.size() != inst.n) throw Error(ErrorCode::kInvalidInput, "shift has wrong length");
  Translation out;
  out.shift = shift;
  out.instance = inst;
  const Vector q_shift = inst.Q.dense() * shift;
  for (int i = 0; i <= inst.p(); ++i) {
    out.instance.b[i] = inst.b[i] + q_shift;
    out.instance.d[i] = eval_f(inst, i, shift);
  }
  out.objective_offset = out.instance.d[0];
  return out;
}

UqInstance ilp_to_uq(const IlpInstance& ilp) {
  ilp.validate();
  const int n = ilp.n();
  const Vector e = Vector::Ones(n);
  UqInstance u;
  u.n = n;
  u.Q = SymMatrix::identity(n);
  // Stored b is half the linear coefficient because f_i uses 2 b_i'x.
  u.b.push_back(0.5 * (ilp.c - e));
  u.d.push_back(0.0);
  for (Eigen::Index i = 0; i < ilp.A.rows(); ++i) {
    u.b.push_back(0.5 * (ilp.A.row(i).transpose() - e));
    u.d.push_back(0.0);
    u.bounds.push_back(Bound::at_most(ilp.rhs(i)));
  }
  u.b.push_back(-0.5 * e);
  u.d.push_back(0.0);
  u.bounds.push_back(Bound::equal(0.0));
  for (int j = 0; j < n; ++j) {
    u.b.push_back(0.5 * (Vector::Unit(n, j) - e));
    u.d.push_back(0.0);
    u.bounds.push_back(Bound::between(0.0, 1.0));
  }
  return u;
}

UqInstance ilp_to_uq(const Vector& c, const Matrix& A, const Vector& rhs) {
  return ilp_to_uq(IlpInstance{c, A, rhs});
}

}  // namespace hcvx
