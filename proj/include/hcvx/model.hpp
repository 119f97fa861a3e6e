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

// Problem-instance data model: uniform QCQPs, structured QCQPs, ball
// intersections and binary ILPs, with evaluation and the coordinate changes
// used throughout the pipeline.

#ifndef HCVX_MODEL_HPP_
#define HCVX_MODEL_HPP_

#include <limits>
#include <vector>

#include "hcvx/linalg.hpp"

namespace hcvx {

inline constexpr double kDefaultFeasTol = 1e-6;

// Extended real: finite, -inf or +inf. Infinite values never enter arithmetic;
// callers branch on the tag.
class ExtReal {
 public:
  enum class Kind { kFinite, kNegInf, kPosInf };

  constexpr ExtReal() = default;
  static constexpr ExtReal finite(double v) { return ExtReal(Kind::kFinite, v); }
  static constexpr ExtReal neg_inf() { return ExtReal(Kind::kNegInf, 0.0); }
  static constexpr ExtReal pos_inf() { return ExtReal(Kind::kPosInf, 0.0); }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_finite() const { return kind_ == Kind::kFinite; }
  constexpr bool is_neg_inf() const { return kind_ == Kind::kNegInf; }
  constexpr bool is_pos_inf() const { return kind_ == Kind::kPosInf; }
  // Only valid for finite values.
  double value() const;
  // +-infinity for the infinite tags; for comparisons and printing only.
  constexpr double as_double() const {
    switch (kind_) {
      case Kind::kNegInf: return -std::numeric_limits<double>::infinity();
      case Kind::kPosInf: return std::numeric_limits<double>::infinity();
      default: return value_;
    }
  }

  friend constexpr bool operator==(const ExtReal&, const ExtReal&) = default;

 private:
  constexpr ExtReal(Kind k, double v) : kind_(k), value_(v) {}
  Kind kind_ = Kind::kFinite;
  double value_ = 0.0;
};

// lower <= value <= upper.
struct Bound {
  ExtReal lower = ExtReal::neg_inf();
  ExtReal upper = ExtReal::pos_inf();

  static Bound at_most(double u) { return {ExtReal::neg_inf(), ExtReal::finite(u)}; }
  static Bound at_least(double l) { return {ExtReal::finite(l), ExtReal::pos_inf()}; }
  static Bound between(double l, double u) { return {ExtReal::finite(l), ExtReal::finite(u)}; }
  static Bound equal(double v) { return between(v, v); }
  static Bound free() { return {}; }

  bool is_equality() const {
    return lower.is_finite() && upper.is_finite() && lower.value() == upper.value();
  }
  // Amount by which v leaves [lower, upper]; 0 inside.
  double violation(double v) const;
  // Throws InvalidBounds when lower > upper or a bound is a wrong-sided infinity.
  void validate() const;

  friend bool operator==(const Bound&, const Bound&) = default;
};

// max f_0(x) s.t. l_i <= f_i(x) <= u_i, f_i(x) = x'Qx + 2 b_i'x + d_i.
// Index 0 of b and d is the objective.
struct UqInstance {
  int n = 0;
  SymMatrix Q;
  std::vector<Vector> b;
  std::vector<double> d;
  std::vector<Bound> bounds;

  int p() const { return static_cast<int>(bounds.size()); }
  void validate() const;
};

enum class Sense { kMin, kMax };

// g_i(x) = sum_j a_ij x'Q_j x + 2 b_i'x + c_i with Q_j PSD, a_ij in {-1,0,1}.
// Row 0 of signs/b/c is the objective, optimized in `sense`.
struct QcqpInstance {
  int n = 0;
  std::vector<SymMatrix> blocks;
  Eigen::MatrixXi signs;  // (p+1) x m
  std::vector<Vector> b;
  std::vector<double> c;
  std::vector<Bound> bounds;
  Sense sense = Sense::kMin;

  int p() const { return static_cast<int>(bounds.size()); }
  int m() const { return static_cast<int>(blocks.size()); }
  bool one_sided() const;
  void validate(double psd_tol = 1e-9) const;
};

// Omega = { x : ||x - a_i|| <= r_i }.
struct BallIntersection {
  int n = 0;
  std::vector<Vector> centers;
  std::vector<double> radii;

  int p() const { return static_cast<int>(centers.size()); }
  void validate() const;
};

// max c'x s.t. A x <= rhs, x binary.
struct IlpInstance {
  Vector c;
  Matrix A;
  Vector rhs;

  int n() const { return static_cast<int>(c.size()); }
  void validate() const;
};

struct FeasibilityReport {
  bool feasible = true;
  double worst_violation = 0.0;
  int worst_index = -1;  // 1-based constraint index, -1 when none violated
};

double eval_f(const UqInstance& inst, int i, const Vector& x);
FeasibilityReport check_feasibility(const UqInstance& inst, const Vector& x,
                                    double tol = kDefaultFeasTol);
bool is_feasible(const UqInstance& inst, const Vector& x, double tol = kDefaultFeasTol);

double eval_g(const QcqpInstance& inst, int i, const Vector& x);
FeasibilityReport check_feasibility(const QcqpInstance& inst, const Vector& x,
                                    double tol = kDefaultFeasTol);

// y = Q^{1/2} x turns the instance into one with Q = I and zero offsets;
// bounds absorb the offsets d_i.
struct Normalization {
  UqInstance normalized;
  Matrix q_sqrt;
  Matrix q_inv_sqrt;
  std::vector<double> offsets;  // d_i of the source instance

  Vector to_original(const Vector& y) const { return q_inv_sqrt * y; }
  Vector to_normalized(const Vector& x) const { return q_sqrt * x; }
};
Normalization normalize_uq(const UqInstance& inst);

// Instance in coordinates x' = x - shift: f'_i(x') = f_i(x' + shift).
struct Translation {
  UqInstance instance;
  Vector shift;
  double objective_offset = 0.0;  // f_0(shift)
};
Translation translate_origin(const UqInstance& inst, const Vector& shift);

// Strictly feasible point of a one-sided convex instance (Q PD, every l_i =
// -inf), found by maximizing the common slack s in f_i(x) + s <= u_i. Rows
// with u_i = +inf impose nothing. Throws EmptyInterior when the best slack is
// at most `tol`.
struct InteriorPoint {
  Vector x;
  double margin = 0.0;  // min_i u_i - f_i(x); +inf without finite rows
};
InteriorPoint find_interior_point(const UqInstance& inst, double tol = 1e-9);

UqInstance ilp_to_uq(const IlpInstance& ilp);
UqInstance ilp_to_uq(const Vector& c, const Matrix& A, const Vector& rhs);

}  // namespace hcvx

#endif  // HCVX_MODEL_HPP_
