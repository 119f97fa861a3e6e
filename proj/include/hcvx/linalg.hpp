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

// Dense symmetric linear algebra used by the relaxation builders and the
// exactness certificates: eigendecomposition, PSD square roots, numerical
// rank and orthonormal bases of null/range spaces.

#ifndef HCVX_LINALG_HPP_
#define HCVX_LINALG_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hcvx {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Relative singular-value cutoff shared by every rank-based certificate.
inline constexpr double kDefaultRankTol = 1e-8;

// Symmetric matrix held as its packed upper triangle (row-major, i <= j), so
// the two halves can never disagree.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n) : n_(n), packed_(packed_size(n), 0.0) {}

  static SymMatrix identity(int n);
  static SymMatrix zero(int n) { return SymMatrix(n); }
  // Reads the upper triangle of `m`; the strictly lower part is ignored.
  static SymMatrix from_upper(const Matrix& m);
  // Averages m and m^T.
  static SymMatrix symmetrized(const Matrix& m);
  // Row-major upper triangle, length n(n+1)/2.
  static SymMatrix from_packed(int n, std::vector<double> packed);

  int order() const { return n_; }
  double operator()(int i, int j) const { return packed_[index(i, j)]; }
  void set(int i, int j, double v) { packed_[index(i, j)] = v; }
  const std::vector<double>& packed() const { return packed_; }

  Matrix dense() const;
  bool all_finite() const;

  SymMatrix operator+(const SymMatrix& o) const;
  SymMatrix operator-(const SymMatrix& o) const;
  SymMatrix operator*(double s) const;

  static std::size_t packed_size(int n) {
    return static_cast<std::size_t>(n) * (n + 1) / 2;
  }

 private:
  std::size_t index(int i, int j) const {
    if (i > j) std::swap(i, j);
    // Row i of the upper triangle starts after rows 0..i-1.
    return static_cast<std::size_t>(i) * n_ - static_cast<std::size_t>(i) * (i - 1) / 2 + (j - i);
  }

  int n_ = 0;
  std::vector<double> packed_;
};

// Orthonormal columns spanning a subspace of R^n. Zero columns means {0}.
struct SubspaceBasis {
  int ambient = 0;
  Matrix columns;  // ambient x dim

  int dim() const { return static_cast<int>(columns.cols()); }
};

struct EigenDecomposition {
  Vector values;   // descending
  Matrix vectors;  // column k pairs with values(k)
};

// Throws InvalidMatrix on non-finite input.
EigenDecomposition sym_eig(const SymMatrix& m);

double lambda_min(const SymMatrix& m);

// Square root of a PSD matrix. Eigenvalues in [-tol*scale, 0) are clamped to
// zero, scale = max(1, largest eigenvalue); anything more negative is NotPsd.
SymMatrix psd_sqrt(const SymMatrix& m, double tol = 1e-9);

bool is_psd(const SymMatrix& m, double tol = 1e-9);
bool is_pd(const SymMatrix& m, double tol = 1e-9);

// Number of singular values above tol_rel times the largest one.
int numerical_rank(std::span<const Vector> vectors, double tol_rel = kDefaultRankTol);
int numerical_rank(const Matrix& columns, double tol_rel = kDefaultRankTol);

SubspaceBasis null_basis(const SymMatrix& m, double tol_rel = kDefaultRankTol);
SubspaceBasis range_basis(const SymMatrix& m, double tol_rel = kDefaultRankTol);

// Dimension of span(union of bases and extra vectors).
int union_dim(std::span<const SubspaceBasis> bases, std::span<const Vector> extra,
              double tol_rel = kDefaultRankTol);

// Orthonormal basis of the orthogonal complement of span(columns).
SubspaceBasis orthogonal_complement(int ambient, const Matrix& columns,
                                    double tol_rel = kDefaultRankTol);

// Stacks the columns of every basis and every extra vector into one matrix.
Matrix stack_columns(int ambient, std::span<const SubspaceBasis> bases,
                     std::span<const Vector> extra);

}  // namespace hcvx

#endif  // HCVX_LINALG_HPP_
