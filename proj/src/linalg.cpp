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

#include "hcvx/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hcvx/error.hpp"

namespace hcvx {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidMatrix: return "InvalidMatrix";
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kNotPsd: return "NotPsd";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kInvalidIndex: return "InvalidIndex";
    case ErrorCode::kEmptyInterior: return "EmptyInterior";
    case ErrorCode::kInvalidProgram: return "InvalidProgram";
    case ErrorCode::kInvalidMultiplier: return "InvalidMultiplier";
    case ErrorCode::kWrongShape: return "WrongShape";
    case ErrorCode::kInvalidBounds: return "InvalidBounds";
    case ErrorCode::kConditionNotMet: return "ConditionNotMet";
    case ErrorCode::kTightenFailed: return "TightenFailed";
    case ErrorCode::kPreconditionViolated: return "PreconditionViolated";
    case ErrorCode::kInvalidInstance: return "InvalidInstance";
    case ErrorCode::kSolverFailure: return "SolverFailure";
    case ErrorCode::kEmptyFeasibleGrid: return "EmptyFeasibleGrid";
    case ErrorCode::kUnboundedBox: return "UnboundedBox";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

SymMatrix SymMatrix::identity(int n) {
  SymMatrix m(n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::from_upper(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kInvalidMatrix, "matrix is not square");
  }
  const int n = static_cast<int>(m.rows());
  SymMatrix out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) out.set(i, j, m(i, j));
  }
  return out;
}

SymMatrix SymMatrix::symmetrized(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kInvalidMatrix, "matrix is not square");
  }
  return from_upper(0.5 * (m + m.transpose()));
}

SymMatrix SymMatrix::from_packed(int n, std::vector<double> packed) {
  if (n < 0 || packed.size() != packed_size(n)) {
    throw Error(ErrorCode::kInvalidMatrix,
                "packed upper triangle has " + std::to_string(packed.size()) +
                    " entries, expected " + std::to_string(packed_size(n)));
  }
  SymMatrix out;
  out.n_ = n;
  out.packed_ = std::move(packed);
  return out;
}

Matrix SymMatrix::dense() const {
  Matrix m(n_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j) {
      m(i, j) = m(j, i) = (*this)(i, j);
    }
  }
  return m;
}

bool SymMatrix::all_finite() const {
  return std::all_of(packed_.begin(), packed_.end(),
                     [](double v) { return std::isfinite(v); });
}

SymMatrix SymMatrix::operator+(const SymMatrix& o) const {
  if (o.n_ != n_) throw Error(ErrorCode::kInvalidMatrix, "order mismatch");
  SymMatrix r = *this;
  for (std::size_t k = 0; k < packed_.size(); ++k) r.packed_[k] += o.packed_[k];
  return r;
}

SymMatrix SymMatrix::operator-(const SymMatrix& o) const { return *this + o * -1.0; }

SymMatrix SymMatrix::operator*(double s) const {
  SymMatrix r = *this;
  for (double& v : r.packed_) v *= s;
  return r;
}

EigenDecomposition sym_eig(const SymMatrix& m) {
  if (!m.all_finite()) {
    throw Error(ErrorCode::kInvalidMatrix, "non-finite entry");
  }
  const int n = m.order();
  EigenDecomposition out;
  if (n == 0) return out;
  // Householder tridiagonalization followed by implicit symmetric QR.
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.dense());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kInvalidMatrix, "eigensolver did not converge");
  }
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

double lambda_min(const SymMatrix& m) {
  const auto eig = sym_eig(m);
  return eig.values.size() == 0 ? 0.0 : eig.values(eig.values.size() - 1);
}

namespace {

double psd_scale(const Vector& values) {
  return values.size() == 0 ? 1.0 : std::max(1.0, values(0));
}

}  // namespace

SymMatrix psd_sqrt(const SymMatrix& m, double tol) {
  const auto eig = sym_eig(m);
  const int n = m.order();
  if (n == 0) return m;
  const double scale = psd_scale(eig.values);
  if (eig.values(n - 1) < -tol * scale) {
    throw Error(ErrorCode::kNotPsd, "smallest eigenvalue " +
                                        std::to_string(eig.values(n - 1)) +
                                        " below tolerance");
  }
  const Vector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  return SymMatrix::symmetrized(eig.vectors * roots.asDiagonal() *
                                eig.vectors.transpose());
}

bool is_psd(const SymMatrix& m, double tol) {
  if (m.order() == 0) return true;
  const auto eig = sym_eig(m);
  return eig.values(m.order() - 1) >= -tol * psd_scale(eig.values);
}

bool is_pd(const SymMatrix& m, double tol) {
  if (m.order() == 0) return true;
  const auto eig = sym_eig(m);
  return eig.values(m.order() - 1) > tol * psd_scale(eig.values);
}

int numerical_rank(const Matrix& columns, double tol_rel) {
  if (columns.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(columns);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > tol_rel * sv(0)) ++rank;
  }
  return rank;
}

int numerical_rank(std::span<const Vector> vectors, double tol_rel) {
  if (vectors.empty()) return 0;
  const Eigen::Index n = vectors.front().size();
  Matrix cols(n, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != n) {
      throw Error(ErrorCode::kInvalidInput, "vectors have different lengths");
    }
    cols.col(static_cast<Eigen::Index>(k)) = vectors[k];
  }
  return numerical_rank(cols, tol_rel);
}

namespace {

// Splits eigenvectors by |lambda| > tol_rel * max|lambda|.
std::pair<SubspaceBasis, SubspaceBasis> split_spectrum(const SymMatrix& m,
                                                       double tol_rel) {
  const int n = m.order();
  const auto eig = sym_eig(m);
  const double largest = n == 0 ? 0.0 : eig.values.cwiseAbs().maxCoeff();
  std::vector<int> range_idx, null_idx;
  for (int k = 0; k < n; ++k) {
    if (largest > 0.0 && std::abs(eig.values(k)) > tol_rel * largest) {
      range_idx.push_back(k);
    } else {
      null_idx.push_back(k);
    }
  }
  auto pick = [&](const std::vector<int>& idx) {
    SubspaceBasis b{n, Matrix(n, static_cast<Eigen::Index>(idx.size()))};
    for (std::size_t c = 0; c < idx.size(); ++c) {
      b.columns.col(static_cast<Eigen::Index>(c)) = eig.vectors.col(idx[c]);
    }
    return b;
  };
  return {pick(null_idx), pick(range_idx)};
}

}  // namespace

SubspaceBasis null_basis(const SymMatrix& m, double tol_rel) {
  return split_spectrum(m, tol_rel).first;
}

SubspaceBasis range_basis(const SymMatrix& m, double tol_rel) {
  return split_spectrum(m, tol_rel).second;
}

Matrix stack_columns(int ambient, std::span<const SubspaceBasis> bases,
                     std::span<const Vector> extra) {
  Eigen::Index total = static_cast<Eigen::Index>(extra.size());
  for (const auto& b : bases) {
    if (b.ambient != ambient || (b.dim() > 0 && b.columns.rows() != ambient)) {
      throw Error(ErrorCode::kInvalidInput, "basis ambient dimension mismatch");
    }
    total += b.dim();
  }
  Matrix out(ambient, total);
  Eigen::Index c = 0;
  for (const auto& b : bases) {
    if (b.dim() > 0) out.middleCols(c, b.dim()) = b.columns;
    c += b.dim();
  }
  for (const auto& v : extra) {
    if (v.size() != ambient) {
      throw Error(ErrorCode::kInvalidInput, "vector length differs from ambient dimension");
    }
    out.col(c++) = v;
  }
  return out;
}

int union_dim(std::span<const SubspaceBasis> bases, std::span<const Vector> extra,
              double tol_rel) {
  int ambient = -1;
  for (const auto& b : bases) {
    if (ambient >= 0 && b.ambient != ambient) {
      throw Error(ErrorCode::kInvalidInput, "bases live in different spaces");
    }
    ambient = b.ambient;
  }
  if (ambient < 0) {
    if (extra.empty()) return 0;
    ambient = static_cast<int>(extra.front().size());
  }
  return numerical_rank(stack_columns(ambient, bases, extra), tol_rel);
}

SubspaceBasis orthogonal_complement(int ambient, const Matrix& columns, double tol_rel) {
  if (columns.cols() > 0 && columns.rows() != ambient) {
    throw Error(ErrorCode::kInvalidInput, "column length differs from ambient dimension");
  }
  const int rank = numerical_rank(columns, tol_rel);
  if (rank == 0) return SubspaceBasis{ambient, Matrix::Identity(ambient, ambient)};
  // Left singular vectors beyond the numerical rank span the complement.
  Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeFullU);
  return SubspaceBasis{ambient, svd.matrixU().rightCols(ambient - rank)};
}

}  // namespace hcvx
