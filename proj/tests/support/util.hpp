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

// Small helpers shared by the unit tests.

#ifndef HCVX_TESTS_SUPPORT_UTIL_HPP_
#define HCVX_TESTS_SUPPORT_UTIL_HPP_

#include <initializer_list>
#include <optional>
#include <vector>

#include "gtest/gtest.h"
#include "hcvx/error.hpp"
#include "hcvx/model.hpp"

namespace hcvx::testing {

inline Vector vec(std::initializer_list<double> v) {
  return Eigen::Map<const Vector>(v.begin(), static_cast<Eigen::Index>(v.size()));
}

inline SymMatrix diag(std::initializer_list<double> v) {
  return SymMatrix::symmetrized(Matrix(vec(v).asDiagonal()));
}

// Code of the hcvx::Error thrown by f, or nullopt when f returns normally.
template <class F>
std::optional<ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// The two-row instance max x^2 s.t. 1 <= x^2 + 2x <= 3, -1 <= x^2 - 2x <= 3:
// feasible set {1}, relaxation value 3.
inline UqInstance example_one() {
  UqInstance u;
  u.n = 1;
  u.Q = SymMatrix::identity(1);
  u.b = {vec({0.0}), vec({1.0}), vec({-1.0})};
  u.d = {0.0, 0.0, 0.0};
  u.bounds = {Bound::between(1.0, 3.0), Bound::between(-1.0, 3.0)};
  return u;
}

// Rows ||x - a_i||^2 <= r_i^2 written as x'x - 2 a_i'x + |a_i|^2 <= r_i^2.
inline UqInstance balls(const std::vector<Vector>& centers, const std::vector<double>& radii,
                        const Vector& b0) {
  UqInstance u;
  u.n = static_cast<int>(b0.size());
  u.Q = SymMatrix::identity(u.n);
  u.b = {b0};
  u.d = {0.0};
  for (std::size_t i = 0; i < centers.size(); ++i) {
    u.b.push_back(-centers[i]);
    u.d.push_back(centers[i].squaredNorm());
    u.bounds.push_back(Bound::at_most(radii[i] * radii[i]));
  }
  return u;
}

}  // namespace hcvx::testing

#endif  // HCVX_TESTS_SUPPORT_UTIL_HPP_
