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

// Command implementations behind the C API: each runs one pipeline on a
// parsed instance and produces a structured report plus its text rendering.

#ifndef HCVX_SRC_COMMANDS_HPP_
#define HCVX_SRC_COMMANDS_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hcvx/io.hpp"
#include "json.hpp"

namespace hcvx {

struct RunOptions {
  double tol_rank = 1e-8;
  double tol_feas = 1e-6;
  double gap = 1e-8;
  int max_iter = 200;
  double grid_h = 1e-2;
  std::uint64_t seed = 0;
  int samples = 1000;
  std::string force_kind = "auto";  // auto | socp | cr | cr2
  std::optional<double> oracle_feas_tol;
};

// Process exit codes shared with the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitCertificate = 3;
inline constexpr int kExitSolver = 4;

struct Report {
  nlohmann::ordered_json doc;
  std::vector<std::string> lines;
  int exit_code = kExitOk;
  // Headline numbers for batch tables; NaN when not applicable.
  double value = std::numeric_limits<double>::quiet_NaN();
  std::string verdict;
  double ratio = std::numeric_limits<double>::quiet_NaN();

  std::string text() const;
  std::string json() const;
};

Report run_solve(const Instance& inst, const RunOptions& opts);
Report run_approx(const Instance& inst, const RunOptions& opts);
Report run_cheby(const Instance& inst, const RunOptions& opts);
Report run_oracle(const Instance& inst, const RunOptions& opts);
Instance run_reduce_ilp(const Instance& inst);

}  // namespace hcvx

#endif  // HCVX_SRC_COMMANDS_HPP_
