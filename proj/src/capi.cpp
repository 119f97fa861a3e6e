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

#define HCVX_BUILDING_LIBRARY
#include "hcvx/hcvx.h"

#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "commands.hpp"
#include "hcvx/error.hpp"
#include "hcvx/io.hpp"

struct hcvx_instance {
  hcvx::Instance value;
};

struct hcvx_options {
  hcvx::RunOptions value;
};

struct hcvx_report {
  hcvx::Report value;
  std::string json;
  std::string text;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_error_code;

hcvx_status status_of(hcvx::ErrorCode code) {
  using hcvx::ErrorCode;
  switch (code) {
    case ErrorCode::kParseError: return HCVX_ERR_PARSE;
    case ErrorCode::kEmptyInterior:
    case ErrorCode::kPreconditionViolated: return HCVX_ERR_PRECONDITION;
    case ErrorCode::kConditionNotMet: return HCVX_ERR_CONDITION;
    case ErrorCode::kTightenFailed: return HCVX_ERR_TIGHTEN;
    case ErrorCode::kSolverFailure: return HCVX_ERR_SOLVER;
    case ErrorCode::kEmptyFeasibleGrid:
    case ErrorCode::kUnboundedBox: return HCVX_ERR_ORACLE;
    default: return HCVX_ERR_INVALID_INPUT;
  }
}

// Runs f, translating exceptions into status codes and the thread error.
template <class F>
hcvx_status guarded(F&& f) {
  g_error.clear();
  g_error_code.clear();
  try {
    f();
    return HCVX_OK;
  } catch (const hcvx::Error& e) {
    g_error = e.what();
    g_error_code = std::string(hcvx::error_code_name(e.code()));
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
  } catch (const std::exception& e) {
    g_error = e.what();
  } catch (...) {
    g_error = "unknown failure";
  }
  g_error_code = "Internal";
  return HCVX_ERR_INTERNAL;
}

hcvx_status null_argument(const char* what) {
  g_error = std::string("null argument: ") + what;
  g_error_code = "InvalidInput";
  return HCVX_ERR_INVALID_INPUT;
}

hcvx_status set_positive(hcvx_options* opts, double v, double hcvx::RunOptions::*field) {
  if (opts == nullptr) return null_argument("opts");
  if (!(v > 0.0) || v == std::numeric_limits<double>::infinity()) {
    g_error = "option value must be positive and finite";
    g_error_code = "InvalidInput";
    return HCVX_ERR_INVALID_INPUT;
  }
  opts->value.*field = v;
  return HCVX_OK;
}

template <class Run>
hcvx_status run_command(const hcvx_instance* inst, const hcvx_options* opts, hcvx_report** out,
                        Run run) {
  if (inst == nullptr) return null_argument("inst");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  const hcvx::RunOptions defaults;
  const hcvx::RunOptions& o = opts != nullptr ? opts->value : defaults;
  return guarded([&] {
    auto* rep = new hcvx_report{run(inst->value, o), {}, {}};
    rep->json = rep->value.json();
    rep->text = rep->value.text();
    *out = rep;
  });
}

}  // namespace

extern "C" {

const char* hcvx_version(void) { return "1.0.0"; }

const char* hcvx_status_name(hcvx_status status) {
  switch (status) {
    case HCVX_OK: return "ok";
    case HCVX_ERR_PARSE: return "parse error";
    case HCVX_ERR_INVALID_INPUT: return "invalid input";
    case HCVX_ERR_PRECONDITION: return "precondition violated";
    case HCVX_ERR_CONDITION: return "condition not met";
    case HCVX_ERR_TIGHTEN: return "tightening failed";
    case HCVX_ERR_SOLVER: return "solver failure";
    case HCVX_ERR_ORACLE: return "oracle failure";
    case HCVX_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* hcvx_last_error(void) { return g_error.c_str(); }
const char* hcvx_last_error_code(void) { return g_error_code.c_str(); }

hcvx_status hcvx_instance_parse(const char* text, hcvx_instance** out) {
  if (text == nullptr) return null_argument("text");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new hcvx_instance{hcvx::parse_instance(text)}; });
}

hcvx_status hcvx_instance_read(const char* path, hcvx_instance** out) {
  if (path == nullptr) return null_argument("path");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new hcvx_instance{hcvx::read_instance_file(path)}; });
}

void hcvx_instance_free(hcvx_instance* inst) { delete inst; }

const char* hcvx_instance_kind(const hcvx_instance* inst) {
  if (inst == nullptr) return "";
  return hcvx::instance_kind(inst->value).data();
}

int hcvx_instance_dim(const hcvx_instance* inst) {
  if (inst == nullptr) return -1;
  return std::visit(
      [](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, hcvx::IlpInstance>) {
          return v.n();
        } else {
          return v.n;
        }
      },
      inst->value);
}

hcvx_status hcvx_instance_write(const hcvx_instance* inst, char** out) {
  if (inst == nullptr) return null_argument("inst");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    const std::string s = hcvx::write_instance(inst->value);
    char* buf = static_cast<char*>(std::malloc(s.size() + 1));
    if (buf == nullptr) throw std::bad_alloc();
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *out = buf;
  });
}

void hcvx_string_free(char* s) { std::free(s); }

hcvx_options* hcvx_options_create(void) { return new (std::nothrow) hcvx_options{}; }
void hcvx_options_free(hcvx_options* opts) { delete opts; }

hcvx_status hcvx_options_set_tol_rank(hcvx_options* opts, double v) {
  return set_positive(opts, v, &hcvx::RunOptions::tol_rank);
}
hcvx_status hcvx_options_set_tol_feas(hcvx_options* opts, double v) {
  return set_positive(opts, v, &hcvx::RunOptions::tol_feas);
}
hcvx_status hcvx_options_set_gap(hcvx_options* opts, double v) {
  return set_positive(opts, v, &hcvx::RunOptions::gap);
}
hcvx_status hcvx_options_set_grid_h(hcvx_options* opts, double v) {
  return set_positive(opts, v, &hcvx::RunOptions::grid_h);
}

hcvx_status hcvx_options_set_max_iter(hcvx_options* opts, int v) {
  if (opts == nullptr) return null_argument("opts");
  if (v < 1) {
    g_error = "max_iter must be at least 1";
    g_error_code = "InvalidInput";
    return HCVX_ERR_INVALID_INPUT;
  }
  opts->value.max_iter = v;
  return HCVX_OK;
}

hcvx_status hcvx_options_set_seed(hcvx_options* opts, uint64_t v) {
  if (opts == nullptr) return null_argument("opts");
  opts->value.seed = v;
  return HCVX_OK;
}

hcvx_status hcvx_options_set_samples(hcvx_options* opts, int v) {
  if (opts == nullptr) return null_argument("opts");
  if (v < 0) {
    g_error = "samples must be nonnegative";
    g_error_code = "InvalidInput";
    return HCVX_ERR_INVALID_INPUT;
  }
  opts->value.samples = v;
  return HCVX_OK;
}

hcvx_status hcvx_options_set_force_kind(hcvx_options* opts, const char* kind) {
  if (opts == nullptr) return null_argument("opts");
  if (kind == nullptr) return null_argument("kind");
  const std::string k = kind;
  if (k != "auto" && k != "socp" && k != "cr" && k != "cr2") {
    g_error = "force kind must be auto, socp, cr or cr2";
    g_error_code = "InvalidInput";
    return HCVX_ERR_INVALID_INPUT;
  }
  opts->value.force_kind = k;
  return HCVX_OK;
}

hcvx_status hcvx_options_set_oracle_feas_tol(hcvx_options* opts, double v) {
  if (opts == nullptr) return null_argument("opts");
  if (!(v >= 0.0) || v == std::numeric_limits<double>::infinity()) {
    g_error = "oracle slack must be nonnegative and finite";
    g_error_code = "InvalidInput";
    return HCVX_ERR_INVALID_INPUT;
  }
  opts->value.oracle_feas_tol = v;
  return HCVX_OK;
}

hcvx_status hcvx_solve(const hcvx_instance* inst, const hcvx_options* opts, hcvx_report** out) {
  return run_command(inst, opts, out, hcvx::run_solve);
}
hcvx_status hcvx_approx(const hcvx_instance* inst, const hcvx_options* opts, hcvx_report** out) {
  return run_command(inst, opts, out, hcvx::run_approx);
}
hcvx_status hcvx_cheby(const hcvx_instance* inst, const hcvx_options* opts, hcvx_report** out) {
  return run_command(inst, opts, out, hcvx::run_cheby);
}
hcvx_status hcvx_oracle(const hcvx_instance* inst, const hcvx_options* opts, hcvx_report** out) {
  return run_command(inst, opts, out, hcvx::run_oracle);
}

hcvx_status hcvx_reduce_ilp(const hcvx_instance* inst, hcvx_instance** out) {
  if (inst == nullptr) return null_argument("inst");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new hcvx_instance{hcvx::run_reduce_ilp(inst->value)}; });
}

void hcvx_report_free(hcvx_report* rep) { delete rep; }
const char* hcvx_report_json(const hcvx_report* rep) { return rep ? rep->json.c_str() : ""; }
const char* hcvx_report_text(const hcvx_report* rep) { return rep ? rep->text.c_str() : ""; }
int hcvx_report_exit_code(const hcvx_report* rep) { return rep ? rep->value.exit_code : -1; }

double hcvx_report_value(const hcvx_report* rep) {
  return rep ? rep->value.value : std::numeric_limits<double>::quiet_NaN();
}
const char* hcvx_report_verdict(const hcvx_report* rep) {
  return rep ? rep->value.verdict.c_str() : "";
}
double hcvx_report_ratio(const hcvx_report* rep) {
  return rep ? rep->value.ratio : std::numeric_limits<double>::quiet_NaN();
}

}  // extern "C"
