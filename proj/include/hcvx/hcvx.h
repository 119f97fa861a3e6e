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

/* C interface to the hcvx library. Every object is an opaque handle owned by
 * the caller and released with the matching _free function. Functions that
 * can fail return an hcvx_status; the message of the most recent failure on
 * the calling thread is available from hcvx_last_error(). */

#ifndef HCVX_HCVX_H_
#define HCVX_HCVX_H_

#include <stdint.h>

#if defined(HCVX_BUILDING_LIBRARY)
#define HCVX_API __attribute__((visibility("default")))
#else
#define HCVX_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  HCVX_OK = 0,
  HCVX_ERR_PARSE = 1,          /* unreadable or malformed instance text */
  HCVX_ERR_INVALID_INPUT = 2,  /* well-formed but inconsistent data or arguments */
  HCVX_ERR_PRECONDITION = 3,   /* operation not defined for this instance */
  HCVX_ERR_CONDITION = 4,      /* exactness condition fails where one is required */
  HCVX_ERR_TIGHTEN = 5,        /* recovery could not close the gap */
  HCVX_ERR_SOLVER = 6,         /* cone solver did not reach optimality */
  HCVX_ERR_ORACLE = 7,         /* grid oracle has no box or no feasible point */
  HCVX_ERR_INTERNAL = 8
} hcvx_status;

typedef struct hcvx_instance hcvx_instance;
typedef struct hcvx_options hcvx_options;
typedef struct hcvx_report hcvx_report;

HCVX_API const char* hcvx_version(void);
HCVX_API const char* hcvx_status_name(hcvx_status status);
/* Message of the last failure on this thread, "" if none. */
HCVX_API const char* hcvx_last_error(void);
/* Library error name of the last failure (for example "PreconditionViolated"). */
HCVX_API const char* hcvx_last_error_code(void);

HCVX_API hcvx_status hcvx_instance_parse(const char* text, hcvx_instance** out);
HCVX_API hcvx_status hcvx_instance_read(const char* path, hcvx_instance** out);
HCVX_API void hcvx_instance_free(hcvx_instance* inst);
/* "uq", "qcqp", "balls" or "ilp". */
HCVX_API const char* hcvx_instance_kind(const hcvx_instance* inst);
HCVX_API int hcvx_instance_dim(const hcvx_instance* inst);
/* Canonical text; release with hcvx_string_free. */
HCVX_API hcvx_status hcvx_instance_write(const hcvx_instance* inst, char** out);
HCVX_API void hcvx_string_free(char* s);

HCVX_API hcvx_options* hcvx_options_create(void);
HCVX_API void hcvx_options_free(hcvx_options* opts);
HCVX_API hcvx_status hcvx_options_set_tol_rank(hcvx_options* opts, double v);
HCVX_API hcvx_status hcvx_options_set_tol_feas(hcvx_options* opts, double v);
HCVX_API hcvx_status hcvx_options_set_gap(hcvx_options* opts, double v);
HCVX_API hcvx_status hcvx_options_set_max_iter(hcvx_options* opts, int v);
HCVX_API hcvx_status hcvx_options_set_grid_h(hcvx_options* opts, double v);
HCVX_API hcvx_status hcvx_options_set_seed(hcvx_options* opts, uint64_t v);
HCVX_API hcvx_status hcvx_options_set_samples(hcvx_options* opts, int v);
/* "auto", "socp", "cr" or "cr2". */
HCVX_API hcvx_status hcvx_options_set_force_kind(hcvx_options* opts, const char* kind);
/* Fixed row slack for the grid oracle instead of the derived one. */
HCVX_API hcvx_status hcvx_options_set_oracle_feas_tol(hcvx_options* opts, double v);

/* opts may be NULL for defaults. On success *out receives a report. */
HCVX_API hcvx_status hcvx_solve(const hcvx_instance* inst, const hcvx_options* opts,
                                hcvx_report** out);
HCVX_API hcvx_status hcvx_approx(const hcvx_instance* inst, const hcvx_options* opts,
                                 hcvx_report** out);
HCVX_API hcvx_status hcvx_cheby(const hcvx_instance* inst, const hcvx_options* opts,
                                hcvx_report** out);
HCVX_API hcvx_status hcvx_oracle(const hcvx_instance* inst, const hcvx_options* opts,
                                 hcvx_report** out);
HCVX_API hcvx_status hcvx_reduce_ilp(const hcvx_instance* inst, hcvx_instance** out);

HCVX_API void hcvx_report_free(hcvx_report* rep);
/* Strings stay valid until the report is freed. */
HCVX_API const char* hcvx_report_json(const hcvx_report* rep);
HCVX_API const char* hcvx_report_text(const hcvx_report* rep);
/* 0 success, 3 certificate failure, 4 solver failure. */
HCVX_API int hcvx_report_exit_code(const hcvx_report* rep);
/* Headline value, verdict and ratio for summary tables; NaN / "" if absent. */
HCVX_API double hcvx_report_value(const hcvx_report* rep);
HCVX_API const char* hcvx_report_verdict(const hcvx_report* rep);
HCVX_API double hcvx_report_ratio(const hcvx_report* rep);

#ifdef __cplusplus
}
#endif

#endif /* HCVX_HCVX_H_ */
