// Copyright 2026 The ctlmon Authors
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


/* C interface of the ctlmon shared library.
 *
 * Every function returning int returns a ctlmon_status. On failure the
 * message of the last error on the calling thread is available from
 * ctlmon_last_error() until the next call on that thread. Handles are
 * opaque and must be released with their matching free function. */

#ifndef CTLMON_CTLMON_H_
#define CTLMON_CTLMON_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CTLMON_API __declspec(dllexport)
#else
#define CTLMON_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ctlmon_status {
  CTLMON_OK = 0,
  CTLMON_ERR_CONFIG = 1, /* bad input, unknown name, precondition violated */
  CTLMON_ERR_DESIGN = 2, /* design or oracle defect */
  CTLMON_ERR_IO = 3,     /* file missing, unreadable or unwritable */
} ctlmon_status;

typedef struct ctlmon_session ctlmon_session;
typedef struct ctlmon_matrix ctlmon_matrix;

typedef void (*ctlmon_progress_fn)(size_t done, size_t total, void* user);

typedef struct ctlmon_metrics {
  double dr;
  double dr_to;
  double latency; /* valid only when has_latency is nonzero */
  int has_latency;
  uint64_t n_oe;
  uint64_t n_tp;
  uint64_t n_benign;
} ctlmon_metrics;

CTLMON_API const char* ctlmon_version(void);
CTLMON_API const char* ctlmon_last_error(void);

/* Loads a config file. */
CTLMON_API int ctlmon_session_open(const char* config_path, ctlmon_session** out);
CTLMON_API void ctlmon_session_free(ctlmon_session* session);

CTLMON_API int ctlmon_session_set_out_dir(ctlmon_session* session, const char* dir);
CTLMON_API int ctlmon_session_set_workers(ctlmon_session* session, unsigned workers);
CTLMON_API int ctlmon_session_set_budgets(ctlmon_session* session, const double* budgets, size_t count);
CTLMON_API int ctlmon_session_set_dr_target(ctlmon_session* session, double target);
/* Replaces the report/select input list; count 0 restores the default. */
CTLMON_API int ctlmon_session_set_matrices(ctlmon_session* session, const char* const* paths, size_t count);
CTLMON_API int ctlmon_session_set_progress(ctlmon_session* session, ctlmon_progress_fn fn, void* user);

CTLMON_API int ctlmon_cmd_golden(ctlmon_session* session, uint64_t* golden_cycles);
CTLMON_API int ctlmon_cmd_campaign(ctlmon_session* session, size_t* rows);
CTLMON_API int ctlmon_cmd_report(ctlmon_session* session);
CTLMON_API int ctlmon_cmd_select(ctlmon_session* session);

/* Detection matrices written by ctlmon_cmd_campaign. */
CTLMON_API int ctlmon_matrix_load(const char* path, ctlmon_matrix** out);
CTLMON_API void ctlmon_matrix_free(ctlmon_matrix* matrix);
CTLMON_API int ctlmon_matrix_rows(const ctlmon_matrix* matrix, size_t* rows);
CTLMON_API int ctlmon_matrix_detectors(const ctlmon_matrix* matrix, size_t* count);
/* The returned string lives as long as the matrix. */
CTLMON_API int ctlmon_matrix_detector_id(const ctlmon_matrix* matrix, size_t index, const char** id);
/* Appends the register-duplication column. */
CTLMON_API int ctlmon_matrix_add_duplication(ctlmon_matrix* matrix, double cost);
CTLMON_API int ctlmon_matrix_metrics(const ctlmon_matrix* matrix, const char* const* ids, size_t count,
                                     ctlmon_metrics* out);

#ifdef __cplusplus
}
#endif

#endif /* CTLMON_CTLMON_H_ */
