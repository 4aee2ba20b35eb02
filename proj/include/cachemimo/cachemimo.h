// Copyright 2026 The cachemimo Authors
//
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


/* C interface to the cachemimo simulator. All functions are thread-safe on
 * distinct handles. On failure they return a nonzero cm_status and the
 * message is available from cm_last_error() on the calling thread. */
#ifndef CACHEMIMO_CACHEMIMO_H
#define CACHEMIMO_CACHEMIMO_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CM_API __declspec(dllexport)
#else
#define CM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cm_status {
  CM_OK = 0,
  CM_ERR_CONFIG = 2,
  CM_ERR_IO = 3,
  CM_ERR_DOMAIN = 4,
  CM_ERR_INFEASIBLE = 5,
  CM_ERR_NUMERIC = 6,
  CM_ERR_LOGIC = 7,
  CM_ERR_ARGUMENT = 8,
  CM_ERR_INTERNAL = 9
} cm_status;

typedef enum cm_format { CM_FORMAT_CSV = 0, CM_FORMAT_JSON = 1 } cm_format;

typedef struct cm_config cm_config;
typedef struct cm_result cm_result;

CM_API const char* cm_version(void);
/* Message of the last failure on this thread, or "" if none. */
CM_API const char* cm_last_error(void);

CM_API cm_status cm_config_load(const char* path, cm_config** out);
CM_API cm_status cm_config_from_json(const char* json_text, cm_config** out);
CM_API cm_status cm_config_apply_preset(cm_config* config, const char* preset);
CM_API cm_status cm_config_set_seed(cm_config* config, uint64_t seed);
/* Total Monte Carlo trials per sweep point. */
CM_API cm_status cm_config_set_trials(cm_config* config, long long trials);
CM_API cm_status cm_config_set_workers(cm_config* config, int workers);
CM_API void cm_config_free(cm_config* config);

/* Monte Carlo plus closed-form rows. */
CM_API cm_status cm_simulate(const cm_config* config, cm_result** out);
/* Closed-form rows only. */
CM_API cm_status cm_analyze(const cm_config* config, cm_result** out);

CM_API size_t cm_result_row_count(const cm_result* result);
CM_API cm_status cm_result_write(const cm_result* result, const char* path, cm_format format);
/* Caller releases *out with cm_string_free. */
CM_API cm_status cm_result_to_string(const cm_result* result, cm_format format, char** out);
CM_API void cm_result_free(cm_result* result);

/* Runs the built-in checks. *report (optional) receives one line per check;
 * release it with cm_string_free. Returns CM_ERR_LOGIC if any check fails. */
CM_API cm_status cm_selftest(char** report);

CM_API void cm_string_free(char* s);

/* Large-system resolvent trace G and its negative alpha derivative. */
CM_API cm_status cm_g_function(double rho_inv, double alpha, double* G, double* G_bar);

#ifdef __cplusplus
}
#endif

#endif /* CACHEMIMO_CACHEMIMO_H */
