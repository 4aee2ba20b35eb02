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


#include "cachemimo/cachemimo.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "cachemimo/config_io.hpp"
#include "cachemimo/errors.hpp"
#include "cachemimo/harness.hpp"
#include "cachemimo/precoding.hpp"
#include "cachemimo/selftest.hpp"

struct cm_config {
  cachemimo::sim::ExperimentPlan plan;
};

struct cm_result {
  std::vector<cachemimo::sim::ResultRow> rows;
};

namespace {

thread_local std::string g_last_error;

cm_status fail(cm_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
cm_status guarded(Fn&& fn) {
  using namespace cachemimo;
  g_last_error.clear();
  try {
    fn();
    return CM_OK;
  } catch (const ConfigError& e) {
    return fail(CM_ERR_CONFIG, e.what());
  } catch (const IoError& e) {
    return fail(CM_ERR_IO, e.what());
  } catch (const DomainError& e) {
    return fail(CM_ERR_DOMAIN, e.what());
  } catch (const InfeasibleError& e) {
    return fail(CM_ERR_INFEASIBLE, e.what());
  } catch (const NumericError& e) {
    return fail(CM_ERR_NUMERIC, e.what());
  } catch (const LogicError& e) {
    return fail(CM_ERR_LOGIC, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CM_ERR_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

cachemimo::sim::OutputFormat to_format(cm_format f) {
  if (f == CM_FORMAT_CSV) return cachemimo::sim::OutputFormat::kCsv;
  if (f == CM_FORMAT_JSON) return cachemimo::sim::OutputFormat::kJson;
  throw cachemimo::ConfigError("unknown output format");
}

}  // namespace

extern "C" {

const char* cm_version(void) { return "0.1.0"; }

const char* cm_last_error(void) { return g_last_error.c_str(); }

cm_status cm_config_load(const char* path, cm_config** out) {
  if (!path || !out) return fail(CM_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new cm_config{cachemimo::sim::load_plan(path)}; });
}

cm_status cm_config_from_json(const char* json_text, cm_config** out) {
  if (!json_text || !out) return fail(CM_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new cm_config{cachemimo::sim::plan_from_json(json_text)}; });
}

cm_status cm_config_apply_preset(cm_config* config, const char* preset) {
  if (!config || !preset) return fail(CM_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    auto plan = config->plan;
    cachemimo::sim::apply_preset(plan, preset);
    plan.validate();
    config->plan = std::move(plan);
  });
}

cm_status cm_config_set_seed(cm_config* config, uint64_t seed) {
  if (!config) return fail(CM_ERR_ARGUMENT, "null argument");
  config->plan.seed = seed;
  return CM_OK;
}

cm_status cm_config_set_trials(cm_config* config, long long trials) {
  if (!config) return fail(CM_ERR_ARGUMENT, "null argument");
  return guarded([&] { config->plan.set_total_trials(trials); });
}

cm_status cm_config_set_workers(cm_config* config, int workers) {
  if (!config) return fail(CM_ERR_ARGUMENT, "null argument");
  if (workers < 1) return fail(CM_ERR_CONFIG, "workers must be >= 1");
  config->plan.workers = workers;
  return CM_OK;
}

void cm_config_free(cm_config* config) { delete config; }

cm_status cm_simulate(const cm_config* config, cm_result** out) {
  if (!config || !out) return fail(CM_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new cm_result{cachemimo::sim::run_experiment(config->plan)}; });
}

cm_status cm_analyze(const cm_config* config, cm_result** out) {
  if (!config || !out) return fail(CM_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new cm_result{cachemimo::sim::run_analysis(config->plan)}; });
}

size_t cm_result_row_count(const cm_result* result) { return result ? result->rows.size() : 0; }

cm_status cm_result_write(const cm_result* result, const char* path, cm_format format) {
  if (!result || !path) return fail(CM_ERR_ARGUMENT, "null argument");
  return guarded([&] { cachemimo::sim::emit(result->rows, to_format(format), std::string(path)); });
}

cm_status cm_result_to_string(const cm_result* result, cm_format format, char** out) {
  if (!result || !out) return fail(CM_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = copy_string(cachemimo::sim::emit_string(result->rows, to_format(format))); });
}

void cm_result_free(cm_result* result) { delete result; }

cm_status cm_selftest(char** report) {
  if (report) *report = nullptr;
  bool ok = false;
  const cm_status s = guarded([&] {
    const auto r = cachemimo::run_selftest();
    ok = r.ok;
    if (report) *report = copy_string(r.text);
  });
  if (s != CM_OK) return s;
  return ok ? CM_OK : fail(CM_ERR_LOGIC, "selftest failed");
}

void cm_string_free(char* s) { std::free(s); }

cm_status cm_g_function(double rho_inv, double alpha, double* G, double* G_bar) {
  if (!G || !G_bar) return fail(CM_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    const auto g = cachemimo::precoding::g_function(rho_inv, alpha);
    *G = g.G;
    *G_bar = g.G_bar;
  });
}

}  // extern "C"
