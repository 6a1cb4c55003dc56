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


#include "ctlmon/ctlmon.h"

#include <fstream>
#include <sstream>
#include <string>

#include "ctlmon/commands.hpp"
#include "ctlmon/errors.hpp"

struct ctlmon_session {
  ctlmon::Config config;
  ctlmon::CommandOptions options;
};

struct ctlmon_matrix {
  ctlmon::DetectionMatrix matrix;
};

namespace {

thread_local std::string last_error;

static_assert(CTLMON_ERR_CONFIG == 1 && CTLMON_ERR_DESIGN == 2 && CTLMON_ERR_IO == 3);

template <typename F>
int guarded(F&& f) {
  last_error.clear();
  try {
    f();
    return CTLMON_OK;
  } catch (...) {
    return ctlmon::status_of(std::current_exception(), last_error);
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw ctlmon::ConfigError(std::string(what) + " is null");
}

}  // namespace

extern "C" {

const char* ctlmon_version(void) { return ctlmon::kToolVersion; }

const char* ctlmon_last_error(void) { return last_error.c_str(); }

int ctlmon_session_open(const char* config_path, ctlmon_session** out) {
  return guarded([&] {
    require(config_path, "config path");
    require(out, "output handle");
    *out = nullptr;
    auto s = std::make_unique<ctlmon_session>();
    s->config = ctlmon::load_config(config_path);
    *out = s.release();
  });
}

void ctlmon_session_free(ctlmon_session* session) { delete session; }

int ctlmon_session_set_out_dir(ctlmon_session* session, const char* dir) {
  return guarded([&] {
    require(session, "session");
    require(dir, "directory");
    session->options.out_dir = std::filesystem::path(dir);
  });
}

int ctlmon_session_set_workers(ctlmon_session* session, unsigned workers) {
  return guarded([&] {
    require(session, "session");
    if (workers == 0) throw ctlmon::ConfigError("workers must be at least 1");
    session->options.workers = workers;
  });
}

int ctlmon_session_set_budgets(ctlmon_session* session, const double* budgets, size_t count) {
  return guarded([&] {
    require(session, "session");
    if (count > 0) require(budgets, "budgets");
    session->options.budgets = std::vector<double>(budgets, budgets + count);
  });
}

int ctlmon_session_set_dr_target(ctlmon_session* session, double target) {
  return guarded([&] {
    require(session, "session");
    if (!(target >= 0 && target <= 1)) throw ctlmon::ConfigError("dr target must be in [0, 1]");
    session->options.dr_target = target;
  });
}

int ctlmon_session_set_matrices(ctlmon_session* session, const char* const* paths, size_t count) {
  return guarded([&] {
    require(session, "session");
    session->options.matrices.clear();
    for (size_t i = 0; i < count; ++i) {
      require(paths[i], "matrix path");
      session->options.matrices.emplace_back(paths[i]);
    }
  });
}

int ctlmon_session_set_progress(ctlmon_session* session, ctlmon_progress_fn fn, void* user) {
  return guarded([&] {
    require(session, "session");
    if (fn == nullptr) {
      session->options.progress = nullptr;
    } else {
      session->options.progress = [fn, user](size_t done, size_t total) { fn(done, total, user); };
    }
  });
}

int ctlmon_cmd_golden(ctlmon_session* session, uint64_t* golden_cycles) {
  return guarded([&] {
    require(session, "session");
    const auto s = ctlmon::cmd_golden(session->config, session->options);
    if (golden_cycles != nullptr) *golden_cycles = s.cycles;
  });
}

int ctlmon_cmd_campaign(ctlmon_session* session, size_t* rows) {
  return guarded([&] {
    require(session, "session");
    const auto m = ctlmon::cmd_campaign(session->config, session->options);
    if (rows != nullptr) *rows = m.rows.size();
  });
}

int ctlmon_cmd_report(ctlmon_session* session) {
  return guarded([&] {
    require(session, "session");
    ctlmon::cmd_report(session->config, session->options);
  });
}

int ctlmon_cmd_select(ctlmon_session* session) {
  return guarded([&] {
    require(session, "session");
    ctlmon::cmd_select(session->config, session->options);
  });
}

int ctlmon_matrix_load(const char* path, ctlmon_matrix** out) {
  return guarded([&] {
    require(path, "matrix path");
    require(out, "output handle");
    *out = nullptr;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ctlmon::IoError(std::string("cannot read ") + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    auto m = std::make_unique<ctlmon_matrix>();
    m->matrix = ctlmon::parse_matrix_csv(ss.str());
    *out = m.release();
  });
}

void ctlmon_matrix_free(ctlmon_matrix* matrix) { delete matrix; }

int ctlmon_matrix_rows(const ctlmon_matrix* matrix, size_t* rows) {
  return guarded([&] {
    require(matrix, "matrix");
    require(rows, "rows");
    *rows = matrix->matrix.rows.size();
  });
}

int ctlmon_matrix_detectors(const ctlmon_matrix* matrix, size_t* count) {
  return guarded([&] {
    require(matrix, "matrix");
    require(count, "count");
    *count = matrix->matrix.detectors.size();
  });
}

int ctlmon_matrix_detector_id(const ctlmon_matrix* matrix, size_t index, const char** id) {
  return guarded([&] {
    require(matrix, "matrix");
    require(id, "id");
    if (index >= matrix->matrix.detectors.size()) throw ctlmon::ConfigError("detector index out of range");
    *id = matrix->matrix.detectors[index].id.c_str();
  });
}

int ctlmon_matrix_add_duplication(ctlmon_matrix* matrix, double cost) {
  return guarded([&] {
    require(matrix, "matrix");
    if (!(cost >= 0)) throw ctlmon::ConfigError("cost must be non-negative");
    ctlmon::add_duplication_baseline(matrix->matrix, cost);
  });
}

int ctlmon_matrix_metrics(const ctlmon_matrix* matrix, const char* const* ids, size_t count,
                          ctlmon_metrics* out) {
  return guarded([&] {
    require(matrix, "matrix");
    require(out, "output");
    std::vector<std::string> subset;
    for (size_t i = 0; i < count; ++i) {
      require(ids[i], "detector id");
      subset.emplace_back(ids[i]);
    }
    const auto m = ctlmon::metrics(matrix->matrix, subset);
    *out = ctlmon_metrics{m.dr, m.dr_to, m.latency.value_or(0), m.latency ? 1 : 0, m.n_oe, m.n_tp, m.n_benign};
  });
}

}  // extern "C"
