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


// Command-line front end over the C interface.
//
//   ctlmon golden   --config PATH [--out DIR]
//   ctlmon campaign --config PATH [--out DIR] [--workers N]
//   ctlmon report   --config PATH [--out DIR] [--budgets LIST] [--matrix PATH]...
//   ctlmon select   --config PATH [--out DIR] [--budgets LIST] [--dr-target X] [--matrix PATH]...
//
// Exit codes: 0 success, 1 configuration error, 2 design or oracle defect,
// 3 I/O error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "ctlmon/ctlmon.h"

namespace {

std::optional<std::vector<double>> parse_budgets(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, comma - start);
    if (item == "inf") {
      out.push_back(INFINITY);
    } else {
      char* end = nullptr;
      const double v = std::strtod(item.c_str(), &end);
      if (item.empty() || end != item.c_str() + item.size()) return std::nullopt;
      out.push_back(v);
    }
    start = comma + 1;
  }
  return out;
}

void progress(size_t done, size_t total, void*) {
  if (done == total || done % 250 == 0) std::fprintf(stderr, "\r%zu/%zu injections", done, total);
  if (done == total) std::fprintf(stderr, "\n");
}

int fail(int status) {
  std::fprintf(stderr, "ctlmon: %s\n", ctlmon_last_error());
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Control-flow error detection: golden runs, fault campaigns and reports"};
  app.set_version_flag("--version", std::string(ctlmon_version()));
  app.require_subcommand(1);

  std::string config, out, budgets;
  unsigned workers = 1;
  double dr_target = -1;
  std::vector<std::string> matrices;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "Config file")->required();
    cmd->add_option("--out", out, "Output directory (overrides the config)");
  };
  CLI::App* golden = app.add_subcommand("golden", "Golden run, trace and sequence tables");
  add_common(golden);
  CLI::App* campaign = app.add_subcommand("campaign", "Fault-injection campaign");
  add_common(campaign);
  campaign->add_option("--workers", workers, "Injection threads")->check(CLI::PositiveNumber);
  CLI::App* report = app.add_subcommand("report", "Metrics and trade-off curves");
  add_common(report);
  report->add_option("--budgets", budgets, "Comma-separated area budgets");
  report->add_option("--matrix", matrices, "Matrix CSV (repeatable)");
  CLI::App* select = app.add_subcommand("select", "Detector subset selection");
  add_common(select);
  select->add_option("--budgets", budgets, "Comma-separated area budgets");
  select->add_option("--dr-target", dr_target, "Minimum detection rate")->check(CLI::Range(0.0, 1.0));
  select->add_option("--matrix", matrices, "Matrix CSV (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : CTLMON_ERR_CONFIG;
  }

  ctlmon_session* s = nullptr;
  if (int st = ctlmon_session_open(config.c_str(), &s); st != CTLMON_OK) return fail(st);
  struct Closer {
    ctlmon_session* s;
    ~Closer() { ctlmon_session_free(s); }
  } closer{s};

  if (!out.empty()) {
    if (int st = ctlmon_session_set_out_dir(s, out.c_str()); st != CTLMON_OK) return fail(st);
  }
  if (!budgets.empty()) {
    const auto list = parse_budgets(budgets);
    if (!list) {
      std::fprintf(stderr, "ctlmon: bad --budgets list '%s'\n", budgets.c_str());
      return CTLMON_ERR_CONFIG;
    }
    if (int st = ctlmon_session_set_budgets(s, list->data(), list->size()); st != CTLMON_OK) return fail(st);
  }
  if (dr_target >= 0) {
    if (int st = ctlmon_session_set_dr_target(s, dr_target); st != CTLMON_OK) return fail(st);
  }
  if (!matrices.empty()) {
    std::vector<const char*> paths;
    for (const auto& m : matrices) paths.push_back(m.c_str());
    if (int st = ctlmon_session_set_matrices(s, paths.data(), paths.size()); st != CTLMON_OK) return fail(st);
  }

  int st = CTLMON_OK;
  if (golden->parsed()) {
    uint64_t cycles = 0;
    st = ctlmon_cmd_golden(s, &cycles);
    if (st == CTLMON_OK) std::fprintf(stderr, "golden run: %llu cycles\n", static_cast<unsigned long long>(cycles));
  } else if (campaign->parsed()) {
    ctlmon_session_set_workers(s, workers);
    ctlmon_session_set_progress(s, progress, nullptr);
    size_t rows = 0;
    st = ctlmon_cmd_campaign(s, &rows);
    if (st == CTLMON_OK) std::fprintf(stderr, "matrix: %zu rows\n", rows);
  } else if (report->parsed()) {
    st = ctlmon_cmd_report(s);
  } else if (select->parsed()) {
    st = ctlmon_cmd_select(s);
  }
  return st == CTLMON_OK ? 0 : fail(st);
}
