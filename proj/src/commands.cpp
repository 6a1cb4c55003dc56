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


#include "ctlmon/commands.hpp"

#include <fstream>
#include <sstream>

#include "ctlmon/errors.hpp"

namespace ctlmon {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::error_code ec;
  fs::create_directories(p.parent_path(), ec);
  if (ec) throw IoError("cannot create " + p.parent_path().string() + ": " + ec.message());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  out << text;
  if (!out) throw IoError("write failed for " + p.string());
}

struct Prepared {
  Stimulus stimulus;
  std::unique_ptr<Design> design;
  MonitorBundle bundle;
  GoldenRun golden;
};

Prepared prepare(const Config& cfg) {
  Prepared p{load_stimulus(cfg), nullptr, {}, {}};
  DesignBuild b = build(p.stimulus);
  p.design = std::move(b.design);
  p.bundle = std::move(b.bundle);
  if (!cfg.net_files.empty()) {
    p.bundle.nets.clear();
    for (const auto& f : cfg.net_files) {
      for (auto& n : parse_nets(read_file(f))) {
        p.bundle.nets.push_back(std::make_shared<const NetDefinition>(std::move(n)));
      }
    }
  }
  if (cfg.presets) p.bundle.presets = *cfg.presets;
  p.golden = run_golden(*p.design, all_signal_paths(*p.design), oracle_output(p.stimulus));
  return p;
}

fs::path table_path(const fs::path& out, const SelectorPreset& preset) {
  return out / "tables" / (preset.name() + ".seqtable");
}

std::string stem_of(const fs::path& p) { return p.stem().string(); }

}  // namespace

std::string csv_header_comment(const Config& cfg) {
  return std::string("# ctlmon ") + kToolVersion + "\n# config_digest " + cfg.digest + "\n# seed " +
         std::to_string(cfg.seed) + "\n";
}

fs::path output_dir(const Config& cfg, const CommandOptions& opts) {
  return opts.out_dir ? *opts.out_dir : cfg.out_dir;
}

fs::path matrix_path(const Config& cfg, const CommandOptions& opts) {
  return output_dir(cfg, opts) /
         ("matrix_case" + std::to_string(static_cast<int>(cfg.plan.fault_case)) + ".csv");
}

GoldenSummary cmd_golden(const Config& cfg, const CommandOptions& opts) {
  const fs::path out = output_dir(cfg, opts);
  Prepared p = prepare(cfg);
  const std::string header = csv_header_comment(cfg);

  std::ostringstream trace;
  trace << header << "# design " << to_string(cfg.design) << "\n# golden_cycles " << p.golden.cycles << "\n";
  write_trace_csv(trace, p.golden.trace);
  write_file(out / "golden_trace.csv", trace.str());

  std::ostringstream outputs;
  outputs << header << "# design " << to_string(cfg.design) << "\n# golden_cycles " << p.golden.cycles
          << "\nindex,word\n";
  for (std::size_t i = 0; i < p.golden.outputs.words.size(); ++i) {
    outputs << i << "," << p.golden.outputs.words[i] << "\n";
  }
  write_file(out / "golden_outputs.csv", outputs.str());

  std::vector<NetDefinition> nets;
  for (const auto& n : p.bundle.nets) nets.push_back(*n);
  write_file(out / "nets.txt", serialize_nets(nets));

  GoldenSummary s;
  s.cycles = p.golden.cycles;
  s.output_words = p.golden.outputs.words.size();
  const MonitorSet ms = learn_monitors(*p.design, p.bundle, p.golden.trace);
  for (std::size_t i = 0; i < ms.sequences.size(); ++i) {
    const fs::path tp = table_path(out, p.bundle.presets[i]);
    write_file(tp, serialize_table(*ms.sequences[i].table));
    s.tables.push_back(tp.string());
  }
  return s;
}

DetectionMatrix cmd_campaign(const Config& cfg, const CommandOptions& opts) {
  const fs::path out = output_dir(cfg, opts);
  Prepared p = prepare(cfg);
  MonitorSet ms;
  ms.nets = p.bundle.nets;
  for (const auto& preset : p.bundle.presets) {
    const fs::path tp = table_path(out, preset);
    if (!fs::exists(tp)) throw IoError("missing sequence table " + tp.string() + " (run golden first)");
    auto table = std::make_shared<const SequenceTable>(parse_table(read_file(tp)));
    ms.sequences.push_back({preset.name(), std::move(table), preset.check_end});
  }

  const auto faults = plan_faults(*p.design, cfg.plan, p.golden.cycles);
  const Stimulus stim = p.stimulus;
  DetectionMatrix m = campaign([&stim] { return make_design(stim); }, faults, ms,
                               GoldenReference{p.golden.cycles, p.golden.outputs},
                               cfg.plan.budget_multiplier, opts.workers, opts.progress);
  annotate_costs(m, ms, cfg.area);
  m.meta.version = kToolVersion;
  m.meta.config_digest = cfg.digest;
  m.meta.seed = cfg.seed;
  m.meta.design = std::string(to_string(cfg.design));
  m.meta.fault_case = static_cast<int>(cfg.plan.fault_case);
  m.meta.golden_cycles = p.golden.cycles;
  m.meta.control_register_bits = p.design->control_register_bits();

  std::ostringstream csv;
  write_matrix_csv(csv, m);
  write_file(matrix_path(cfg, opts), csv.str());
  return m;
}

namespace {

std::vector<fs::path> inputs(const Config& cfg, const CommandOptions& opts) {
  if (!opts.matrices.empty()) return opts.matrices;
  return {matrix_path(cfg, opts)};
}

DetectionMatrix load_matrix(const Config& cfg, const fs::path& path) {
  if (!fs::exists(path)) throw IoError("matrix not found: " + path.string());
  DetectionMatrix m;
  try {
    m = parse_matrix_csv(read_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  add_duplication_baseline(m, duplication_cost(m.meta.control_register_bits, cfg.area));
  return m;
}

}  // namespace

std::vector<std::vector<MetricsRow>> cmd_report(const Config& cfg, const CommandOptions& opts) {
  const fs::path out = output_dir(cfg, opts);
  const std::vector<double> budgets = opts.budgets ? *opts.budgets : cfg.budgets;
  std::vector<std::vector<MetricsRow>> all;
  for (const auto& path : inputs(cfg, opts)) {
    const DetectionMatrix m = load_matrix(cfg, path);
    const auto rows = report_rows(m);
    const std::string header = csv_header_comment(cfg);
    std::ostringstream metrics_csv, benign_csv;
    write_metrics_csv(metrics_csv, rows, header);
    write_benign_csv(benign_csv, rows, header);
    write_file(out / (stem_of(path) + "_metrics.csv"), metrics_csv.str());
    write_file(out / (stem_of(path) + "_benign.csv"), benign_csv.str());
    if (!budgets.empty()) {
      std::ostringstream curve_csv;
      write_tradeoff_csv(curve_csv, tradeoff_curve(m, budgets), header);
      write_file(out / (stem_of(path) + "_tradeoff.csv"), curve_csv.str());
    }
    all.push_back(rows);
  }
  return all;
}

std::vector<SelectionRow> cmd_select(const Config& cfg, const CommandOptions& opts) {
  const fs::path out = output_dir(cfg, opts);
  const std::vector<double> budgets = opts.budgets ? *opts.budgets : cfg.budgets;
  const std::optional<double> target = opts.dr_target ? opts.dr_target : cfg.dr_target;
  if (budgets.empty() && !target) throw ConfigError("select needs budgets or a dr target");
  std::vector<SelectionRow> all;
  for (const auto& path : inputs(cfg, opts)) {
    const DetectionMatrix m = load_matrix(cfg, path);
    std::vector<SelectionRow> rows;
    for (double b : budgets) rows.push_back({"max-dr", b, select_detectors(m, SelectMode::kMaxDrUnderArea, b)});
    if (target) rows.push_back({"min-area", *target, select_detectors(m, SelectMode::kMinAreaUnderDr, *target)});
    std::ostringstream csv;
    csv << csv_header_comment(cfg) << "mode,bound,feasible,cost,dr,dr_to,max_dr,subset\n";
    for (const auto& r : rows) {
      csv << r.mode << "," << format_number(r.bound) << "," << (r.selection.feasible ? 1 : 0) << ","
          << format_number(r.selection.cost) << "," << format_number(r.selection.metrics.dr) << ","
          << format_number(r.selection.metrics.dr_to) << "," << format_number(r.selection.max_dr) << ","
          << join_ids(r.selection.subset) << "\n";
    }
    write_file(out / (stem_of(path) + "_selection.csv"), csv.str());
    all.insert(all.end(), rows.begin(), rows.end());
  }
  return all;
}

}  // namespace ctlmon
