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


#include "ctlmon/config.hpp"

#include <openssl/evp.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "ctlmon/errors.hpp"

namespace ctlmon {
namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T>
T get_num(const pt::ptree& tree, const std::string& key, T fallback, bool required = false) {
  const auto v = tree.get_optional<std::string>(key);
  if (!v) {
    if (required) throw ConfigError("missing config key " + key);
    return fallback;
  }
  std::istringstream is(trim(*v));
  T out{};
  is >> out;
  if (is.fail() || !is.eof()) throw ConfigError("bad value for " + key + ": '" + *v + "'");
  if constexpr (std::is_unsigned_v<T>) {
    if (trim(*v).starts_with("-")) throw ConfigError("negative value for " + key);
  }
  return out;
}

double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  std::istringstream is(s);
  double v = 0;
  is >> v;
  if (is.fail() || !is.eof()) throw ConfigError("bad number '" + s + "'");
  return v;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw InvariantViolation("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::vector<SelectorPreset> parse_presets(std::string_view text) {
  std::vector<SelectorPreset> out;
  const std::string t = trim(text);
  if (t == "none" || t.empty()) return out;
  for (const auto& item : split_list(t)) {
    // L<level>:<type>:<end|noend>
    SelectorPreset p;
    int type = 0;
    char tail[8] = {};
    if (item.size() < 4 || item[0] != 'L' ||
        std::sscanf(item.c_str() + 1, "%d:%d:%7s", &p.level, &type, tail) != 3) {
      throw ConfigError("bad preset '" + item + "', expected L<level>:<type>:<end|noend>");
    }
    if (p.level < 1 || p.level > 3 || type < 1 || type > 4) throw ConfigError("bad preset '" + item + "'");
    const std::string_view end = tail;
    if (end != "end" && end != "noend") throw ConfigError("bad preset '" + item + "'");
    p.bit_type = static_cast<BitType>(type);
    p.check_end = end == "end";
    out.push_back(p);
  }
  return out;
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    if (item.empty()) throw ConfigError("empty entry in number list");
    out.push_back(parse_double(item));
  }
  return out;
}

Config parse_config(std::string_view text, const std::filesystem::path& path) {
  pt::ptree tree;
  std::istringstream is{std::string(text)};
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(path.string() + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  static const std::map<std::string, std::set<std::string>> kKnown{
      {"run", {"design", "stimulus", "seed", "out"}},
      {"campaign", {"case", "injections_per_bit", "injections", "budget_multiplier", "window"}},
      {"monitors", {"nets", "presets"}},
      {"area", {"a", "b", "c", "d", "e"}},
      {"noc", {"packets", "flits_per_packet", "unicast_latency", "payload_seed"}},
      {"report", {"budgets", "dr_target"}},
  };
  for (const auto& [section, keys] : tree) {
    auto it = kKnown.find(section);
    if (it == kKnown.end()) throw ConfigError("unknown config section [" + section + "]");
    for (const auto& kv : keys) {
      if (!it->second.contains(kv.first)) throw ConfigError("unknown config key " + section + "." + kv.first);
    }
  }
  const std::filesystem::path base = path.parent_path();
  auto rel = [&](const std::string& p) { return std::filesystem::path(p).is_absolute() ? std::filesystem::path(p) : base / p; };

  Config cfg;
  cfg.path = path;
  cfg.digest = sha256_hex(text);
  const auto design = tree.get_optional<std::string>("run.design");
  if (!design) throw ConfigError("missing config key run.design");
  cfg.design = parse_design_id(trim(*design));
  if (auto s = tree.get_optional<std::string>("run.stimulus"); s && !trim(*s).empty()) cfg.stimulus = rel(trim(*s));
  cfg.seed = get_num<std::uint64_t>(tree, "run.seed", 0, true);
  cfg.out_dir = rel(trim(tree.get<std::string>("run.out", "out")));

  const int c = get_num<int>(tree, "campaign.case", 1);
  if (c != 1 && c != 2) throw ConfigError("campaign.case must be 1 or 2");
  cfg.plan.fault_case = static_cast<FaultCase>(c);
  cfg.plan.injections_per_bit = get_num<unsigned>(tree, "campaign.injections_per_bit", 10);
  cfg.plan.injections = get_num<std::uint64_t>(tree, "campaign.injections", 1000);
  cfg.plan.budget_multiplier = get_num<double>(tree, "campaign.budget_multiplier", 2.0);
  if (!(cfg.plan.budget_multiplier >= 1.0)) throw ConfigError("campaign.budget_multiplier must be at least 1");
  cfg.plan.window = get_num<unsigned>(tree, "campaign.window", 10);
  if (cfg.plan.window == 0) throw ConfigError("campaign.window must be at least 1");
  cfg.plan.seed = cfg.seed;

  const std::string nets = trim(tree.get<std::string>("monitors.nets", "builtin"));
  if (nets != "builtin") {
    for (const auto& f : split_list(nets)) cfg.net_files.push_back(rel(f));
  }
  const std::string presets = trim(tree.get<std::string>("monitors.presets", "builtin"));
  if (presets != "builtin") cfg.presets = parse_presets(presets);

  cfg.area.place = get_num<double>(tree, "area.a", 1);
  cfg.area.transition = get_num<double>(tree, "area.b", 1);
  cfg.area.key_bit = get_num<double>(tree, "area.c", 2);
  cfg.area.pair = get_num<double>(tree, "area.d", 0.25);
  cfg.area.duplicated_bit = get_num<double>(tree, "area.e", 2);
  cfg.area.validate();

  cfg.noc.packets = get_num<unsigned>(tree, "noc.packets", cfg.noc.packets);
  cfg.noc.flits_per_packet = get_num<unsigned>(tree, "noc.flits_per_packet", cfg.noc.flits_per_packet);
  cfg.noc.unicast_latency = get_num<unsigned>(tree, "noc.unicast_latency", cfg.noc.unicast_latency);
  cfg.noc.payload_seed = get_num<std::uint64_t>(tree, "noc.payload_seed", cfg.noc.payload_seed);

  if (auto b = tree.get_optional<std::string>("report.budgets")) cfg.budgets = parse_number_list(*b);
  if (auto t = tree.get_optional<std::string>("report.dr_target")) cfg.dr_target = parse_double(trim(*t));
  return cfg;
}

Config load_config(const std::filesystem::path& path) { return parse_config(read_file(path), path); }

Stimulus load_stimulus(const Config& cfg) {
  if (cfg.design == DesignId::kRouter) return cfg.noc;
  if (!cfg.stimulus) return default_stimulus(cfg.design);
  if (!std::filesystem::exists(*cfg.stimulus)) throw IoError("stimulus file not found: " + cfg.stimulus->string());
  return parse_stimulus(cfg.design, read_file(*cfg.stimulus));
}

}  // namespace ctlmon
