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

#include "ctlmon/sequence.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "ctlmon/errors.hpp"

namespace ctlmon {

std::string BitSelector::label() const {
  return "L" + std::to_string(level) + "(" + std::to_string(static_cast<int>(bit_type)) + ")";
}

BitSelector select_bits(const Design& design, int level, BitType bit_type,
                        const std::map<std::string, BitRange>* used_ranges) {
  if (level < 1 || level > 3) throw ConfigError("hierarchy level must be 1, 2 or 3");
  const int type = static_cast<int>(bit_type);
  if (type < 1 || type > 4) throw ConfigError("bit selection type must be 1..4");
  if (bit_type == BitType::kUsedMsb && used_ranges == nullptr) {
    throw ConfigError("bit selection type 3 needs used bit ranges");
  }
  const auto& ids = design.level_signals(level);
  if (ids.empty()) {
    throw ConfigError("design " + std::string(to_string(design.id())) +
                      " has no control signals at level " + std::to_string(level));
  }
  BitSelector sel;
  sel.level = level;
  sel.bit_type = bit_type;
  for (SignalId id : ids) {
    const SignalInfo& s = design.signals()[id];
    switch (bit_type) {
      case BitType::kAllBits:
        for (unsigned b = s.width; b-- > 0;) sel.entries.push_back({s.path, b});
        break;
      case BitType::kMsb:
        sel.entries.push_back({s.path, s.width - 1});
        break;
      case BitType::kUsedMsb: {
        auto it = used_ranges->find(s.path);
        if (it == used_ranges->end()) throw ConfigError("no used bit range for " + s.path);
        sel.entries.push_back({s.path, std::min(it->second.hi, s.width - 1)});
        break;
      }
      case BitType::kLsb:
        sel.entries.push_back({s.path, 0});
        break;
    }
  }
  if (sel.width() > kMaxBitWidth) {
    throw ConfigError("state key of " + std::to_string(sel.width()) + " bits exceeds 128");
  }
  return sel;
}

std::map<std::string, BitRange> used_ranges_from_trace(const Trace& trace) {
  std::vector<u128> seen(trace.watched.size(), 0);
  for (const auto& row : trace.rows) {
    for (std::size_t i = 0; i < row.values.size() && i < seen.size(); ++i) {
      seen[i] |= row.values[i].value();
    }
  }
  std::map<std::string, BitRange> out;
  for (std::size_t i = 0; i < trace.watched.size(); ++i) {
    unsigned hi = 0;
    for (unsigned b = 0; b < 128; ++b) {
      if ((seen[i] >> b) & 1) hi = b;
    }
    out[trace.watched[i].path] = BitRange{0, hi};
  }
  return out;
}

std::size_t KeyPairHash::operator()(const KeyPair& k) const noexcept {
  auto mix = [](std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
  };
  std::uint64_t h = k.has_prev ? 0x9e3779b97f4a7c15ULL : 0;
  h = mix(h ^ static_cast<std::uint64_t>(k.prev));
  h = mix(h ^ static_cast<std::uint64_t>(k.prev >> 64));
  h = mix(h ^ static_cast<std::uint64_t>(k.next));
  h = mix(h ^ static_cast<std::uint64_t>(k.next >> 64));
  return static_cast<std::size_t>(h);
}

std::vector<KeyPair> SequenceTable::sorted_pairs() const {
  std::vector<KeyPair> v(pairs.begin(), pairs.end());
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<u128> keys_from_trace(const Trace& trace, const BitSelector& sel) {
  std::vector<std::size_t> col;
  col.reserve(sel.entries.size());
  for (const auto& e : sel.entries) {
    std::size_t i = 0;
    while (i < trace.watched.size() && trace.watched[i].path != e.signal) ++i;
    if (i == trace.watched.size()) throw ConfigError("trace does not watch " + e.signal);
    if (e.bit >= trace.watched[i].width) {
      throw ConfigError("selector bit " + std::to_string(e.bit) + " out of range for " + e.signal);
    }
    col.push_back(i);
  }
  std::vector<u128> keys;
  keys.reserve(trace.rows.size());
  for (const auto& row : trace.rows) {
    u128 k = 0;
    for (std::size_t j = 0; j < col.size(); ++j) {
      k = (k << 1) | (row.values[col[j]].bit(sel.entries[j].bit) ? 1 : 0);
    }
    keys.push_back(k);
  }
  return keys;
}

SequenceTable learn_from_keys(const std::vector<u128>& keys, const BitSelector& sel) {
  SequenceTable t;
  t.selector = sel;
  t.key_width = sel.width();
  KeyPair w;
  for (u128 k : keys) {
    w.next = k;
    t.pairs.insert(w);
    w.has_prev = true;
    w.prev = k;
  }
  if (!keys.empty()) t.end_state = keys.back();
  return t;
}

SequenceTable acq_normal_seq(const Trace& golden, const BitSelector& sel) {
  return learn_from_keys(keys_from_trace(golden, sel), sel);
}

SeqDetection detect_keys(const std::vector<u128>& keys, const std::vector<std::uint64_t>& cycles,
                         const SequenceTable& table, bool check_end) {
  SeqDetection d;
  KeyPair w;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    w.next = keys[i];
    if (!d.fault && !table.contains(w)) {
      d.fault = true;
      d.fault_cycle = cycles.at(i);
    }
    w.has_prev = true;
    w.prev = keys[i];
  }
  if (check_end && !d.fault && table.end_state) {
    if (keys.empty() || keys.back() != *table.end_state) {
      d.fault = true;
      d.via_final = true;
    }
  }
  return d;
}

SeqDetection detect(const Trace& trace, const BitSelector& sel, const SequenceTable& table,
                    bool check_end) {
  if (sel.width() != table.key_width) {
    throw ConfigError("selector width " + std::to_string(sel.width()) +
                      " does not match table key width " + std::to_string(table.key_width));
  }
  std::vector<std::uint64_t> cycles;
  cycles.reserve(trace.rows.size());
  for (const auto& r : trace.rows) cycles.push_back(r.cycle);
  return detect_keys(keys_from_trace(trace, sel), cycles, table, check_end);
}

SequenceDetector::SequenceDetector(std::string name, std::shared_ptr<const SequenceTable> table,
                                   bool check_end)
    : name_(std::move(name)), table_(std::move(table)), check_end_(check_end) {
  if (table_->selector.width() != table_->key_width) {
    throw ConfigError("sequence table " + name_ + ": selector/key width mismatch");
  }
}

void SequenceDetector::on_reset(const Design& design) {
  if (bound_ != &design) {
    ids_.clear();
    bits_.clear();
    for (const auto& e : table_->selector.entries) {
      const SignalId id = design.require(e.signal);
      if (e.bit >= design.signals()[id].width) {
        throw ConfigError("selector bit out of range for " + e.signal);
      }
      ids_.push_back(id);
      bits_.push_back(e.bit);
    }
    bound_ = &design;
  }
  state_ = SeqMonitorState{};
  end_cycle_ = 0;
}

void SequenceDetector::on_cycle(const Design& design, std::uint64_t cycle) {
  const auto values = design.values();
  u128 k = 0;
  for (std::size_t j = 0; j < ids_.size(); ++j) {
    k = (k << 1) | (values[ids_[j]].bit(bits_[j]) ? 1 : 0);
  }
  state_.window.next = k;
  if (!state_.fault && !table_->contains(state_.window)) {
    state_.fault = true;
    state_.fault_cycle = cycle;
  }
  state_.window.has_prev = true;
  state_.window.prev = k;
  state_.has_last = true;
}

void SequenceDetector::finalize(std::uint64_t end_cycle) {
  end_cycle_ = end_cycle;
  if (check_end_ && !state_.fault && table_->end_state) {
    if (!state_.has_last || state_.window.prev != *table_->end_state) {
      state_.fault = true;
      state_.via_final = true;
    }
  }
}

DetectionRecord SequenceDetector::record() const {
  DetectionRecord r;
  r.detected = state_.fault;
  r.via_final = state_.via_final;
  if (state_.fault) r.cycle = state_.via_final ? end_cycle_ : *state_.fault_cycle;
  return r;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

[[noreturn]] void table_fail(std::size_t line_no, const std::string& msg) {
  throw ConfigError("sequence table line " + std::to_string(line_no) + ": " + msg);
}

unsigned parse_uint(std::string_view s, std::size_t line_no) {
  unsigned v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    table_fail(line_no, "expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

u128 parse_key(std::string_view s, unsigned width, std::size_t line_no) {
  try {
    return BitVec::from_hex(width, s).value();
  } catch (const ConfigError& e) {
    table_fail(line_no, e.what());
  }
}

}  // namespace

SequenceTable parse_table(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      std::string line(text.substr(pos, nl - pos));
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(std::move(line));
      pos = nl + 1;
    }
  }
  std::size_t i = 0;
  auto next_line = [&](std::string_view what) -> std::pair<std::string, std::size_t> {
    while (i < lines.size()) {
      const std::string& l = lines[i++];
      if (l.empty() || l[0] == '#') continue;
      return {l, i};
    }
    table_fail(i, "unexpected end of file, expected " + std::string(what));
  };
  auto words = [](const std::string& l) {
    std::vector<std::string> out;
    std::istringstream is(l);
    for (std::string w; is >> w;) out.push_back(w);
    return out;
  };

  SequenceTable t;
  auto [magic, l0] = next_line("header");
  if (magic != "seqtable v1") table_fail(l0, "expected 'seqtable v1'");

  auto [sel_line, l1] = next_line("selector");
  auto sw = words(sel_line);
  if (sw.size() != 3 || sw[0] != "selector" || sw[1].rfind("level=", 0) != 0 ||
      sw[2].rfind("type=", 0) != 0) {
    table_fail(l1, "expected: selector level=<n> type=<n>");
  }
  t.selector.level = static_cast<int>(parse_uint(std::string_view(sw[1]).substr(6), l1));
  const unsigned type = parse_uint(std::string_view(sw[2]).substr(5), l1);
  if (type < 1 || type > 4) table_fail(l1, "bit type must be 1..4");
  t.selector.bit_type = static_cast<BitType>(type);

  for (;;) {
    auto [l, ln] = next_line("entry or width");
    auto w = words(l);
    if (!w.empty() && w[0] == "entry") {
      if (w.size() != 3) table_fail(ln, "expected: entry <signal> <bit>");
      t.selector.entries.push_back({w[1], parse_uint(w[2], ln)});
      continue;
    }
    if (w.size() != 2 || w[0] != "width") table_fail(ln, "expected: width <n>");
    t.key_width = parse_uint(w[1], ln);
    if (t.key_width != t.selector.width()) {
      table_fail(ln, "width does not match the number of entries");
    }
    if (t.key_width == 0 || t.key_width > kMaxBitWidth) table_fail(ln, "width must be 1..128");
    break;
  }

  auto [end_line, l2] = next_line("end_state");
  auto ew = words(end_line);
  if (ew.size() != 2 || ew[0] != "end_state") table_fail(l2, "expected: end_state <hex>|-");
  if (ew[1] != "-") t.end_state = parse_key(ew[1], t.key_width, l2);

  auto [count_line, l3] = next_line("pairs");
  auto cw = words(count_line);
  if (cw.size() != 2 || cw[0] != "pairs") table_fail(l3, "expected: pairs <count>");
  const unsigned count = parse_uint(cw[1], l3);
  for (unsigned k = 0; k < count; ++k) {
    auto [l, ln] = next_line("pair");
    const auto comma = l.find(',');
    if (comma == std::string::npos) table_fail(ln, "expected prev,next");
    KeyPair p;
    const std::string prev = l.substr(0, comma);
    if (prev != "-") {
      p.has_prev = true;
      p.prev = parse_key(prev, t.key_width, ln);
    }
    p.next = parse_key(l.substr(comma + 1), t.key_width, ln);
    if (!t.pairs.insert(p).second) table_fail(ln, "duplicate pair");
  }
  while (i < lines.size()) {
    const std::string& l = lines[i++];
    if (!l.empty() && l[0] != '#') table_fail(i, "trailing content after pairs");
  }
  return t;
}

std::string serialize_table(const SequenceTable& t) {
  std::ostringstream os;
  os << "seqtable v1\n";
  os << "selector level=" << t.selector.level << " type=" << static_cast<int>(t.selector.bit_type)
     << '\n';
  for (const auto& e : t.selector.entries) os << "entry " << e.signal << ' ' << e.bit << '\n';
  os << "width " << t.key_width << '\n';
  os << "end_state " << (t.end_state ? u128_to_hex(*t.end_state) : std::string("-")) << '\n';
  const auto pairs = t.sorted_pairs();
  os << "pairs " << pairs.size() << '\n';
  for (const auto& p : pairs) {
    os << (p.has_prev ? u128_to_hex(p.prev) : std::string("-")) << ',' << u128_to_hex(p.next)
       << '\n';
  }
  return os.str();
}

}  // namespace ctlmon
