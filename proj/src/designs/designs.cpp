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

#include <sstream>
#include <type_traits>

#include "ctlmon/designs.hpp"
#include "ctlmon/errors.hpp"
#include "designs/common.hpp"

namespace ctlmon {
namespace designs {

NetBuilder& NetBuilder::place(const std::string& name, std::uint32_t tokens) {
  places_.push_back(name);
  tokens_.push_back(tokens);
  return *this;
}

NetBuilder& NetBuilder::trans(const std::string& name, const std::vector<std::string>& in,
                              const std::vector<std::string>& out) {
  transitions_.push_back(name);
  io_.emplace_back(in, out);
  return *this;
}

NetBuilder& NetBuilder::event(const std::string& signal, EventType type,
                              std::optional<u128> target, std::uint32_t index) {
  if (transitions_.empty()) throw InvariantViolation("net " + name_ + ": event before transition");
  EventSpec e;
  e.signal = signal;
  e.type = type;
  e.target = target;
  e.index = index;
  events_.push_back({transitions_.back(), e});
  return *this;
}

NetBuilder& NetBuilder::any(const std::string& signal) {
  return event(signal, EventType::kAnyChange, std::nullopt, 0);
}
NetBuilder& NetBuilder::to(const std::string& signal, u128 target) {
  return event(signal, EventType::kChangeTo, target, 0);
}
NetBuilder& NetBuilder::nth(const std::string& signal, std::uint32_t index) {
  return event(signal, EventType::kNthChange, std::nullopt, index);
}
NetBuilder& NetBuilder::nth_to(const std::string& signal, u128 target, std::uint32_t index) {
  return event(signal, EventType::kNthChangeTo, target, index);
}

NetBuilder& NetBuilder::final_transition(const std::string& name) {
  final_ = name;
  return *this;
}

std::shared_ptr<const NetDefinition> NetBuilder::build() const {
  auto place_of = [&](const std::string& p) -> PlaceId {
    for (std::size_t i = 0; i < places_.size(); ++i) {
      if (places_[i] == p) return static_cast<PlaceId>(i);
    }
    throw InvariantViolation("net " + name_ + ": unknown place " + p);
  };
  std::vector<Arc> arcs;
  for (std::size_t t = 0; t < io_.size(); ++t) {
    for (const auto& p : io_[t].first) {
      arcs.push_back({Arc::Direction::kPlaceToTransition, place_of(p), static_cast<TransitionId>(t)});
    }
    for (const auto& p : io_[t].second) {
      arcs.push_back({Arc::Direction::kTransitionToPlace, place_of(p), static_cast<TransitionId>(t)});
    }
  }
  std::optional<TransitionId> fin;
  if (final_) {
    for (std::size_t t = 0; t < transitions_.size(); ++t) {
      if (transitions_[t] == *final_) fin = static_cast<TransitionId>(t);
    }
    if (!fin) throw InvariantViolation("net " + name_ + ": unknown final " + *final_);
  }
  PetriNet net(name_, places_, Marking{tokens_}, transitions_, std::move(arcs), fin);
  std::vector<EventSpec> events;
  for (const auto& pe : events_) {
    EventSpec e = pe.spec;
    e.transition = net.require_transition(pe.transition);
    validate_event(net, e);
    events.push_back(std::move(e));
  }
  return std::make_shared<const NetDefinition>(NetDefinition{std::move(net), std::move(events)});
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace designs

using namespace designs;

std::string SelectorPreset::name() const {
  return "seq_L" + std::to_string(level) + "_" + std::to_string(static_cast<int>(bit_type));
}

DesignId design_of(const Stimulus& s) {
  switch (s.index()) {
    case 0: return DesignId::kConv;
    case 1: return DesignId::kGaus;
    case 2: return DesignId::kAes;
    default: return DesignId::kRouter;
  }
}

Stimulus default_stimulus(DesignId id) {
  switch (id) {
    case DesignId::kConv: {
      ConvStimulus s;
      std::uint64_t st = 0xc0ffee;
      for (auto& a : s.act) a = static_cast<std::int8_t>(static_cast<int>(splitmix64(st) % 128) - 64);
      for (auto& w : s.weights) w = static_cast<std::int8_t>(static_cast<int>(splitmix64(st) % 16) - 8);
      return s;
    }
    case DesignId::kGaus: {
      GausStimulus s;
      std::uint64_t st = 0x9a05;
      for (int y = 0; y < kGausHeight; ++y) {
        for (int x = 0; x < kGausWidth; ++x) {
          const int noise = static_cast<int>(splitmix64(st) % 48);
          s.pixels[y * kGausWidth + x] = static_cast<std::uint8_t>(x * 12 + y * 4 + noise);
        }
      }
      return s;
    }
    case DesignId::kAes: {
      AesStimulus s;
      for (int i = 0; i < 16; ++i) {
        s.key[i] = static_cast<std::uint8_t>(i);
        s.plaintexts[0][i] = static_cast<std::uint8_t>(i * 0x11);
      }
      std::uint64_t st = 0xae5;
      for (int b = 1; b < kAesBlocks; ++b) {
        for (auto& byte : s.plaintexts[b]) byte = static_cast<std::uint8_t>(splitmix64(st));
      }
      return s;
    }
    case DesignId::kRouter:
      return NocStimulus{};
  }
  throw InvariantViolation("bad design id");
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ' && c != '\t' && c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

[[noreturn]] void stim_fail(std::size_t line, const std::string& msg) {
  throw ConfigError("stimulus line " + std::to_string(line) + ": " + msg);
}

std::uint8_t parse_byte(const std::string& s, std::size_t line) {
  try {
    return static_cast<std::uint8_t>(BitVec::from_hex(8, s).value());
  } catch (const ConfigError& e) {
    stim_fail(line, e.what());
  }
}

void parse_bytes(const std::vector<std::string>& f, std::size_t expect, std::size_t line,
                 std::uint8_t* out) {
  if (f.size() != expect + 1) {
    stim_fail(line, "expected " + std::to_string(expect) + " values after '" + f[0] + "'");
  }
  for (std::size_t i = 0; i < expect; ++i) out[i] = parse_byte(f[i + 1], line);
}

void parse_block(const std::vector<std::string>& f, std::size_t line, std::array<std::uint8_t, 16>& out) {
  if (f.size() != 2) stim_fail(line, "expected one 128-bit hex value");
  u128 v;
  try {
    v = BitVec::from_hex(128, f[1]).value();
  } catch (const ConfigError& e) {
    stim_fail(line, e.what());
  }
  for (int i = 0; i < 16; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * (15 - i)));
}

std::string hex_byte(std::uint8_t b) {
  static const char* kDigits = "0123456789abcdef";
  return {kDigits[b >> 4], kDigits[b & 15]};
}

}  // namespace

Stimulus parse_stimulus(DesignId id, std::string_view text) {
  if (id == DesignId::kRouter) {
    throw ConfigError("the router scenario is configured in the [noc] config section");
  }
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::size_t rows = 0, kernels = 0, blocks = 0;
  bool have_key = false;
  ConvStimulus conv;
  GausStimulus gaus;
  AesStimulus aes;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto f = split_csv(line);
    const std::string& tag = f[0];
    if (id == DesignId::kConv && tag == "act") {
      if (kernels > 0) stim_fail(line_no, "act rows must precede weight rows");
      if (rows == kConvSize) stim_fail(line_no, "too many act rows");
      parse_bytes(f, kConvSize, line_no,
                  reinterpret_cast<std::uint8_t*>(conv.act.data() + rows * kConvSize));
      ++rows;
    } else if (id == DesignId::kConv && tag == "weight") {
      if (kernels == kConvKernels) stim_fail(line_no, "too many weight rows");
      parse_bytes(f, 9, line_no, reinterpret_cast<std::uint8_t*>(conv.weights.data() + kernels * 9));
      ++kernels;
    } else if (id == DesignId::kGaus && tag == "pix") {
      if (rows == kGausHeight) stim_fail(line_no, "too many pix rows");
      parse_bytes(f, kGausWidth, line_no, gaus.pixels.data() + rows * kGausWidth);
      ++rows;
    } else if (id == DesignId::kAes && tag == "key") {
      if (have_key) stim_fail(line_no, "duplicate key");
      parse_block(f, line_no, aes.key);
      have_key = true;
    } else if (id == DesignId::kAes && tag == "pt") {
      if (!have_key) stim_fail(line_no, "key must precede pt rows");
      if (blocks == kAesBlocks) stim_fail(line_no, "too many pt rows");
      parse_block(f, line_no, aes.plaintexts[blocks]);
      ++blocks;
    } else {
      stim_fail(line_no, "unexpected tag '" + tag + "' for design " + std::string(to_string(id)));
    }
  }
  switch (id) {
    case DesignId::kConv:
      if (rows != kConvSize || kernels != kConvKernels) {
        throw ConfigError("conv stimulus needs 8 act rows and 4 weight rows");
      }
      return conv;
    case DesignId::kGaus:
      if (rows != kGausHeight) throw ConfigError("gaus stimulus needs 12 pix rows");
      return gaus;
    default:
      if (!have_key || blocks != kAesBlocks) {
        throw ConfigError("aes stimulus needs one key and 5 pt rows");
      }
      return aes;
  }
}

std::string serialize_stimulus(const Stimulus& s) {
  std::ostringstream os;
  auto row = [&](const char* tag, const std::uint8_t* p, std::size_t n) {
    os << tag;
    for (std::size_t i = 0; i < n; ++i) os << ',' << hex_byte(p[i]);
    os << '\n';
  };
  auto block = [&](const char* tag, const std::array<std::uint8_t, 16>& b) {
    os << tag << ',';
    for (auto byte : b) os << hex_byte(byte);
    os << '\n';
  };
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ConvStimulus>) {
          os << "# conv: 8x8 activations, 4 kernels of 3x3\n";
          for (int r = 0; r < kConvSize; ++r) {
            row("act", reinterpret_cast<const std::uint8_t*>(v.act.data() + r * kConvSize), kConvSize);
          }
          for (int k = 0; k < kConvKernels; ++k) {
            row("weight", reinterpret_cast<const std::uint8_t*>(v.weights.data() + k * 9), 9);
          }
        } else if constexpr (std::is_same_v<T, GausStimulus>) {
          os << "# gaus: 16x12 grayscale image\n";
          for (int r = 0; r < kGausHeight; ++r) row("pix", v.pixels.data() + r * kGausWidth, kGausWidth);
        } else if constexpr (std::is_same_v<T, AesStimulus>) {
          os << "# aes: key and five plaintext blocks\n";
          block("key", v.key);
          for (const auto& pt : v.plaintexts) block("pt", pt);
        } else {
          throw ConfigError("the router scenario has no stimulus file");
        }
      },
      s);
  return os.str();
}

OutputRecord oracle_output(const Stimulus& s) {
  return std::visit(
      [](const auto& v) -> OutputRecord {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ConvStimulus>) return conv_oracle(v);
        else if constexpr (std::is_same_v<T, GausStimulus>) return gaus_oracle(v);
        else if constexpr (std::is_same_v<T, AesStimulus>) return aes_oracle(v);
        else return router_oracle(v);
      },
      s);
}

std::unique_ptr<Design> make_design(const Stimulus& s) {
  return std::visit(
      [](const auto& v) -> std::unique_ptr<Design> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ConvStimulus>) return make_conv(v);
        else if constexpr (std::is_same_v<T, GausStimulus>) return make_gaus(v);
        else if constexpr (std::is_same_v<T, AesStimulus>) return make_aes(v);
        else return make_router(v);
      },
      s);
}

MonitorBundle monitor_bundle(DesignId id) {
  switch (id) {
    case DesignId::kConv: return conv_bundle();
    case DesignId::kGaus: return gaus_bundle();
    case DesignId::kAes: return aes_bundle();
    case DesignId::kRouter: return router_bundle();
  }
  throw InvariantViolation("bad design id");
}

DesignBuild build_conv(const ConvStimulus& s) { return {make_conv(s), conv_bundle()}; }
DesignBuild build_gaus(const GausStimulus& s) { return {make_gaus(s), gaus_bundle()}; }
DesignBuild build_aes(const AesStimulus& s) { return {make_aes(s), aes_bundle()}; }
DesignBuild build_router_scenario(const NocStimulus& s) { return {make_router(s), router_bundle()}; }

DesignBuild build(const Stimulus& s) { return {make_design(s), monitor_bundle(design_of(s))}; }

}  // namespace ctlmon
