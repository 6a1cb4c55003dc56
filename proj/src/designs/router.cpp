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


// 4x4 mesh network-on-chip. Router id = x * 4 + y, north is y + 1.
//
// Each router has five ports (local, west, south, east, north; this is also
// the static arbitration priority), two virtual channels per input port
// with four-flit FIFOs, credit-based flow control (`ack`, one bit per VC)
// and per-VC lock status (`lck`). Heads carry a 16-bit destination bitmap;
// routing is YX and a multicast head forks into every required output,
// with all branches advancing together. Multicast requests win over unicast.
//
// Only router 2 is exposed through the signal table; the other fifteen
// routers and the network interfaces are internal environment.

#include <algorithm>
#include <array>
#include <bit>
#include <optional>

#include "ctlmon/errors.hpp"
#include "designs/common.hpp"

namespace ctlmon::designs {
namespace {

constexpr int kPorts = 5;
constexpr int kVcs = 2;
constexpr int kDepth = 4;
constexpr int kNodes = kMeshSize * kMeshSize;
constexpr int kMonitored = 2;
enum Port { kL = 0, kW = 1, kS = 2, kE = 3, kN = 4 };
constexpr const char* kPortName[kPorts] = {"l", "w", "s", "e", "n"};
constexpr std::uint32_t kHead = 0, kBody = 1, kTail = 2;

constexpr std::uint32_t flit(std::uint32_t type, std::uint32_t data) { return (type << 16) | (data & 0xffff); }
constexpr std::uint32_t flit_type(std::uint32_t f) { return (f >> 16) & 3; }

int opposite(int p) {
  switch (p) {
    case kW: return kE;
    case kE: return kW;
    case kS: return kN;
    case kN: return kS;
    default: return kL;
  }
}

// Neighbour of node `n` through port `p`, or -1 at the mesh edge.
int neighbour(int n, int p) {
  const int x = n / kMeshSize, y = n % kMeshSize;
  switch (p) {
    case kW: return x > 0 ? n - kMeshSize : -1;
    case kE: return x < kMeshSize - 1 ? n + kMeshSize : -1;
    case kS: return y > 0 ? n - 1 : -1;
    case kN: return y < kMeshSize - 1 ? n + 1 : -1;
    default: return -1;
  }
}

struct Link {
  bool valid = false;
  std::uint32_t vch = 0;
  std::uint32_t data = 0;
  std::uint32_t ack = 0;  // bit per VC
  std::uint32_t lck = 0;  // bit per VC
};

struct InVc {
  std::array<std::uint32_t, kDepth> buf{};
  std::uint32_t count = 0, rp = 0, wp = 0;
  bool routed = false;
  std::uint32_t mask = 0;                  // output ports of the current packet
  std::array<std::uint16_t, kPorts> branch{};  // per-port destination bitmap
};

struct OutVc {
  bool lock = false;
  std::uint32_t owner = 0;
  std::uint32_t credit = kDepth;
};

struct Router {
  int id = 0;
  std::array<std::array<InVc, kVcs>, kPorts> in{};
  std::array<std::array<OutVc, kVcs>, kPorts> out{};
  std::array<Link, kPorts> o{};
  // Pulses of the last edge, for router 2's monitor wires.
  std::array<std::uint32_t, kPorts> wr_en{}, rd_en{};
  std::array<bool, kPorts> tail_out{};
};

// YX routing of a destination bitmap at node `n`.
void route(int n, std::uint16_t dests, std::uint32_t& mask, std::array<std::uint16_t, kPorts>& branch) {
  const int x = n / kMeshSize, y = n % kMeshSize;
  mask = 0;
  branch.fill(0);
  for (int d = 0; d < kNodes; ++d) {
    if (!((dests >> d) & 1)) continue;
    const int dx = d / kMeshSize, dy = d % kMeshSize;
    int p = kL;
    if (dy > y) p = kN;
    else if (dy < y) p = kS;
    else if (dx > x) p = kE;
    else if (dx < x) p = kW;
    mask |= 1u << p;
    branch[p] |= static_cast<std::uint16_t>(1u << d);
  }
  if (mask == 0) mask = 1u << kL;  // no destination: eject locally
}

void step_router(Router& r, const std::array<Link, kPorts>& in) {
  Router next = r;
  next.wr_en.fill(0);
  next.rd_en.fill(0);
  next.tail_out.fill(false);
  std::array<Link, kPorts> o = r.o;
  for (auto& l : o) {
    l.valid = false;
    l.ack = 0;
  }

  for (int p = 0; p < kPorts; ++p) {
    for (int v = 0; v < kVcs; ++v) {
      if ((in[p].ack >> v) & 1) next.out[p][v].credit = (next.out[p][v].credit + 1) & 7;
    }
  }

  std::array<bool, kPorts> used_in{}, used_out{};
  for (int pass = 0; pass < 2; ++pass) {
    for (int p = 0; p < kPorts; ++p) {
      for (int v = 0; v < kVcs; ++v) {
        InVc& q = next.in[p][v];
        const InVc& cur = r.in[p][v];
        if (used_in[p] || cur.count == 0) continue;
        const std::uint32_t f = cur.buf[cur.rp & (kDepth - 1)];
        if (!cur.routed) {
          if (flit_type(f) != kHead) continue;
          std::uint32_t mask;
          std::array<std::uint16_t, kPorts> branch;
          route(r.id, static_cast<std::uint16_t>(f), mask, branch);
          const bool multicast = std::popcount(mask) > 1;
          if (multicast != (pass == 0)) continue;
          bool free = true;
          for (int op = 0; op < kPorts; ++op) {
            if (!((mask >> op) & 1)) continue;
            if (next.out[op][v].lock || (op != kL && ((in[op].lck >> v) & 1))) free = false;
          }
          if (!free) continue;
          for (int op = 0; op < kPorts; ++op) {
            if ((mask >> op) & 1) next.out[op][v] = OutVc{true, static_cast<std::uint32_t>(p), next.out[op][v].credit};
          }
          q.routed = true;
          q.mask = mask;
          q.branch = branch;
          continue;
        }
        const bool multicast = std::popcount(cur.mask) > 1;
        if (multicast != (pass == 0) || cur.mask == 0) continue;
        bool ok = true;
        for (int op = 0; op < kPorts; ++op) {
          if (!((cur.mask >> op) & 1)) continue;
          const OutVc& ov = next.out[op][v];
          if (used_out[op] || ov.credit == 0 || !ov.lock || ov.owner != static_cast<std::uint32_t>(p)) ok = false;
        }
        if (!ok) continue;
        const bool tail = flit_type(f) == kTail;
        for (int op = 0; op < kPorts; ++op) {
          if (!((cur.mask >> op) & 1)) continue;
          used_out[op] = true;
          o[op].valid = true;
          o[op].vch = static_cast<std::uint32_t>(v);
          o[op].data = flit_type(f) == kHead ? flit(kHead, cur.branch[op]) : f;
          next.out[op][v].credit = (next.out[op][v].credit - 1) & 7;
          if (tail) {
            next.out[op][v].lock = false;
            next.tail_out[op] = true;
          }
        }
        used_in[p] = true;
        q.rp = (q.rp + 1) & 3;
        q.count = (q.count - 1) & 7;
        o[p].ack |= 1u << v;
        next.rd_en[p] |= 1u << v;
        if (tail) {
          q.routed = false;
          q.mask = 0;
        }
      }
    }
  }

  for (int p = 0; p < kPorts; ++p) {
    if (!in[p].valid) continue;
    InVc& q = next.in[p][in[p].vch & 1];
    if (q.count >= kDepth) continue;  // overflow: flit lost
    q.buf[q.wp & (kDepth - 1)] = in[p].data;
    q.wp = (q.wp + 1) & 3;
    q.count = (q.count + 1) & 7;
    next.wr_en[p] |= 1u << (in[p].vch & 1);
  }

  for (int p = 0; p < kPorts; ++p) {
    o[p].lck = (next.in[p][0].routed ? 1u : 0u) | (next.in[p][1].routed ? 2u : 0u);
  }
  next.o = o;
  r = next;
}

struct Packet {
  std::uint32_t vch;
  std::vector<std::uint32_t> flits;
};

struct Scenario {
  std::array<std::vector<Packet>, kNodes> traffic;  // per source
  std::array<bool, kNodes> delayed{};               // starts after its multicast arrives
  std::array<int, kNodes> expected{};               // flits per destination
  std::array<std::vector<std::uint32_t>, kNodes> ledger;
};

constexpr int kMulticastSrc = 2;
constexpr std::array<int, 6> kMulticastDst = {6, 10, 14, 7, 11, 15};
constexpr std::array<std::pair<int, int>, 3> kUnicast = {{{6, 7}, {10, 11}, {14, 15}}};

unsigned unicast_packets(const NocStimulus& s) { return std::max(1u, s.packets / 4); }

Scenario make_scenario(const NocStimulus& s) {
  Scenario sc;
  std::uint64_t st = s.payload_seed;
  auto make_packet = [&](std::uint16_t dests, std::uint32_t vch) {
    Packet p{vch, {}};
    p.flits.push_back(flit(kHead, dests));
    for (unsigned i = 1; i < s.flits_per_packet; ++i) {
      p.flits.push_back(flit(i + 1 == s.flits_per_packet ? kTail : kBody,
                             static_cast<std::uint32_t>(splitmix64(st))));
    }
    return p;
  };
  std::uint16_t mdests = 0;
  for (int d : kMulticastDst) mdests |= static_cast<std::uint16_t>(1u << d);
  for (unsigned i = 0; i < s.packets; ++i) {
    sc.traffic[kMulticastSrc].push_back(make_packet(mdests, i & 1));
  }
  for (auto [src, dst] : kUnicast) {
    sc.delayed[src] = true;
    for (unsigned i = 0; i < unicast_packets(s); ++i) {
      sc.traffic[src].push_back(make_packet(static_cast<std::uint16_t>(1u << dst), i & 1));
    }
  }
  for (int src = 0; src < kNodes; ++src) {
    for (const auto& p : sc.traffic[src]) {
      for (int d = 0; d < kNodes; ++d) {
        if (!((p.flits[0] >> d) & 1)) continue;
        for (std::uint32_t f : p.flits) {
          sc.ledger[d].push_back(flit_type(f) == kHead ? flit(kHead, 1u << d) : f);
        }
        sc.expected[d] += static_cast<int>(p.flits.size());
      }
    }
  }
  return sc;
}

OutputRecord ledger_record(const std::array<std::vector<std::uint32_t>, kNodes>& ledger) {
  OutputRecord r;
  for (int d = 0; d < kNodes; ++d) {
    std::vector<std::uint32_t> v = ledger[d];
    std::sort(v.begin(), v.end());
    r.words.push_back(d);
    r.words.push_back(static_cast<std::int64_t>(v.size()));
    for (auto f : v) r.words.push_back(f);
  }
  return r;
}

struct Ni {
  std::size_t pkt = 0, idx = 0;
  std::array<std::uint32_t, kVcs> credit{kDepth, kDepth};
  int received = 0;
  std::optional<std::uint64_t> start;  // delayed sources
  Link o;                              // towards the router's local port
};

class RouterDesign final : public Design {
 public:
  explicit RouterDesign(const NocStimulus& stim) : stim_(stim), sc_(make_scenario(stim)) {
    for (int p = 0; p < kPorts; ++p) {
      const std::string base = std::string("noc/r2/") + kPortName[p] + "/";
      const bool target = p == kN || p == kE;
      auto in_ctl = [&](const std::string& name, unsigned w) {
        return target ? add_primary_control_input(base + name, w)
                      : add_signal(base + name, w, SignalKind::kPrimaryInput, SignalClass::kControl);
      };
      ports_[p].in_valid = in_ctl("in_valid", 1);
      ports_[p].in_vch = in_ctl("in_vch", 1);
      ports_[p].in_ack = in_ctl("in_ack", 2);
      ports_[p].in_lck = in_ctl("in_lck", 2);
      ports_[p].in_data = add_signal(base + "in_data", 18, SignalKind::kPrimaryInput, SignalClass::kData);
    }
    for (int p = 0; p < kPorts; ++p) {
      const std::string base = std::string("noc/r2/") + kPortName[p] + "/";
      auto po = [&](const std::string& name, unsigned w) {
        return add_signal(base + name, w, SignalKind::kPrimaryOutput, SignalClass::kControl);
      };
      ports_[p].out_valid = po("out_valid", 1);
      ports_[p].out_vch = po("out_vch", 1);
      ports_[p].out_ack = po("out_ack", 2);
      ports_[p].out_lck = po("out_lck", 2);
      ports_[p].out_data = add_signal(base + "out_data", 18, SignalKind::kPrimaryOutput, SignalClass::kData);
    }
    for (int p = 0; p < kPorts; ++p) {
      for (int v = 0; v < kVcs; ++v) {
        const std::string base = std::string("noc/r2/") + kPortName[p] + "/vc" + std::to_string(v) + "/";
        auto& ids = ports_[p].vc[v];
        ids.count = add_control_register(base + "count", 3);
        ids.rp = add_control_register(base + "rp", 2);
        ids.wp = add_control_register(base + "wp", 2);
        ids.routed = add_control_register(base + "routed", 1);
        ids.mask = add_control_register(base + "mask", 5);
      }
    }
    for (int p = 0; p < kPorts; ++p) {
      for (int v = 0; v < kVcs; ++v) {
        const std::string base = std::string("noc/r2/") + kPortName[p] + "/ovc" + std::to_string(v) + "/";
        auto& ids = ports_[p].ovc[v];
        ids.lock = add_control_register(base + "lock", 1);
        ids.owner = add_control_register(base + "owner", 3);
        ids.credit = add_control_register(base + "credit", 3);
      }
    }
    for (int p = 0; p < kPorts; ++p) {
      const std::string base = std::string("noc/r2/") + kPortName[p] + "/";
      ports_[p].wr_en = add_signal(base + "wr_en", 2, SignalKind::kWire, SignalClass::kControl);
      ports_[p].rd_en = add_signal(base + "rd_en", 2, SignalKind::kWire, SignalClass::kControl);
      ports_[p].tail_out = add_signal(base + "tail_out", 1, SignalKind::kWire, SignalClass::kControl);
    }
    reset();
  }

  DesignId id() const override { return DesignId::kRouter; }

  void reset() override {
    clear_all_values();
    for (int n = 0; n < kNodes; ++n) {
      routers_[n] = Router{};
      routers_[n].id = n;
      nis_[n] = Ni{};
    }
    ledger_ = {};
    cycle_ = 0;
    store_monitored();
    update_outputs();
  }

  void step() override {
    ++cycle_;
    load_monitored();

    // Network interfaces: receive from the local output, inject into the
    // local input.
    for (int n = 0; n < kNodes; ++n) {
      Ni& ni = nis_[n];
      const Link& from = routers_[n].o[kL];
      ni.o.ack = 0;
      ni.o.valid = false;
      if (from.valid) {
        ledger_[n].push_back(from.data);
        ++ni.received;
        ni.o.ack = 1u << (from.vch & 1);
        if (sc_.delayed[n] && !ni.start && ni.received >= static_cast<int>(stim_.packets * stim_.flits_per_packet)) {
          ni.start = cycle_ + stim_.unicast_latency;
        }
      }
      for (int v = 0; v < kVcs; ++v) {
        if ((routers_[n].o[kL].ack >> v) & 1) ni.credit[v] = std::min<std::uint32_t>(ni.credit[v] + 1, kDepth);
      }
      const auto& pk = sc_.traffic[n];
      const bool may = !sc_.delayed[n] || (ni.start && cycle_ >= *ni.start);
      if (may && ni.pkt < pk.size() && ni.credit[pk[ni.pkt].vch] > 0) {
        const Packet& p = pk[ni.pkt];
        ni.o.valid = true;
        ni.o.vch = p.vch;
        ni.o.data = p.flits[ni.idx];
        --ni.credit[p.vch];
        if (++ni.idx == p.flits.size()) {
          ni.idx = 0;
          ++ni.pkt;
        }
      }
    }

    // Gather every router's inputs from the registered links, then step.
    std::array<std::array<Link, kPorts>, kNodes> inputs{};
    for (int n = 0; n < kNodes; ++n) {
      for (int p = 0; p < kPorts; ++p) {
        if (p == kL) {
          inputs[n][p] = nis_[n].o;
        } else if (int m = neighbour(n, p); m >= 0) {
          inputs[n][p] = routers_[m].o[opposite(p)];
        }
      }
    }
    for (int p = 0; p < kPorts; ++p) {
      const Link& l = inputs[kMonitored][p];
      drive(ports_[p].in_valid, l.valid);
      drive(ports_[p].in_vch, l.vch);
      drive(ports_[p].in_data, l.data);
      drive(ports_[p].in_ack, l.ack);
      drive(ports_[p].in_lck, l.lck);
      Link& forced = inputs[kMonitored][p];
      forced.valid = get(ports_[p].in_valid) != 0;
      forced.vch = static_cast<std::uint32_t>(get(ports_[p].in_vch));
      forced.data = static_cast<std::uint32_t>(get(ports_[p].in_data));
      forced.ack = static_cast<std::uint32_t>(get(ports_[p].in_ack));
      forced.lck = static_cast<std::uint32_t>(get(ports_[p].in_lck));
    }
    for (int n = 0; n < kNodes; ++n) step_router(routers_[n], inputs[n]);

    store_monitored();
    update_outputs();
  }

  bool done() const override {
    for (int n = 0; n < kNodes; ++n) {
      if (nis_[n].received < sc_.expected[n]) return false;
    }
    return true;
  }

  OutputRecord outputs() const override { return ledger_record(ledger_); }

 protected:
  // Outputs are registered inside the router model; nothing combinational.
  void update_outputs() override {}

 private:
  struct VcIds {
    SignalId count, rp, wp, routed, mask;
  };
  struct OvcIds {
    SignalId lock, owner, credit;
  };
  struct PortIds {
    SignalId in_valid, in_vch, in_data, in_ack, in_lck;
    SignalId out_valid, out_vch, out_data, out_ack, out_lck;
    SignalId wr_en, rd_en, tail_out;
    std::array<VcIds, kVcs> vc;
    std::array<OvcIds, kVcs> ovc;
  };

  // Register file of router 2 -> model (picks up injected flips).
  void load_monitored() {
    Router& r = routers_[kMonitored];
    for (int p = 0; p < kPorts; ++p) {
      for (int v = 0; v < kVcs; ++v) {
        const auto& ids = ports_[p].vc[v];
        InVc& q = r.in[p][v];
        q.count = static_cast<std::uint32_t>(get(ids.count));
        q.rp = static_cast<std::uint32_t>(get(ids.rp));
        q.wp = static_cast<std::uint32_t>(get(ids.wp));
        q.routed = get(ids.routed) != 0;
        q.mask = static_cast<std::uint32_t>(get(ids.mask));
        const auto& oids = ports_[p].ovc[v];
        OutVc& ov = r.out[p][v];
        ov.lock = get(oids.lock) != 0;
        ov.owner = static_cast<std::uint32_t>(get(oids.owner));
        ov.credit = static_cast<std::uint32_t>(get(oids.credit));
      }
    }
  }

  void store_monitored() {
    const Router& r = routers_[kMonitored];
    for (int p = 0; p < kPorts; ++p) {
      for (int v = 0; v < kVcs; ++v) {
        const auto& ids = ports_[p].vc[v];
        const InVc& q = r.in[p][v];
        set(ids.count, q.count);
        set(ids.rp, q.rp);
        set(ids.wp, q.wp);
        set(ids.routed, q.routed);
        set(ids.mask, q.mask);
        const auto& oids = ports_[p].ovc[v];
        const OutVc& ov = r.out[p][v];
        set(oids.lock, ov.lock);
        set(oids.owner, ov.owner);
        set(oids.credit, ov.credit);
      }
      const Link& o = r.o[p];
      set(ports_[p].out_valid, o.valid);
      set(ports_[p].out_vch, o.vch);
      set(ports_[p].out_data, o.data);
      set(ports_[p].out_ack, o.ack);
      set(ports_[p].out_lck, o.lck);
      set(ports_[p].wr_en, r.wr_en[p]);
      set(ports_[p].rd_en, r.rd_en[p]);
      set(ports_[p].tail_out, r.tail_out[p]);
    }
  }

  NocStimulus stim_;
  Scenario sc_;
  std::array<PortIds, kPorts> ports_{};
  std::array<Router, kNodes> routers_{};
  std::array<Ni, kNodes> nis_{};
  std::array<std::vector<std::uint32_t>, kNodes> ledger_{};
  std::uint64_t cycle_ = 0;
};

}  // namespace

std::unique_ptr<Design> make_router(const NocStimulus& s) {
  if (s.packets == 0 || s.flits_per_packet < 2) {
    throw ConfigError("noc scenario needs at least one packet of two or more flits");
  }
  return std::make_unique<RouterDesign>(s);
}

OutputRecord router_oracle(const NocStimulus& s) { return ledger_record(make_scenario(s).ledger); }

namespace {

std::string r2(const std::string& rest) { return "noc/r2/" + rest; }
std::string vc(int v) { return "vc" + std::to_string(v); }
std::string ovc(int v) { return "ovc" + std::to_string(v); }

// Four-step ring: a rises, b rises, a falls, b falls.
std::shared_ptr<const NetDefinition> rise_fall_ring(const std::string& name, const std::string& a,
                                                    u128 a_on, const std::string& b, u128 b_on,
                                                    u128 a_off = 0, u128 b_off = 0) {
  return NetBuilder(name)
      .place("p0", 1).place("p1").place("p2").place("p3")
      .trans("t1", {"p0"}, {"p1"}).to(a, a_on)
      .trans("t2", {"p1"}, {"p2"}).to(b, b_on)
      .trans("t3", {"p2"}, {"p3"}).to(a, a_off)
      .trans("t4", {"p3"}, {"p0"}).to(b, b_off)
      .build();
}

// Two signals that always change on the same edge.
std::shared_ptr<const NetDefinition> lockstep(const std::string& name, const std::string& a,
                                              const std::string& b) {
  return NetBuilder(name)
      .place("p0", 1).place("p1")
      .trans("t1", {"p0"}, {"p1"}).any(a)
      .trans("t2", {"p1"}, {"p0"}).any(b)
      .build();
}

}  // namespace

MonitorBundle router_bundle() {
  MonitorBundle b;
  b.nets.push_back(rise_fall_ring("R_1", r2("n/ovc0/lock"), 1, r2("e/ovc0/lock"), 1));
  b.nets.push_back(rise_fall_ring("R_2", r2("n/ovc1/lock"), 1, r2("e/ovc1/lock"), 1));
  b.nets.push_back(lockstep("R_3", r2("l/vc0/routed"), r2("l/vc0/mask")));
  b.nets.push_back(lockstep("R_4", r2("l/vc1/routed"), r2("l/vc1/mask")));
  b.nets.push_back(rise_fall_ring("R_5", r2("l/vc0/routed"), 1, r2("l/in_vch"), 1));
  b.nets.push_back(rise_fall_ring("R_6", r2("n/tail_out"), 1, r2("e/tail_out"), 1));
  b.nets.push_back(lockstep("R_7", r2("n/out_valid"), r2("e/out_valid")));
  b.nets.push_back(lockstep("R_8", r2("n/out_vch"), r2("e/out_vch")));
  for (int v = 0; v < 2; ++v) {
    b.nets.push_back(rise_fall_ring("R_9_" + vc(v), r2("l/" + vc(v) + "/routed"), 1,
                                    r2("n/" + ovc(v) + "/lock"), 1));
  }
  for (int v = 0; v < 2; ++v) {
    b.nets.push_back(rise_fall_ring("R_10_" + vc(v), r2("l/" + vc(v) + "/routed"), 1,
                                    r2("e/" + ovc(v) + "/lock"), 1));
  }
  b.nets.push_back(lockstep("R_11", r2("l/rd_en"), r2("l/out_ack")));
  b.nets.push_back(lockstep("R_12", r2("n/in_lck"), r2("e/in_lck")));
  b.presets = {{1, BitType::kAllBits, false}};
  return b;
}

}  // namespace ctlmon::designs
