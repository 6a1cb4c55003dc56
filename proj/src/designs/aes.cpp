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


// Round-based AES-128 encryption core with a key memory and a
// column-serial S-box. One round takes four cycles, one per column.
//
//   fsm 0 idle, 1 rounds, 2 output; the unused encoding 3 falls back to idle.

#include <array>
#include <openssl/evp.h>

#include "ctlmon/errors.hpp"
#include "designs/common.hpp"

namespace ctlmon::designs {
namespace {

using Block = std::array<std::uint8_t, 16>;

constexpr std::uint8_t gmul(std::uint8_t a, std::uint8_t b) {
  std::uint8_t p = 0;
  for (int i = 0; i < 8; ++i) {
    if (b & 1) p ^= a;
    const bool hi = (a & 0x80) != 0;
    a = static_cast<std::uint8_t>(a << 1);
    if (hi) a ^= 0x1b;
    b >>= 1;
  }
  return p;
}

constexpr std::array<std::uint8_t, 256> make_sbox() {
  std::array<std::uint8_t, 256> s{};
  for (int x = 0; x < 256; ++x) {
    std::uint8_t inv = 0;
    for (int y = 1; y < 256 && x != 0; ++y) {
      if (gmul(static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(y)) == 1) {
        inv = static_cast<std::uint8_t>(y);
        break;
      }
    }
    std::uint8_t b = inv;
    for (int r = 1; r <= 4; ++r) {
      b ^= static_cast<std::uint8_t>((inv << r) | (inv >> (8 - r)));
    }
    s[x] = b ^ 0x63;
  }
  return s;
}

constexpr auto kSbox = make_sbox();

u128 to_u128(const Block& b) {
  u128 v = 0;
  for (auto byte : b) v = (v << 8) | byte;
  return v;
}

Block from_u128(u128 v) {
  Block b{};
  for (int i = 15; i >= 0; --i) {
    b[i] = static_cast<std::uint8_t>(v);
    v >>= 8;
  }
  return b;
}

std::array<Block, 16> expand_key(const Block& key) {
  std::array<Block, 16> rk{};
  std::array<std::uint8_t, 176> w{};
  std::copy(key.begin(), key.end(), w.begin());
  std::uint8_t rcon = 1;
  for (int i = 4; i < 44; ++i) {
    std::array<std::uint8_t, 4> t{w[4 * i - 4], w[4 * i - 3], w[4 * i - 2], w[4 * i - 1]};
    if (i % 4 == 0) {
      t = {static_cast<std::uint8_t>(kSbox[t[1]] ^ rcon), kSbox[t[2]], kSbox[t[3]], kSbox[t[0]]};
      rcon = gmul(rcon, 2);
    }
    for (int j = 0; j < 4; ++j) w[4 * i + j] = w[4 * i - 16 + j] ^ t[j];
  }
  for (int r = 0; r <= 10; ++r) std::copy_n(w.begin() + 16 * r, 16, rk[r].begin());
  return rk;
}

void shift_rows(Block& s) {
  Block t = s;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) s[r + 4 * c] = t[r + 4 * ((c + r) % 4)];
  }
}

void mix_columns(Block& s) {
  for (int c = 0; c < 4; ++c) {
    std::uint8_t* col = &s[4 * c];
    const std::uint8_t a0 = col[0], a1 = col[1], a2 = col[2], a3 = col[3];
    col[0] = gmul(a0, 2) ^ gmul(a1, 3) ^ a2 ^ a3;
    col[1] = a0 ^ gmul(a1, 2) ^ gmul(a2, 3) ^ a3;
    col[2] = a0 ^ a1 ^ gmul(a2, 2) ^ gmul(a3, 3);
    col[3] = gmul(a0, 3) ^ a1 ^ a2 ^ gmul(a3, 2);
  }
}

class AesDesign final : public Design {
 public:
  explicit AesDesign(const AesStimulus& stim) : stim_(stim) {
    in_valid_ = add_primary_control_input("aes/in_valid", 1);
    key_valid_ = add_primary_control_input("aes/key_valid", 1);
    pt_in_ = add_signal("aes/pt_in", 128, SignalKind::kPrimaryInput, SignalClass::kData);
    key_in_ = add_signal("aes/key_in", 128, SignalKind::kPrimaryInput, SignalClass::kData);
    ready_ = add_signal("aes/ready", 1, SignalKind::kPrimaryOutput, SignalClass::kData);
    out_valid_ = add_signal("aes/out_valid", 1, SignalKind::kPrimaryOutput, SignalClass::kData);
    ct_out_ = add_signal("aes/ct_out", 128, SignalKind::kPrimaryOutput, SignalClass::kData);
    busy_ = add_signal("aes/enc/busy", 1, SignalKind::kSubmoduleOutput, SignalClass::kControl);
    key_ready_ = add_signal("aes/keymem/key_ready", 1, SignalKind::kSubmoduleOutput,
                            SignalClass::kControl);
    sbox_done_ = add_signal("aes/sbox/done", 1, SignalKind::kSubmoduleOutput, SignalClass::kControl);
    fsm_ = add_control_register("aes/enc/fsm", 2);
    round_ = add_control_register("aes/enc/round", 4);
    sbox_ctr_ = add_control_register("aes/enc/sbox_ctr", 2);
    blk_tog_ = add_control_register("aes/enc/blk_tog", 1);
    state_ = add_signal("aes/enc/state", 128, SignalKind::kRegister, SignalClass::kData);
    key_ = add_signal("aes/keymem/key", 128, SignalKind::kRegister, SignalClass::kData);
    last_round_ = add_signal("aes/enc/last_round", 1, SignalKind::kWire, SignalClass::kControl);
    reset();
  }

  DesignId id() const override { return DesignId::kAes; }

  void reset() override {
    clear_all_values();
    src_idx_ = 0;
    key_sent_ = false;
    sink_.clear();
    rk_ = expand_key(Block{});
    update_outputs();
  }

  void step() override {
    // Environment, from pre-edge outputs.
    if (get(out_valid_)) sink_.push_back(read(ct_out_).value());
    const bool ready = get(ready_) != 0;
    drive(key_valid_, key_sent_ ? 0 : 1);
    drive(key_in_, key_sent_ ? 0 : to_u128(stim_.key));
    key_sent_ = true;
    const bool offer = ready && src_idx_ < kAesBlocks;
    drive(in_valid_, offer ? 1 : 0);
    drive(pt_in_, src_idx_ < kAesBlocks ? to_u128(stim_.plaintexts[src_idx_]) : 0);
    if (offer) ++src_idx_;  // the source's own handshake view

    // Key memory.
    const bool key_ready = get(key_ready_) != 0;
    if (get(key_valid_)) {
      set_wide(key_, read(key_in_).value());
      rk_ = expand_key(from_u128(read(key_).value()));
      set(key_ready_, 1);
    }

    // Encryption FSM.
    std::uint64_t fsm = get(fsm_), rnd = get(round_), ctr = get(sbox_ctr_), tog = get(blk_tog_);
    Block st = from_u128(read(state_).value());
    switch (fsm) {
      case 0:
        if (get(in_valid_) && key_ready) {
          st = from_u128(read(pt_in_).value());
          for (int i = 0; i < 16; ++i) st[i] ^= rk_[0][i];
          rnd = 1;
          ctr = 0;
          fsm = 1;
          tog ^= 1;
        }
        break;
      case 1:
        for (int i = 0; i < 4; ++i) st[4 * ctr + i] = kSbox[st[4 * ctr + i]];
        if (ctr == 3) {
          shift_rows(st);
          if (rnd != 10) mix_columns(st);
          for (int i = 0; i < 16; ++i) st[i] ^= rk_[rnd][i];
          if (rnd == 10) {
            fsm = 2;
          } else {
            rnd = (rnd + 1) & 15;
          }
        }
        ctr = (ctr + 1) & 3;
        break;
      default:
        fsm = 0;
        break;
    }
    set(fsm_, fsm);
    set(round_, rnd);
    set(sbox_ctr_, ctr);
    set(blk_tog_, tog);
    set_wide(state_, to_u128(st));
    update_outputs();
  }

  bool done() const override { return sink_.size() >= kAesBlocks; }

  OutputRecord outputs() const override {
    OutputRecord r;
    for (u128 ct : sink_) {
      r.words.push_back(static_cast<std::int64_t>(static_cast<std::uint64_t>(ct >> 64)));
      r.words.push_back(static_cast<std::int64_t>(static_cast<std::uint64_t>(ct)));
    }
    return r;
  }

 protected:
  void update_outputs() override {
    const std::uint64_t fsm = get(fsm_);
    set(ready_, fsm == 0 && get(key_ready_) ? 1 : 0);
    set(out_valid_, fsm == 2 ? 1 : 0);
    set_wide(ct_out_, fsm == 2 ? read(state_).value() : 0);
    set(busy_, fsm == 1 ? 1 : 0);
    set(sbox_done_, fsm == 1 && get(sbox_ctr_) == 3 ? 1 : 0);
    set(last_round_, get(round_) == 10 ? 1 : 0);
  }

 private:
  AesStimulus stim_;
  SignalId in_valid_, key_valid_, pt_in_, key_in_, ready_, out_valid_, ct_out_;
  SignalId busy_, key_ready_, sbox_done_, fsm_, round_, sbox_ctr_, blk_tog_, state_, key_,
      last_round_;
  int src_idx_ = 0;
  bool key_sent_ = false;
  std::vector<u128> sink_;
  std::array<Block, 16> rk_{};
};

}  // namespace

std::unique_ptr<Design> make_aes(const AesStimulus& s) { return std::make_unique<AesDesign>(s); }

// Independent reference: the OpenSSL AES-128 ECB cipher.
OutputRecord aes_oracle(const AesStimulus& s) {
  OutputRecord r;
  EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
  if (ctx == nullptr) throw InvariantViolation("EVP_CIPHER_CTX_new failed");
  if (EVP_EncryptInit_ex(ctx, EVP_aes_128_ecb(), nullptr, s.key.data(), nullptr) != 1) {
    EVP_CIPHER_CTX_free(ctx);
    throw InvariantViolation("EVP_EncryptInit_ex failed");
  }
  EVP_CIPHER_CTX_set_padding(ctx, 0);
  for (const auto& pt : s.plaintexts) {
    Block ct{};
    int len = 0;
    EVP_EncryptUpdate(ctx, ct.data(), &len, pt.data(), 16);
    u128 v = 0;
    for (auto byte : ct) v = (v << 8) | byte;
    r.words.push_back(static_cast<std::int64_t>(static_cast<std::uint64_t>(v >> 64)));
    r.words.push_back(static_cast<std::int64_t>(static_cast<std::uint64_t>(v)));
  }
  EVP_CIPHER_CTX_free(ctx);
  return r;
}

MonitorBundle aes_bundle() {
  const std::string fsm = "aes/enc/fsm", round = "aes/enc/round", ctr = "aes/enc/sbox_ctr",
                    tog = "aes/enc/blk_tog", busy = "aes/enc/busy", kr = "aes/keymem/key_ready",
                    sd = "aes/sbox/done", ready = "aes/ready", ov = "aes/out_valid",
                    iv = "aes/in_valid", kv = "aes/key_valid";
  MonitorBundle b;
  b.nets.push_back(NetBuilder("AES_1")
                       .place("init", 1).place("idle").place("run").place("upd")
                       .trans("t1", {"init"}, {"idle"}).to(kr, 1)
                       .trans("t2", {"idle"}, {"run"}).to(busy, 1)
                       .trans("t3", {"run"}, {"upd"}).to(sd, 1)
                       .trans("t4", {"upd"}, {"run"}).to(sd, 0)
                       .trans("t5", {"run"}, {"idle"}).to(ov, 1)
                       .final_transition("t5")
                       .build());
  b.nets.push_back(NetBuilder("AES_2")
                       .place("init", 1).place("wait").place("run").place("end")
                       .trans("t5", {"init"}, {"wait"}).to(kr, 1)
                       .trans("t6", {"wait"}, {"run"}).to(fsm, 1)
                       .trans("t7", {"run"}, {"run"}).to(ctr, 0)
                       .trans("t6b", {"run"}, {"wait"}).to(fsm, 0)
                       .trans("t6e", {"wait"}, {"end"}).nth(fsm, 3 * kAesBlocks)
                       .final_transition("t6e")
                       .build());
  b.nets.push_back(NetBuilder("AES_3")
                       .place("init", 1).place("key").place("ld").place("busy").place("end")
                       .trans("t8", {"init"}, {"key"}).to(kv, 1)
                       .trans("t9", {"key"}, {"ld"}).to(kv, 0)
                       .trans("t10", {"ld"}, {"busy"}).to(iv, 1)
                       .trans("t10b", {"busy"}, {"ld"}).to(ov, 1)
                       .trans("t10e", {"ld"}, {"end"}).nth_to(ov, 1, kAesBlocks)
                       .final_transition("t10e")
                       .build());
  b.nets.push_back(NetBuilder("AES_4")
                       .place("idle", 1).place("start").place("proc").place("end")
                       .trans("t13", {"idle"}, {"start"}).to(ready, 1)
                       .trans("t12", {"start"}, {"proc"}).to(busy, 1)
                       .trans("t14", {"proc"}, {"idle"}).to(ov, 1)
                       .trans("t11", {"start"}, {"end"}).nth_to(ready, 1, kAesBlocks + 1)
                       .final_transition("t11")
                       .build());
  b.nets.push_back(NetBuilder("AES_5")
                       .place("init", 1).place("c0").place("c1").place("c2").place("c3")
                       .place("end")
                       .trans("t15", {"init"}, {"c0"}).nth(busy, 1)
                       .trans("t16a", {"c0"}, {"c1"}).to(ctr, 1)
                       .trans("t16b", {"c1"}, {"c2"}).to(ctr, 2)
                       .trans("t16c", {"c2"}, {"c3"}).to(ctr, 3)
                       .trans("t17", {"c3"}, {"c0"}).to(ctr, 0)
                       .trans("t17e", {"c0"}, {"end"}).nth(ctr, 4 * 10 * kAesBlocks)
                       .final_transition("t17e")
                       .build());
  b.nets.push_back(NetBuilder("AES_6")
                       .place("init", 1).place("idle").place("wait").place("perm").place("end")
                       .trans("t18", {"init"}, {"idle"}).to(kr, 1)
                       .trans("t19s", {"idle"}, {"wait"}).to(round, 1)
                       .trans("t19", {"wait"}, {"perm"}).to(sd, 1)
                       .trans("t20", {"perm"}, {"wait"}).to(sd, 0)
                       .trans("t20l", {"wait"}, {"wait"}).to(round, 10)
                       .trans("t20d", {"wait"}, {"idle"}).to(busy, 0)
                       .trans("t20e", {"idle"}, {"end"}).nth(busy, 2 * kAesBlocks)
                       .final_transition("t20e")
                       .build());
  b.nets.push_back(NetBuilder("AES_7")
                       .place("a", 1).place("b").place("c").place("end")
                       .trans("t21", {"a"}, {"b"}).to(fsm, 1)
                       .trans("t22t", {"b"}, {"b"}).to(tog, 1)
                       .trans("t22f", {"b"}, {"b"}).to(tog, 0)
                       .trans("t22", {"b"}, {"c"}).to(fsm, 2)
                       .trans("t22r", {"c"}, {"a"}).to(fsm, 0)
                       .trans("t22e", {"a"}, {"end"}).nth(fsm, 3 * kAesBlocks)
                       .final_transition("t22e")
                       .build());
  b.presets = {{2, BitType::kAllBits, true}, {3, BitType::kAllBits, true}, {3, BitType::kMsb, true}};
  return b;
}

}  // namespace ctlmon::designs
