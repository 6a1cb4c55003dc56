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


// Convolution layer: 8x8 int8 activations, four 3x3 kernels, ReLU, 6x6x4
// output. The controller loads all weights, then all activations, then
// walks the output positions. Each position takes nine MAC cycles (all four
// channels in parallel), one accumulate cycle and four output writes.
//
//   ctrl/state 0 idle, 1 load weights, 2 load activations, 3 compute, 4 done
//   mac/fsm    0 idle, 1 mac, 2 accumulate, 3 output

#include <array>

#include "designs/common.hpp"

namespace ctlmon::designs {
namespace {

constexpr int kN = kConvSize;
constexpr int kK = kConvKernels;
constexpr int kO = kConvOut;
constexpr int kWeights = kK * 9;

std::int64_t out_word(int pos, int ch, int value) {
  return (static_cast<std::int64_t>(pos) << 18) | (ch << 16) | (value & 0xffff);
}

class ConvDesign final : public Design {
 public:
  explicit ConvDesign(const ConvStimulus& stim) : stim_(stim) {
    start_ = add_primary_control_input("conv/start", 1);
    wt_valid_ = add_primary_control_input("conv/wt_valid", 1);
    act_valid_ = add_primary_control_input("conv/act_valid", 1);
    out_ready_ = add_primary_control_input("conv/out_ready", 1);
    wt_data_ = add_signal("conv/wt_data", 8, SignalKind::kPrimaryInput, SignalClass::kData);
    act_data_ = add_signal("conv/act_data", 8, SignalKind::kPrimaryInput, SignalClass::kData);

    auto po = [&](const char* path, unsigned w) {
      return add_signal(path, w, SignalKind::kPrimaryOutput, SignalClass::kControl);
    };
    busy_ = po("conv/busy", 1);
    wt_ready_ = po("conv/wt_ready", 1);
    act_ready_ = po("conv/act_ready", 1);
    out_valid_ = po("conv/out_valid", 1);
    out_ch_ = po("conv/out_ch", 2);
    out_pos_ = po("conv/out_pos", 6);
    done_ = po("conv/done", 1);
    out_data_ = add_signal("conv/out_data", 16, SignalKind::kPrimaryOutput, SignalClass::kData);

    auto sub = [&](const char* path, unsigned w) {
      return add_signal(path, w, SignalKind::kSubmoduleOutput, SignalClass::kControl);
    };
    wt_busy_ = sub("conv/wt/busy", 1);
    wt_done_ = sub("conv/wt/done", 1);
    wt_addr_o_ = sub("conv/wt/addr_o", 6);
    act_busy_ = sub("conv/act/busy", 1);
    act_done_ = sub("conv/act/done", 1);
    act_addr_o_ = sub("conv/act/addr_o", 6);
    mac_busy_ = sub("conv/mac/busy", 1);
    mac_tap_o_ = sub("conv/mac/tap_o", 4);
    acc_valid_ = sub("conv/acc/valid", 1);
    out_busy_ = sub("conv/out/busy", 1);

    state_ = add_control_register("conv/ctrl/state", 3);
    wt_fsm_ = add_control_register("conv/wt/fsm", 2);
    wt_addr_ = add_control_register("conv/wt/addr", 6);
    act_fsm_ = add_control_register("conv/act/fsm", 2);
    act_row_ = add_control_register("conv/act/row", 4);
    act_col_ = add_control_register("conv/act/col", 4);
    mac_fsm_ = add_control_register("conv/mac/fsm", 2);
    mac_row_ = add_control_register("conv/mac/row", 4);
    mac_col_ = add_control_register("conv/mac/col", 4);
    mac_tap_ = add_control_register("conv/mac/tap", 4);
    out_chr_ = add_control_register("conv/out/ch", 2);
    out_posr_ = add_control_register("conv/out/pos", 6);
    for (int k = 0; k < kK; ++k) {
      acc_[k] = add_signal("conv/acc/sum" + std::to_string(k), 20, SignalKind::kRegister,
                           SignalClass::kData);
      obuf_[k] = add_signal("conv/out/buf" + std::to_string(k), 16, SignalKind::kRegister,
                            SignalClass::kData);
    }
    reset();
  }

  DesignId id() const override { return DesignId::kConv; }

  void reset() override {
    clear_all_values();
    wmem_.fill(0);
    amem_.fill(0);
    wt_idx_ = act_idx_ = 0;
    started_ = false;
    sink_.clear();
    update_outputs();
  }

  void step() override {
    // Environment.
    const bool wt_ready = get(wt_ready_) != 0, act_ready = get(act_ready_) != 0;
    const bool out_valid = get(out_valid_) != 0;
    // The source and sink follow their own handshake view; the design sees
    // the (possibly forced) inputs.
    drive(start_, started_ ? 0 : 1);
    started_ = true;
    const bool wt_offer = wt_ready && wt_idx_ < kWeights;
    const bool act_offer = act_ready && act_idx_ < kN * kN;
    drive(wt_valid_, wt_offer ? 1 : 0);
    drive(wt_data_, wt_idx_ < kWeights ? static_cast<std::uint8_t>(stim_.weights[wt_idx_]) : 0);
    drive(act_valid_, act_offer ? 1 : 0);
    drive(act_data_, act_idx_ < kN * kN ? static_cast<std::uint8_t>(stim_.act[act_idx_]) : 0);
    drive(out_ready_, 1);
    const bool wt_acc = get(wt_valid_) && wt_ready;
    const bool act_acc = get(act_valid_) && act_ready;
    const bool out_acc = out_valid && get(out_ready_);
    if (wt_offer) ++wt_idx_;
    if (act_offer) ++act_idx_;
    if (out_valid) {
      const auto data = static_cast<std::int16_t>(get(out_data_));
      sink_.push_back(out_word(static_cast<int>(get(out_pos_)), static_cast<int>(get(out_ch_)), data));
    }

    std::uint64_t state = get(state_);
    std::uint64_t wt_fsm = get(wt_fsm_), wt_addr = get(wt_addr_);
    std::uint64_t act_fsm = get(act_fsm_), act_row = get(act_row_), act_col = get(act_col_);
    std::uint64_t mac_fsm = get(mac_fsm_), row = get(mac_row_), col = get(mac_col_),
                  tap = get(mac_tap_);
    std::uint64_t ch = get(out_chr_), pos = get(out_posr_);
    bool acc_valid = false;

    // Weight fetch.
    if (wt_fsm == 1 && wt_acc) {
      wmem_[wt_addr] = static_cast<std::int8_t>(get(wt_data_));
      if (wt_addr == kWeights - 1) wt_fsm = 2;
      wt_addr = (wt_addr + 1) & 63;
    }

    // Activation fetch.
    if (act_fsm == 1 && act_acc) {
      amem_[(act_row & 7) * kN + (act_col & 7)] = static_cast<std::int8_t>(get(act_data_));
      if (act_col == kN - 1) {
        act_col = 0;
        if (act_row == kN - 1) act_fsm = 2;
        act_row = (act_row + 1) & 15;
      } else {
        act_col = (act_col + 1) & 15;
      }
    }

    // MAC array controller, accumulator and output unit.
    switch (mac_fsm) {
      case 1: {
        const std::uint64_t i = tap / 3, j = tap % 3;
        for (int k = 0; k < kK; ++k) {
          const int a = amem_[((row + i) & 7) * kN + ((col + j) & 7)];
          const int w = wmem_[(k * 9 + tap) & 63];
          set(acc_[k], static_cast<std::uint64_t>(static_cast<std::int64_t>(
                           sign20(get(acc_[k])) + a * w)));
        }
        if (tap == 8) {
          mac_fsm = 2;
          tap = 0;
        } else {
          tap = (tap + 1) & 15;
        }
        break;
      }
      case 2:
        for (int k = 0; k < kK; ++k) {
          const std::int64_t v = sign20(get(acc_[k]));
          set(obuf_[k], static_cast<std::uint64_t>(v > 0 ? v : 0));
          set(acc_[k], 0);
        }
        acc_valid = true;
        mac_fsm = 3;
        ch = 0;
        break;
      case 3:
        if (out_acc) {
          if (ch == kK - 1) {
            ch = 0;
            pos = (pos + 1) & 63;
            if (col == kO - 1) {
              col = 0;
              row = (row + 1) & 15;
            } else {
              col = (col + 1) & 15;
            }
            if (row >= kO) {
              mac_fsm = 0;
            } else {
              mac_fsm = 1;
              tap = 0;
            }
          } else {
            ch = (ch + 1) & 3;
          }
        }
        break;
      default:
        break;
    }

    // Top controller.
    switch (state) {
      case 0:
        if (get(start_)) {
          state = 1;
          wt_fsm = 1;
          wt_addr = 0;
        }
        break;
      case 1:
        if (get(wt_fsm_) == 2) {
          state = 2;
          act_fsm = 1;
          act_row = act_col = 0;
        }
        break;
      case 2:
        if (get(act_fsm_) == 2) {
          state = 3;
          mac_fsm = 1;
          row = col = tap = 0;
          pos = 0;
        }
        break;
      case 3:
        if (get(mac_fsm_) == 3 && mac_fsm == 0) state = 4;
        break;
      case 4:
        break;
      default:
        state = 0;
        break;
    }

    set(state_, state);
    set(wt_fsm_, wt_fsm);
    set(wt_addr_, wt_addr);
    set(act_fsm_, act_fsm);
    set(act_row_, act_row);
    set(act_col_, act_col);
    set(mac_fsm_, mac_fsm);
    set(mac_row_, row);
    set(mac_col_, col);
    set(mac_tap_, tap);
    set(out_chr_, ch);
    set(out_posr_, pos);
    set(acc_valid_, acc_valid);
    update_outputs();
  }

  bool done() const override { return get(done_) != 0; }

  OutputRecord outputs() const override { return OutputRecord{sink_}; }

 protected:
  void update_outputs() override {
    const std::uint64_t state = get(state_), mac_fsm = get(mac_fsm_);
    set(busy_, state >= 1 && state <= 3);
    set(wt_ready_, get(wt_fsm_) == 1);
    set(act_ready_, get(act_fsm_) == 1);
    set(out_valid_, mac_fsm == 3);
    set(out_ch_, mac_fsm == 3 ? get(out_chr_) : 0);
    set(out_pos_, mac_fsm == 3 ? get(out_posr_) : 0);
    set(out_data_, mac_fsm == 3 ? get(obuf_[get(out_chr_)]) : 0);
    set(done_, state == 4);
    set(wt_busy_, get(wt_fsm_) == 1);
    set(wt_done_, get(wt_fsm_) == 2);
    set(wt_addr_o_, get(wt_addr_));
    set(act_busy_, get(act_fsm_) == 1);
    set(act_done_, get(act_fsm_) == 2);
    set(act_addr_o_, (get(act_row_) * kN + get(act_col_)) & 63);
    set(mac_busy_, mac_fsm == 1);
    set(mac_tap_o_, get(mac_tap_));
    set(out_busy_, mac_fsm == 3);
  }

 private:
  static std::int64_t sign20(std::uint64_t v) {
    return (v & (1u << 19)) ? static_cast<std::int64_t>(v) - (1 << 20) : static_cast<std::int64_t>(v);
  }

  ConvStimulus stim_;
  SignalId start_, wt_valid_, act_valid_, out_ready_, wt_data_, act_data_;
  SignalId busy_, wt_ready_, act_ready_, out_valid_, out_ch_, out_pos_, done_, out_data_;
  SignalId wt_busy_, wt_done_, wt_addr_o_, act_busy_, act_done_, act_addr_o_, mac_busy_,
      mac_tap_o_, acc_valid_, out_busy_;
  SignalId state_, wt_fsm_, wt_addr_, act_fsm_, act_row_, act_col_, mac_fsm_, mac_row_, mac_col_,
      mac_tap_, out_chr_, out_posr_;
  std::array<SignalId, kK> acc_{}, obuf_{};
  std::array<std::int8_t, 64> wmem_{};
  std::array<std::int8_t, kN * kN> amem_{};
  int wt_idx_ = 0, act_idx_ = 0;
  bool started_ = false;
  std::vector<std::int64_t> sink_;
};

}  // namespace

std::unique_ptr<Design> make_conv(const ConvStimulus& s) { return std::make_unique<ConvDesign>(s); }

OutputRecord conv_oracle(const ConvStimulus& s) {
  OutputRecord r;
  for (int y = 0; y < kO; ++y) {
    for (int x = 0; x < kO; ++x) {
      for (int k = 0; k < kK; ++k) {
        int sum = 0;
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) sum += s.act[(y + i) * kN + x + j] * s.weights[k * 9 + i * 3 + j];
        }
        r.words.push_back(out_word(y * kO + x, k, sum > 0 ? sum : 0));
      }
    }
  }
  return r;
}

MonitorBundle conv_bundle() {
  const std::string state = "conv/ctrl/state", mac_fsm = "conv/mac/fsm", out_ch = "conv/out/ch",
                    wt_fsm = "conv/wt/fsm", wt_addr = "conv/wt/addr", act_fsm = "conv/act/fsm",
                    ov = "conv/out_valid", done = "conv/done", acc_valid = "conv/acc/valid";
  MonitorBundle b;
  b.nets.push_back(NetBuilder("CONV_1")
                       .place("init", 1).place("a").place("b").place("c").place("d").place("e")
                       .place("end")
                       .trans("t1", {"init"}, {"a"}).to(state, 3)
                       .trans("t2", {"e"}, {"a"}).to(out_ch, 0)
                       .trans("t3", {"a"}, {"b"}).to(mac_fsm, 1)
                       .trans("t4", {"b"}, {"c"}).to(mac_fsm, 2)
                       .trans("t5", {"c"}, {"d"}).to(mac_fsm, 3)
                       .trans("t6", {"d"}, {"e"}).to(out_ch, 3)
                       .trans("t7", {"a"}, {"end"}).to(state, 4)
                       .final_transition("t7")
                       .build());
  b.nets.push_back(NetBuilder("CONV_2")
                       .place("init", 1).place("a").place("b").place("c").place("end")
                       .trans("t8", {"init"}, {"a"}).to("conv/act/done", 1)
                       .trans("t10", {"a"}, {"b"}).to("conv/mac/busy", 1)
                       .trans("t9", {"b"}, {"c"}).to(acc_valid, 1)
                       .trans("t11", {"c"}, {"a"}).to(acc_valid, 0)
                       .trans("t11e", {"a"}, {"end"}).to(done, 1)
                       .final_transition("t11e")
                       .build());
  b.nets.push_back(NetBuilder("CONV_3")
                       .place("init", 1).place("a").place("b").place("end")
                       .trans("t12", {"init"}, {"a"}).to(act_fsm, 1)
                       .trans("t13", {"a"}, {"a"}).to("conv/act/col", kConvSize - 1)
                       .trans("t14", {"a"}, {"b"}).nth("conv/act/row", kConvSize)
                       .trans("t14e", {"b"}, {"end"}).to(act_fsm, 2)
                       .final_transition("t14e")
                       .build());
  b.nets.push_back(NetBuilder("CONV_4")
                       .place("init", 1).place("a").place("b").place("c").place("end")
                       .trans("t15", {"init"}, {"a"}).to(state, 1)
                       .trans("t16", {"a"}, {"b"}).to("conv/wt_ready", 1)
                       .trans("t17", {"b"}, {"c"}).nth(wt_addr, kWeights)
                       .trans("t17e", {"c"}, {"end"}).to("conv/wt_ready", 0)
                       .final_transition("t17e")
                       .build());
  b.nets.push_back(NetBuilder("CONV_5")
                       .place("s0", 1).place("s1").place("s2").place("s3").place("end")
                       .trans("t20", {"s0"}, {"s1"}).to(state, 1)
                       .trans("t21a", {"s1"}, {"s2"}).to(state, 2)
                       .trans("t21b", {"s2"}, {"s3"}).to(state, 3)
                       .trans("t22", {"s3"}, {"s3"}).nth_to("conv/out/pos", kO * kO / 2, 1)
                       .trans("t23", {"s3"}, {"end"}).to(state, 4)
                       .final_transition("t23")
                       .build());
  b.nets.push_back(NetBuilder("CONV_6")
                       .place("init", 1).place("a").place("b").place("c").place("d").place("end")
                       .trans("t24", {"init"}, {"a"}).to(state, 3)
                       .trans("t25", {"a"}, {"b"}).to("conv/mac/tap", 8)
                       .trans("t27", {"b"}, {"c"}).to("conv/mac/tap", 0)
                       .trans("t28", {"c"}, {"d"}).to(ov, 1)
                       .trans("t26", {"d"}, {"a"}).to(ov, 0)
                       .trans("t26e", {"a"}, {"end"}).to(done, 1)
                       .final_transition("t26e")
                       .build());
  b.nets.push_back(NetBuilder("CONV_7")
                       .place("init", 1).place("a").place("b").place("c").place("end")
                       .trans("t29", {"init"}, {"a"}).to(wt_fsm, 1)
                       .trans("t30", {"a"}, {"b"}).nth(wt_addr, 9)
                       .trans("t31", {"b"}, {"c"}).nth(wt_addr, 18)
                       .trans("t31b", {"c"}, {"c"}).nth(wt_addr, 27)
                       .trans("t31e", {"c"}, {"end"}).to(wt_fsm, 2)
                       .final_transition("t31e")
                       .build());
  b.nets.push_back(NetBuilder("CONV_8")
                       .place("init", 1).place("a").place("b").place("c").place("d").place("end")
                       .trans("t33", {"init"}, {"a"}).to("conv/start", 1)
                       .trans("t34", {"a"}, {"b"}).to(wt_fsm, 1)
                       .trans("t35", {"b"}, {"c"}).to(wt_addr, kWeights - 1)
                       .trans("t36", {"c"}, {"d"}).to(wt_fsm, 2)
                       .trans("t37", {"d"}, {"end"}).to(state, 4)
                       .final_transition("t37")
                       .build());
  b.nets.push_back(NetBuilder("CONV_9")
                       .place("init", 1).place("a").place("b").place("end")
                       .trans("t38", {"init"}, {"a"}).to(state, 3)
                       .trans("t39", {"a"}, {"b"}).to(ov, 1)
                       .trans("t40", {"b"}, {"a"}).to(ov, 0)
                       .trans("t40e", {"a"}, {"end"}).nth("conv/out/pos", kO * kO)
                       .final_transition("t40e")
                       .build());
  b.nets.push_back(NetBuilder("CONV_10")
                       .place("init", 1).place("a").place("b").place("end")
                       .trans("t41", {"init"}, {"a"}).to("conv/busy", 1)
                       .trans("t42", {"a"}, {"b"}).to(acc_valid, 1)
                       .trans("t43", {"b"}, {"a"}).to("conv/out_ch", 1)
                       .trans("t43e", {"a"}, {"end"}).nth("conv/busy", 2)
                       .final_transition("t43e")
                       .build());
  b.nets.push_back(NetBuilder("CONV_11")
                       .place("init", 1).place("a").place("b").place("c").place("end")
                       .trans("t44", {"init"}, {"a"}).to(state, 3)
                       .trans("t45", {"a"}, {"b"}).nth_to(acc_valid, 1, kO * kO)
                       .trans("t46", {"b"}, {"c"}).nth_to("conv/out_ch", 3, kO * kO)
                       .trans("t46e", {"c"}, {"end"}).to(done, 1)
                       .final_transition("t46e")
                       .build());
  b.nets.push_back(NetBuilder("CONV_12")
                       .place("init", 1).place("a").place("b").place("c").place("end")
                       .trans("t47", {"init"}, {"a"}).to(act_fsm, 2)
                       .trans("t48", {"a"}, {"b"}).nth_to("conv/out_ch", 1, 1)
                       .trans("t49", {"b"}, {"c"}).nth_to(ov, 0, 1)
                       .trans("t49e", {"c"}, {"end"}).to(done, 1)
                       .final_transition("t49e")
                       .build());
  b.nets.push_back(NetBuilder("CONV_13")
                       .place("init", 1).place("a").place("end")
                       .trans("t50", {"init"}, {"a"}).to(state, 3)
                       .trans("t51", {"a"}, {"a"}).to("conv/mac/col", kO - 1)
                       .trans("t52", {"a"}, {"end"}).nth("conv/mac/row", kO)
                       .final_transition("t52")
                       .build());
  b.nets.push_back(NetBuilder("CONV_14")
                       .place("init", 1).place("a").place("b").place("c").place("end")
                       .trans("t53", {"init"}, {"a"}).to("conv/start", 1)
                       .trans("t54", {"a"}, {"b"}).to("conv/wt/done", 1)
                       .trans("t55", {"b"}, {"c"}).nth("conv/act/addr_o", kConvSize * kConvSize / 2)
                       .trans("t55e", {"c"}, {"end"}).to("conv/act/done", 1)
                       .final_transition("t55e")
                       .build());
  b.presets = {{1, BitType::kAllBits, true}, {1, BitType::kMsb, true},
               {2, BitType::kMsb, true},     {2, BitType::kUsedMsb, true},
               {3, BitType::kMsb, true},     {3, BitType::kUsedMsb, true},
               {3, BitType::kLsb, true}};
  return b;
}

}  // namespace ctlmon::designs
