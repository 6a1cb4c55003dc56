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


// Streaming 3x3 Gaussian blur over a 16x12 image.
//
//   source -> recv -> line-buffer ring (4 rows) -> blur core -> fifo -> send -> sink
//
// The receiver takes one pixel per cycle and idles one cycle after every
// line. The core emits output (x, y) once input pixel
// (min(x+1, 15), min(y+1, 11)) has arrived. Borders replicate.

#include <algorithm>
#include <array>

#include "designs/common.hpp"

namespace ctlmon::designs {
namespace {

constexpr int kW = kGausWidth;
constexpr int kH = kGausHeight;
constexpr int kFifoDepth = 4;

int blur_at(const auto& pixel, int x, int y) {
  static constexpr int kK[3][3] = {{1, 2, 1}, {2, 4, 2}, {1, 2, 1}};
  int sum = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      sum += kK[i][j] * pixel(std::clamp(x + j - 1, 0, kW - 1), std::clamp(y + i - 1, 0, kH - 1));
    }
  }
  return (sum + 8) >> 4;
}

std::int64_t out_word(int data, bool user, bool last) {
  return data | (user ? 1 << 8 : 0) | (last ? 1 << 9 : 0);
}

class GausDesign final : public Design {
 public:
  explicit GausDesign(const GausStimulus& stim) : stim_(stim) {
    s_valid_ = add_primary_control_input("gaus/s_valid", 1);
    s_user_ = add_primary_control_input("gaus/s_user", 1);
    s_last_ = add_primary_control_input("gaus/s_last", 1);
    m_ready_ = add_primary_control_input("gaus/m_ready", 1);
    s_data_ = add_signal("gaus/s_data", 8, SignalKind::kPrimaryInput, SignalClass::kData);

    m_user_ = add_signal("gaus/m_user", 1, SignalKind::kPrimaryOutput, SignalClass::kControl);
    s_ready_ = add_signal("gaus/s_ready", 1, SignalKind::kPrimaryOutput, SignalClass::kControl);
    m_valid_ = add_signal("gaus/m_valid", 1, SignalKind::kPrimaryOutput, SignalClass::kControl);
    m_last_ = add_signal("gaus/m_last", 1, SignalKind::kPrimaryOutput, SignalClass::kControl);
    m_data_ = add_signal("gaus/m_data", 8, SignalKind::kPrimaryOutput, SignalClass::kData);

    auto sub = [&](const char* path, unsigned w) {
      return add_signal(path, w, SignalKind::kSubmoduleOutput, SignalClass::kControl);
    };
    recv_px_ = sub("gaus/recv/px_valid", 1);
    recv_eol_ = sub("gaus/recv/eol", 1);
    recv_sof_ = sub("gaus/recv/sof", 1);
    recv_row_ = sub("gaus/recv/row", 4);
    core_push_ = sub("gaus/core/push", 1);
    core_busy_ = sub("gaus/core/busy", 1);
    core_eol_ = sub("gaus/core/eol", 1);
    core_row_ = sub("gaus/core/row", 4);
    fifo_empty_ = sub("gaus/fifo/empty", 1);
    send_eol_ = sub("gaus/send/eol", 1);
    send_eof_ = sub("gaus/send/eof", 1);
    send_row_ = sub("gaus/send/row", 4);

    rx_ = add_control_register("gaus/recv/x", 4);
    ry_ = add_control_register("gaus/recv/y", 4);
    gap_ = add_control_register("gaus/recv/gap", 1);
    fsm_ = add_control_register("gaus/core/fsm", 2);
    cx_ = add_control_register("gaus/core/x", 4);
    cy_ = add_control_register("gaus/core/y", 4);
    count_ = add_control_register("gaus/fifo/count", 3);
    wp_ = add_control_register("gaus/fifo/wp", 2);
    rp_ = add_control_register("gaus/fifo/rp", 2);
    sx_ = add_control_register("gaus/send/x", 4);
    sy_ = add_control_register("gaus/send/y", 4);
    for (int i = 0; i < kFifoDepth; ++i) {
      fifo_[i] = add_signal("gaus/fifo/mem" + std::to_string(i), 8, SignalKind::kRegister,
                            SignalClass::kData);
    }
    reset();
  }

  DesignId id() const override { return DesignId::kGaus; }

  void reset() override {
    clear_all_values();
    lines_ = {};
    src_idx_ = 0;
    sink_.clear();
    last_seen_ = 0;
    update_outputs();
  }

  void step() override {
    // Environment.
    const bool s_ready = get(s_ready_) != 0;
    const bool m_valid = get(m_valid_) != 0;
    const bool have = src_idx_ < kW * kH;
    drive(s_valid_, have ? 1 : 0);
    drive(s_data_, have ? stim_.pixels[src_idx_] : 0);
    drive(s_user_, have && src_idx_ == 0 ? 1 : 0);
    drive(s_last_, have && src_idx_ % kW == kW - 1 ? 1 : 0);
    drive(m_ready_, 1);
    // The source and sink follow their own handshake view; the design sees
    // the (possibly forced) inputs.
    const bool in_acc = get(s_valid_) && s_ready;
    const bool out_acc = m_valid && get(m_ready_);
    if (have && s_ready) ++src_idx_;
    if (m_valid) {
      const bool last = get(m_last_) != 0;
      sink_.push_back(out_word(static_cast<int>(get(m_data_)), get(m_user_) != 0, last));
      if (last) ++last_seen_;
    }

    // Receiver.
    std::uint64_t rx = get(rx_), ry = get(ry_), gap = get(gap_);
    bool px = false, eol = false, sof = false;
    const std::uint64_t recv_count = ry * kW + rx;
    if (gap) gap = 0;
    if (in_acc) {
      px = true;
      if (get(s_user_)) {
        rx = 0;
        ry = 0;
        sof = true;
      }
      if (ry < kH) lines_[ry & 3][rx] = static_cast<std::uint8_t>(get(s_data_));
      if (get(s_last_) || rx == kW - 1) {
        rx = 0;
        ry = (ry + 1) & 15;
        gap = 1;
        eol = true;
      } else {
        rx = (rx + 1) & 15;
      }
    }

    // Blur core.
    std::uint64_t fsm = get(fsm_), cx = get(cx_), cy = get(cy_);
    std::uint64_t count = get(count_), wp = get(wp_), rp = get(rp_);
    bool push = false, core_eol = false;
    switch (fsm) {
      case 0:
        if (sof) {
          fsm = 1;
          cx = 0;
          cy = 0;
        }
        break;
      case 1: {
        const std::uint64_t need =
            std::min<std::uint64_t>(cy + 1, kH - 1) * kW + std::min<std::uint64_t>(cx + 1, kW - 1);
        if (recv_count > need && count < kFifoDepth) {
          const int x = static_cast<int>(cx), y = static_cast<int>(cy);
          const int v = blur_at([&](int px_x, int px_y) { return lines_[px_y & 3][px_x]; }, x,
                                std::min(y, 15));
          set(fifo_[wp], static_cast<std::uint64_t>(v));
          wp = (wp + 1) & 3;
          push = true;
          if (cx == kW - 1) {
            cx = 0;
            cy = (cy + 1) & 15;
            core_eol = true;
            if (cy == kH) fsm = 2;
          } else {
            cx = (cx + 1) & 15;
          }
        }
        break;
      }
      case 2:
        break;
      default:
        fsm = 0;
        break;
    }

    // Sender.
    std::uint64_t sx = get(sx_), sy = get(sy_);
    bool send_eol = false, send_eof = false;
    if (out_acc) {
      rp = (rp + 1) & 3;
      if (sx == kW - 1) {
        sx = 0;
        sy = (sy + 1) & 15;
        send_eol = true;
        send_eof = sy == kH;
      } else {
        sx = (sx + 1) & 15;
      }
    }
    count = (count + (push ? 1 : 0) - (out_acc ? 1 : 0)) & 7;

    set(rx_, rx);
    set(ry_, ry);
    set(gap_, gap);
    set(fsm_, fsm);
    set(cx_, cx);
    set(cy_, cy);
    set(count_, count);
    set(wp_, wp);
    set(rp_, rp);
    set(sx_, sx);
    set(sy_, sy);
    set(recv_px_, px);
    set(recv_eol_, eol);
    set(recv_sof_, sof);
    set(core_push_, push);
    set(core_eol_, core_eol);
    set(send_eol_, send_eol);
    set(send_eof_, send_eof);
    update_outputs();
  }

  bool done() const override { return last_seen_ >= kH; }

  OutputRecord outputs() const override { return OutputRecord{sink_}; }

 protected:
  void update_outputs() override {
    const std::uint64_t ry = get(ry_), cy = get(cy_), count = get(count_);
    set(s_ready_, !get(gap_) && ry < kH && ry < cy + 3 && get(fsm_) != 2 ? 1 : 0);
    const bool mv = count != 0;
    set(m_valid_, mv);
    set(m_data_, mv ? get(fifo_[get(rp_)]) : 0);
    set(m_user_, mv && get(sx_) == 0 && get(sy_) == 0);
    set(m_last_, mv && get(sx_) == kW - 1);
    set(recv_row_, ry);
    set(core_row_, cy);
    set(core_busy_, get(fsm_) == 1);
    set(fifo_empty_, count == 0);
    set(send_row_, get(sy_));
  }

 private:
  GausStimulus stim_;
  SignalId s_valid_, s_user_, s_last_, m_ready_, s_data_;
  SignalId m_user_, s_ready_, m_valid_, m_last_, m_data_;
  SignalId recv_px_, recv_eol_, recv_sof_, recv_row_, core_push_, core_busy_, core_eol_,
      core_row_, fifo_empty_, send_eol_, send_eof_, send_row_;
  SignalId rx_, ry_, gap_, fsm_, cx_, cy_, count_, wp_, rp_, sx_, sy_;
  std::array<SignalId, kFifoDepth> fifo_{};
  std::array<std::array<std::uint8_t, kW>, 4> lines_{};
  int src_idx_ = 0;
  std::vector<std::int64_t> sink_;
  int last_seen_ = 0;
};

}  // namespace

std::unique_ptr<Design> make_gaus(const GausStimulus& s) { return std::make_unique<GausDesign>(s); }

OutputRecord gaus_oracle(const GausStimulus& s) {
  OutputRecord r;
  for (int y = 0; y < kH; ++y) {
    for (int x = 0; x < kW; ++x) {
      const int v = blur_at([&](int px, int py) { return s.pixels[py * kW + px]; }, x, y);
      r.words.push_back(out_word(v, x == 0 && y == 0, x == kW - 1));
    }
  }
  return r;
}

MonitorBundle gaus_bundle() {
  MonitorBundle b;
  b.nets.push_back(NetBuilder("GAUS_1")
                       .place("init", 1).place("calc").place("line").place("send").place("end")
                       .trans("t1", {"init"}, {"calc"}).to("gaus/recv/sof", 1)
                       .trans("t2", {"calc"}, {"line"}).to("gaus/core/busy", 1)
                       .trans("t3", {"line"}, {"send"}).to("gaus/core/eol", 1)
                       .trans("t4", {"send"}, {"line"}).to("gaus/send/eol", 1)
                       .trans("t4e", {"line"}, {"end"}).to("gaus/send/eof", 1)
                       .final_transition("t4e")
                       .build());
  b.nets.push_back(NetBuilder("GAUS_2")
                       .place("calc", 1).place("send").place("recv").place("end")
                       .trans("t6", {"calc"}, {"send"}).any("gaus/core/row")
                       .trans("t7", {"send"}, {"calc"}).any("gaus/send/row")
                       .trans("t8", {"calc"}, {"calc", "recv"}).nth("gaus/recv/row", kH)
                       .trans("t5", {"calc", "recv"}, {"end"}).nth("gaus/send/row", kH)
                       .final_transition("t5")
                       .build());
  b.nets.push_back(NetBuilder("GAUS_3")
                       .place("init", 1).place("recv").place("calc").place("send").place("out")
                       .place("end")
                       .trans("t9", {"init"}, {"recv"}).nth_to("gaus/recv/px_valid", 1, 1)
                       .trans("t11", {"recv"}, {"calc"}).nth_to("gaus/core/push", 1, 1)
                       .trans("t13", {"calc"}, {"send"}).nth_to("gaus/m_valid", 1, 1)
                       .trans("t14", {"send"}, {"out"}).to("gaus/m_user", 1)
                       .trans("t15", {"out"}, {"out"}).to("gaus/send/eol", 1)
                       .trans("t16", {"out"}, {"end"}).to("gaus/send/eof", 1)
                       .final_transition("t16")
                       .build());
  b.presets = {{1, BitType::kAllBits, true}, {2, BitType::kAllBits, true}, {3, BitType::kMsb, true}};
  return b;
}

}  // namespace ctlmon::designs
