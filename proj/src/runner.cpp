/*
 * Copyright 2026 The ponsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ponsim/runner.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ponsim/engine.hpp"
#include "ponsim/errors.hpp"
#include "ponsim/mac_olt.hpp"
#include "ponsim/mac_ont.hpp"
#include "ponsim/phy.hpp"
#include "ponsim/traffic.hpp"

namespace ponsim {

namespace {

constexpr EntityId kOltEntity = 0;
constexpr std::uint64_t kWarmupMarginFrames = 10;
// Traffic starts slightly ahead of the measurement window so the first
// measured frame already sees a steady-state queue.
constexpr std::uint64_t kPrimingFrames = 2;
constexpr std::uint64_t kDrainFrames = 2;
constexpr double kUpstreamNm = 1310.0;

/// Upstream slot windows sit on a uniform 448-tick grid offset by the
/// equalization target: window j = frame j/53, slot j%53, starting at
/// kEqualizationTarget + 448*j.
BitTime window_start(std::uint64_t j) {
  return kEqualizationTarget + static_cast<BitTime>(j) * kSlotTicks;
}

struct OntRuntime {
  OntSpec spec;
  OntMac mac;
  BitTime prop_ticks{0};      // one-way feeder + drop
  double upstream_rx_dbm{0};  // at the OSU receiver
  std::optional<TrafficSource> traffic;
  BitTime next_arrival{0};

  OntRuntime(const OntSpec& s, OntMac m) : spec(s), mac(std::move(m)) {}
};

class SimulationRun {
 public:
  explicit SimulationRun(const Scenario& s) : scenario_(s) {
    OltConfig cfg;
    cfg.polling_interval_frames = s.plant.polling_interval_frames;
    cfg.force_zero_equalization = s.plant.force_equalization_zero;
    olt_.emplace(cfg);
    temperature_c_ = s.plant.awg ? s.plant.awg->reference_temp_c : 25.0;

    for (const auto& spec : s.onts) {
      if (spec.kind != OntKind::Tdm) continue;
      auto rt = std::make_unique<OntRuntime>(spec, OntMac(spec.id));
      rt->prop_ticks = propagation_ticks(s.plant.feeder_m + spec.fiber_m);
      rt->upstream_rx_dbm =
          s.plant.ont_launch_power_dbm -
          path_loss_db(upstream_path(spec), kUpstreamNm, s.wavelength_plan);
      if (const TrafficSpec* t = s.traffic_for(spec.id))
        rt->traffic.emplace(t->model, t->rate_cells_per_s, s.seed,
                            t->stream.value_or(t->ont_id));
      olt_->admit_ont(spec.id, spec.weight, spec.max_grants_per_frame);
      olt_->start_ranging(spec.id);
      tdm_.emplace(spec.id, std::move(rt));
    }

    engine_.attach(kOltEntity, [this](const Event& e) { on_olt_event(e); });
    for (auto& [id, rt] : tdm_) {
      OntRuntime* r = rt.get();
      engine_.attach(id, [this, r](const Event& e) { on_ont_event(*r, e); });
    }
  }

  RunResult run() {
    for (const auto& [t_s, celsius] : scenario_.temperature_profile)
      engine_.schedule(
          static_cast<BitTime>(std::llround(t_s * kLineRateBps)), kOltEntity,
          TemperatureStep{celsius});
    engine_.schedule(0, kOltEntity, FrameStart{0});
    engine_.run_all();
    finalize_windows(std::nullopt);
    return collect();
  }

 private:
  OpticalPath upstream_path(const OntSpec& spec) const {
    OpticalPath p;
    p.feeder_m = scenario_.plant.feeder_m;
    p.drop_m = spec.fiber_m;
    p.connector_loss_db = scenario_.plant.connector_loss_db;
    p.extra_filter_db = scenario_.plant.cwdm_insertion_db;
    p.splitter = scenario_.plant.splitter;
    p.atten_1300_db_per_km = scenario_.plant.atten_1300_db_per_km;
    p.atten_1500_db_per_km = scenario_.plant.atten_1500_db_per_km;
    return p;
  }

  OpticalPath overlay_path(double drop_m, bool through_awg,
                           double extra_filter_db) const {
    OpticalPath p;
    p.feeder_m = scenario_.plant.feeder_m;
    p.drop_m = drop_m;
    p.connector_loss_db = scenario_.plant.connector_loss_db;
    p.extra_filter_db = extra_filter_db;
    if (through_awg)
      p.awg = scenario_.plant.awg;
    else
      p.splitter = scenario_.plant.splitter;
    p.atten_1300_db_per_km = scenario_.plant.atten_1300_db_per_km;
    p.atten_1500_db_per_km = scenario_.plant.atten_1500_db_per_km;
    return p;
  }

  // ---- OLT-side events ----------------------------------------------------

  void on_olt_event(const Event& e) {
    if (const auto* fs = std::get_if<FrameStart>(&e.payload)) {
      on_frame_start(fs->frame_no);
    } else if (const auto* ba = std::get_if<BurstArrival>(&e.payload)) {
      on_burst_arrival(*ba);
    } else if (const auto* rt = std::get_if<RangingTimer>(&e.payload)) {
      olt_->on_ranging_timeout(rt->ont_id, rt->attempt);
    } else if (const auto* ts = std::get_if<TemperatureStep>(&e.payload)) {
      temperature_c_ = ts->celsius;
    }
  }

  void on_frame_start(std::uint64_t frame_no) {
    const BitTime now = engine_.now();
    finalize_windows(now);

    if (!measurement_planned_ && olt_->all_ranged() && olt_->ranging_idle() &&
        all_grant_eligible()) {
      measurement_planned_ = true;
      const std::uint64_t traffic_start = frame_no + kWarmupMarginFrames;
      n0_ = traffic_start + kPrimingFrames;
      n1_ = n0_ + measured_frames();
      for (auto& [id, rt] : tdm_) {
        if (!rt->traffic) continue;
        rt->next_arrival = traffic_start * kFrameTicks + rt->traffic->next_gap();
        if (rt->next_arrival < n1_ * kFrameTicks)
          engine_.schedule(rt->next_arrival, id, TrafficArrival{id});
      }
    }
    if (measurement_planned_ && frame_no == n1_)
      olt_->set_grants_enabled(false);

    OltFrame out = olt_->next_frame(frame_no, now);
    schedules_.emplace(frame_no, out.schedule);
    if (out.timer)
      engine_.schedule(out.timer->deadline, kOltEntity,
                       RangingTimer{out.timer->ont_id, out.timer->attempt});

    auto shared = std::make_shared<const DownstreamFrame>(std::move(out.frame));
    for (auto& [id, rt] : tdm_)
      engine_.schedule(now + rt->prop_ticks, id,
                       FrameArrival{frame_no, now, shared});

    total_frames_ = frame_no + 1;
    const bool more =
        !measurement_planned_ || frame_no < n1_ + kDrainFrames;
    if (more)
      engine_.schedule(now + kFrameTicks, kOltEntity, FrameStart{frame_no + 1});
  }

  void on_burst_arrival(const BurstArrival& ba) {
    if (ba.ranging) {
      // Ranging detection uses a dedicated low-rate correlator, so it is
      // deliberately insensitive to the data-path power budget.
      olt_->on_ranging_response(ba.burst.ont_id, ba.burst.arrival);
      return;
    }
    const BitTime a = ba.burst.arrival;
    if (a < kEqualizationTarget) {
      // Only an unequalized plant can put a burst ahead of the window
      // grid; charge it like any other garbled transmission.
      olt_->plant_counters().misaligned_bursts++;
      if (std::holds_alternative<DataCell>(ba.burst.payload.cell))
        olt_->counters()[ba.burst.ont_id].collisions++;
      return;
    }
    const std::uint64_t j = (a - kEqualizationTarget) / kSlotTicks;
    const bool aligned = (a - kEqualizationTarget) % kSlotTicks == 0;
    if (!aligned) olt_->plant_counters().misaligned_bursts++;
    pending_[j].push_back(ba.burst);
    if (!aligned) pending_[j + 1].push_back(ba.burst);
  }

  /// Resolves every slot window that closed strictly before `now` (or all
  /// remaining windows when `now` is empty). A burst straddling two windows
  /// is charged once: the first window that resolves it consumes it.
  void finalize_windows(std::optional<BitTime> now) {
    while (!pending_.empty()) {
      auto it = pending_.begin();
      const std::uint64_t j = it->first;
      if (now && window_start(j) + kSlotTicks > *now) break;
      std::vector<ReceivedBurst> live;
      bool all_aligned = true;
      for (const ReceivedBurst& b : it->second) {
        if (consumed_.count(b.seq)) continue;
        live.push_back(b);
        if ((b.arrival - kEqualizationTarget) % kSlotTicks != 0 ||
            (b.arrival - kEqualizationTarget) / kSlotTicks != j)
          all_aligned = false;
      }
      if (!live.empty()) {
        ReceptionResult result;
        if (!all_aligned && live.size() == 1) {
          // A lone burst astride the window boundary garbles the window.
          result = Collision{live};
        } else {
          result = receive_bursts(live, last_good_power_dbm_,
                                  scenario_.plant.receiver);
        }
        if (const auto* ok = std::get_if<ReceptionOk>(&result))
          last_good_power_dbm_ = ok->burst.power_dbm;
        for (const ReceivedBurst& b : live) consumed_.insert(b.seq);
        account_window(j, result);
      }
      pending_.erase(it);
    }
    if (pending_.empty()) consumed_.clear();
  }

  void account_window(std::uint64_t j, const ReceptionResult& result) {
    const std::uint64_t frame_no = j / kSlotsPerFrame;
    const int slot = static_cast<int>(j % kSlotsPerFrame);
    auto it = schedules_.find(frame_no);
    if (it == schedules_.end()) return;
    const bool in_window =
        measurement_planned_ && frame_no >= n0_ && frame_no < n1_;
    olt_->on_upstream_reception(slot, frame_no, it->second, result,
                                window_start(j), in_window);
  }

  void on_ont_event(OntRuntime& rt, const Event& e) {
    if (const auto* fa = std::get_if<FrameArrival>(&e.payload)) {
      for (const PlannedTransmission& tx :
           rt.mac.on_downstream_frame(*fa->frame, engine_.now())) {
        ReceivedBurst b;
        b.ont_id = rt.spec.id;
        b.arrival = tx.local_time + rt.prop_ticks;
        b.duration = kSlotTicks;
        b.power_dbm = rt.upstream_rx_dbm;
        b.payload = tx.payload;
        b.enqueue_time = tx.enqueue_time;
        b.seq = next_burst_seq_++;
        engine_.schedule(b.arrival, kOltEntity, BurstArrival{b, tx.ranging});
      }
    } else if (std::get_if<TrafficArrival>(&e.payload)) {
      rt.mac.enqueue_cell(engine_.now());
      rt.next_arrival = engine_.now() + rt.traffic->next_gap();
      if (rt.next_arrival < n1_ * kFrameTicks)
        engine_.schedule(rt.next_arrival, rt.spec.id,
                         TrafficArrival{rt.spec.id});
    }
  }

  // ---- wrap-up -------------------------------------------------------------

  bool all_grant_eligible() const {
    for (const auto& [id, rec] : olt_->records())
      if (!rec.grant_eligible) return false;
    return true;
  }

  std::uint64_t measured_frames() const {
    return static_cast<std::uint64_t>(
        scenario_.duration_s * static_cast<double>(kLineRateBps) /
        static_cast<double>(kFrameTicks));
  }

  double measured_seconds() const {
    return static_cast<double>(measured_frames()) *
           static_cast<double>(kFrameTicks) /
           static_cast<double>(kLineRateBps);
  }

  void overlay_metrics(Metrics& m) {
    const Stage stage = scenario_.stage;
    const PlantSpec& plant = scenario_.plant;
    if (stage == Stage::VideoOverlay || stage == Stage::Coexistence) {
      for (const auto& spec : scenario_.onts) {
        const double rx =
            plant.video_launch_power_dbm -
            path_loss_db(
                overlay_path(spec.fiber_m, false, plant.cwdm_insertion_db),
                scenario_.wavelength_plan.video_nm, scenario_.wavelength_plan);
        if (rx >= plant.video_rx_sensitivity_dbm) m.plant.video_receivers++;
      }
    }
    if (stage != Stage::Coexistence && stage != Stage::FullWdm) return;

    // Point-to-point wavelength pipes are modelled analytically: a link is
    // up when its wavelength routes and the power budget closes, and its
    // traffic is then drawn from the ONT's own stream over the same
    // measurement span as the TDM window.
    const double span_s = measured_seconds();
    const BitTime span_ticks = measured_frames() * kFrameTicks;
    int wdm_index = 0;
    for (const auto& spec : scenario_.onts) {
      if (spec.kind != OntKind::Wdm) continue;
      const int channel = wdm_index++;
      const double nm = scenario_.wavelength_plan.dwdm_channel_nm(channel);
      bool routed = true;
      OpticalPath path;
      if (stage == Stage::FullWdm) {
        routed = !route_awg(*plant.awg, channel, nm, temperature_c_,
                            scenario_.wavelength_plan)
                      .empty();
        path = overlay_path(spec.fiber_m, true, plant.dwdm_filter_insertion_db);
      } else {
        path = overlay_path(spec.fiber_m, false,
                            plant.dwdm_filter_insertion_db);
      }
      const double rx = plant.wdm_launch_power_dbm -
                        path_loss_db(path, nm, scenario_.wavelength_plan);
      const bool up = routed && rx >= plant.wdm_rx_sensitivity_dbm;
      if (up) m.plant.wdm_links_up++;

      OntMetrics om;
      if (const TrafficSpec* t = scenario_.traffic_for(spec.id)) {
        TrafficSource src(t->model, t->rate_cells_per_s, scenario_.seed,
                          t->stream.value_or(t->ont_id));
        BitTime at = src.next_gap();
        while (at < span_ticks) {
          om.generated++;
          at += src.next_gap();
        }
      }
      if (up) {
        om.delivered = om.generated;
        // Serialization of one cell payload on the dedicated link,
        // expressed in upstream bit-times.
        const double ticks = kCellPayloadBits *
                             static_cast<double>(kLineRateBps) /
                             plant.wdm_link_rate_bps;
        om.mean_latency_ticks = om.delivered ? ticks : 0.0;
        om.p95_latency_ticks =
            om.delivered ? static_cast<std::uint64_t>(std::llround(ticks)) : 0;
        om.throughput_mbps =
            static_cast<double>(om.delivered) * kCellPayloadBits / span_s / 1e6;
      } else {
        om.dropped = om.generated;
      }
      m.per_ont[spec.id] = om;

      OntCounters& c = olt_->counters()[spec.id];
      c.generated = om.generated;
      c.delivered = om.delivered;
      c.dropped = om.dropped;
    }
  }

  RunResult collect() {
    RunResult r;
    const double span_s = measured_seconds();
    std::uint64_t measured_cells = 0;
    for (auto& [id, rt] : tdm_) {
      OntCounters& c = olt_->counters()[id];
      c.generated = rt->mac.generated();
      c.dropped = rt->mac.drops();
      c.queued_end = rt->mac.queue_size();

      OntMetrics om;
      om.generated = c.generated;
      om.delivered = c.delivered;
      om.idle = c.idle;
      om.dropped = c.dropped;
      om.collisions = c.collisions;
      om.power_faults = c.power_faults;
      om.queued = c.queued_end;
      om.mean_latency_ticks = c.latency.mean_ticks();
      om.p95_latency_ticks = c.latency.p95_ticks();
      om.throughput_mbps = static_cast<double>(c.latency.count()) *
                           kCellPayloadBits / span_s / 1e6;
      measured_cells += c.latency.count();
      r.metrics.per_ont[id] = om;
    }
    r.metrics.plant = olt_->plant_counters();
    r.metrics.plant.frames_measured = measured_frames();
    r.metrics.plant.upstream_utilization =
        measured_frames() == 0
            ? 0.0
            : static_cast<double>(measured_cells) /
                  (static_cast<double>(measured_frames()) * kSlotsPerFrame);
    overlay_metrics(r.metrics);

    const AuditResult audit = audit_conservation(olt_->counters());
    r.summary.audit_pass = audit.pass;
    r.summary.audit_residuals = audit.residuals;
    r.summary.warmup_frames = n0_;
    r.summary.measured_frames = measured_frames();
    r.summary.total_frames = total_frames_;
    r.summary.events_dispatched = engine_.dispatched();
    r.summary.final_temperature_c = temperature_c_;
    return r;
  }

  Scenario scenario_;
  Engine engine_;
  std::optional<OltMac> olt_;
  std::map<std::uint32_t, std::unique_ptr<OntRuntime>> tdm_;
  std::map<std::uint64_t, ScheduleFrame> schedules_;
  std::map<std::uint64_t, std::vector<ReceivedBurst>> pending_;
  std::unordered_set<std::uint64_t> consumed_;
  std::uint64_t next_burst_seq_{0};
  double last_good_power_dbm_{-20.0};
  double temperature_c_{25.0};
  bool measurement_planned_{false};
  std::uint64_t n0_{0};
  std::uint64_t n1_{0};
  std::uint64_t total_frames_{0};
};

} // namespace

RunResult run_scenario(const Scenario& scenario) {
  SimulationRun run(scenario);
  return run.run();
}

} // namespace ponsim
