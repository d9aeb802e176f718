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

#include "ponsim/mac_olt.hpp"

#include <algorithm>
#include <numeric>

#include "ponsim/errors.hpp"

namespace ponsim {

OltMac::OltMac(OltConfig cfg) : cfg_(cfg) {}

OntRecord& OltMac::admit_ont(std::uint32_t ont_id, std::uint32_t weight,
                             std::optional<int> max_grants_per_frame) {
  if (records_.size() >= kMaxOnts)
    throw ValidationError("plant full: at most 32 ONTs");
  if (records_.count(ont_id))
    throw ValidationError("duplicate ONT id " + std::to_string(ont_id));
  if (weight == 0)
    throw ValidationError("ONT weight must be positive");

  auto lowest_free = [this](bool ploam_space) {
    for (std::uint8_t id = ploam_space ? kFirstPloamGrantId : kFirstDataGrantId;
         ; ++id) {
      bool used = false;
      for (const auto& [_, r] : records_)
        if (r.data_grant_id == id || r.ploam_grant_id == id) used = true;
      if (!used) return id;
    }
  };

  OntRecord rec;
  rec.ont_id = ont_id;
  rec.weight = weight;
  rec.max_grants_per_frame = max_grants_per_frame;
  rec.data_grant_id = lowest_free(false);
  rec.ploam_grant_id = lowest_free(true);
  auto& stored = records_.emplace(ont_id, rec).first->second;
  counters_.emplace(ont_id, OntCounters{});

  message_queue_.push_back(
      {PloamMessage{MessageKind::AssignGrantIds, static_cast<std::uint8_t>(ont_id),
                    (std::uint32_t{stored.data_grant_id} << 8) |
                        stored.ploam_grant_id},
       QueuedMessage::Effect::AssignSent, ont_id});
  return stored;
}

void OltMac::start_ranging(std::uint32_t ont_id) {
  record(ont_id); // throws on unknown id
  if (phase_ != Phase::None && ranging_target_ == ont_id)
    throw ProtocolError("ranging already in progress for ONT " +
                        std::to_string(ont_id));
  if (std::find(ranging_queue_.begin(), ranging_queue_.end(), ont_id) !=
      ranging_queue_.end())
    throw ProtocolError("ranging already queued for ONT " +
                        std::to_string(ont_id));
  ranging_queue_.push_back(ont_id);
}

const OntRecord& OltMac::record(std::uint32_t ont_id) const {
  auto it = records_.find(ont_id);
  if (it == records_.end())
    throw ValidationError("unknown ONT id " + std::to_string(ont_id));
  return it->second;
}

OntRecord& OltMac::record(std::uint32_t ont_id) {
  return const_cast<OntRecord&>(std::as_const(*this).record(ont_id));
}

bool OltMac::all_ranged() const {
  if (!ranging_queue_.empty() || phase_ != Phase::None) return false;
  for (const auto& [_, r] : records_)
    if (!r.ranged || !r.grant_eligible) return false;
  return true;
}

std::vector<PloamMessage> OltMac::take_messages(std::size_t n) {
  std::vector<PloamMessage> out;
  while (out.size() < n && !message_queue_.empty()) {
    QueuedMessage qm = message_queue_.front();
    message_queue_.pop_front();
    switch (qm.effect) {
      case QueuedMessage::Effect::AssignSent:
        record(qm.ont_id).assign_sent = true;
        break;
      case QueuedMessage::Effect::EqSent:
        record(qm.ont_id).grant_eligible = true;
        break;
      case QueuedMessage::Effect::None:
        break;
    }
    out.push_back(qm.message);
  }
  while (out.size() < n) out.push_back(PloamMessage{}); // idle filler
  return out;
}

void OltMac::advance_ranging() {
  switch (phase_) {
    case Phase::None:
      if (!ranging_queue_.empty() &&
          record(ranging_queue_.front()).assign_sent) {
        ranging_target_ = ranging_queue_.front();
        phase_ = Phase::Flush1;
      }
      break;
    case Phase::Flush1:
      phase_ = Phase::Flush2;
      break;
    case Phase::Flush2:
      phase_ = Phase::Grant;
      break;
    default:
      break;
  }
}

OltFrame OltMac::next_frame(std::uint64_t frame_no, BitTime emission_time) {
  advance_ranging();
  OltFrame out;
  std::vector<PloamMessage> msgs;

  switch (phase_) {
    case Phase::Grant: {
      OntRecord& rec = record(ranging_target_);
      msgs.push_back(PloamMessage{MessageKind::RangingGrant,
                                  static_cast<std::uint8_t>(ranging_target_), 0});
      auto rest = take_messages(1);
      msgs.push_back(rest[0]);
      out.schedule.grants[0] = Grant{GrantType::Ploam, rec.ploam_grant_id};
      grant_emission_time_ = emission_time;
      ++ranging_attempt_;
      ++rec.ranging_attempts;
      out.timer = RangingTimerRequest{ranging_target_, ranging_attempt_,
                                      emission_time + cfg_.ranging_window};
      phase_ = Phase::Await;
      break;
    }
    case Phase::Flush1:
    case Phase::Flush2:
    case Phase::Await:
      msgs = take_messages(2); // quiet window: no grants at all
      break;
    case Phase::None: {
      msgs = take_messages(2);
      if (grants_enabled_) {
        std::vector<std::pair<std::uint32_t, std::uint8_t>> ploam;
        if (cfg_.polling_interval_frames > 0 &&
            frame_no % cfg_.polling_interval_frames == 0)
          for (const auto& [id, r] : records_)
            if (r.grant_eligible) ploam.emplace_back(id, r.ploam_grant_id);
        std::vector<ScheduleInput> eligible;
        for (const auto& [id, r] : records_)
          if (r.ranged && r.grant_eligible && r.weight > 0)
            eligible.push_back({id, r.data_grant_id, r.weight,
                                r.max_grants_per_frame.value_or(-1)});
        out.schedule = build_schedule(eligible, ploam, frame_no);
      }
      break;
    }
  }

  PloamCell first = make_ploam_cell(false, msgs[0]);
  PloamCell second = make_ploam_cell(true, msgs[1]);
  for (int k = 0; k < kSlotsPerFrame; ++k) {
    if (k < kFirstPloamGrants)
      first.grants[static_cast<std::size_t>(k)] = out.schedule.grants[k];
    else
      second.grants[static_cast<std::size_t>(k - kFirstPloamGrants)] =
          out.schedule.grants[k];
  }
  out.frame = make_downstream_frame(std::move(first), std::move(second));
  return out;
}

ScheduleFrame OltMac::build_schedule(
    std::span<const ScheduleInput> eligible,
    std::span<const std::pair<std::uint32_t, std::uint8_t>> ploam_grants,
    std::uint64_t frame_no) {
  ScheduleFrame s{};
  int slot = 0;
  for (const auto& [ont_id, gid] : ploam_grants) {
    (void)ont_id;
    if (slot >= kSlotsPerFrame) break;
    s.grants[slot++] = Grant{GrantType::Ploam, gid};
  }
  const int data_slots = kSlotsPerFrame - slot;
  if (eligible.empty() || data_slots <= 0) return s;

  std::vector<ScheduleInput> onts(eligible.begin(), eligible.end());
  std::sort(onts.begin(), onts.end(),
            [](const ScheduleInput& a, const ScheduleInput& b) {
              return a.ont_id < b.ont_id;
            });
  const std::size_t n = onts.size();
  std::uint64_t total_weight = 0;
  for (const auto& o : onts) total_weight += o.weight;

  std::vector<std::uint64_t> quota(n), remainder(n);
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t num =
        static_cast<std::uint64_t>(data_slots) * onts[i].weight;
    quota[i] = num / total_weight;
    remainder[i] = num % total_weight;
    assigned += quota[i];
  }
  // Largest remainder; ties rotate with the frame number so that equal
  // shares alternate the extra grant instead of pinning it to one ONT.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
    return (a + frame_no) % n < (b + frame_no) % n;
  });
  std::uint64_t leftover = static_cast<std::uint64_t>(data_slots) - assigned;
  for (std::size_t r = 0; r < n && leftover > 0; ++r, --leftover)
    ++quota[order[r]];

  for (std::size_t i = 0; i < n; ++i)
    if (onts[i].max_grants >= 0)
      quota[i] = std::min<std::uint64_t>(
          quota[i], static_cast<std::uint64_t>(onts[i].max_grants));

  // Interleave: one grant per ONT per pass keeps per-frame spacing even.
  bool any = true;
  while (any && slot < kSlotsPerFrame) {
    any = false;
    for (std::size_t i = 0; i < n && slot < kSlotsPerFrame; ++i) {
      if (quota[i] == 0) continue;
      --quota[i];
      s.grants[slot++] = Grant{GrantType::Data, onts[i].data_grant_id};
      any = true;
    }
  }
  return s;
}

OltMac::ResponseOutcome OltMac::on_ranging_response(std::uint32_t ont_id,
                                                    BitTime arrival_time) {
  if (phase_ != Phase::Await || ont_id != ranging_target_)
    return ResponseOutcome::Ignored;
  const BitTime delay =
      complete_ranging(ont_id, arrival_time, grant_emission_time_);
  OntRecord& rec = record(ont_id);
  rec.ranged = true;
  message_queue_.push_back(
      {PloamMessage{MessageKind::SetEqualizationDelay,
                    static_cast<std::uint8_t>(ont_id),
                    static_cast<std::uint32_t>(delay)},
       QueuedMessage::Effect::EqSent, ont_id});
  phase_ = Phase::None;
  if (!ranging_queue_.empty() && ranging_queue_.front() == ont_id)
    ranging_queue_.pop_front();
  return ResponseOutcome::Completed;
}

BitTime OltMac::complete_ranging(std::uint32_t ont_id, BitTime arrival_time,
                                 BitTime grant_emission_time) {
  OntRecord& rec = record(ont_id);
  if (arrival_time < grant_emission_time + cfg_.response_offset)
    throw ProtocolError("ranging response before the grant for ONT " +
                        std::to_string(ont_id));
  const BitTime rtt =
      arrival_time - grant_emission_time - cfg_.response_offset;
  if (rtt > cfg_.equalization_target)
    throw ProtocolError("ONT " + std::to_string(ont_id) +
                        " beyond design reach: rtt " + std::to_string(rtt) +
                        " > target " +
                        std::to_string(cfg_.equalization_target));
  rec.measured_rtt = rtt;
  rec.equalization_delay =
      cfg_.force_zero_equalization ? 0 : cfg_.equalization_target - rtt;
  return rec.equalization_delay;
}

bool OltMac::on_ranging_timeout(std::uint32_t ont_id, std::uint64_t attempt) {
  if (phase_ != Phase::Await || ont_id != ranging_target_ ||
      attempt != ranging_attempt_)
    return false; // stale timer
  OntRecord& rec = record(ont_id);
  if (rec.ranging_attempts >= cfg_.max_ranging_attempts)
    throw ProtocolError("ranging failed for ONT " + std::to_string(ont_id) +
                        " after " + std::to_string(rec.ranging_attempts) +
                        " attempts");
  // The deadline already covers the longest possible flight time, so the
  // plant is quiet again and the next frame can carry the retry grant.
  phase_ = Phase::Flush2;
  return true;
}

void OltMac::on_upstream_reception(int slot_index, std::uint64_t frame_no,
                                   const ScheduleFrame& schedule,
                                   const ReceptionResult& result,
                                   BitTime grant_time,
                                   bool in_measurement_window) {
  (void)frame_no;
  const Grant& grant = schedule.grants[static_cast<std::size_t>(slot_index)];

  auto counters_for = [this](std::uint32_t ont) -> OntCounters& {
    return counters_[ont];
  };

  if (std::holds_alternative<Silence>(result)) return;

  if (const auto* ok = std::get_if<ReceptionOk>(&result)) {
    const ReceivedBurst& b = ok->burst;
    if (std::holds_alternative<DataCell>(b.payload.cell)) {
      OntCounters& c = counters_for(b.ont_id);
      if (in_measurement_window && b.enqueue_time)
        record_delivery(c, *b.enqueue_time, grant_time);
      else
        ++c.delivered;
    } else if (std::holds_alternative<UpstreamIdle>(b.payload.cell)) {
      if (grant.type == GrantType::Data && in_measurement_window)
        ++counters_for(b.ont_id).idle;
    } else {
      ++plant_.ploam_receptions;
    }
    return;
  }
  if (const auto* col = std::get_if<Collision>(&result)) {
    ++plant_.collision_windows;
    for (const ReceivedBurst& b : col->bursts)
      if (std::holds_alternative<DataCell>(b.payload.cell))
        ++counters_for(b.ont_id).collisions;
    return;
  }
  const ReceivedBurst* faulted = nullptr;
  if (const auto* p = std::get_if<PowerTooLow>(&result)) faulted = &p->burst;
  if (const auto* p = std::get_if<PowerTooHigh>(&result)) faulted = &p->burst;
  if (const auto* p = std::get_if<InsufficientPreamble>(&result))
    faulted = &p->burst;
  if (faulted && std::holds_alternative<DataCell>(faulted->payload.cell))
    ++counters_for(faulted->ont_id).power_faults;
}

} // namespace ponsim
