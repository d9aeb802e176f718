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

#include "ponsim/mac_ont.hpp"

#include "ponsim/errors.hpp"

namespace ponsim {

OntMac::OntMac(std::uint32_t ont_id, OntConfig cfg)
    : ont_id_(ont_id), cfg_(cfg) {}

bool OntMac::enqueue_cell(BitTime now) {
  ++generated_;
  if (queue_.size() >= cfg_.queue_capacity) {
    ++drops_; // overflow drops the newest cell
    return false;
  }
  queue_.push_back(now);
  return true;
}

void OntMac::on_ploam_message(const PloamMessage& m) {
  switch (m.kind) {
    case MessageKind::AssignGrantIds:
      if (m.target_ont == ont_id_) {
        data_grant_id_ = static_cast<std::uint8_t>(m.arg >> 8);
        ploam_grant_id_ = static_cast<std::uint8_t>(m.arg & 0xFF);
      }
      break;
    case MessageKind::SetEqualizationDelay:
      if (m.target_ont == ont_id_) equalization_delay_ = m.arg;
      break;
    case MessageKind::RangingGrant: // handled per frame, see below
    case MessageKind::Broadcast:
    case MessageKind::Idle:
      break;
  }
}

void OntMac::on_message_bytes(std::span<const std::uint8_t> bytes) {
  try {
    on_ploam_message(decode_ploam_message(bytes));
  } catch (const CodecError&) {
    ++malformed_messages_;
  }
}

std::vector<PlannedTransmission> OntMac::on_downstream_frame(
    const DownstreamFrame& frame, BitTime frame_start_local) {
  std::vector<PlannedTransmission> planned;

  const PloamMessage* messages[2] = {&first_ploam(frame).message,
                                     &second_ploam(frame).message};
  bool ranging_for_me = false;
  for (const PloamMessage* m : messages) {
    on_ploam_message(*m);
    if (m->kind == MessageKind::RangingGrant && m->target_ont == ont_id_)
      ranging_for_me = true;
  }

  if (!has_grant_ids()) return planned; // silent until ids are assigned

  if (ranging_for_me) {
    // Fixed response offset, no slot timing and no equalization delay: the
    // OLT subtracts the same constant when it measures the round trip.
    PlannedTransmission tx;
    tx.local_time = frame_start_local + cfg_.response_offset;
    tx.ranging = true;
    tx.payload.cell = PloamResponse{static_cast<std::uint8_t>(ont_id_), 1};
    planned.push_back(tx);
    return planned;
  }

  for (int k = 0; k < kSlotsPerFrame; ++k) {
    const Grant& g = grant_for_slot(frame, k);
    if (g.type == GrantType::Unassigned) continue;

    PlannedTransmission tx;
    tx.local_time = frame_start_local + static_cast<BitTime>(k) * kSlotTicks +
                    equalization_delay_;
    tx.slot_index = k;
    if (g.type == GrantType::Ploam && ploam_grant_id_ &&
        g.grant_id == *ploam_grant_id_) {
      tx.payload.cell = PloamResponse{static_cast<std::uint8_t>(ont_id_), 0};
    } else if (g.type == GrantType::Data && data_grant_id_ &&
               g.grant_id == *data_grant_id_) {
      if (queue_.empty()) {
        tx.payload.cell = UpstreamIdle{};
      } else {
        tx.payload.cell = DataCell{};
        tx.enqueue_time = queue_.front();
        queue_.pop_front();
      }
    } else {
      continue; // grant for someone else: stay silent
    }
    planned.push_back(tx);
  }
  return planned;
}

} // namespace ponsim
