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

#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "ponsim/bit_time.hpp"
#include "ponsim/frames.hpp"

namespace ponsim {

struct OntConfig {
  std::size_t queue_capacity{1024};
  BitTime response_offset{kRangingResponseOffset};
};

/// One transmission the ONT has planned in response to a downstream frame,
/// in the ONT's local clock. enqueue_time tags data cells for latency
/// accounting; it never travels on the wire.
struct PlannedTransmission {
  BitTime local_time{0};
  int slot_index{-1}; // -1 for a ranging response
  bool ranging{false};
  UpstreamSlotPayload payload;
  std::optional<BitTime> enqueue_time;
};

/// Subscriber-side state machine: grant matching, FIFO queue, equalization
/// delay. Transmits only in response to matching grants, never
/// spontaneously.
class OntMac {
 public:
  OntMac(std::uint32_t ont_id, OntConfig cfg = {});

  /// Returns false (and counts a drop) when the queue is full.
  bool enqueue_cell(BitTime now);

  /// Grant matching for one decoded frame. Slot k transmissions are planned
  /// at frame_start_local + k*448 + equalization_delay; a ranging response
  /// goes out a fixed 448 bit-times after frame detection instead.
  std::vector<PlannedTransmission> on_downstream_frame(
      const DownstreamFrame& frame, BitTime frame_start_local);

  /// Applies one decoded PLOAM message (directed messages for other ONTs
  /// and broadcast/idle are ignored).
  void on_ploam_message(const PloamMessage& m);

  /// Raw-bytes entry point: malformed messages are counted and ignored.
  void on_message_bytes(std::span<const std::uint8_t> bytes);

  std::uint32_t ont_id() const { return ont_id_; }
  bool has_grant_ids() const { return data_grant_id_.has_value(); }
  std::optional<std::uint8_t> data_grant_id() const { return data_grant_id_; }
  std::optional<std::uint8_t> ploam_grant_id() const { return ploam_grant_id_; }
  BitTime equalization_delay() const { return equalization_delay_; }
  std::size_t queue_size() const { return queue_.size(); }
  std::uint64_t generated() const { return generated_; }
  std::uint64_t drops() const { return drops_; }
  std::uint64_t malformed_messages() const { return malformed_messages_; }

 private:
  std::uint32_t ont_id_;
  OntConfig cfg_;
  std::optional<std::uint8_t> data_grant_id_;
  std::optional<std::uint8_t> ploam_grant_id_;
  BitTime equalization_delay_{0};
  std::deque<BitTime> queue_; // enqueue timestamps, FIFO
  std::uint64_t generated_{0};
  std::uint64_t drops_{0};
  std::uint64_t malformed_messages_{0};
};

} // namespace ponsim
