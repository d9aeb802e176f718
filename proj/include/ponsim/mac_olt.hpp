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

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "ponsim/bit_time.hpp"
#include "ponsim/frames.hpp"
#include "ponsim/metrics.hpp"
#include "ponsim/phy.hpp"

namespace ponsim {

inline constexpr int kMaxOnts = 32;
// Grant id spaces: DATA 1..32, PLOAM 33..63, 0 reserved for UNASSIGNED.
inline constexpr std::uint8_t kFirstDataGrantId = 1;
inline constexpr std::uint8_t kFirstPloamGrantId = 33;

struct OntRecord {
  std::uint32_t ont_id{0};
  std::uint8_t data_grant_id{0};
  std::uint8_t ploam_grant_id{0};
  std::uint32_t weight{1};
  std::optional<int> max_grants_per_frame; // cap on DATA grants/frame
  bool ranged{false};
  bool grant_eligible{false}; // set-equalization-delay has been emitted
  bool assign_sent{false};    // assign-grant-ids has been emitted
  BitTime measured_rtt{0};
  BitTime equalization_delay{0};
  int ranging_attempts{0};
};

struct ScheduleFrame {
  std::array<Grant, kSlotsPerFrame> grants{};
};

struct OltConfig {
  std::uint32_t polling_interval_frames{10}; // 0 disables polling
  BitTime equalization_target{kEqualizationTarget};
  BitTime response_offset{kRangingResponseOffset};
  // Quiet window after the ranging grant: max RTT plus one frame.
  BitTime ranging_window{kEqualizationTarget + kFrameTicks};
  int max_ranging_attempts{3};
  bool force_zero_equalization{false}; // negative-control knob
};

struct RangingTimerRequest {
  std::uint32_t ont_id{0};
  std::uint64_t attempt{0};
  BitTime deadline{0};
};

struct OltFrame {
  DownstreamFrame frame;
  ScheduleFrame schedule;
  std::optional<RangingTimerRequest> timer;
};

/// Weighted-round-robin input for one eligible ONT.
struct ScheduleInput {
  std::uint32_t ont_id{0};
  std::uint8_t data_grant_id{0};
  std::uint32_t weight{1};
  int max_grants{-1}; // -1: uncapped
};

/// OSU/OLT side: admission, per-frame grant scheduling, serial ranging and
/// upstream reception accounting.
class OltMac {
 public:
  explicit OltMac(OltConfig cfg = {});

  /// Allocates the lowest free grant id in each space and queues the
  /// assign-grant-ids message. Throws ValidationError when the plant is
  /// full or the id is a duplicate.
  OntRecord& admit_ont(std::uint32_t ont_id, std::uint32_t weight = 1,
                       std::optional<int> max_grants_per_frame = {});

  /// Queues a ranging pass for the ONT; passes run strictly one at a time.
  void start_ranging(std::uint32_t ont_id);

  /// Builds the downstream frame for frame_no emitted at emission_time.
  OltFrame next_frame(std::uint64_t frame_no, BitTime emission_time);

  enum class ResponseOutcome { Completed, Ignored };
  /// Ranging PLOAM response observed at the OSU.
  ResponseOutcome on_ranging_response(std::uint32_t ont_id,
                                      BitTime arrival_time);
  /// Returns true when the timer matched the live attempt (retry issued);
  /// throws ProtocolError once the attempt budget is exhausted.
  bool on_ranging_timeout(std::uint32_t ont_id, std::uint64_t attempt);

  /// measured_rtt = arrival - grant emission - response offset;
  /// equalization_delay = target - measured_rtt. Throws ProtocolError when
  /// the ONT is beyond design reach.
  BitTime complete_ranging(std::uint32_t ont_id, BitTime arrival_time,
                           BitTime grant_emission_time);

  /// Upstream accounting for one slot window of an emitted frame.
  void on_upstream_reception(int slot_index, std::uint64_t frame_no,
                             const ScheduleFrame& schedule,
                             const ReceptionResult& result,
                             BitTime grant_time, bool in_measurement_window);

  bool all_ranged() const;
  bool ranging_idle() const { return phase_ == Phase::None; }
  const OntRecord& record(std::uint32_t ont_id) const;
  OntRecord& record(std::uint32_t ont_id);
  const std::map<std::uint32_t, OntRecord>& records() const { return records_; }
  const OltConfig& config() const { return cfg_; }

  void set_grants_enabled(bool on) { grants_enabled_ = on; }

  std::map<std::uint32_t, OntCounters>& counters() { return counters_; }
  const std::map<std::uint32_t, OntCounters>& counters() const {
    return counters_;
  }
  PlantCounters& plant_counters() { return plant_; }
  const PlantCounters& plant_counters() const { return plant_; }

  /// Deterministic largest-remainder weighted round-robin over the slots
  /// left after PLOAM grants. Remainder ties rotate with frame_no so equal
  /// weights alternate the extra grant.
  static ScheduleFrame build_schedule(
      std::span<const ScheduleInput> eligible,
      std::span<const std::pair<std::uint32_t, std::uint8_t>> ploam_grants,
      std::uint64_t frame_no);

 private:
  enum class Phase { None, Flush1, Flush2, Grant, Await };

  struct QueuedMessage {
    PloamMessage message;
    enum class Effect { None, AssignSent, EqSent } effect{Effect::None};
    std::uint32_t ont_id{0};
  };

  std::vector<PloamMessage> take_messages(std::size_t n);
  void advance_ranging();

  OltConfig cfg_;
  std::map<std::uint32_t, OntRecord> records_;
  std::deque<QueuedMessage> message_queue_;
  std::deque<std::uint32_t> ranging_queue_;
  Phase phase_{Phase::None};
  std::uint32_t ranging_target_{0};
  std::uint64_t ranging_attempt_{0};
  BitTime grant_emission_time_{0};
  bool grants_enabled_{true};

  std::map<std::uint32_t, OntCounters> counters_;
  PlantCounters plant_;
};

} // namespace ponsim
