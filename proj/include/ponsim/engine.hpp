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
#include <functional>
#include <memory>
#include <queue>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ponsim/bit_time.hpp"
#include "ponsim/frames.hpp"
#include "ponsim/phy.hpp"

namespace ponsim {

using EntityId = std::uint32_t;

// Event payloads. The set matches what the protocol needs: downstream frame
// boundaries, upstream burst arrivals, ranging timers, traffic ingress and
// plant temperature steps.
struct FrameStart {
  std::uint64_t frame_no{0};
};
struct FrameArrival {
  std::uint64_t frame_no{0};
  BitTime emission_time{0};
  std::shared_ptr<const DownstreamFrame> frame;
};
struct BurstArrival {
  ReceivedBurst burst;
  bool ranging{false};
};
struct RangingTimer {
  std::uint32_t ont_id{0};
  std::uint64_t attempt{0};
};
struct TrafficArrival {
  std::uint32_t source{0};
};
struct TemperatureStep {
  double celsius{0.0};
};

using EventPayload = std::variant<FrameStart, FrameArrival, BurstArrival,
                                  RangingTimer, TrafficArrival,
                                  TemperatureStep>;

struct Event {
  BitTime time{0};
  EntityId target{0};
  std::uint64_t seq{0};
  EventPayload payload;
};

struct TraceEntry {
  BitTime time;
  EntityId target;
  std::uint8_t kind; // payload variant index
  std::uint64_t seq;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

/// Deterministic single-threaded event loop. Events with equal time are
/// dispatched in (entity id, insertion sequence) order.
class Engine {
 public:
  using Handler = std::function<void(const Event&)>;

  BitTime now() const { return clock_; }

  void attach(EntityId id, Handler handler);

  /// Throws std::logic_error when scheduling in the past: that always
  /// signals a MAC timing bug, never a recoverable condition.
  std::uint64_t schedule(BitTime time, EntityId target, EventPayload payload);

  /// Dispatches every event with time <= t_end; leaves the clock at t_end.
  void run_until(BitTime t_end);

  /// Drains the queue completely.
  void run_all();

  void enable_trace(bool on) { trace_enabled_ = on; }
  const std::vector<TraceEntry>& trace() const { return trace_; }
  std::uint64_t dispatched() const { return dispatched_; }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.target != b.target) return a.target > b.target;
      return a.seq > b.seq;
    }
  };

  void dispatch(Event&& e);

  BitTime clock_{0};
  std::uint64_t next_seq_{0};
  std::uint64_t dispatched_{0};
  bool trace_enabled_{false};
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::unordered_map<EntityId, Handler> handlers_;
  std::vector<TraceEntry> trace_;
};

} // namespace ponsim
