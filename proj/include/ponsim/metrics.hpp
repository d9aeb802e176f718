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
#include <map>
#include <vector>

#include "ponsim/bit_time.hpp"

namespace ponsim {

/// Exact latency sample set; runs are desk-scale so no sketching is needed.
/// p95 is nearest-rank on the sorted samples.
class LatencySketch {
 public:
  void add(std::uint64_t ticks);
  std::uint64_t count() const { return samples_.size(); }
  std::uint64_t sum_ticks() const { return sum_; }
  double mean_ticks() const;
  std::uint64_t p95_ticks() const;

 private:
  std::uint64_t sum_{0};
  mutable std::vector<std::uint64_t> samples_;
  mutable bool sorted_{true};
};

struct OntCounters {
  std::uint64_t generated{0};
  std::uint64_t delivered{0};
  std::uint64_t idle{0};
  std::uint64_t dropped{0};
  std::uint64_t collisions{0};    // own data cells lost to a collision
  std::uint64_t power_faults{0};  // own data cells lost to a PHY fault
  std::uint64_t queued_end{0};    // still queued when the run ended
  LatencySketch latency;
};

/// Adds a latency sample (grant_time - enqueue_time) and bumps delivered.
/// A negative latency is a fatal logic error.
void record_delivery(OntCounters& c, BitTime enqueue_time, BitTime grant_time);

struct AuditResult {
  bool pass{true};
  std::map<std::uint32_t, std::int64_t> residuals; // per ONT, 0 when clean
};

/// generated = delivered + lost-in-flight + queued + dropped, per ONT.
AuditResult audit_conservation(const std::map<std::uint32_t, OntCounters>& per_ont);

struct PlantCounters {
  double upstream_utilization{0.0};
  int video_receivers{0};
  int wdm_links_up{0};
  std::uint64_t collision_windows{0}; // whole run, not just the window
  std::uint64_t ploam_receptions{0};
  std::uint64_t misaligned_bursts{0};
  std::uint64_t frames_measured{0};
};

struct OntMetrics {
  std::uint64_t generated{0};
  std::uint64_t delivered{0};
  std::uint64_t idle{0};
  std::uint64_t dropped{0};
  std::uint64_t collisions{0};
  std::uint64_t power_faults{0};
  std::uint64_t queued{0};
  double mean_latency_ticks{0.0};
  std::uint64_t p95_latency_ticks{0};
  double throughput_mbps{0.0};
};

struct Metrics {
  std::map<std::uint32_t, OntMetrics> per_ont;
  PlantCounters plant;
};

} // namespace ponsim
