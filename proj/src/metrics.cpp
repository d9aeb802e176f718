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

#include "ponsim/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace ponsim {

void LatencySketch::add(std::uint64_t ticks) {
  sum_ += ticks;
  samples_.push_back(ticks);
  sorted_ = false;
}

double LatencySketch::mean_ticks() const {
  if (samples_.empty()) return 0.0;
  return static_cast<double>(sum_) / static_cast<double>(samples_.size());
}

std::uint64_t LatencySketch::p95_ticks() const {
  if (samples_.empty()) return 0;
  if (!sorted_) {
    std::sort(samples_.begin(), samples_.end());
    sorted_ = true;
  }
  // nearest rank: ceil(0.95 * n), 1-based
  const std::size_t n = samples_.size();
  const std::size_t rank = (19 * n + 19) / 20; // ceil(0.95n) with integers
  return samples_[rank - 1];
}

void record_delivery(OntCounters& c, BitTime enqueue_time, BitTime grant_time) {
  if (grant_time < enqueue_time)
    throw std::logic_error("negative latency: grant before enqueue");
  c.latency.add(grant_time - enqueue_time);
  ++c.delivered;
}

AuditResult audit_conservation(
    const std::map<std::uint32_t, OntCounters>& per_ont) {
  AuditResult r;
  for (const auto& [id, c] : per_ont) {
    const auto accounted = static_cast<std::int64_t>(
        c.delivered + c.collisions + c.power_faults + c.queued_end + c.dropped);
    const auto residual = static_cast<std::int64_t>(c.generated) - accounted;
    r.residuals[id] = residual;
    if (residual != 0) r.pass = false;
  }
  return r;
}

} // namespace ponsim
