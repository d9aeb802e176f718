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

#include "ponsim/metrics.hpp"
#include "ponsim/scenario.hpp"

namespace ponsim {

struct RunSummary {
  std::uint64_t warmup_frames{0};    // first frame carrying measured traffic
  std::uint64_t measured_frames{0};  // length of the measurement window
  std::uint64_t total_frames{0};     // frames emitted including drain
  std::uint64_t events_dispatched{0};
  bool audit_pass{true};
  std::map<std::uint32_t, std::int64_t> audit_residuals;
  double final_temperature_c{25.0};
};

struct RunResult {
  Metrics metrics;
  RunSummary summary;
};

/// Runs a scenario start to finish: admission and serial ranging, a warm-up
/// margin, a fixed measurement window of whole frames, a drain phase, then
/// the conservation audit. Deterministic for a given scenario and seed.
RunResult run_scenario(const Scenario& scenario);

} // namespace ponsim
