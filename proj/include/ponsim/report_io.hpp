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

#include <string>

#include "ponsim/runner.hpp"
#include "ponsim/scenario.hpp"
#include "vendor/json.hpp"

namespace ponsim {

/// Full run report: normalized scenario echo, per-ONT metrics, plant
/// metrics and run summary. Stable key order, suitable for diffing.
nlohmann::json report_to_json(const Scenario& scenario, const RunResult& r);

/// Per-ONT CSV with the fixed header
/// ont_id,delivered,idle,dropped,collisions,mean_latency_ticks,p95_latency_ticks,throughput_mbps
std::string metrics_to_csv(const Metrics& m);

/// Writes via a temp file in the same directory plus rename, so a crash
/// never leaves a truncated report behind.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace ponsim
