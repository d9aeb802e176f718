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

#include "ponsim/report_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ponsim {

using nlohmann::json;

nlohmann::json report_to_json(const Scenario& scenario, const RunResult& r) {
  json per_ont = json::object();
  for (const auto& [id, m] : r.metrics.per_ont)
    per_ont[std::to_string(id)] = {
        {"generated", m.generated},
        {"delivered", m.delivered},
        {"idle", m.idle},
        {"dropped", m.dropped},
        {"collisions", m.collisions},
        {"power_faults", m.power_faults},
        {"queued", m.queued},
        {"mean_latency_ticks", m.mean_latency_ticks},
        {"p95_latency_ticks", m.p95_latency_ticks},
        {"throughput_mbps", m.throughput_mbps}};

  json residuals = json::object();
  for (const auto& [id, v] : r.summary.audit_residuals)
    residuals[std::to_string(id)] = v;

  return json{
      {"scenario", scenario_to_json(scenario)},
      {"per_ont", per_ont},
      {"plant",
       {{"upstream_utilization", r.metrics.plant.upstream_utilization},
        {"video_receivers", r.metrics.plant.video_receivers},
        {"wdm_links_up", r.metrics.plant.wdm_links_up},
        {"collision_windows", r.metrics.plant.collision_windows},
        {"ploam_receptions", r.metrics.plant.ploam_receptions},
        {"misaligned_bursts", r.metrics.plant.misaligned_bursts},
        {"frames_measured", r.metrics.plant.frames_measured}}},
      {"summary",
       {{"warmup_frames", r.summary.warmup_frames},
        {"measured_frames", r.summary.measured_frames},
        {"total_frames", r.summary.total_frames},
        {"events_dispatched", r.summary.events_dispatched},
        {"audit_pass", r.summary.audit_pass},
        {"audit_residuals", residuals},
        {"final_temperature_c", r.summary.final_temperature_c}}}};
}

std::string metrics_to_csv(const Metrics& m) {
  std::ostringstream out;
  out << "ont_id,delivered,idle,dropped,collisions,mean_latency_ticks,"
         "p95_latency_ticks,throughput_mbps\n";
  for (const auto& [id, om] : m.per_ont) {
    out << id << ',' << om.delivered << ',' << om.idle << ',' << om.dropped
        << ',' << om.collisions << ',' << om.mean_latency_ticks << ','
        << om.p95_latency_ticks << ',' << om.throughput_mbps << '\n';
  }
  return out.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

} // namespace ponsim
