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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ponsim/phy.hpp"
#include "ponsim/traffic.hpp"

namespace ponsim {

enum class Stage { TdmBaseline, VideoOverlay, Coexistence, FullWdm };

enum class OntKind { Tdm, Wdm };

struct OntSpec {
  std::uint32_t id{0};
  double fiber_m{0.0}; // drop fiber; the plant feeder is shared
  std::uint32_t weight{1};
  OntKind kind{OntKind::Tdm};
  std::optional<int> max_grants_per_frame;
};

struct TrafficSpec {
  std::uint32_t ont_id{0};
  TrafficModel model{TrafficModel::Cbr};
  double rate_cells_per_s{0.0};
  std::optional<std::uint64_t> stream; // PRNG stream index; defaults to ont_id
};

struct PlantSpec {
  double feeder_m{10'000.0};
  double connector_loss_db{0.5};
  std::optional<SplitterSpec> splitter;
  std::optional<AwgSpec> awg;
  double atten_1300_db_per_km{0.35};
  double atten_1500_db_per_km{0.25};
  double ont_launch_power_dbm{2.0};
  BurstRxConfig receiver;
  double cwdm_insertion_db{0.5};
  double dwdm_filter_insertion_db{1.5};
  double video_launch_power_dbm{10.0};
  double video_rx_sensitivity_dbm{-25.0};
  double wdm_launch_power_dbm{3.0};
  double wdm_rx_sensitivity_dbm{-28.0};
  double wdm_link_rate_bps{1e9};
  std::uint32_t polling_interval_frames{10};
  bool force_equalization_zero{false};
};

struct Scenario {
  Stage stage{Stage::TdmBaseline};
  PlantSpec plant;
  std::vector<OntSpec> onts;
  std::vector<TrafficSpec> traffic;
  WavelengthPlan wavelength_plan;
  double duration_s{0.1};
  std::uint64_t seed{1};
  std::vector<std::pair<double, double>> temperature_profile; // (time_s, C)

  const TrafficSpec* traffic_for(std::uint32_t ont_id) const;
  /// Plant temperature at end of run; AWG reference when no profile given.
  double final_temperature_c() const;
};

/// Parses and validates a scenario document (strict: unknown keys are
/// errors, diagnostics carry the field path). Throws ValidationError.
Scenario load_scenario(const std::string& text);
Scenario scenario_from_json(const nlohmann::json& doc);

/// Normalized echo with every default filled in; load(echo) == scenario.
nlohmann::json scenario_to_json(const Scenario& s);

const char* to_string(Stage s);
const char* to_string(OntKind k);
const char* to_string(TrafficModel m);

} // namespace ponsim
