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

#include "ponsim/scenario.hpp"

#include <algorithm>
#include <set>

#include "ponsim/errors.hpp"
#include "ponsim/mac_olt.hpp"

namespace ponsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ValidationError(path + ": " + msg);
}

const json& require_key(const json& j, const std::string& path,
                        const char* key) {
  if (!j.contains(key)) fail(path + "." + key, "missing required field");
  return j.at(key);
}

void check_object(const json& j, const std::string& path,
                  std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "must be an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return key == a;
        }) == allowed.end())
      fail(path + "." + key, "unknown key");
  }
}

double get_double(const json& j, const std::string& path, const char* key,
                  double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) fail(path + "." + key, "must be a number");
  return v.get<double>();
}

std::uint64_t get_uint(const json& j, const std::string& path, const char* key,
                       std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer() ||
      (v.is_number_integer() && !v.is_number_unsigned() &&
       v.get<std::int64_t>() < 0))
    fail(path + "." + key, "must be a non-negative integer");
  return v.get<std::uint64_t>();
}

bool get_bool(const json& j, const std::string& path, const char* key,
              bool fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) fail(path + "." + key, "must be a boolean");
  return v.get<bool>();
}

std::pair<double, double> get_band(const json& j, const std::string& path,
                                   const char* key, double lo, double hi) {
  if (!j.contains(key)) return {lo, hi};
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail(path + "." + key, "must be [low_nm, high_nm]");
  return {v[0].get<double>(), v[1].get<double>()};
}

SplitterSpec parse_splitter(const json& j, const std::string& path) {
  check_object(j, path, {"ports", "excess_loss_db"});
  SplitterSpec s;
  s.ports = static_cast<int>(get_uint(j, path, "ports", 32));
  s.excess_loss_db = get_double(j, path, "excess_loss_db", 1.0);
  if (s.ports != 2 && s.ports != 4 && s.ports != 8 && s.ports != 16 &&
      s.ports != 32)
    fail(path + ".ports", "must be one of 2, 4, 8, 16, 32");
  return s;
}

AwgSpec parse_awg(const json& j, const std::string& path) {
  check_object(j, path,
               {"ports", "channel_spacing_nm", "insertion_loss_db",
                "temp_coefficient_nm_per_c", "guard_nm", "reference_temp_c"});
  AwgSpec a;
  a.ports = static_cast<int>(get_uint(j, path, "ports", 32));
  a.channel_spacing_nm = get_double(j, path, "channel_spacing_nm", 0.8);
  a.insertion_loss_db = get_double(j, path, "insertion_loss_db", 5.0);
  a.temp_coefficient_nm_per_c =
      get_double(j, path, "temp_coefficient_nm_per_c", 0.01);
  a.guard_nm = get_double(j, path, "guard_nm", 0.1);
  a.reference_temp_c = get_double(j, path, "reference_temp_c", 25.0);
  if (a.ports < 1) fail(path + ".ports", "must be >= 1");
  if (a.channel_spacing_nm <= 0) fail(path + ".channel_spacing_nm", "must be > 0");
  return a;
}

PlantSpec parse_plant(const json& j, Stage stage) {
  const std::string path = "plant";
  check_object(j, path,
               {"feeder_m", "connector_loss_db", "splitter", "awg",
                "attenuation_1300_db_per_km", "attenuation_1500_db_per_km",
                "ont_launch_power_dbm", "receiver", "cwdm_insertion_db",
                "dwdm_filter_insertion_db", "video_launch_power_dbm",
                "video_rx_sensitivity_dbm", "wdm_launch_power_dbm",
                "wdm_rx_sensitivity_dbm", "wdm_link_rate_bps",
                "polling_interval_frames", "force_equalization_zero"});
  PlantSpec p;
  p.feeder_m = get_double(j, path, "feeder_m", p.feeder_m);
  if (p.feeder_m < 0) fail(path + ".feeder_m", "must be >= 0");
  p.connector_loss_db = get_double(j, path, "connector_loss_db", p.connector_loss_db);
  if (j.contains("splitter")) p.splitter = parse_splitter(j.at("splitter"), path + ".splitter");
  if (j.contains("awg")) p.awg = parse_awg(j.at("awg"), path + ".awg");
  if (p.splitter && p.awg)
    fail(path, "specify either a splitter or an awg, not both");
  // Stage decides the default device.
  if (!p.splitter && !p.awg) {
    if (stage == Stage::FullWdm)
      p.awg = AwgSpec{};
    else
      p.splitter = SplitterSpec{};
  }
  p.atten_1300_db_per_km =
      get_double(j, path, "attenuation_1300_db_per_km", p.atten_1300_db_per_km);
  p.atten_1500_db_per_km =
      get_double(j, path, "attenuation_1500_db_per_km", p.atten_1500_db_per_km);
  p.ont_launch_power_dbm =
      get_double(j, path, "ont_launch_power_dbm", p.ont_launch_power_dbm);
  if (j.contains("receiver")) {
    const json& r = j.at("receiver");
    const std::string rp = path + ".receiver";
    check_object(r, rp,
                 {"sensitivity_dbm", "overload_dbm", "threshold_reset_bits",
                  "overhead_bits"});
    p.receiver.sensitivity_dbm =
        get_double(r, rp, "sensitivity_dbm", p.receiver.sensitivity_dbm);
    p.receiver.overload_dbm =
        get_double(r, rp, "overload_dbm", p.receiver.overload_dbm);
    p.receiver.threshold_reset_bits = static_cast<int>(
        get_uint(r, rp, "threshold_reset_bits",
                 static_cast<std::uint64_t>(p.receiver.threshold_reset_bits)));
    p.receiver.overhead_bits = static_cast<int>(get_uint(
        r, rp, "overhead_bits", static_cast<std::uint64_t>(p.receiver.overhead_bits)));
  }
  p.cwdm_insertion_db = get_double(j, path, "cwdm_insertion_db", p.cwdm_insertion_db);
  p.dwdm_filter_insertion_db =
      get_double(j, path, "dwdm_filter_insertion_db", p.dwdm_filter_insertion_db);
  p.video_launch_power_dbm =
      get_double(j, path, "video_launch_power_dbm", p.video_launch_power_dbm);
  p.video_rx_sensitivity_dbm =
      get_double(j, path, "video_rx_sensitivity_dbm", p.video_rx_sensitivity_dbm);
  p.wdm_launch_power_dbm =
      get_double(j, path, "wdm_launch_power_dbm", p.wdm_launch_power_dbm);
  p.wdm_rx_sensitivity_dbm =
      get_double(j, path, "wdm_rx_sensitivity_dbm", p.wdm_rx_sensitivity_dbm);
  p.wdm_link_rate_bps = get_double(j, path, "wdm_link_rate_bps", p.wdm_link_rate_bps);
  if (p.wdm_link_rate_bps <= 0) fail(path + ".wdm_link_rate_bps", "must be > 0");
  p.polling_interval_frames = static_cast<std::uint32_t>(
      get_uint(j, path, "polling_interval_frames", p.polling_interval_frames));
  p.force_equalization_zero =
      get_bool(j, path, "force_equalization_zero", p.force_equalization_zero);
  return p;
}

WavelengthPlan parse_plan(const json& j) {
  const std::string path = "wavelength_plan";
  check_object(j, path,
               {"upstream_band", "basic_band", "enhancement_band", "video_nm",
                "dwdm_grid"});
  WavelengthPlan w;
  std::tie(w.upstream_low_nm, w.upstream_high_nm) =
      get_band(j, path, "upstream_band", w.upstream_low_nm, w.upstream_high_nm);
  std::tie(w.basic_low_nm, w.basic_high_nm) =
      get_band(j, path, "basic_band", w.basic_low_nm, w.basic_high_nm);
  std::tie(w.enhancement_low_nm, w.enhancement_high_nm) = get_band(
      j, path, "enhancement_band", w.enhancement_low_nm, w.enhancement_high_nm);
  w.video_nm = get_double(j, path, "video_nm", w.video_nm);
  if (j.contains("dwdm_grid")) {
    const json& g = j.at("dwdm_grid");
    const std::string gp = path + ".dwdm_grid";
    check_object(g, gp, {"start_nm", "spacing_nm", "count"});
    w.dwdm.start_nm = get_double(g, gp, "start_nm", w.dwdm.start_nm);
    w.dwdm.spacing_nm = get_double(g, gp, "spacing_nm", w.dwdm.spacing_nm);
    w.dwdm.count = static_cast<int>(
        get_uint(g, gp, "count", static_cast<std::uint64_t>(w.dwdm.count)));
  }
  w.validate();
  return w;
}

Stage parse_stage(const json& doc) {
  const json& v = require_key(doc, "scenario", "stage");
  if (!v.is_string()) fail("stage", "must be a string");
  const std::string s = v.get<std::string>();
  if (s == "TDM_BASELINE") return Stage::TdmBaseline;
  if (s == "VIDEO_OVERLAY") return Stage::VideoOverlay;
  if (s == "COEXISTENCE") return Stage::Coexistence;
  if (s == "FULL_WDM") return Stage::FullWdm;
  fail("stage",
       "must be one of TDM_BASELINE, VIDEO_OVERLAY, COEXISTENCE, FULL_WDM");
}

std::vector<OntSpec> parse_onts(const json& j) {
  if (!j.is_array() || j.empty()) fail("onts", "must be a non-empty array");
  std::vector<OntSpec> onts;
  std::set<std::uint32_t> ids;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string path = "onts[" + std::to_string(i) + "]";
    const json& o = j[i];
    check_object(o, path, {"id", "fiber_m", "weight", "kind", "max_grants_per_frame"});
    OntSpec spec;
    spec.id = static_cast<std::uint32_t>(get_uint(o, path, "id", 0));
    if (!o.contains("id")) fail(path + ".id", "missing required field");
    if (spec.id == 0 || spec.id > 255) fail(path + ".id", "must be in 1..255");
    if (!ids.insert(spec.id).second)
      fail(path + ".id", "duplicate ONT id " + std::to_string(spec.id));
    spec.fiber_m = get_double(o, path, "fiber_m", 0.0);
    if (spec.fiber_m < 0) fail(path + ".fiber_m", "must be >= 0");
    spec.weight = static_cast<std::uint32_t>(get_uint(o, path, "weight", 1));
    if (spec.weight == 0) fail(path + ".weight", "must be >= 1");
    if (o.contains("kind")) {
      const std::string k = o.at("kind").is_string()
                                ? o.at("kind").get<std::string>()
                                : std::string();
      if (k == "tdm")
        spec.kind = OntKind::Tdm;
      else if (k == "wdm")
        spec.kind = OntKind::Wdm;
      else
        fail(path + ".kind", "must be \"tdm\" or \"wdm\"");
    }
    if (o.contains("max_grants_per_frame"))
      spec.max_grants_per_frame = static_cast<int>(
          get_uint(o, path, "max_grants_per_frame", 0));
    onts.push_back(spec);
  }
  return onts;
}

std::vector<TrafficSpec> parse_traffic(const json& j,
                                       const std::vector<OntSpec>& onts) {
  if (!j.is_array()) fail("traffic", "must be an array");
  std::vector<TrafficSpec> traffic;
  std::set<std::uint32_t> seen;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string path = "traffic[" + std::to_string(i) + "]";
    const json& t = j[i];
    check_object(t, path, {"ont_id", "model", "rate_cells_per_s", "stream"});
    TrafficSpec spec;
    if (!t.contains("ont_id")) fail(path + ".ont_id", "missing required field");
    spec.ont_id = static_cast<std::uint32_t>(get_uint(t, path, "ont_id", 0));
    if (std::none_of(onts.begin(), onts.end(),
                     [&](const OntSpec& o) { return o.id == spec.ont_id; }))
      fail(path + ".ont_id", "no such ONT: " + std::to_string(spec.ont_id));
    if (!seen.insert(spec.ont_id).second)
      fail(path + ".ont_id",
           "duplicate traffic entry for ONT " + std::to_string(spec.ont_id));
    const json& m = require_key(t, path, "model");
    const std::string ms = m.is_string() ? m.get<std::string>() : std::string();
    if (ms == "cbr")
      spec.model = TrafficModel::Cbr;
    else if (ms == "poisson")
      spec.model = TrafficModel::Poisson;
    else
      fail(path + ".model", "must be \"cbr\" or \"poisson\"");
    spec.rate_cells_per_s = get_double(t, path, "rate_cells_per_s", 0.0);
    if (!(spec.rate_cells_per_s > 0))
      fail(path + ".rate_cells_per_s", "must be > 0");
    spec.stream = t.contains("stream")
                      ? std::optional<std::uint64_t>(
                            get_uint(t, path, "stream", 0))
                      : std::nullopt;
    traffic.push_back(spec);
  }
  return traffic;
}

void validate_stage_topology(const Scenario& s) {
  std::size_t tdm = 0, wdm = 0;
  for (const auto& o : s.onts) (o.kind == OntKind::Tdm ? tdm : wdm)++;
  switch (s.stage) {
    case Stage::TdmBaseline:
    case Stage::VideoOverlay:
      if (wdm > 0)
        fail("onts", std::string(to_string(s.stage)) +
                         " allows only tdm ONTs");
      if (!s.plant.splitter) fail("plant", "TDM stages require a splitter plant");
      break;
    case Stage::Coexistence:
      if (tdm == 0 || wdm == 0)
        fail("onts", "COEXISTENCE requires at least one tdm and one wdm ONT");
      if (!s.plant.splitter)
        fail("plant", "COEXISTENCE shares the splitter plant");
      break;
    case Stage::FullWdm:
      if (tdm > 0) fail("onts", "FULL_WDM requires all ONTs to be wdm");
      if (!s.plant.awg) fail("plant", "FULL_WDM requires an AWG plant");
      if (static_cast<int>(wdm) > s.plant.awg->ports)
        fail("onts", "more wdm ONTs than AWG ports");
      break;
  }
  if (tdm > kMaxOnts) fail("onts", "at most 32 tdm ONTs");
  if (wdm > static_cast<std::size_t>(s.wavelength_plan.dwdm.count))
    fail("onts", "more wdm ONTs than DWDM channels");
}

} // namespace

const TrafficSpec* Scenario::traffic_for(std::uint32_t ont_id) const {
  for (const auto& t : traffic)
    if (t.ont_id == ont_id) return &t;
  return nullptr;
}

double Scenario::final_temperature_c() const {
  double t = plant.awg ? plant.awg->reference_temp_c : 25.0;
  for (const auto& [time_s, celsius] : temperature_profile)
    if (time_s <= duration_s) t = celsius;
  return t;
}

Scenario scenario_from_json(const nlohmann::json& doc) {
  check_object(doc, "scenario",
               {"stage", "plant", "onts", "traffic", "wavelength_plan",
                "duration_s", "seed", "temperature_profile"});
  Scenario s;
  s.stage = parse_stage(doc);
  s.onts = parse_onts(require_key(doc, "scenario", "onts"));
  s.plant = parse_plant(doc.contains("plant") ? doc.at("plant") : json::object(),
                        s.stage);
  s.traffic = doc.contains("traffic")
                  ? parse_traffic(doc.at("traffic"), s.onts)
                  : std::vector<TrafficSpec>{};
  s.wavelength_plan = doc.contains("wavelength_plan")
                          ? parse_plan(doc.at("wavelength_plan"))
                          : WavelengthPlan{};
  if (!doc.contains("wavelength_plan")) s.wavelength_plan.validate();
  s.duration_s = get_double(doc, "scenario", "duration_s", s.duration_s);
  if (!(s.duration_s > 0)) fail("duration_s", "must be > 0");
  s.seed = get_uint(doc, "scenario", "seed", s.seed);
  if (doc.contains("temperature_profile")) {
    const json& tp = doc.at("temperature_profile");
    if (!tp.is_array()) fail("temperature_profile", "must be an array");
    double prev = -1.0;
    for (std::size_t i = 0; i < tp.size(); ++i) {
      const std::string path = "temperature_profile[" + std::to_string(i) + "]";
      const json& e = tp[i];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
          !e[1].is_number())
        fail(path, "must be [time_s, celsius]");
      const double time_s = e[0].get<double>();
      if (time_s < 0 || time_s < prev)
        fail(path, "times must be non-negative and non-decreasing");
      prev = time_s;
      s.temperature_profile.emplace_back(time_s, e[1].get<double>());
    }
  }
  validate_stage_topology(s);
  return s;
}

Scenario load_scenario(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("scenario: invalid JSON: ") + e.what());
  }
  return scenario_from_json(doc);
}

const char* to_string(Stage s) {
  switch (s) {
    case Stage::TdmBaseline:
      return "TDM_BASELINE";
    case Stage::VideoOverlay:
      return "VIDEO_OVERLAY";
    case Stage::Coexistence:
      return "COEXISTENCE";
    case Stage::FullWdm:
      return "FULL_WDM";
  }
  return "?";
}

const char* to_string(OntKind k) {
  return k == OntKind::Tdm ? "tdm" : "wdm";
}

const char* to_string(TrafficModel m) {
  return m == TrafficModel::Cbr ? "cbr" : "poisson";
}

nlohmann::json scenario_to_json(const Scenario& s) {
  json plant{
      {"feeder_m", s.plant.feeder_m},
      {"connector_loss_db", s.plant.connector_loss_db},
      {"attenuation_1300_db_per_km", s.plant.atten_1300_db_per_km},
      {"attenuation_1500_db_per_km", s.plant.atten_1500_db_per_km},
      {"ont_launch_power_dbm", s.plant.ont_launch_power_dbm},
      {"receiver",
       {{"sensitivity_dbm", s.plant.receiver.sensitivity_dbm},
        {"overload_dbm", s.plant.receiver.overload_dbm},
        {"threshold_reset_bits", s.plant.receiver.threshold_reset_bits},
        {"overhead_bits", s.plant.receiver.overhead_bits}}},
      {"cwdm_insertion_db", s.plant.cwdm_insertion_db},
      {"dwdm_filter_insertion_db", s.plant.dwdm_filter_insertion_db},
      {"video_launch_power_dbm", s.plant.video_launch_power_dbm},
      {"video_rx_sensitivity_dbm", s.plant.video_rx_sensitivity_dbm},
      {"wdm_launch_power_dbm", s.plant.wdm_launch_power_dbm},
      {"wdm_rx_sensitivity_dbm", s.plant.wdm_rx_sensitivity_dbm},
      {"wdm_link_rate_bps", s.plant.wdm_link_rate_bps},
      {"polling_interval_frames", s.plant.polling_interval_frames},
      {"force_equalization_zero", s.plant.force_equalization_zero}};
  if (s.plant.splitter)
    plant["splitter"] = {{"ports", s.plant.splitter->ports},
                         {"excess_loss_db", s.plant.splitter->excess_loss_db}};
  if (s.plant.awg)
    plant["awg"] = {
        {"ports", s.plant.awg->ports},
        {"channel_spacing_nm", s.plant.awg->channel_spacing_nm},
        {"insertion_loss_db", s.plant.awg->insertion_loss_db},
        {"temp_coefficient_nm_per_c", s.plant.awg->temp_coefficient_nm_per_c},
        {"guard_nm", s.plant.awg->guard_nm},
        {"reference_temp_c", s.plant.awg->reference_temp_c}};

  json onts = json::array();
  for (const auto& o : s.onts) {
    json e{{"id", o.id},
           {"fiber_m", o.fiber_m},
           {"weight", o.weight},
           {"kind", to_string(o.kind)}};
    if (o.max_grants_per_frame) e["max_grants_per_frame"] = *o.max_grants_per_frame;
    onts.push_back(e);
  }

  json traffic = json::array();
  for (const auto& t : s.traffic)
    traffic.push_back({{"ont_id", t.ont_id},
                       {"model", to_string(t.model)},
                       {"rate_cells_per_s", t.rate_cells_per_s},
                       {"stream", t.stream.value_or(t.ont_id)}});

  const WavelengthPlan& w = s.wavelength_plan;
  json plan{{"upstream_band", {w.upstream_low_nm, w.upstream_high_nm}},
            {"basic_band", {w.basic_low_nm, w.basic_high_nm}},
            {"enhancement_band", {w.enhancement_low_nm, w.enhancement_high_nm}},
            {"video_nm", w.video_nm},
            {"dwdm_grid",
             {{"start_nm", w.dwdm.start_nm},
              {"spacing_nm", w.dwdm.spacing_nm},
              {"count", w.dwdm.count}}}};

  json profile = json::array();
  for (const auto& [t, c] : s.temperature_profile)
    profile.push_back(json::array({t, c}));

  return json{{"stage", to_string(s.stage)},
              {"plant", plant},
              {"onts", onts},
              {"traffic", traffic},
              {"wavelength_plan", plan},
              {"duration_s", s.duration_s},
              {"seed", s.seed},
              {"temperature_profile", profile}};
}

} // namespace ponsim
