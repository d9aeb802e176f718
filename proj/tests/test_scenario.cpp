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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "vendor/doctest.h"

#include <fstream>
#include <sstream>
#include <string>

#include "ponsim/errors.hpp"
#include "ponsim/runner.hpp"
#include "ponsim/scenario.hpp"

using namespace ponsim;

namespace {

std::string slurp(const std::string& rel) {
  std::ifstream in(std::string(PONSIM_DATA_DIR) + "/" + rel);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string mini(double duration_s = 0.003, const char* extra_plant = "") {
  std::ostringstream s;
  s << R"({"stage":"TDM_BASELINE","duration_s":)" << duration_s
    << R"(,"seed":5,"plant":{"feeder_m":10000)" << extra_plant << R"(},
        "onts":[{"id":1,"fiber_m":0},{"id":2,"fiber_m":5000}],
        "traffic":[{"ont_id":1,"model":"cbr","rate_cells_per_s":50000},
                   {"ont_id":2,"model":"poisson","rate_cells_per_s":40000}]})";
  return s.str();
}

} // namespace

TEST_CASE("the sample scenarios all validate") {
  for (const char* name :
       {"scenarios/baseline.json", "scenarios/video.json",
        "scenarios/coexist.json", "scenarios/full_wdm.json"})
    CHECK_NOTHROW(load_scenario(slurp(name)));
}

TEST_CASE("validation errors carry field paths") {
  auto message_of = [](const std::string& text) {
    try {
      load_scenario(text);
      return std::string("(no error)");
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
  };

  CHECK(message_of(R"({"onts":[{"id":1}]})").find("stage") !=
        std::string::npos);
  CHECK(message_of(R"({"stage":"NOPE","onts":[{"id":1}]})").find("stage") !=
        std::string::npos);
  CHECK(message_of(R"({"stage":"TDM_BASELINE","onts":[]})").find("onts") !=
        std::string::npos);
  CHECK(message_of(
            R"({"stage":"TDM_BASELINE","onts":[{"id":1},{"id":1}]})")
            .find("duplicate ONT id 1") != std::string::npos);
  CHECK(message_of(
            R"({"stage":"TDM_BASELINE","onts":[{"id":1,"mystery":3}]})")
            .find("onts[0].mystery") != std::string::npos);
  CHECK(message_of(
            R"({"stage":"TDM_BASELINE","onts":[{"id":1}],
                "plant":{"splitter":{"ports":3}}})")
            .find("plant.splitter.ports") != std::string::npos);
  CHECK(message_of(
            R"({"stage":"TDM_BASELINE","onts":[{"id":1}],
                "traffic":[{"ont_id":9,"model":"cbr","rate_cells_per_s":1}]})")
            .find("no such ONT: 9") != std::string::npos);
  CHECK(message_of(
            R"({"stage":"TDM_BASELINE","onts":[{"id":1}],
                "traffic":[{"ont_id":1,"model":"cbr","rate_cells_per_s":0}]})")
            .find("rate_cells_per_s") != std::string::npos);
  CHECK(message_of(R"({"stage":"TDM_BASELINE","onts":[{"id":1}],"bogus":1})")
            .find("bogus") != std::string::npos);
  CHECK(message_of("{nope") .find("invalid JSON") != std::string::npos);
}

TEST_CASE("stage and topology invariants") {
  CHECK_THROWS_AS(
      load_scenario(
          R"({"stage":"TDM_BASELINE","onts":[{"id":1,"kind":"wdm"}]})"),
      ValidationError);
  CHECK_THROWS_AS(
      load_scenario(R"({"stage":"COEXISTENCE","onts":[{"id":1}]})"),
      ValidationError);
  CHECK_THROWS_AS(
      load_scenario(R"({"stage":"FULL_WDM","onts":[{"id":1}]})"),
      ValidationError);
  // FULL_WDM with an explicit splitter plant contradicts itself
  CHECK_THROWS_AS(
      load_scenario(
          R"({"stage":"FULL_WDM","plant":{"splitter":{"ports":32}},
              "onts":[{"id":1,"kind":"wdm"}]})"),
      ValidationError);
  // stage defaults pick the right device
  const Scenario wdm = load_scenario(
      R"({"stage":"FULL_WDM","onts":[{"id":1,"kind":"wdm"}]})");
  CHECK(wdm.plant.awg.has_value());
  CHECK_FALSE(wdm.plant.splitter.has_value());
  const Scenario tdm =
      load_scenario(R"({"stage":"TDM_BASELINE","onts":[{"id":1}]})");
  CHECK(tdm.plant.splitter.has_value());
}

TEST_CASE("the normalized echo reloads to an identical scenario") {
  for (const char* name :
       {"scenarios/baseline.json", "scenarios/video.json",
        "scenarios/coexist.json", "scenarios/full_wdm.json"}) {
    const Scenario s = load_scenario(slurp(name));
    const auto echo = scenario_to_json(s);
    const Scenario again = scenario_from_json(echo);
    CHECK(scenario_to_json(again) == echo);
  }
}

TEST_CASE("mini run: ranging equalizes both ONTs and audits clean") {
  const Scenario s = load_scenario(mini());
  const RunResult r = run_scenario(s);
  CHECK(r.summary.audit_pass);
  CHECK(r.metrics.plant.collision_windows == 0);
  CHECK(r.metrics.plant.misaligned_bursts == 0);
  CHECK(r.metrics.per_ont.at(1).delivered > 0);
  CHECK(r.metrics.per_ont.at(2).delivered > 0);
  // 0.003 s -> floor(0.003 * 155.52e6 / 23744) frames
  CHECK(r.summary.measured_frames == 19);
}

TEST_CASE("mini run twice gives identical metrics") {
  const Scenario s = load_scenario(mini());
  const RunResult a = run_scenario(s);
  const RunResult b = run_scenario(s);
  CHECK(a.metrics.per_ont.at(1).delivered == b.metrics.per_ont.at(1).delivered);
  CHECK(a.metrics.per_ont.at(2).delivered == b.metrics.per_ont.at(2).delivered);
  CHECK(a.metrics.per_ont.at(2).mean_latency_ticks ==
        b.metrics.per_ont.at(2).mean_latency_ticks);
  CHECK(a.summary.events_dispatched == b.summary.events_dispatched);
}

TEST_CASE("an out-of-reach ONT fails ranging loudly") {
  const std::string text =
      R"({"stage":"TDM_BASELINE","duration_s":0.002,
          "plant":{"feeder_m":15000},
          "onts":[{"id":1,"fiber_m":6000}]})";
  CHECK_THROWS_AS(run_scenario(load_scenario(text)), ProtocolError);
}

TEST_CASE("forcing zero equalization on a spread plant causes collisions") {
  const Scenario s = load_scenario(
      mini(0.003, R"(,"force_equalization_zero":true)"));
  const RunResult r = run_scenario(s);
  CHECK(r.metrics.plant.collision_windows > 0);
  CHECK(r.metrics.plant.misaligned_bursts > 0);
  // every cell still has exactly one fate
  CHECK(r.summary.audit_pass);
}

TEST_CASE("temperature profile applies in time order") {
  const Scenario s = load_scenario(
      R"({"stage":"FULL_WDM","duration_s":0.004,
          "onts":[{"id":1,"kind":"wdm"},{"id":2,"kind":"wdm"}],
          "temperature_profile":[[0.0,25.0],[0.001,40.0],[0.002,70.0]]})");
  const RunResult r = run_scenario(s);
  CHECK(r.summary.final_temperature_c == 70.0);
  // 0.01 nm/C * 45 C = 0.45 nm drift > 0.8/2 - 0.1: both links down
  CHECK(r.metrics.plant.wdm_links_up == 0);
}
