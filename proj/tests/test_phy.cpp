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

#include <algorithm>
#include <set>

#include "ponsim/errors.hpp"
#include "ponsim/phy.hpp"

using namespace ponsim;

TEST_CASE("propagation delay: 5 ns/m rounded half-up to bit-times") {
  // 1 m = 5 ns = 0.7776 bit-times at 155.52 Mbps
  CHECK(propagation_ticks(0) == 0);
  CHECK(propagation_ticks(1) == 1);      // 0.7776 -> 1
  CHECK(propagation_ticks(1000) == 778); // 777.6 -> 778
  CHECK(propagation_ticks(2200) == 1711);
  CHECK(propagation_ticks(5000) == 3888);
  CHECK(propagation_ticks(10000) == 7776); // exactly integral
  CHECK(propagation_ticks(12345) == 9599);
  CHECK(propagation_ticks(20000) == 15552);
  CHECK(propagation_ticks(643.5) == 500); // 500.3736 -> 500
}

TEST_CASE("a 20 km one-way plant matches the equalization target") {
  CHECK(2 * propagation_ticks(20000) == 31104);
  CHECK(kEqualizationTarget == 31104);
}

TEST_CASE("wavelength plan: band classification and validation") {
  WavelengthPlan plan;
  CHECK(plan.band_of(1310.0) == Band::Upstream);
  CHECK(plan.band_of(1260.0) == Band::Upstream);
  CHECK(plan.band_of(1360.0) == Band::Upstream);
  CHECK(plan.band_of(1490.0) == Band::Basic);
  CHECK(plan.band_of(1550.0) == Band::Enhancement);
  CHECK_FALSE(plan.band_of(1400.0).has_value());
  CHECK_NOTHROW(plan.validate());

  WavelengthPlan bad = plan;
  bad.video_nm = 1490.0; // video must live in the enhancement band
  CHECK_THROWS_AS(bad.validate(), ValidationError);

  WavelengthPlan overlap = plan;
  overlap.basic_high_nm = 1545.0; // collides with the enhancement band
  CHECK_THROWS_AS(overlap.validate(), ValidationError);
}

TEST_CASE("dwdm grid arithmetic") {
  WavelengthPlan plan; // 1540 start, 0.8 spacing, 8 channels
  CHECK(plan.dwdm_channel_nm(0) == doctest::Approx(1540.0));
  CHECK(plan.dwdm_channel_nm(7) == doctest::Approx(1545.6));
  CHECK(plan.dwdm_channel_of(1540.8) == 1);
  CHECK(plan.dwdm_channel_of(1544.0) == 5);
  CHECK_FALSE(plan.dwdm_channel_of(1540.4).has_value()); // between channels
  CHECK_FALSE(plan.dwdm_channel_of(1546.4).has_value()); // past the grid
}

TEST_CASE("path loss: fiber, splitter, connectors and filters add in dB") {
  WavelengthPlan plan;
  OpticalPath p;
  p.feeder_m = 10000;
  p.drop_m = 2200;
  p.connector_loss_db = 0.5;
  p.extra_filter_db = 0.5;
  p.splitter = SplitterSpec{32, 1.0};

  // 12.2 km * 0.35 + 10log10(32) + 1.0 + 0.5 + 0.5
  CHECK(path_loss_db(p, 1310.0, plan) == doctest::Approx(21.3215).epsilon(1e-4));
  // the 1500 band uses the lower attenuation coefficient
  CHECK(path_loss_db(p, 1550.0, plan) == doctest::Approx(20.1015).epsilon(1e-4));

  OpticalPath awg_path;
  awg_path.feeder_m = 10000;
  awg_path.drop_m = 2200;
  awg_path.connector_loss_db = 0.5;
  awg_path.extra_filter_db = 1.5;
  awg_path.awg = AwgSpec{};
  CHECK(path_loss_db(awg_path, 1540.0, plan) == doctest::Approx(10.05).epsilon(1e-4));

  CHECK_THROWS_AS(path_loss_db(p, 1400.0, plan), PhyError);
}

TEST_CASE("splitter broadcasts to every port") {
  const auto ports = route_splitter(SplitterSpec{8, 1.0});
  CHECK(ports == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("awg routes channel c on input i to port (c + i) mod N") {
  WavelengthPlan plan;
  AwgSpec awg;
  awg.ports = 8;
  for (int input = 0; input < 8; ++input) {
    std::set<int> outputs;
    for (int ch = 0; ch < 8; ++ch) {
      const auto r =
          route_awg(awg, input, plan.dwdm_channel_nm(ch), 25.0, plan);
      REQUIRE(r.size() == 1);
      CHECK(r[0] == (ch + input) % 8);
      outputs.insert(r[0]);
    }
    CHECK(outputs.size() == 8); // a permutation for every input
  }
}

TEST_CASE("awg thermal drift: links stay up strictly below spacing/2 - guard") {
  AwgSpec awg;
  // exactly representable binary values so the boundary is crisp:
  // limit = 0.75/2 - 0.125 = 0.25; drift = 0.015625 * dT; boundary dT = 16
  awg.channel_spacing_nm = 0.75;
  awg.guard_nm = 0.125;
  awg.temp_coefficient_nm_per_c = 0.015625;
  awg.reference_temp_c = 25.0;

  CHECK(awg_aligned(awg, 25.0));
  CHECK(awg_aligned(awg, 40.999));
  CHECK_FALSE(awg_aligned(awg, 41.0)); // drift == limit is already out
  CHECK_FALSE(awg_aligned(awg, 60.0));
  CHECK(awg_aligned(awg, 9.001)); // symmetric on the cold side
  CHECK_FALSE(awg_aligned(awg, 9.0));

  WavelengthPlan plan;
  plan.dwdm.spacing_nm = 0.75;
  AwgSpec routed = awg;
  CHECK(route_awg(routed, 0, plan.dwdm_channel_nm(1), 41.0, plan).empty());
  CHECK(route_awg(routed, 0, plan.dwdm_channel_nm(1), 40.0, plan).size() == 1);
}

TEST_CASE("off-grid wavelengths do not route through the awg") {
  WavelengthPlan plan;
  AwgSpec awg;
  CHECK(route_awg(awg, 0, 1540.4, 25.0, plan).empty());
  CHECK(route_awg(awg, 0, 1310.0, 25.0, plan).empty());
}

TEST_CASE("cwdm filter stages split the bands") {
  WavelengthPlan plan;
  CHECK(cwdm_filter(CwdmStage::Cwdm1, 1310.0, plan) == CwdmBranch::UpstreamBranch);
  CHECK(cwdm_filter(CwdmStage::Cwdm1, 1490.0, plan) == CwdmBranch::DownstreamBranch);
  CHECK(cwdm_filter(CwdmStage::Cwdm1, 1550.0, plan) == CwdmBranch::DownstreamBranch);
  CHECK(cwdm_filter(CwdmStage::Cwdm2, 1490.0, plan) == CwdmBranch::BasicBranch);
  CHECK(cwdm_filter(CwdmStage::Cwdm2, 1550.0, plan) == CwdmBranch::EnhancementBranch);
  CHECK_THROWS_AS(cwdm_filter(CwdmStage::Cwdm1, 1400.0, plan), PhyError);
  // upstream light never reaches the second (downstream-side) stage
  CHECK_THROWS_AS(cwdm_filter(CwdmStage::Cwdm2, 1310.0, plan), PhyError);
}

TEST_CASE("burst reception outcomes") {
  BurstRxConfig cfg; // -30 dBm sensitivity, -8 dBm overload, 16 of 24 bits
  auto burst = [](double dbm) {
    ReceivedBurst b;
    b.ont_id = 1;
    b.arrival = 31104;
    b.power_dbm = dbm;
    return b;
  };

  CHECK(std::holds_alternative<Silence>(receive_bursts({}, -20.0, cfg)));

  const std::vector<ReceivedBurst> ok{burst(-20.0)};
  CHECK(std::holds_alternative<ReceptionOk>(receive_bursts(ok, -29.0, cfg)));

  const std::vector<ReceivedBurst> edge_low{burst(-30.0)};
  CHECK(std::holds_alternative<ReceptionOk>(receive_bursts(edge_low, -8.0, cfg)));
  const std::vector<ReceivedBurst> low{burst(-30.01)};
  CHECK(std::holds_alternative<PowerTooLow>(receive_bursts(low, -8.0, cfg)));
  const std::vector<ReceivedBurst> high{burst(-7.9)};
  CHECK(std::holds_alternative<PowerTooHigh>(receive_bursts(high, -30.0, cfg)));

  const std::vector<ReceivedBurst> two{burst(-20.0), burst(-12.0)};
  const auto r = receive_bursts(two, -20.0, cfg);
  REQUIRE(std::holds_alternative<Collision>(r));
  CHECK(std::get<Collision>(r).bursts.size() == 2);

  // threshold reset must fit inside the 24-bit slot overhead
  BurstRxConfig slow = cfg;
  slow.threshold_reset_bits = 25;
  CHECK(std::holds_alternative<InsufficientPreamble>(
      receive_bursts(ok, -20.0, slow)));
  BurstRxConfig exact = cfg;
  exact.threshold_reset_bits = 24;
  CHECK(std::holds_alternative<ReceptionOk>(receive_bursts(ok, -20.0, exact)));
}
