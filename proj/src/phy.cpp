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

#include "ponsim/phy.hpp"

#include <cmath>
#include <numeric>

#include "ponsim/errors.hpp"

namespace ponsim {

std::optional<Band> WavelengthPlan::band_of(double nm) const {
  if (nm >= upstream_low_nm && nm <= upstream_high_nm) return Band::Upstream;
  if (nm >= basic_low_nm && nm <= basic_high_nm) return Band::Basic;
  if (nm >= enhancement_low_nm && nm <= enhancement_high_nm)
    return Band::Enhancement;
  return std::nullopt;
}

double WavelengthPlan::dwdm_channel_nm(int channel) const {
  return dwdm.start_nm + channel * dwdm.spacing_nm;
}

std::optional<int> WavelengthPlan::dwdm_channel_of(double nm) const {
  for (int i = 0; i < dwdm.count; ++i)
    if (std::abs(nm - dwdm_channel_nm(i)) < 1e-6) return i;
  return std::nullopt;
}

void WavelengthPlan::validate() const {
  auto check_band = [](const char* name, double lo, double hi) {
    if (!(lo < hi))
      throw ValidationError(std::string("wavelength_plan.") + name +
                            ": band low must be below band high");
  };
  check_band("upstream_band", upstream_low_nm, upstream_high_nm);
  check_band("basic_band", basic_low_nm, basic_high_nm);
  check_band("enhancement_band", enhancement_low_nm, enhancement_high_nm);
  struct Iv {
    const char* name;
    double lo, hi;
  };
  const Iv bands[] = {{"upstream_band", upstream_low_nm, upstream_high_nm},
                      {"basic_band", basic_low_nm, basic_high_nm},
                      {"enhancement_band", enhancement_low_nm,
                       enhancement_high_nm}};
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (bands[i].lo <= bands[j].hi && bands[j].lo <= bands[i].hi)
        throw ValidationError(std::string("wavelength_plan: ") +
                              bands[i].name + " overlaps " + bands[j].name);
  if (band_of(video_nm) != Band::Enhancement)
    throw ValidationError(
        "wavelength_plan.video_nm: must lie in the enhancement band");
  if (dwdm.count < 1)
    throw ValidationError("wavelength_plan.dwdm_grid.count: must be >= 1");
  if (dwdm.spacing_nm <= 0)
    throw ValidationError("wavelength_plan.dwdm_grid.spacing_nm: must be > 0");
  for (int i : {0, dwdm.count - 1})
    if (band_of(dwdm_channel_nm(i)) != Band::Enhancement)
      throw ValidationError(
          "wavelength_plan.dwdm_grid: grid must lie inside the enhancement "
          "band");
}

BitTime propagation_ticks(double length_m) {
  if (length_m < 0) throw PhyError("negative fiber length");
  // 5 ns/m at 155.52 MHz -> 0.7776 ticks per meter, half-up. Integral
  // lengths use exact rational arithmetic: m * 7776 / 10000.
  const double integral = std::floor(length_m);
  if (integral == length_m && length_m < 1e15) {
    const auto m = static_cast<std::uint64_t>(integral);
    return (m * 7776 + 5000) / 10000;
  }
  return static_cast<BitTime>(std::floor(length_m * 0.7776 + 0.5));
}

double path_loss_db(const OpticalPath& path, double wavelength_nm,
                    const WavelengthPlan& plan) {
  const auto band = plan.band_of(wavelength_nm);
  if (!band)
    throw PhyError("wavelength " + std::to_string(wavelength_nm) +
                   " nm is in no configured band");
  const double per_km = (*band == Band::Upstream) ? path.atten_1300_db_per_km
                                                  : path.atten_1500_db_per_km;
  double loss = per_km * (path.feeder_m + path.drop_m) / 1000.0;
  loss += path.connector_loss_db + path.extra_filter_db;
  if (path.splitter)
    loss += 10.0 * std::log10(static_cast<double>(path.splitter->ports)) +
            path.splitter->excess_loss_db;
  if (path.awg) loss += path.awg->insertion_loss_db;
  return loss;
}

std::vector<int> route_splitter(const SplitterSpec& s) {
  std::vector<int> ports(static_cast<std::size_t>(s.ports));
  std::iota(ports.begin(), ports.end(), 0);
  return ports;
}

bool awg_aligned(const AwgSpec& awg, double temperature_c) {
  const double drift =
      awg.temp_coefficient_nm_per_c * (temperature_c - awg.reference_temp_c);
  return std::abs(drift) < awg.channel_spacing_nm / 2.0 - awg.guard_nm;
}

std::vector<int> route_awg(const AwgSpec& awg, int input_port,
                           double wavelength_nm, double temperature_c,
                           const WavelengthPlan& plan) {
  const auto channel = plan.dwdm_channel_of(wavelength_nm);
  if (!channel) return {};
  if (!awg_aligned(awg, temperature_c)) return {};
  return {(*channel + input_port) % awg.ports};
}

CwdmBranch cwdm_filter(CwdmStage stage, double wavelength_nm,
                       const WavelengthPlan& plan) {
  const auto band = plan.band_of(wavelength_nm);
  if (!band)
    throw PhyError("wavelength " + std::to_string(wavelength_nm) +
                   " nm is in no configured band");
  if (stage == CwdmStage::Cwdm1)
    return *band == Band::Upstream ? CwdmBranch::UpstreamBranch
                                   : CwdmBranch::DownstreamBranch;
  switch (*band) {
    case Band::Basic:
      return CwdmBranch::BasicBranch;
    case Band::Enhancement:
      return CwdmBranch::EnhancementBranch;
    default:
      throw PhyError("upstream wavelength reached the CWDM2 stage");
  }
}

ReceptionResult receive_bursts(std::span<const ReceivedBurst> bursts,
                               double /*previous_burst_power_dbm*/,
                               const BurstRxConfig& cfg) {
  if (bursts.empty()) return Silence{};
  if (bursts.size() >= 2)
    return Collision{{bursts.begin(), bursts.end()}};
  const ReceivedBurst& b = bursts.front();
  if (b.power_dbm < cfg.sensitivity_dbm) return PowerTooLow{b};
  if (b.power_dbm > cfg.overload_dbm) return PowerTooHigh{b};
  // Threshold reset happens for every burst; it has to complete inside the
  // 3-byte slot overhead regardless of the power step from the last burst.
  if (cfg.threshold_reset_bits > cfg.overhead_bits)
    return InsufficientPreamble{b};
  return ReceptionOk{b};
}

} // namespace ponsim
