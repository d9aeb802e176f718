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
#include <span>
#include <variant>
#include <vector>

#include "ponsim/bit_time.hpp"
#include "ponsim/frames.hpp"

namespace ponsim {

// ---------------------------------------------------------------------------
// Wavelength plan
// ---------------------------------------------------------------------------

enum class Band { Upstream, Basic, Enhancement };

struct DwdmGrid {
  double start_nm{1540.0};
  double spacing_nm{0.8};
  int count{8};
};

/// G.983.3-style band split. Edges are configurable; defaults document the
/// values used throughout the tests.
struct WavelengthPlan {
  double upstream_low_nm{1260.0};
  double upstream_high_nm{1360.0};
  double basic_low_nm{1480.0};
  double basic_high_nm{1500.0};
  double enhancement_low_nm{1539.0};
  double enhancement_high_nm{1565.0};
  double video_nm{1550.0};
  DwdmGrid dwdm;

  std::optional<Band> band_of(double nm) const;
  double dwdm_channel_nm(int channel) const;
  std::optional<int> dwdm_channel_of(double nm) const;

  /// Bands pairwise disjoint, grid inside the enhancement band, video
  /// wavelength inside the enhancement band. Throws ValidationError.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Optical path and loss
// ---------------------------------------------------------------------------

struct SplitterSpec {
  int ports{32}; // one of 2, 4, 8, 16, 32
  double excess_loss_db{1.0};
};

struct AwgSpec {
  int ports{32};
  double channel_spacing_nm{0.8};
  double insertion_loss_db{5.0};
  double temp_coefficient_nm_per_c{0.01};
  double guard_nm{0.1};
  double reference_temp_c{25.0};
};

struct OpticalPath {
  double feeder_m{0.0};
  double drop_m{0.0};
  double connector_loss_db{0.0};
  double extra_filter_db{0.0}; // CWDM/DWDM filter insertion on this path
  std::optional<SplitterSpec> splitter;
  std::optional<AwgSpec> awg;
  double atten_1300_db_per_km{0.35};
  double atten_1500_db_per_km{0.25};
};

/// Fiber delay at 5 ns/m, rounded half-up to bit-times.
BitTime propagation_ticks(double length_m);

/// Total path loss. Splitter contributes 10*log10(N) plus excess loss in
/// both directions; an AWG contributes only its insertion loss (aligned
/// channel assumed). Throws PhyError when the wavelength is in no band.
double path_loss_db(const OpticalPath& path, double wavelength_nm,
                    const WavelengthPlan& plan);

// ---------------------------------------------------------------------------
// Wavelength routing and filtering
// ---------------------------------------------------------------------------

/// Splitter broadcast: every output port.
std::vector<int> route_splitter(const SplitterSpec& s);

/// AWG: single port (channel + input_port) mod N when the wavelength sits
/// on the DWDM grid and the thermal drift |coeff * (T - Tref)| stays below
/// spacing/2 - guard; otherwise empty (link down).
std::vector<int> route_awg(const AwgSpec& awg, int input_port,
                           double wavelength_nm, double temperature_c,
                           const WavelengthPlan& plan);

bool awg_aligned(const AwgSpec& awg, double temperature_c);

enum class CwdmStage { Cwdm1, Cwdm2 };
enum class CwdmBranch { UpstreamBranch, DownstreamBranch, BasicBranch, EnhancementBranch };

/// CWDM1 separates the 1300/1500 bands; CWDM2 splits basic vs enhancement.
CwdmBranch cwdm_filter(CwdmStage stage, double wavelength_nm,
                       const WavelengthPlan& plan);

// ---------------------------------------------------------------------------
// Burst-mode reception at the OSU
// ---------------------------------------------------------------------------

/// One upstream transmission as launched by an ONT.
struct UpstreamBurst {
  std::uint32_t ont_id{0};
  BitTime launch_time{0};
  BitTime duration{kSlotTicks};
  double wavelength_nm{1310.0};
  double launch_power_dbm{2.0};
  UpstreamSlotPayload payload;
};

/// A burst as seen at the OSU, with simulation-side bookkeeping that does
/// not travel on the wire (enqueue timestamp, sequence number).
struct ReceivedBurst {
  std::uint32_t ont_id{0};
  BitTime arrival{0};
  BitTime duration{kSlotTicks};
  double power_dbm{0.0};
  UpstreamSlotPayload payload;
  std::optional<BitTime> enqueue_time;
  std::uint64_t seq{0};
};

struct ReceptionOk {
  ReceivedBurst burst;
};
struct Collision {
  std::vector<ReceivedBurst> bursts;
};
struct PowerTooLow {
  ReceivedBurst burst;
};
struct PowerTooHigh {
  ReceivedBurst burst;
};
struct InsufficientPreamble {
  ReceivedBurst burst;
};
struct Silence {};

using ReceptionResult = std::variant<Silence, ReceptionOk, Collision,
                                     PowerTooLow, PowerTooHigh,
                                     InsufficientPreamble>;

struct BurstRxConfig {
  double sensitivity_dbm{-30.0};
  double overload_dbm{-8.0};
  int threshold_reset_bits{16}; // must fit in the 24-bit slot overhead
  int overhead_bits{24};
};

/// Decide the fate of one OSU slot window. The decision threshold is reset
/// for every burst, so the reset time must fit inside the slot overhead.
ReceptionResult receive_bursts(std::span<const ReceivedBurst> bursts,
                               double previous_burst_power_dbm,
                               const BurstRxConfig& cfg);

} // namespace ponsim
