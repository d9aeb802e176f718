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

namespace ponsim {

/// Simulation time unit: one bit period at the 155.52 Mbps line rate
/// (1 tick = 1/155'520'000 s, about 6.43 ns).
using BitTime = std::uint64_t;

inline constexpr std::uint64_t kLineRateBps = 155'520'000;

// Upstream slot: 3-byte overhead + 53-byte ATM cell.
inline constexpr int kSlotBytes = 56;
inline constexpr BitTime kSlotTicks = 448; // 56 bytes * 8

// Frame: 53 upstream slots; downstream side carries 56 cells of 53 bytes.
inline constexpr int kSlotsPerFrame = 53;
inline constexpr BitTime kFrameTicks = 23'744; // 53 * 448 == 56 * 53 * 8

inline constexpr int kCellBytes = 53;
inline constexpr int kCellPayloadBits = 424; // 53 bytes
inline constexpr int kCellsPerDownstreamFrame = 56;
inline constexpr int kDownstreamFrameBytes = 2968; // 56 * 53

// All ONTs are logically placed at the round-trip distance of the 20 km
// design reach; 2 * 20'000 m * 5 ns/m at 155.52 MHz.
inline constexpr BitTime kEqualizationTarget = 31'104;

// An ONT replies to a ranging grant one slot after detecting it.
inline constexpr BitTime kRangingResponseOffset = 448;

} // namespace ponsim
