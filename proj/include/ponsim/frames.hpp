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

#include <array>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "ponsim/bit_time.hpp"

namespace ponsim {

// ---------------------------------------------------------------------------
// Grants
// ---------------------------------------------------------------------------

enum class GrantType : std::uint8_t {
  Unassigned = 0,
  Data = 1,
  Ploam = 2,
};

/// Per-slot transmission permission. On the wire a grant is one byte:
/// high 2 bits are the type (00 unassigned, 01 data, 10 ploam), low 6 bits
/// the grant id. Id 0 is reserved as the UNASSIGNED pattern.
struct Grant {
  GrantType type{GrantType::Unassigned};
  std::uint8_t grant_id{0};

  friend bool operator==(const Grant&, const Grant&) = default;
};

std::uint8_t encode_grant(const Grant& g);
Grant decode_grant(std::uint8_t wire); // throws CodecError on type bits 11

// ---------------------------------------------------------------------------
// PLOAM message (12 bytes inside a PLOAM cell)
// ---------------------------------------------------------------------------

enum class MessageKind : std::uint8_t {
  Idle = 0,
  Broadcast = 1,
  AssignGrantIds = 2,       // arg = data_id << 8 | ploam_id
  RangingGrant = 3,         // directed: respond one slot after detection
  SetEqualizationDelay = 4, // arg = delay in bit-times
};

struct PloamMessage {
  MessageKind kind{MessageKind::Idle};
  std::uint8_t target_ont{0};
  std::uint32_t arg{0};

  friend bool operator==(const PloamMessage&, const PloamMessage&) = default;
};

inline constexpr int kPloamMessageBytes = 12;

void encode_ploam_message(const PloamMessage& m, std::span<std::uint8_t> out);
PloamMessage decode_ploam_message(std::span<const std::uint8_t> in);

// ---------------------------------------------------------------------------
// Downstream cells
// ---------------------------------------------------------------------------

inline constexpr int kFirstPloamGrants = 27;
inline constexpr int kSecondPloamGrants = 26;
inline constexpr int kFirstPloamIndex = 0;
inline constexpr int kSecondPloamIndex = 28; // midpoint of the 56-cell frame

/// Downstream control cell: 27 grants in the first cell of a frame,
/// 26 in the second, plus a 12-byte message.
struct PloamCell {
  bool second{false};
  std::vector<Grant> grants; // 27 (first) or 26 (second)
  PloamMessage message;

  friend bool operator==(const PloamCell&, const PloamCell&) = default;
};

/// Payload ATM cell; header and payload are opaque to the MAC.
struct AtmCell {
  std::array<std::uint8_t, 52> payload{};

  friend bool operator==(const AtmCell&, const AtmCell&) = default;
};

struct IdleCell {
  friend bool operator==(const IdleCell&, const IdleCell&) = default;
};

using DownstreamCell = std::variant<IdleCell, AtmCell, PloamCell>;

struct DownstreamFrame {
  std::array<DownstreamCell, kCellsPerDownstreamFrame> cells{};

  friend bool operator==(const DownstreamFrame&, const DownstreamFrame&) = default;
};

/// Frame with the two PLOAM cells in place and idle payload cells.
DownstreamFrame make_downstream_frame(PloamCell first, PloamCell second);

/// Convenience: a PLOAM cell with the right grant count, all UNASSIGNED.
PloamCell make_ploam_cell(bool second, PloamMessage message = {});

std::vector<std::uint8_t> encode_downstream_frame(const DownstreamFrame& f);
DownstreamFrame decode_downstream_frame(std::span<const std::uint8_t> bytes);

/// Slots 0..26 map to first-PLOAM grants 0..26, slots 27..52 to
/// second-PLOAM grants 0..25. Throws std::out_of_range outside 0..52.
const Grant& grant_for_slot(const DownstreamFrame& f, int slot_index);

const PloamCell& first_ploam(const DownstreamFrame& f);
const PloamCell& second_ploam(const DownstreamFrame& f);

// ---------------------------------------------------------------------------
// Upstream slot (3-byte overhead + 53-byte cell = 56 bytes)
// ---------------------------------------------------------------------------

struct UpstreamIdle {
  friend bool operator==(const UpstreamIdle&, const UpstreamIdle&) = default;
};

struct DataCell {
  std::array<std::uint8_t, 52> payload{};

  friend bool operator==(const DataCell&, const DataCell&) = default;
};

struct PloamResponse {
  std::uint8_t ont_id{0};
  std::uint8_t response_kind{0}; // 0 status, 1 ranging

  friend bool operator==(const PloamResponse&, const PloamResponse&) = default;
};

using UpstreamCell = std::variant<UpstreamIdle, DataCell, PloamResponse>;

struct UpstreamSlotPayload {
  std::array<std::uint8_t, 3> overhead{};
  UpstreamCell cell;

  friend bool operator==(const UpstreamSlotPayload&, const UpstreamSlotPayload&) = default;
};

std::array<std::uint8_t, kSlotBytes> encode_upstream_slot(const UpstreamSlotPayload& p);
UpstreamSlotPayload decode_upstream_slot(std::span<const std::uint8_t> bytes);

} // namespace ponsim
