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

#include "ponsim/frames.hpp"

#include <algorithm>
#include <stdexcept>

#include "ponsim/errors.hpp"

namespace ponsim {

namespace {

constexpr std::uint8_t kKindIdle = 0x00;
constexpr std::uint8_t kKindAtm = 0x01;
constexpr std::uint8_t kKindPloam = 0x02;

constexpr std::uint8_t kUpKindIdle = 0x00;
constexpr std::uint8_t kUpKindData = 0x01;
constexpr std::uint8_t kUpKindPloamResponse = 0x02;

std::string at_offset(const char* what, std::size_t off) {
  return std::string(what) + " at byte " + std::to_string(off);
}

} // namespace

std::uint8_t encode_grant(const Grant& g) {
  if (g.type == GrantType::Unassigned) return 0x00;
  return static_cast<std::uint8_t>((static_cast<std::uint8_t>(g.type) << 6) |
                                   (g.grant_id & 0x3F));
}

Grant decode_grant(std::uint8_t wire) {
  const std::uint8_t type_bits = wire >> 6;
  if (type_bits > 2) throw CodecError("grant type bits 11 are not assigned");
  Grant g;
  g.type = static_cast<GrantType>(type_bits);
  g.grant_id = (g.type == GrantType::Unassigned)
                   ? 0
                   : static_cast<std::uint8_t>(wire & 0x3F);
  return g;
}

void encode_ploam_message(const PloamMessage& m, std::span<std::uint8_t> out) {
  if (out.size() < kPloamMessageBytes)
    throw CodecError("PLOAM message buffer too small");
  std::fill_n(out.begin(), kPloamMessageBytes, std::uint8_t{0});
  out[0] = static_cast<std::uint8_t>(m.kind);
  out[1] = m.target_ont;
  out[2] = static_cast<std::uint8_t>(m.arg >> 24);
  out[3] = static_cast<std::uint8_t>(m.arg >> 16);
  out[4] = static_cast<std::uint8_t>(m.arg >> 8);
  out[5] = static_cast<std::uint8_t>(m.arg);
}

PloamMessage decode_ploam_message(std::span<const std::uint8_t> in) {
  if (in.size() < kPloamMessageBytes)
    throw CodecError("PLOAM message shorter than 12 bytes");
  if (in[0] > static_cast<std::uint8_t>(MessageKind::SetEqualizationDelay))
    throw CodecError("unknown PLOAM message kind");
  for (int i = 6; i < kPloamMessageBytes; ++i)
    if (in[i] != 0) throw CodecError("nonzero padding in PLOAM message");
  PloamMessage m;
  m.kind = static_cast<MessageKind>(in[0]);
  m.target_ont = in[1];
  m.arg = (std::uint32_t{in[2]} << 24) | (std::uint32_t{in[3]} << 16) |
          (std::uint32_t{in[4]} << 8) | std::uint32_t{in[5]};
  return m;
}

PloamCell make_ploam_cell(bool second, PloamMessage message) {
  PloamCell c;
  c.second = second;
  c.grants.assign(second ? kSecondPloamGrants : kFirstPloamGrants, Grant{});
  c.message = message;
  return c;
}

DownstreamFrame make_downstream_frame(PloamCell first, PloamCell second) {
  DownstreamFrame f;
  f.cells[kFirstPloamIndex] = std::move(first);
  f.cells[kSecondPloamIndex] = std::move(second);
  return f;
}

namespace {

void encode_cell(const DownstreamCell& cell, std::span<std::uint8_t> out,
                 int index) {
  std::fill(out.begin(), out.end(), std::uint8_t{0});
  const bool ploam_position =
      index == kFirstPloamIndex || index == kSecondPloamIndex;
  if (const auto* p = std::get_if<PloamCell>(&cell)) {
    if (!ploam_position)
      throw CodecError("PLOAM cell outside positions 0 and 28");
    const bool want_second = index == kSecondPloamIndex;
    if (p->second != want_second)
      throw CodecError("PLOAM position flag does not match cell index");
    const std::size_t want =
        p->second ? kSecondPloamGrants : kFirstPloamGrants;
    if (p->grants.size() != want)
      throw CodecError("PLOAM grant count must be 27 (first) or 26 (second)");
    out[0] = kKindPloam;
    out[1] = p->second ? 1 : 0;
    for (std::size_t i = 0; i < want; ++i)
      out[2 + i] = encode_grant(p->grants[i]);
    encode_ploam_message(p->message, out.subspan(2 + want));
    return;
  }
  if (ploam_position) throw CodecError("non-PLOAM cell at a PLOAM position");
  if (const auto* a = std::get_if<AtmCell>(&cell)) {
    out[0] = kKindAtm;
    std::copy(a->payload.begin(), a->payload.end(), out.begin() + 1);
    return;
  }
  out[0] = kKindIdle;
}

DownstreamCell decode_cell(std::span<const std::uint8_t> in, int index,
                           std::size_t offset) {
  const bool ploam_position =
      index == kFirstPloamIndex || index == kSecondPloamIndex;
  switch (in[0]) {
    case kKindIdle:
      if (ploam_position)
        throw CodecError(at_offset("idle cell at a PLOAM position", offset));
      return IdleCell{};
    case kKindAtm: {
      if (ploam_position)
        throw CodecError(at_offset("ATM cell at a PLOAM position", offset));
      AtmCell a;
      std::copy(in.begin() + 1, in.begin() + 53, a.payload.begin());
      return a;
    }
    case kKindPloam: {
      if (!ploam_position)
        throw CodecError(
            at_offset("PLOAM cell outside positions 0 and 28", offset));
      PloamCell p;
      p.second = in[1] != 0;
      if (p.second != (index == kSecondPloamIndex))
        throw CodecError(
            at_offset("PLOAM position flag mismatch", offset));
      const std::size_t n = p.second ? kSecondPloamGrants : kFirstPloamGrants;
      p.grants.reserve(n);
      for (std::size_t i = 0; i < n; ++i)
        p.grants.push_back(decode_grant(in[2 + i]));
      p.message = decode_ploam_message(in.subspan(2 + n, kPloamMessageBytes));
      return p;
    }
    default:
      throw CodecError(at_offset("unknown downstream cell kind", offset));
  }
}

} // namespace

std::vector<std::uint8_t> encode_downstream_frame(const DownstreamFrame& f) {
  std::vector<std::uint8_t> out(kDownstreamFrameBytes);
  for (int i = 0; i < kCellsPerDownstreamFrame; ++i)
    encode_cell(f.cells[i],
                std::span<std::uint8_t>(out).subspan(
                    static_cast<std::size_t>(i) * kCellBytes, kCellBytes),
                i);
  return out;
}

DownstreamFrame decode_downstream_frame(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kDownstreamFrameBytes)
    throw CodecError("downstream frame must be exactly 2968 bytes, got " +
                     std::to_string(bytes.size()));
  DownstreamFrame f;
  for (int i = 0; i < kCellsPerDownstreamFrame; ++i) {
    const std::size_t off = static_cast<std::size_t>(i) * kCellBytes;
    f.cells[i] = decode_cell(bytes.subspan(off, kCellBytes), i, off);
  }
  return f;
}

const PloamCell& first_ploam(const DownstreamFrame& f) {
  return std::get<PloamCell>(f.cells[kFirstPloamIndex]);
}

const PloamCell& second_ploam(const DownstreamFrame& f) {
  return std::get<PloamCell>(f.cells[kSecondPloamIndex]);
}

const Grant& grant_for_slot(const DownstreamFrame& f, int slot_index) {
  if (slot_index < 0 || slot_index >= kSlotsPerFrame)
    throw std::out_of_range("slot index must be in 0..52");
  if (slot_index < kFirstPloamGrants)
    return first_ploam(f).grants[static_cast<std::size_t>(slot_index)];
  return second_ploam(f)
      .grants[static_cast<std::size_t>(slot_index - kFirstPloamGrants)];
}

std::array<std::uint8_t, kSlotBytes> encode_upstream_slot(
    const UpstreamSlotPayload& p) {
  std::array<std::uint8_t, kSlotBytes> out{};
  std::copy(p.overhead.begin(), p.overhead.end(), out.begin());
  auto cell = std::span<std::uint8_t>(out).subspan(3);
  if (const auto* d = std::get_if<DataCell>(&p.cell)) {
    cell[0] = kUpKindData;
    std::copy(d->payload.begin(), d->payload.end(), cell.begin() + 1);
  } else if (const auto* r = std::get_if<PloamResponse>(&p.cell)) {
    cell[0] = kUpKindPloamResponse;
    cell[1] = r->ont_id;
    cell[2] = r->response_kind;
  } else {
    cell[0] = kUpKindIdle;
  }
  return out;
}

UpstreamSlotPayload decode_upstream_slot(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kSlotBytes)
    throw CodecError("upstream slot must be exactly 56 bytes, got " +
                     std::to_string(bytes.size()));
  UpstreamSlotPayload p;
  std::copy(bytes.begin(), bytes.begin() + 3, p.overhead.begin());
  auto cell = bytes.subspan(3);
  switch (cell[0]) {
    case kUpKindIdle:
      p.cell = UpstreamIdle{};
      break;
    case kUpKindData: {
      DataCell d;
      std::copy(cell.begin() + 1, cell.end(), d.payload.begin());
      p.cell = d;
      break;
    }
    case kUpKindPloamResponse: {
      PloamResponse r;
      r.ont_id = cell[1];
      r.response_kind = cell[2];
      p.cell = r;
      break;
    }
    default:
      throw CodecError("unknown upstream cell kind");
  }
  return p;
}

} // namespace ponsim
