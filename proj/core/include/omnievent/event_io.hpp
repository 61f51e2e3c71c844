// Copyright 2026 The OmniEvent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OMNIEVENT_EVENT_IO_HPP
#define OMNIEVENT_EVENT_IO_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "omnievent/event_model.hpp"

namespace omnievent {

/// On-disk record of the EVT1 format: little-endian f64 t, u16 h, u16 w, i8 p,
/// tightly packed (13 bytes). Foreign callers hand buffers of this layout.
#pragma pack(push, 1)
struct PackedEventRecord {
  double t;
  std::uint16_t h;
  std::uint16_t w;
  std::int8_t p;
};
#pragma pack(pop)
static_assert(sizeof(PackedEventRecord) == 13);

inline constexpr char kEventMagic[4] = {'E', 'V', 'T', '1'};

/// Events from packed records. Throws RangeError for a polarity other than +1/-1.
std::vector<Event> events_from_records(std::span<const PackedEventRecord> records);
std::vector<PackedEventRecord> records_from_events(std::span<const Event> events);

// CSV with header `t,h,w,p`.
std::vector<Event> read_events_csv(std::istream& in);
void write_events_csv(std::ostream& out, std::span<const Event> events);

// EVT1 binary: magic, u32 count, records.
std::vector<Event> read_events_binary(std::istream& in);
void write_events_binary(std::ostream& out, std::span<const Event> events);

/// Dispatches on the file's leading magic bytes (EVT1) and otherwise parses CSV.
std::vector<Event> load_events(const std::filesystem::path& path);
/// Writes EVT1 when the extension is .evt/.bin, CSV otherwise.
void save_events(const std::filesystem::path& path, std::span<const Event> events);

/// Fused CSV with header `h,w,segment,t_avg,p_acc,c`.
void write_fused_csv(std::ostream& out, std::span<const FusedEvent> fused);
std::vector<FusedEvent> read_fused_csv(std::istream& in);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace omnievent

#endif  // OMNIEVENT_EVENT_IO_HPP
