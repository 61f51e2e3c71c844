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

#include "omnievent/event_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "binary_io.hpp"
#include "omnievent/error.hpp"

namespace omnievent {

namespace {

using detail::get_le;
using detail::put_le;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line_no) {
  T value{};
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw IoError("line " + std::to_string(line_no) + ": cannot parse '" + std::string(field) + "'");
  }
  return value;
}

void check_header(std::string_view line, std::string_view expected) {
  std::string compact;
  for (char c : line) {
    if (c != ' ' && c != '\t' && c != '\r') compact.push_back(c);
  }
  if (compact != expected) {
    throw IoError("line 1: expected CSV header '" + std::string(expected) + "'");
  }
}

void check_polarity(int p) {
  if (p != 1 && p != -1) throw RangeError("event polarity must be +1 or -1, got " + std::to_string(p));
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::vector<Event> events_from_records(std::span<const PackedEventRecord> records) {
  std::vector<Event> events;
  events.reserve(records.size());
  for (const auto& r : records) {
    check_polarity(r.p);
    events.push_back({r.t, r.h, r.w, r.p});
  }
  return events;
}

std::vector<PackedEventRecord> records_from_events(std::span<const Event> events) {
  std::vector<PackedEventRecord> out;
  out.reserve(events.size());
  for (const auto& e : events) {
    if (e.h < 0 || e.h > 0xFFFF || e.w < 0 || e.w > 0xFFFF) {
      throw RangeError("pixel index does not fit the 16-bit record field");
    }
    check_polarity(e.p);
    out.push_back({e.t, static_cast<std::uint16_t>(e.h), static_cast<std::uint16_t>(e.w),
                   static_cast<std::int8_t>(e.p)});
  }
  return out;
}

std::vector<Event> read_events_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty event CSV");
  check_header(line, "t,h,w,p");
  std::vector<Event> events;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 4) throw IoError("line " + std::to_string(line_no) + ": expected 4 fields");
    Event e{parse_number<double>(f[0], line_no), parse_number<int>(f[1], line_no), parse_number<int>(f[2], line_no),
            parse_number<int>(f[3], line_no)};
    check_polarity(e.p);
    events.push_back(e);
  }
  return events;
}

void write_events_csv(std::ostream& out, std::span<const Event> events) {
  out << "t,h,w,p\n";
  for (const auto& e : events) {
    out << format_double(e.t) << ',' << e.h << ',' << e.w << ',' << e.p << '\n';
  }
}

std::vector<Event> read_events_binary(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || std::memcmp(magic.data(), kEventMagic, 4) != 0) {
    throw IoError("missing EVT1 magic");
  }
  const auto count = get_le<std::uint32_t>(in, "binary event stream");
  std::vector<Event> events;
  events.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto t = get_le<double>(in, "binary event stream");
    const auto h = get_le<std::uint16_t>(in, "binary event stream");
    const auto w = get_le<std::uint16_t>(in, "binary event stream");
    const auto p = get_le<std::int8_t>(in, "binary event stream");
    check_polarity(p);
    events.push_back({t, h, w, p});
  }
  return events;
}

void write_events_binary(std::ostream& out, std::span<const Event> events) {
  const auto records = records_from_events(events);
  out.write(kEventMagic, 4);
  put_le(out, static_cast<std::uint32_t>(records.size()));
  for (const auto& r : records) {
    put_le(out, r.t);
    put_le(out, r.h);
    put_le(out, r.w);
    put_le(out, r.p);
  }
}

std::vector<Event> load_events(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::array<char, 4> head{};
  in.read(head.data(), head.size());
  const bool binary = in.gcount() == 4 && std::memcmp(head.data(), kEventMagic, 4) == 0;
  in.clear();
  in.seekg(0);
  return binary ? read_events_binary(in) : read_events_csv(in);
}

void save_events(const std::filesystem::path& path, std::span<const Event> events) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const auto ext = path.extension().string();
  if (ext == ".evt" || ext == ".bin") {
    write_events_binary(out, events);
  } else {
    write_events_csv(out, events);
  }
  if (!out) throw IoError("failed writing " + path.string());
}

void write_fused_csv(std::ostream& out, std::span<const FusedEvent> fused) {
  out << "h,w,segment,t_avg,p_acc,c\n";
  for (const auto& f : fused) {
    out << f.h << ',' << f.w << ',' << f.segment << ',' << format_double(f.t_avg) << ',' << f.p_acc << ','
        << f.count << '\n';
  }
}

std::vector<FusedEvent> read_fused_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty fused CSV");
  check_header(line, "h,w,segment,t_avg,p_acc,c");
  std::vector<FusedEvent> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 6) throw IoError("line " + std::to_string(line_no) + ": expected 6 fields");
    out.push_back({parse_number<int>(f[0], line_no), parse_number<int>(f[1], line_no),
                   parse_number<int>(f[2], line_no), parse_number<double>(f[3], line_no),
                   parse_number<int>(f[4], line_no), parse_number<int>(f[5], line_no)});
  }
  return out;
}

}  // namespace omnievent
