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

#include <gtest/gtest.h>

#include <cstddef>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "omnievent/error.hpp"
#include "omnievent/event_io.hpp"
#include "test_util.hpp"

namespace {

using namespace omnievent;

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("omnievent_io_" + name);
}

TEST(EventRecord, PackedLayoutMatchesFileRecord) {
  EXPECT_EQ(sizeof(PackedEventRecord), 13u);
  EXPECT_EQ(offsetof(PackedEventRecord, t), 0u);
  EXPECT_EQ(offsetof(PackedEventRecord, h), 8u);
  EXPECT_EQ(offsetof(PackedEventRecord, w), 10u);
  EXPECT_EQ(offsetof(PackedEventRecord, p), 12u);
}

TEST(EventRecord, RoundTripAndValidation) {
  const std::vector<Event> events{{0.5, 3, 65535, 1}, {1.25, 0, 7, -1}};
  const auto records = records_from_events(events);
  EXPECT_EQ(events_from_records(records), events);
  std::vector<PackedEventRecord> bad = records;
  bad[1].p = 0;
  EXPECT_THROW(events_from_records(bad), RangeError);
  const std::vector<Event> too_wide{{0.0, 70000, 0, 1}};
  EXPECT_THROW(records_from_events(too_wide), RangeError);
}

TEST(EventCsv, RoundTripIsExact) {
  const auto events = testutil::random_events(200, 180, 240, 0.0, 3.0, 5);
  std::stringstream ss;
  write_events_csv(ss, events);
  EXPECT_EQ(ss.str().substr(0, 8), "t,h,w,p\n");
  EXPECT_EQ(read_events_csv(ss), events);
}

TEST(EventCsv, MalformedInput) {
  std::stringstream no_header("1,2,3,1\n");
  EXPECT_THROW(read_events_csv(no_header), IoError);
  std::stringstream short_row("t,h,w,p\n0.1,2,3\n");
  EXPECT_THROW(read_events_csv(short_row), IoError);
  std::stringstream junk("t,h,w,p\n0.1,x,3,1\n");
  EXPECT_THROW(read_events_csv(junk), IoError);
  std::stringstream polarity("t,h,w,p\n0.1,2,3,0\n");
  EXPECT_THROW(read_events_csv(polarity), RangeError);
  std::stringstream empty("");
  EXPECT_THROW(read_events_csv(empty), IoError);
}

TEST(EventBinary, LayoutIsLittleEndianEvt1) {
  const std::vector<Event> events{{1.0, 2, 3, -1}};
  std::stringstream ss;
  write_events_binary(ss, events);
  const std::string bytes = ss.str();
  ASSERT_EQ(bytes.size(), 4u + 4u + 13u);
  EXPECT_EQ(bytes.substr(0, 4), "EVT1");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 1u);
  EXPECT_EQ(bytes[5], 0);
  double t = 0.0;
  std::memcpy(&t, bytes.data() + 8, 8);
  EXPECT_EQ(t, 1.0);
  EXPECT_EQ(static_cast<unsigned char>(bytes[16]), 2u);
  EXPECT_EQ(static_cast<unsigned char>(bytes[18]), 3u);
  EXPECT_EQ(static_cast<signed char>(bytes[20]), -1);
}

TEST(EventBinary, RoundTripAndTruncation) {
  const auto events = testutil::random_events(100, 180, 240, 0.0, 1.0, 6);
  std::stringstream ss;
  write_events_binary(ss, events);
  EXPECT_EQ(read_events_binary(ss), events);
  std::string bytes;
  {
    std::stringstream again;
    write_events_binary(again, events);
    bytes = again.str();
  }
  std::stringstream truncated(bytes.substr(0, bytes.size() - 5));
  EXPECT_THROW(read_events_binary(truncated), IoError);
  std::stringstream wrong("EVT2\0\0\0\0");
  EXPECT_THROW(read_events_binary(wrong), IoError);
}

TEST(EventFiles, SaveLoadSniffsFormat) {
  const auto events = testutil::random_events(30, 180, 240, 0.0, 1.0, 8);
  const auto bin = temp_path("a.evt");
  const auto csv = temp_path("a.csv");
  save_events(bin, events);
  save_events(csv, events);
  EXPECT_EQ(load_events(bin), events);
  EXPECT_EQ(load_events(csv), events);
  std::ifstream raw(bin, std::ios::binary);
  char magic[4];
  raw.read(magic, 4);
  EXPECT_EQ(std::string(magic, 4), "EVT1");
  EXPECT_THROW(load_events(temp_path("missing.csv")), IoError);
  std::filesystem::remove(bin);
  std::filesystem::remove(csv);
}

TEST(FusedCsv, RoundTrip) {
  const std::vector<FusedEvent> fused{{1, 2, 0, 0.5, 1, 1}, {1, 2, 7, 0.123456789012345, -3, 5}};
  std::stringstream ss;
  write_fused_csv(ss, fused);
  EXPECT_EQ(ss.str().substr(0, 23), "h,w,segment,t_avg,p_acc");
  EXPECT_EQ(read_fused_csv(ss), fused);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(1.0), "1");
  const double v = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_double(v)), v);
}

}  // namespace
