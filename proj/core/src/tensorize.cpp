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

#include "omnievent/tensorize.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>

#include "binary_io.hpp"
#include "omnievent/error.hpp"
#include "omnievent/event_io.hpp"

namespace omnievent::ft {

using detail::get_le;
using detail::put_le;

std::vector<std::uint32_t> pixel_ids(const EventBatch& batch, const CameraGeometry& geometry) {
  std::vector<std::uint32_t> ids;
  ids.reserve(batch.size());
  for (const auto& e : batch.events) {
    if (!geometry.contains(e.h, e.w)) {
      throw RangeError("point at pixel (" + std::to_string(e.h) + ", " + std::to_string(e.w) +
                       ") lies outside the sensor");
    }
    ids.push_back(static_cast<std::uint32_t>(e.h * geometry.width + e.w));
  }
  return ids;
}

Var scatter(const EventBatch& batch, const Var& features, const CameraGeometry& geometry, Reduce reduce) {
  if (static_cast<std::size_t>(features.rows()) != batch.size()) {
    throw ShapeError("scatter: " + std::to_string(features.rows()) + " feature rows for " +
                     std::to_string(batch.size()) + " points");
  }
  const auto ids = pixel_ids(batch, geometry);
  const auto pixels = static_cast<std::size_t>(geometry.height) * static_cast<std::size_t>(geometry.width);
  return nn::segment_reduce(features, ids, pixels, reduce);
}

Matrix statistical_channels(std::span<const Event> events, const CameraGeometry& geometry) {
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(geometry.height) * geometry.width, kStatChannels);
  const TimeSpan span = time_span(events);
  const double width = span.t_max - span.t_min;
  for (const auto& e : events) {
    if (!geometry.contains(e.h, e.w)) throw RangeError("event outside the sensor geometry");
    const Eigen::Index row = static_cast<Eigen::Index>(e.h) * geometry.width + e.w;
    const double t = width > 0.0 ? (e.t - span.t_min) / width : 0.0;
    const Eigen::Index pol = e.p > 0 ? 0 : 1;
    out(row, pol) += 1.0;
    out(row, 2 + pol) = std::max(out(row, 2 + pol), t);
  }
  return out;
}

Tensorizer::Tensorizer(int channels, Rng& rng) : pre(channels, channels, rng) { pre.set_identity(); }

Var Tensorizer::forward(const EventBatch& batch, const Var& features, const CameraGeometry& geometry,
                        Reduce reduce) const {
  return scatter(batch, pre.forward(features), geometry, reduce);
}

void Tensorizer::collect(const std::string& prefix, nn::ParameterList& out) const { pre.collect(prefix + ".pre", out); }

GridTensor assemble(const Matrix& learned, const Matrix& stats, const CameraGeometry& geometry) {
  const Eigen::Index pixels = static_cast<Eigen::Index>(geometry.height) * geometry.width;
  if (learned.rows() != pixels || stats.rows() != pixels) throw ShapeError("assemble: one row per pixel required");
  GridTensor t;
  t.height = geometry.height;
  t.width = geometry.width;
  t.channels = static_cast<int>(learned.cols() + stats.cols());
  t.data.resize(static_cast<std::size_t>(pixels) * t.channels);
  std::size_t at = 0;
  for (Eigen::Index r = 0; r < pixels; ++r) {
    for (Eigen::Index c = 0; c < learned.cols(); ++c) t.data[at++] = static_cast<float>(learned(r, c));
    for (Eigen::Index c = 0; c < stats.cols(); ++c) t.data[at++] = static_cast<float>(stats(r, c));
  }
  for (Eigen::Index c = 0; c < learned.cols(); ++c) t.channel_names.push_back("sta" + std::to_string(c));
  for (const char* name : {"count_pos", "count_neg", "latest_pos", "latest_neg"}) t.channel_names.emplace_back(name);
  return t;
}

void write_omnx(std::ostream& out, const GridTensor& tensor) {
  out.write(kTensorMagic, 4);
  put_le(out, std::uint8_t{1});
  put_le(out, std::uint8_t{3});
  put_le(out, static_cast<std::uint32_t>(tensor.height));
  put_le(out, static_cast<std::uint32_t>(tensor.width));
  put_le(out, static_cast<std::uint32_t>(tensor.channels));
  for (float v : tensor.data) put_le(out, v);
  if (!out) throw IoError("failed writing OMNX tensor");
}

RawTensor read_omnx(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kTensorMagic, 4) != 0) throw IoError("missing OMNX magic");
  const auto dtype = get_le<std::uint8_t>(in, "OMNX tensor");
  if (dtype != 1) throw IoError("unsupported OMNX dtype code " + std::to_string(dtype));
  const auto rank = get_le<std::uint8_t>(in, "OMNX tensor");
  RawTensor t;
  std::size_t count = 1;
  for (int i = 0; i < rank; ++i) {
    t.dims.push_back(get_le<std::uint32_t>(in, "OMNX tensor"));
    count *= t.dims.back();
  }
  t.data.resize(count);
  for (auto& v : t.data) v = get_le<float>(in, "OMNX tensor");
  return t;
}

void save_omnx(const std::filesystem::path& path, const GridTensor& tensor) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_omnx(out, tensor);
}

RawTensor load_omnx(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_omnx(in);
}

void write_channel_csv(std::ostream& out, const GridTensor& tensor, int channel) {
  if (channel < 0 || channel >= tensor.channels) throw RangeError("channel index out of range");
  for (int h = 0; h < tensor.height; ++h) {
    for (int w = 0; w < tensor.width; ++w) {
      if (w) out << ',';
      out << format_double(static_cast<double>(tensor.at(h, w, channel)));
    }
    out << '\n';
  }
}

}  // namespace omnievent::ft
