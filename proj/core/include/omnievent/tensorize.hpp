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

#ifndef OMNIEVENT_TENSORIZE_HPP
#define OMNIEVENT_TENSORIZE_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "omnievent/event_model.hpp"
#include "omnievent/nn/layers.hpp"

namespace omnievent::ft {

using nn::Matrix;
using nn::Reduce;
using nn::Var;

inline constexpr int kStatChannels = 4;

/// H x W x C tensor, row-major over (h, w, c).
struct GridTensor {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<float> data;
  std::vector<std::string> channel_names;

  float at(int h, int w, int c) const {
    return data[(static_cast<std::size_t>(h) * width + w) * channels + c];
  }
};

/// Pixel row index h * W + w of every batch point. Throws RangeError for
/// points outside the geometry.
std::vector<std::uint32_t> pixel_ids(const EventBatch& batch, const CameraGeometry& geometry);

/// Places each point's feature row at its pixel, reducing collisions; returns
/// (H*W x C) with zero rows at pixels without points. Throws ShapeError when
/// the feature row count differs from the point count.
Var scatter(const EventBatch& batch, const Var& features, const CameraGeometry& geometry, Reduce reduce = Reduce::kMax);

/// (H*W x 4): positive count, negative count, latest positive and latest
/// negative timestamp normalized by the stream's [t_min, t_max] (0 when the span
/// is empty or the pixel saw no event of that polarity).
Matrix statistical_channels(std::span<const Event> events, const CameraGeometry& geometry);

/// A learned per-point linear map (initialized to the identity) followed by scatter.
class Tensorizer {
 public:
  Tensorizer() = default;
  Tensorizer(int channels, Rng& rng);

  Var forward(const EventBatch& batch, const Var& features, const CameraGeometry& geometry,
              Reduce reduce = Reduce::kMax) const;
  void collect(const std::string& prefix, nn::ParameterList& out) const;

  nn::Linear pre;
};

/// Concatenates learned (H*W x C) and statistical (H*W x 4) channels.
GridTensor assemble(const Matrix& learned, const Matrix& stats, const CameraGeometry& geometry);

/// Tensor container (little-endian): "OMNX", u8 dtype (1 = f32), u8 rank,
/// u32 dims[rank], row-major payload. Grid tensors are written as rank 3 (H, W, C).
inline constexpr char kTensorMagic[4] = {'O', 'M', 'N', 'X'};

struct RawTensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> data;
};

void write_omnx(std::ostream& out, const GridTensor& tensor);
RawTensor read_omnx(std::istream& in);
void save_omnx(const std::filesystem::path& path, const GridTensor& tensor);
RawTensor load_omnx(const std::filesystem::path& path);

/// One channel as an H-row CSV of W values.
void write_channel_csv(std::ostream& out, const GridTensor& tensor, int channel);

}  // namespace omnievent::ft

#endif  // OMNIEVENT_TENSORIZE_HPP
