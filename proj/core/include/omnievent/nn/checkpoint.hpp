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

#ifndef OMNIEVENT_NN_CHECKPOINT_HPP
#define OMNIEVENT_NN_CHECKPOINT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "omnievent/nn/layers.hpp"

namespace omnievent::nn {

/// Parameter container layout (little-endian):
///   "OMNT", u32 version (1), u32 tensor count, then per tensor
///   u32 name length, name bytes, u8 dtype (1 = f32, 2 = f64), u8 rank,
///   u32 dims[rank], row-major payload.
inline constexpr char kCheckpointMagic[4] = {'O', 'M', 'N', 'T'};

enum class DType : std::uint8_t { kF32 = 1, kF64 = 2 };

struct NamedTensor {
  std::string name;
  Matrix value;
};

void write_checkpoint(std::ostream& out, const ParameterList& params, DType dtype = DType::kF64);
std::vector<NamedTensor> read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const ParameterList& params, DType dtype = DType::kF64);
/// Copies stored values into `params`. Throws IoError on missing names or
/// shape mismatches.
void load_checkpoint(const std::filesystem::path& path, const ParameterList& params);
void assign_tensors(const std::vector<NamedTensor>& tensors, const ParameterList& params);

}  // namespace omnievent::nn

#endif  // OMNIEVENT_NN_CHECKPOINT_HPP
