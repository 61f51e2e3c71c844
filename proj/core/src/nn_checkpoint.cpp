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

#include "omnievent/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <unordered_map>

#include "binary_io.hpp"
#include "omnievent/error.hpp"

namespace omnievent::nn {

using detail::get_le;
using detail::put_le;

void write_checkpoint(std::ostream& out, const ParameterList& params, DType dtype) {
  out.write(kCheckpointMagic, 4);
  put_le(out, std::uint32_t{1});
  put_le(out, static_cast<std::uint32_t>(params.size()));
  for (const auto& p : params) {
    const Matrix& m = p.var.value();
    put_le(out, static_cast<std::uint32_t>(p.name.size()));
    out.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
    put_le(out, static_cast<std::uint8_t>(dtype));
    put_le(out, std::uint8_t{2});
    put_le(out, static_cast<std::uint32_t>(m.rows()));
    put_le(out, static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      if (dtype == DType::kF32) {
        put_le(out, static_cast<float>(m.data()[i]));
      } else {
        put_le(out, m.data()[i]);
      }
    }
  }
  if (!out) throw IoError("failed writing checkpoint");
}

std::vector<NamedTensor> read_checkpoint(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kCheckpointMagic, 4) != 0) throw IoError("missing OMNT magic");
  const auto version = get_le<std::uint32_t>(in, "checkpoint");
  if (version != 1) throw IoError("unsupported checkpoint version " + std::to_string(version));
  const auto count = get_le<std::uint32_t>(in, "checkpoint");
  std::vector<NamedTensor> tensors;
  for (std::uint32_t t = 0; t < count; ++t) {
    const auto len = get_le<std::uint32_t>(in, "checkpoint");
    if (len > (1U << 16)) throw IoError("checkpoint tensor name too long");
    std::string name(len, '\0');
    if (!in.read(name.data(), len)) throw IoError("unexpected end of checkpoint");
    const auto dtype = get_le<std::uint8_t>(in, "checkpoint");
    const auto rank = get_le<std::uint8_t>(in, "checkpoint");
    if (dtype != 1 && dtype != 2) throw IoError("unknown checkpoint dtype code " + std::to_string(dtype));
    if (rank < 1 || rank > 2) throw IoError("checkpoint tensors must have rank 1 or 2");
    std::uint32_t rows = 1;
    std::uint32_t cols = get_le<std::uint32_t>(in, "checkpoint");
    if (rank == 2) {
      rows = cols;
      cols = get_le<std::uint32_t>(in, "checkpoint");
    }
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      m.data()[i] = dtype == 1 ? static_cast<double>(get_le<float>(in, "checkpoint")) : get_le<double>(in, "checkpoint");
    }
    tensors.push_back({std::move(name), std::move(m)});
  }
  return tensors;
}

void save_checkpoint(const std::filesystem::path& path, const ParameterList& params, DType dtype) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_checkpoint(out, params, dtype);
}

void load_checkpoint(const std::filesystem::path& path, const ParameterList& params) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  assign_tensors(read_checkpoint(in), params);
}

void assign_tensors(const std::vector<NamedTensor>& tensors, const ParameterList& params) {
  std::unordered_map<std::string, const NamedTensor*> by_name;
  for (const auto& t : tensors) by_name[t.name] = &t;
  for (const auto& p : params) {
    const auto it = by_name.find(p.name);
    if (it == by_name.end()) throw IoError("checkpoint lacks parameter " + p.name);
    const Matrix& src = it->second->value;
    Matrix& dst = p.var.mutable_value();
    if (src.rows() != dst.rows() || src.cols() != dst.cols()) {
      throw IoError("checkpoint shape mismatch for " + p.name);
    }
    dst = src;
  }
}

}  // namespace omnievent::nn
