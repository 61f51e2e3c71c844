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

#ifndef OMNIEVENT_TOOLS_SELFCHECK_HPP
#define OMNIEVENT_TOOLS_SELFCHECK_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace omnievent::tools {

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Exhaustive codec round trips on full grids.
std::vector<CheckOutcome> codec_checks();

/// Finite-difference gradient checks on toy-sized blocks.
std::vector<CheckOutcome> gradient_checks(std::uint64_t seed);

}  // namespace omnievent::tools

#endif  // OMNIEVENT_TOOLS_SELFCHECK_HPP
