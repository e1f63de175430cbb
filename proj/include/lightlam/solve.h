// Copyright 2026 The lightlam Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "lightlam/schemes.h"

namespace lightlam {

enum class SolveMode { kAny, kPreferSmall };
enum class SolveStatus { kSat, kUnsat, kUnknown };

struct SolveResult {
  SolveStatus status = SolveStatus::kUnsat;
  // Every literal of the input (and of `extra`), when kSat.
  std::map<std::string, std::uint64_t> assignment;

  bool sat() const { return status == SolveStatus::kSat; }
};

/**
 * Natural-number solutions of a modality set. Equalities p=0 zero their
 * literals, unit equalities are eliminated, and the rest goes to an exact
 * rational simplex. kAny scales a fractional optimum by its common
 * denominator when the system allows it; kPreferSmall runs branch and
 * bound for the least total. kUnknown only if the node budget runs out.
 */
SolveResult SolveConstraints(const ModalitySet &c,
                             SolveMode mode = SolveMode::kPreferSmall,
                             const std::set<std::string> *extra = nullptr,
                             std::size_t node_limit = 20000);

}  // namespace lightlam
