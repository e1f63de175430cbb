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

#include <string>
#include <string_view>
#include <unordered_map>

#include "lightlam/schemes.h"

namespace lightlam {

enum class UnifyFailure { kNone, kOccurs, kClash };

std::string_view UnifyFailureName(UnifyFailure f);

/**
 * Triangular bindings of scheme variables. Lookups resolve chains and merge
 * stacked exponentials, so a bound variable under !^p reads as one banged
 * scheme.
 */
class BindingStore {
 public:
  // Resolves the head only: bound variables and a bound body under !^p.
  Scheme Shallow(const Scheme &s) const;
  Scheme Resolve(const Scheme &s) const;
  bool OccursIn(const std::string &var, const Scheme &s) const;
  bool Bound(const std::string &var) const { return map_.count(var) > 0; }
  std::size_t size() const { return map_.size(); }

  /**
   * Rules U1 to U7. Emitted constraints go to `out`; bindings stay in the
   * store even on failure.
   */
  UnifyFailure Unify(const Scheme &a, const Scheme &b, ModalitySet &out,
                     std::string *detail = nullptr);

  // Every bound variable mapped to its fully resolved image.
  Substitution ToSubstitution() const;

 private:
  std::unordered_map<std::string, Scheme> map_;
};

struct UnifyResult {
  bool ok = false;
  UnifyFailure reason = UnifyFailure::kNone;
  std::string detail;
  Substitution subst;
};

/** U(z1, z2). The constraint sets of z1 and z2 are not part of the result. */
UnifyResult Unify(const TypeScheme &z1, const TypeScheme &z2);

}  // namespace lightlam
