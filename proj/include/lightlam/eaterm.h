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

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lightlam/syntax.h"

namespace lightlam {

enum class EAKind { kVar, kAbs, kApp, kProm, kContr };

struct EANode;
using EATerm = std::shared_ptr<const EANode>;

struct EABinding {
  EATerm arg;
  std::string var;
};

/**
 * An EA-term. For kContr, `left` is the body, `right` the contracted
 * argument, and `name`, `name2` the two binders.
 */
struct EANode {
  EAKind kind;
  std::string name;
  std::string name2;
  EATerm left;
  EATerm right;
  std::vector<EABinding> bindings;
};

class LinearityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

EATerm EVar(std::string name);
EATerm EAbs(std::string binder, EATerm body);
EATerm EApp(EATerm fn, EATerm arg);
EATerm EProm(EATerm body, std::vector<EABinding> bindings);
EATerm EContr(EATerm body, EATerm arg, std::string x, std::string y);

// Embeds a pure term (no constants) as an EA-term.
EATerm FromTerm(const Term &t);

/**
 * Parses `!(M)[M1/x1,...]` promotions and postfix `M[N/x,y]` contractions
 * on top of the term grammar. Throws LinearityError for repeated variables.
 */
EATerm ParseEATerm(std::string_view text);

std::string Print(const EATerm &t);

std::size_t Length(const EATerm &t);

std::set<std::string> FreeVars(const EATerm &t);
void CollectNames(const EATerm &t, std::set<std::string> &out);

/**
 * Each free variable occurs at most once, and each binder's variable occurs
 * at most once in its scope. On failure `why` names the offending variable.
 */
bool IsLinear(const EATerm &t, std::string *why = nullptr);

/** Simultaneous capture-avoiding substitution. */
EATerm SubstituteAll(const EATerm &m, const std::map<std::string, EATerm> &s);
EATerm Substitute(const EATerm &m, const std::string &x, const EATerm &n);
// Renames free variables; a convenience over SubstituteAll.
EATerm Rename(const EATerm &m, const std::map<std::string, std::string> &r);

/** Alpha-equivalence with promotion bindings compared as multisets. */
bool AlphaEq(const EATerm &a, const EATerm &b);
std::string CanonicalKey(const EATerm &t);

// Selectors: 0 body or function, 1 application or contraction argument,
// i+1 the argument of promotion binding i.
EATerm SubtermAt(const EATerm &t, const Path &p);
EATerm ReplaceAt(const EATerm &t, const Path &p, EATerm replacement);

}  // namespace lightlam
