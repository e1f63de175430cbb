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
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lightlam/algebra.h"
#include "lightlam/syntax.h"
#include "lightlam/types.h"

namespace lightlam {

using TypeMap = std::map<std::string, Type>;

/** Linear, modal and parking zones. */
struct Context {
  TypeMap gamma;
  TypeMap delta;
  TypeMap theta;
};

enum class Zone { kNone, kGamma, kDelta, kTheta };

Zone ZoneOf(const Context &c, const std::string &x);
const Type *Lookup(const Context &c, const std::string &x);
bool ContextEq(const Context &a, const Context &b);
bool TypeMapEq(const TypeMap &a, const TypeMap &b);

struct Judgement {
  Context ctx;
  Term term;
  Type type;
};

enum class Rule { kAL, kAP, kAI, kIL, kII, kE, kBang, kConst };

std::string_view RuleName(Rule r);

struct DerivationNode;
using Derivation = std::shared_ptr<const DerivationNode>;

struct DerivationNode {
  Rule rule;
  Judgement j;
  std::vector<Derivation> children;
};

Derivation MakeDerivation(Rule rule, Context ctx, Term term, Type type,
                          std::vector<Derivation> children = {});

class DerivationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CheckResult {
  bool ok = false;
  // Root has an empty parking zone.
  bool typing_judgement = false;
  std::string error;
};

/** Validates every node against its rule. */
CheckResult CheckEtas(const Derivation &d);

struct LevelProfile {
  int level = 0;
  // sizes[i] = S(d, i), i = 0..level.
  std::vector<std::uint64_t> sizes;

  std::uint64_t At(int i) const {
    return i >= 0 && i < static_cast<int>(sizes.size()) ? sizes[i] : 0;
  }
  std::uint64_t Total() const;
};

/**
 * Level and per-level sizes. The derived AI axiom on x : !^k A counts as
 * an AL axiom under k promotions.
 */
LevelProfile Measures(const Derivation &d);

std::size_t CountNodes(const Derivation &d);

// Every name appearing in any judgement of d.
void CollectNames(const Derivation &d, std::set<std::string> &out);

/** Adds `extra` to the conclusion, renaming binders that would clash. */
Derivation Weaken(const Derivation &d, const Context &extra);
// Weakens d up to `target`, which must contain d's contexts zone by zone.
Derivation WeakenTo(const Derivation &d, const Context &target);
/** Moves x from the linear zone to the parking zone. */
Derivation Shift(const Derivation &d, const std::string &x);
Derivation ShiftAll(const Derivation &d);
/** Contracts x and y, both parked or both modal with one type, into z. */
Derivation Contract(const Derivation &d, const std::string &x,
                    const std::string &y, const std::string &z);
// Renames the free variable `from` to `to`, which must not be in the
// contexts of d.
Derivation RenameFree(const Derivation &d, const std::string &from,
                      const std::string &to);
/** The premise of a final promotion; AI is expanded first. */
Derivation PeelBang(const Derivation &d);

/**
 * Builds a derivation of M{N/x} from main (for M) and arg (for N). The
 * zone of x in main selects the linear, parking or modal case.
 */
Derivation SubstituteDerivation(const Derivation &main, const std::string &x,
                                const Derivation &arg);

struct ReduceResult {
  int level = 0;
  bool delta = false;
  Derivation derivation;
};

/**
 * Reduces the call-by-value redex at `redex` (a beta redex with a value
 * argument, or a fully applied iterator or conditional) inside d.
 */
ReduceResult ReduceDerivation(const Derivation &d, const Path &redex);

// The level of the derivation node typing the subterm at p.
int LevelAt(const Derivation &d, const Path &p);

std::string Print(const Context &c);
std::string Print(const Judgement &j);
/** `(rule (G | D | T |- term : type) child*)`, one node per line. */
std::string Serialize(const Derivation &d);
Derivation ParseDerivation(std::string_view text,
                           const Signature *sig = nullptr);

}  // namespace lightlam
