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

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lightlam/eaterm.h"
#include "lightlam/etas.h"
#include "lightlam/syntax.h"
#include "lightlam/types.h"

namespace lightlam {

enum class NealRule { kAx, kContr, kIntro, kElim, kProm };

std::string_view NealRuleName(NealRule r);

struct NealJudgement {
  TypeMap ctx;
  EATerm term;
  Type type;
};

struct NealNode;
using NealDerivation = std::shared_ptr<const NealNode>;

/**
 * Premise order follows the rules: C has the contracted argument first and
 * the body second; ! has one premise per binding, then the body.
 */
struct NealNode {
  NealRule rule;
  NealJudgement j;
  std::vector<NealDerivation> children;
};

NealDerivation MakeNeal(NealRule rule, TypeMap ctx, EATerm term, Type type,
                        std::vector<NealDerivation> children = {});

struct NealCheckResult {
  bool ok = false;
  std::string error;
};

NealCheckResult CheckNeal(const NealDerivation &d);

/** `(rule (ctx |- term : type) child*)` with rules A, C, I, E and !. */
std::string Serialize(const NealDerivation &d);
NealDerivation ParseNealDerivation(std::string_view text);

/** Performs the explicit substitutions and forgets the boxes. */
Term TranslateStar(const EATerm &m);
/** Turns non-variable contraction and promotion arguments into redexes. */
Term TranslateSharp(const EATerm &m);

/**
 * A call-by-name reduction sequence from TranslateSharp(m) to a term
 * alpha-equal to TranslateStar(m), contracting exactly the redexes the
 * sharp translation introduced.
 */
std::vector<Term> SharpToStar(const EATerm &m);

struct EAStep {
  std::string rule;  // beta, dup, !-!, @-c, !-c, c-c or lambda-c
  Path path;
  EATerm result;
};

/** Every one-step reduct of m, in traversal order. */
std::vector<EAStep> EASteps(const EATerm &m);

/** A promotion with variable arguments, possibly under contractions of
 * variables. */
bool IsExpansion(const EATerm &m);

/** Splits the context into its linear and modal parts; Θ stays empty. */
Derivation NealToEtas(const NealDerivation &d);

struct EtasToNealResult {
  EATerm term;
  NealDerivation derivation;
};

/** Requires an empty parking zone at the root. */
EtasToNealResult EtasToNeal(const Derivation &d);

struct SimulateResult {
  // kNotFound: the reachable space was exhausted without a match.
  enum class Status { kFound, kNoRedex, kNotFound, kBudgetExhausted };
  Status status = Status::kNoRedex;
  // The start term followed by each reduct; rules[i] leads to sequence[i+1].
  std::vector<EATerm> sequence;
  std::vector<std::string> rules;
  Term target;
  std::size_t explored = 0;
};

/**
 * Breadth-first search over EASteps for L with m ->+ L and L# the
 * leftmost-outermost call-by-value reduct of m#.
 */
SimulateResult SimulateCbv(const EATerm &m, std::size_t budget = 64,
                           std::size_t max_states = 20000);

}  // namespace lightlam
