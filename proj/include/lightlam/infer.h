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

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lightlam/etas.h"
#include "lightlam/schemes.h"
#include "lightlam/solve.h"
#include "lightlam/syntax.h"
#include "lightlam/unify.h"

namespace lightlam {

enum class PTKind { kVar, kAbs, kApp, kConst };

struct PTNode;
using PTTree = std::shared_ptr<const PTNode>;

/**
 * One node of the derivation template. Schemes are unresolved; read them
 * through the store of the owning PrincipalTyping.
 */
struct PTNode {
  PTKind kind;
  Term term;
  // Type before the outer promotion wrap.
  Scheme inner;
  // The wrap literal; empty for variables.
  Exponential wrap;
  // Binder scheme of an abstraction.
  Scheme binder;
  std::vector<PTTree> children;
};

struct PrincipalTyping {
  // Resolved scheme context and result. One modality set covers all of them.
  std::map<std::string, Scheme> context;
  Scheme type;
  ModalitySet constraints;

  Term term;
  PTTree tree;
  std::shared_ptr<const BindingStore> store;
  // Every literal and scheme variable allocated, in allocation order.
  std::vector<std::string> literals;
  std::vector<std::string> variables;

  TypeScheme Result() const { return {type, constraints}; }
  TypeScheme Entry(const std::string &x) const {
    return {context.at(x), constraints};
  }
};

struct InferResult {
  std::optional<PrincipalTyping> typing;
  UnifyFailure reason = UnifyFailure::kNone;
  std::string error;

  bool ok() const { return typing.has_value(); }
};

/** PT(m). Fresh names are a0, a1, ... and 'v0, 'v1, ... in traversal order. */
InferResult PrincipalType(const Term &m);

/** PRINCIPAL, then CTX lines, RES and CONSTRAINTS. */
std::string FormatPrincipal(const PrincipalTyping &p);

/** PT succeeds and its modality set has a natural solution. */
bool Typable(const Term &m);

class InstantiateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Instance {
  Context ctx;
  Term term;
  Type type;
  Derivation derivation;
};

/**
 * Ground typing from S. Default placement: modal entries in the modal zone,
 * linear entries of variables occurring more than once parked, the rest
 * linear. Throws InstantiateError when S violates a constraint.
 */
Instance Instantiate(const PrincipalTyping &p, const SchemeSubstitution &s);
/**
 * Explicit placement: `target` fixes zone and type of every free variable
 * (extra entries are allowed). Throws InstantiateError when S disagrees
 * with a type or the zones break a rule.
 */
Instance Instantiate(const PrincipalTyping &p, const SchemeSubstitution &s,
                     const Context &target);

/**
 * Completes a partial substitution: unassigned literals are solved for
 * (smallest total), unassigned variables become atoms of the same name.
 */
std::optional<SchemeSubstitution> CompleteSubstitution(
    const PrincipalTyping &p, const SchemeSubstitution &partial = {});

/** The smallest solution instantiated with default placement. */
std::optional<Instance> DefaultInstance(const PrincipalTyping &p);

/**
 * Searches for S making the given context (explicit placement) and result
 * type come out exactly. Either may be null. `why` receives the last
 * reason for failure.
 */
std::optional<Instance> FindInstance(const PrincipalTyping &p,
                                     const Context *target, const Type *type,
                                     std::string *why = nullptr);

}  // namespace lightlam
