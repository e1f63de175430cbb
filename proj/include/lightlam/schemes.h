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

#include "lightlam/types.h"

namespace lightlam {

/** Canonical multiset form of an exponential: literal counts plus a constant. */
struct ExpTerms {
  std::map<std::string, int> literals;
  std::uint64_t constant = 0;

  bool Empty() const { return literals.empty() && constant == 0; }
  bool operator==(const ExpTerms &o) const {
    return constant == o.constant && literals == o.literals;
  }
  bool operator<(const ExpTerms &o) const {
    if (literals != o.literals) return literals < o.literals;
    return constant < o.constant;
  }
};

/**
 * A sum of literals, optionally with a natural constant. Sums share
 * structure, so adding is O(1); Terms() flattens.
 */
class Exponential {
 public:
  Exponential() = default;
  static Exponential Literal(std::string name);
  static Exponential Constant(std::uint64_t n);
  static Exponential FromTerms(const ExpTerms &t);

  Exponential operator+(const Exponential &o) const;

  bool Empty() const { return node_ == nullptr; }
  ExpTerms Terms() const;
  bool operator==(const Exponential &o) const { return Terms() == o.Terms(); }

  struct Node;

 private:
  std::shared_ptr<const Node> node_;
};

enum class SchemeKind { kVar, kArrow, kBanged, kBase };

struct SchemeNode;
using Scheme = std::shared_ptr<const SchemeNode>;

struct SchemeNode {
  SchemeKind kind;
  // Variable or base-type name.
  std::string name;
  // Arrow sides; the body of a banged scheme is in `left`.
  Scheme left;
  Scheme right;
  Exponential exp;
};

Scheme SVar(std::string name);
Scheme SArrow(Scheme a, Scheme b);
Scheme SBase(std::string name);
/** !^p s. A banged body is merged into one exponential p+q. */
Scheme SBanged(Exponential p, Scheme s);

bool IsLinear(const Scheme &s);
bool SchemeEq(const Scheme &a, const Scheme &b);
bool Occurs(const std::string &var, const Scheme &s);
void CollectVars(const Scheme &s, std::set<std::string> &out);
void CollectLiterals(const Scheme &s, std::set<std::string> &out);
std::size_t SchemeSize(const Scheme &s);

struct Constraint {
  enum class Kind { kEq, kPos, kZero };
  Kind kind;
  ExpTerms lhs;
  // Only for kEq.
  ExpTerms rhs;

  bool operator<(const Constraint &o) const;
  bool operator==(const Constraint &o) const;
};

// Equations are oriented canonically; trivial ones yield nullopt.
std::optional<Constraint> MakeEq(const Exponential &p, const Exponential &q);
Constraint MakePos(const Exponential &p);
Constraint MakeZero(const Exponential &p);

using ModalitySet = std::set<Constraint>;

void CollectLiterals(const ModalitySet &c, std::set<std::string> &out);

struct TypeScheme {
  Scheme scheme;
  ModalitySet constraints;
};

class SchemeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/** Ground instantiation: scheme variables to types, literals to naturals. */
struct SchemeSubstitution {
  std::map<std::string, Type> types;
  std::map<std::string, std::uint64_t> literals;
};

// S(p); throws SchemeError on an unmapped literal.
std::uint64_t Evaluate(const SchemeSubstitution &s, const Exponential &p);
std::uint64_t Evaluate(const SchemeSubstitution &s, const ExpTerms &p);
bool Satisfies(const SchemeSubstitution &s, const Constraint &c);
bool Satisfies(const SchemeSubstitution &s, const ModalitySet &c);

// S(sigma) ignoring constraints; throws SchemeError on unmapped names.
Type Ground(const SchemeSubstitution &s, const Scheme &sigma);
/** S(z), or nullopt when S violates the constraints of z. */
std::optional<Type> ApplySchemeSubst(const SchemeSubstitution &s,
                                     const TypeScheme &z);

/** Deterministic fresh literals (a0, a1, ...) and variables (v0, ...). */
class FreshNames {
 public:
  FreshNames() = default;
  FreshNames(std::string literal_prefix, std::string var_prefix)
      : lit_prefix_(std::move(literal_prefix)),
        var_prefix_(std::move(var_prefix)) {}

  void Reserve(const std::string &name) { used_.insert(name); }
  std::string Literal();
  std::string Variable();

 private:
  std::string Next(const std::string &prefix, std::size_t &counter);

  std::string lit_prefix_ = "a";
  std::string var_prefix_ = "v";
  std::size_t lit_counter_ = 0;
  std::size_t var_counter_ = 0;
  std::set<std::string> used_;
};

/** The symbolic substitution <s, C>. */
struct Substitution {
  std::map<std::string, Scheme> map;
  ModalitySet constraints;
};

/**
 * <s,C>(z). Flattening !^p over an image !^q nu yields !^{p+q} nu; with
 * `fresh`, it yields !^r nu and adds r=p+q for a fresh literal r.
 */
TypeScheme ApplySubst(const Substitution &t, const TypeScheme &z,
                      FreshNames *fresh = nullptr);
// The scheme part only, collecting emitted constraints into `out`.
Scheme ApplySubst(const Substitution &t, const Scheme &s,
                  ModalitySet *out = nullptr, FreshNames *fresh = nullptr);

/** Applying the result equals applying t1, then t2. */
Substitution Compose(const Substitution &t1, const Substitution &t2,
                     FreshNames *fresh = nullptr);

/** The simple type obtained by erasing all exponentials. */
Type Skeleton(const Scheme &s);
Type Skeleton(const TypeScheme &z);
bool EqE(const TypeScheme &a, const TypeScheme &b);

std::string Print(const Exponential &p);
std::string Print(const ExpTerms &p);
/** `!^{a+b} ('v0 -o 'v1)`; scheme variables carry a leading quote. */
std::string Print(const Scheme &s);
std::string Print(const Constraint &c);
/** `{a=0, f>0, r=p+q}`. */
std::string Print(const ModalitySet &c);
std::string Print(const TypeScheme &z);

/**
 * Parses schemes. Variables are `'name` or bare identifiers (bare names
 * listed in `algebras` become base types); `!^p` takes a literal, a
 * number, or a braced sum; a plain `!` means `!^1`.
 */
Scheme ParseScheme(std::string_view text,
                   const std::set<std::string, std::less<>> *algebras = nullptr);
Exponential ParseExponential(std::string_view text);
/** `{a=0, f>0, r=p+q}`, braces optional. */
ModalitySet ParseModalitySet(std::string_view text);

}  // namespace lightlam
