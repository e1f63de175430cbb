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

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lightlam/syntax.h"
#include "lightlam/types.h"

namespace lightlam {

struct Constructor {
  std::string name;
  int arity = 0;
};

struct AlgebraSignature {
  std::string name;
  std::vector<Constructor> constructors;
};

/** The loaded algebras together with the constants they register. */
struct Signature {
  std::vector<AlgebraSignature> algebras;
  ConstantEnv constants;
  std::set<std::string, std::less<>> type_names;

  const AlgebraSignature *Find(std::string_view algebra) const;
  ConstRef Constant(std::string_view name) const;
};

/**
 * Parses one or more `algebra U { s/1, z/0 }` declarations and registers
 * iter_U, cond_U and one constant per constructor (s_U, z_U).
 */
Signature LoadSignature(std::string_view text);

/** The type of `c` with its free result type instantiated at `a`. */
Type ConstantType(const ConstInfo &c, const Type &a);

/**
 * If `t` is an instance of the type schema of `c`, the result type it was
 * instantiated at (constructors, which have closed types, yield their own
 * algebra type).
 */
std::optional<Type> MatchConstantType(const ConstInfo &c, const Type &t);

bool IsAlgebraValue(const Term &t);
std::optional<std::string> AlgebraOf(const Term &t);

/** t{M1,...,Mk}: replaces constructor i by ms[i] throughout t. */
Term FoldTerm(const Term &t, const std::vector<Term> &ms);

/** One iter or cond rule at the root of m, if it applies. */
std::optional<Term> DeltaStep(const Term &m);

// Unary numerals over an algebra whose first constructor is unary and
// second nullary.
Term Numeral(const Signature &sig, std::string_view algebra, int n);
std::optional<int> AsNumeral(const Term &t);
// Prints, replacing closed unary numerals by their value.
std::string PrintWithNumerals(const Term &t);

Term ExpTerm(const Signature &sig, std::string_view algebra);
Term CoercTerm(const Signature &sig, std::string_view algebra, int n);
Term TowerTerm(const Signature &sig, std::string_view algebra, int n);

}  // namespace lightlam
