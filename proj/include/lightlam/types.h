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
#include <set>
#include <string>
#include <string_view>

namespace lightlam {

enum class TypeKind { kAtom, kArrow, kBang, kBase };

struct TypeNode;
using Type = std::shared_ptr<const TypeNode>;

/** An EAL formula. kBase is a free-algebra type such as U. */
struct TypeNode {
  TypeKind kind;
  std::string name;
  Type left;
  Type right;
};

Type Atom(std::string name);
Type Arrow(Type a, Type b);
Type Bang(Type a);
Type Bangs(int n, Type a);
Type BaseType(std::string name);

bool IsModal(const Type &t);
int LeadingBangs(const Type &t);
Type StripBangs(const Type &t);

bool TypeEq(const Type &a, const Type &b);

/**
 * Parses `A -o B`, `!A`, parenthesised types. Identifiers listed in
 * `algebras` become base types; all others are atoms.
 */
Type ParseType(std::string_view text,
               const std::set<std::string, std::less<>> *algebras = nullptr);

std::string Print(const Type &t);

}  // namespace lightlam
