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

namespace lightlam {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string &msg, int line, int column);

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

enum class ConstKind { kIter, kCond, kCtor };

/** A free-algebra constant: an iterator, a conditional, or a constructor. */
struct ConstInfo {
  std::string name;
  ConstKind kind;
  std::string algebra;
  // Constructor position for kCtor; number of constructors otherwise.
  int index = 0;
  int arity = 0;
  // Applied to at most this many values, the constant is still a value.
  int max_value_args = 0;
  // Arities of all constructors of the algebra, in declaration order.
  std::vector<int> arities;
};

using ConstRef = std::shared_ptr<const ConstInfo>;
using ConstantEnv = std::map<std::string, ConstRef, std::less<>>;

enum class TermKind { kVar, kAbs, kApp, kConst };

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  TermKind kind;
  // Variable name, or binder name for abstractions.
  std::string name;
  // Abstraction body or application function.
  Term left;
  // Application argument.
  Term right;
  ConstRef constant;
};

Term Var(std::string name);
Term Abs(std::string binder, Term body);
Term App(Term fn, Term arg);
Term Const(ConstRef c);
// Left-nested application of fn to args.
Term Apply(Term fn, const std::vector<Term> &args);

/** Child selectors from the root: 0 is body or function, 1 is argument. */
using Path = std::vector<int>;

std::string PathString(const Path &p);

/**
 * Parses the term grammar. Application is left-associative and an
 * abstraction body extends as far right as possible. Names containing an
 * underscore are constants and must appear in `env`.
 */
Term ParseTerm(std::string_view text, const ConstantEnv *env = nullptr);

std::string Print(const Term &t);

std::size_t Length(const Term &t);

std::set<std::string> FreeVars(const Term &t);
bool IsFree(const Term &t, std::string_view x);
std::size_t CountFree(const Term &t, std::string_view x);
// Every name appearing in t, bound or free.
void CollectNames(const Term &t, std::set<std::string> &out);

// First name of the form base, base', base'', ... accepted by `ok`.
template <typename Pred>
std::string PrimeFresh(std::string base, Pred ok) {
  while (!ok(base)) base += '\'';
  return base;
}

/** Capture-avoiding M{N/x}. */
Term Substitute(const Term &m, const std::string &x, const Term &n);
/** Simultaneous capture-avoiding substitution. */
Term SubstituteAll(const Term &m, const std::map<std::string, Term> &s);

bool AlphaEq(const Term &a, const Term &b);
// Syntactic identity, names included.
bool Identical(const Term &a, const Term &b);
/** A string equal for two terms iff they are alpha-equivalent. */
std::string CanonicalKey(const Term &t);

// Spine decomposition: head and arguments in order.
Term Head(const Term &t, std::vector<Term> *args = nullptr);

bool IsValue(const Term &t);
bool IsClosed(const Term &t);

Term SubtermAt(const Term &t, const Path &p);
Term ReplaceAt(const Term &t, const Path &p, Term replacement);

/** Generates names not yet used, deterministically. */
class NameSupply {
 public:
  NameSupply() = default;
  explicit NameSupply(std::set<std::string> used) : used_(std::move(used)) {}

  void Reserve(const std::string &name) { used_.insert(name); }
  void ReserveAll(const Term &t) { CollectNames(t, used_); }
  bool Used(const std::string &name) const { return used_.count(name) > 0; }
  std::string Fresh(std::string_view hint = "v");

 private:
  std::set<std::string> used_;
  std::size_t counter_ = 0;
};

}  // namespace lightlam
