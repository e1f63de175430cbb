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

#include "lightlam/algebra.h"

#include <fmt/core.h>

#include <memory>

#include "lexer.h"

namespace lightlam {

using detail::Tok;
using detail::TokenStream;

const AlgebraSignature *Signature::Find(std::string_view algebra) const {
  for (const AlgebraSignature &a : algebras) {
    if (a.name == algebra) return &a;
  }
  return nullptr;
}

ConstRef Signature::Constant(std::string_view name) const {
  auto it = constants.find(name);
  return it == constants.end() ? nullptr : it->second;
}

namespace {

void Register(Signature &sig, ConstInfo info, const detail::Token &at) {
  std::string name = info.name;
  if (sig.constants.count(name)) {
    TokenStream::FailAt(at, fmt::format("duplicate constant '{}'", name));
  }
  sig.constants.emplace(name, std::make_shared<const ConstInfo>(std::move(info)));
}

}  // namespace

Signature LoadSignature(std::string_view text) {
  Signature sig;
  TokenStream ts(detail::Lex(text));
  while (!ts.At(Tok::kEnd)) {
    detail::Token kw = ts.Expect(Tok::kIdent);
    if (kw.text != "algebra") {
      TokenStream::FailAt(kw, fmt::format("expected 'algebra', found '{}'",
                                          kw.text));
    }
    detail::Token name = ts.Expect(Tok::kIdent);
    if (name.text.find('_') != std::string::npos) {
      TokenStream::FailAt(name, "algebra names may not contain '_'");
    }
    if (sig.type_names.count(name.text)) {
      TokenStream::FailAt(name,
                          fmt::format("duplicate algebra '{}'", name.text));
    }
    ts.Expect(Tok::kLBrace);
    AlgebraSignature alg{name.text, {}};
    std::vector<detail::Token> at;
    if (ts.At(Tok::kRBrace)) {
      ts.Fail(fmt::format("algebra '{}' has no constructors", name.text));
    }
    do {
      detail::Token c = ts.Expect(Tok::kIdent);
      if (!detail::IsVarName(c.text)) {
        TokenStream::FailAt(c,
                            fmt::format("invalid constructor '{}'", c.text));
      }
      for (const Constructor &prev : alg.constructors) {
        if (prev.name == c.text) {
          TokenStream::FailAt(
              c, fmt::format("duplicate constructor '{}'", c.text));
        }
      }
      ts.Expect(Tok::kSlash);
      if (!ts.At(Tok::kNumber)) ts.Fail("expected a constructor arity");
      detail::Token n = ts.Next();
      if (n.text.size() > 3) TokenStream::FailAt(n, "arity too large");
      alg.constructors.push_back({c.text, std::stoi(n.text)});
      at.push_back(c);
    } while (ts.Accept(Tok::kComma));
    ts.Expect(Tok::kRBrace);

    std::vector<int> arities;
    for (const Constructor &c : alg.constructors) arities.push_back(c.arity);
    int k = static_cast<int>(arities.size());
    Register(sig,
             {"iter_" + alg.name, ConstKind::kIter, alg.name, k, 1 + k, k,
              arities},
             name);
    Register(sig,
             {"cond_" + alg.name, ConstKind::kCond, alg.name, k, 1 + k, k,
              arities},
             name);
    for (int i = 0; i < k; ++i) {
      const Constructor &c = alg.constructors[i];
      Register(sig,
               {c.name + "_" + alg.name, ConstKind::kCtor, alg.name, i,
                c.arity, c.arity, arities},
               at[i]);
    }
    sig.type_names.insert(alg.name);
    sig.algebras.push_back(std::move(alg));
  }
  return sig;
}

namespace {

Type ArrowChain(int n, const Type &from, const Type &to) {
  Type t = to;
  for (int i = 0; i < n; ++i) t = Arrow(from, t);
  return t;
}

}  // namespace

Type ConstantType(const ConstInfo &c, const Type &a) {
  Type alg = BaseType(c.algebra);
  switch (c.kind) {
    case ConstKind::kCtor:
      return ArrowChain(c.arity, alg, alg);
    case ConstKind::kIter: {
      Type t = Bang(a);
      for (auto it = c.arities.rbegin(); it != c.arities.rend(); ++it) {
        t = Arrow(Bang(ArrowChain(*it, a, a)), t);
      }
      return Arrow(alg, t);
    }
    case ConstKind::kCond: {
      Type t = a;
      for (auto it = c.arities.rbegin(); it != c.arities.rend(); ++it) {
        t = Arrow(ArrowChain(*it, alg, a), t);
      }
      return Arrow(alg, t);
    }
  }
  return a;
}

std::optional<Type> MatchConstantType(const ConstInfo &c, const Type &t) {
  Type res = t;
  int args = c.arity;
  for (int i = 0; i < args; ++i) {
    if (res->kind != TypeKind::kArrow) return std::nullopt;
    res = res->right;
  }
  Type a = res;
  if (c.kind == ConstKind::kIter) {
    if (res->kind != TypeKind::kBang) return std::nullopt;
    a = res->left;
  }
  if (c.kind == ConstKind::kCtor) a = BaseType(c.algebra);
  if (!TypeEq(ConstantType(c, a), t)) return std::nullopt;
  return a;
}

std::optional<std::string> AlgebraOf(const Term &t) {
  std::vector<Term> args;
  Term h = Head(t, &args);
  if (h->kind != TermKind::kConst || h->constant->kind != ConstKind::kCtor) {
    return std::nullopt;
  }
  if (static_cast<int>(args.size()) != h->constant->arity) return std::nullopt;
  for (const Term &a : args) {
    auto sub = AlgebraOf(a);
    if (!sub || *sub != h->constant->algebra) return std::nullopt;
  }
  return h->constant->algebra;
}

bool IsAlgebraValue(const Term &t) { return AlgebraOf(t).has_value(); }

Term FoldTerm(const Term &t, const std::vector<Term> &ms) {
  std::vector<Term> args;
  Term h = Head(t, &args);
  if (h->kind != TermKind::kConst || h->constant->kind != ConstKind::kCtor ||
      static_cast<int>(args.size()) != h->constant->arity) {
    throw std::invalid_argument("fold over a non-algebra term " + Print(t));
  }
  if (ms.size() != h->constant->arities.size()) {
    throw std::invalid_argument(
        fmt::format("fold expects {} terms, got {}",
                    h->constant->arities.size(), ms.size()));
  }
  std::vector<Term> folded;
  for (const Term &a : args) folded.push_back(FoldTerm(a, ms));
  return Apply(ms[h->constant->index], folded);
}

std::optional<Term> DeltaStep(const Term &m) {
  std::vector<Term> args;
  Term h = Head(m, &args);
  if (h->kind != TermKind::kConst) return std::nullopt;
  const ConstInfo &c = *h->constant;
  if (c.kind == ConstKind::kCtor) return std::nullopt;
  if (static_cast<int>(args.size()) != c.arity) return std::nullopt;
  auto alg = AlgebraOf(args[0]);
  if (!alg || *alg != c.algebra) return std::nullopt;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (!IsValue(args[i])) return std::nullopt;
  }
  std::vector<Term> branches(args.begin() + 1, args.end());
  if (c.kind == ConstKind::kIter) return FoldTerm(args[0], branches);
  std::vector<Term> sub;
  Term ctor = Head(args[0], &sub);
  return Apply(branches[ctor->constant->index], sub);
}

namespace {

const AlgebraSignature &UnaryAlgebra(const Signature &sig,
                                     std::string_view algebra) {
  const AlgebraSignature *a = sig.Find(algebra);
  if (a == nullptr) {
    throw std::invalid_argument(fmt::format("unknown algebra '{}'", algebra));
  }
  if (a->constructors.size() != 2 || a->constructors[0].arity != 1 ||
      a->constructors[1].arity != 0) {
    throw std::invalid_argument(
        fmt::format("algebra '{}' is not a unary numeral algebra", algebra));
  }
  return *a;
}

Term Ctor(const Signature &sig, const AlgebraSignature &a, int i) {
  return Const(sig.Constant(a.constructors[i].name + "_" + a.name));
}

}  // namespace

Term Numeral(const Signature &sig, std::string_view algebra, int n) {
  const AlgebraSignature &a = UnaryAlgebra(sig, algebra);
  Term t = Ctor(sig, a, 1);
  for (int i = 0; i < n; ++i) t = App(Ctor(sig, a, 0), t);
  return t;
}

std::optional<int> AsNumeral(const Term &t) {
  int n = 0;
  Term cur = t;
  while (true) {
    std::vector<Term> args;
    Term h = Head(cur, &args);
    if (h->kind != TermKind::kConst) return std::nullopt;
    const ConstInfo &c = *h->constant;
    if (c.kind != ConstKind::kCtor || c.arities != std::vector<int>{1, 0}) {
      return std::nullopt;
    }
    if (c.index == 1 && args.empty()) return n;
    if (c.index != 0 || args.size() != 1) return std::nullopt;
    ++n;
    cur = args[0];
  }
}

namespace {

void PrintNumTo(const Term &t, std::string &out, bool atom) {
  if (auto n = AsNumeral(t)) {
    out += std::to_string(*n);
    return;
  }
  switch (t->kind) {
    case TermKind::kVar:
    case TermKind::kConst:
      out += t->name;
      return;
    case TermKind::kAbs:
      if (atom) out += '(';
      out += '\\';
      out += t->name;
      out += '.';
      PrintNumTo(t->left, out, false);
      if (atom) out += ')';
      return;
    case TermKind::kApp: {
      if (atom) out += '(';
      bool pf = t->left->kind == TermKind::kAbs;
      if (pf) out += '(';
      PrintNumTo(t->left, out, false);
      if (pf) out += ')';
      out += ' ';
      PrintNumTo(t->right, out, true);
      if (atom) out += ')';
      return;
    }
  }
}

}  // namespace

std::string PrintWithNumerals(const Term &t) {
  std::string out;
  PrintNumTo(t, out, false);
  return out;
}

Term ExpTerm(const Signature &sig, std::string_view algebra) {
  const AlgebraSignature &a = UnaryAlgebra(sig, algebra);
  Term iter = Const(sig.Constant("iter_" + a.name));
  Term two = Abs("y", Abs("z", App(Var("y"), App(Var("y"), Var("z")))));
  Term succ = Abs("y", App(Ctor(sig, a, 0), Var("y")));
  return Abs("x", Apply(iter, {Var("x"), two, succ}));
}

Term CoercTerm(const Signature &sig, std::string_view algebra, int n) {
  const AlgebraSignature &a = UnaryAlgebra(sig, algebra);
  if (n == 0) return Abs("x", Var("x"));
  Term iter = Const(sig.Constant("iter_" + a.name));
  return Abs("x", Apply(iter, {Var("x"), Ctor(sig, a, 0), Ctor(sig, a, 1)}));
}

Term TowerTerm(const Signature &sig, std::string_view algebra, int n) {
  const AlgebraSignature &a = UnaryAlgebra(sig, algebra);
  if (n == 0) return Abs("x", Var("x"));
  Term prev = TowerTerm(sig, algebra, n - 1);
  Term apply_zero = Abs("z", App(Var("z"), Ctor(sig, a, 1)));
  return Abs("x", App(Abs("y", App(prev, Var("y"))),
                      App(apply_zero, App(ExpTerm(sig, algebra), Var("x")))));
}

}  // namespace lightlam
