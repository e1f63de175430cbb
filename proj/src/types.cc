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

#include "lightlam/types.h"

#include <fmt/core.h>

#include "lexer.h"

namespace lightlam {

using detail::Tok;
using detail::TokenStream;

Type Atom(std::string name) {
  return std::make_shared<TypeNode>(
      TypeNode{TypeKind::kAtom, std::move(name), nullptr, nullptr});
}

Type Arrow(Type a, Type b) {
  return std::make_shared<TypeNode>(
      TypeNode{TypeKind::kArrow, "", std::move(a), std::move(b)});
}

Type Bang(Type a) {
  return std::make_shared<TypeNode>(
      TypeNode{TypeKind::kBang, "", std::move(a), nullptr});
}

Type Bangs(int n, Type a) {
  for (int i = 0; i < n; ++i) a = Bang(a);
  return a;
}

Type BaseType(std::string name) {
  return std::make_shared<TypeNode>(
      TypeNode{TypeKind::kBase, std::move(name), nullptr, nullptr});
}

bool IsModal(const Type &t) { return t->kind == TypeKind::kBang; }

int LeadingBangs(const Type &t) {
  int n = 0;
  for (const TypeNode *p = t.get(); p->kind == TypeKind::kBang;
       p = p->left.get()) {
    ++n;
  }
  return n;
}

Type StripBangs(const Type &t) {
  Type p = t;
  while (p->kind == TypeKind::kBang) p = p->left;
  return p;
}

bool TypeEq(const Type &a, const Type &b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TypeKind::kAtom:
    case TypeKind::kBase:
      return a->name == b->name;
    case TypeKind::kBang:
      return TypeEq(a->left, b->left);
    case TypeKind::kArrow:
      return TypeEq(a->left, b->left) && TypeEq(a->right, b->right);
  }
  return false;
}

namespace {

class TypeParser {
 public:
  TypeParser(TokenStream &ts,
             const std::set<std::string, std::less<>> *algebras)
      : ts_(ts), algebras_(algebras) {}

  Type ParseArrow() {
    Type left = ParsePrefix();
    if (ts_.Accept(Tok::kArrow)) return Arrow(left, ParseArrow());
    return left;
  }

  Type ParsePrefix() {
    if (ts_.Accept(Tok::kBang)) return Bang(ParsePrefix());
    if (ts_.Accept(Tok::kLParen)) {
      Type t = ParseArrow();
      ts_.Expect(Tok::kRParen);
      return t;
    }
    detail::Token tok = ts_.Expect(Tok::kIdent);
    if (algebras_ != nullptr && algebras_->count(tok.text)) {
      return BaseType(tok.text);
    }
    return Atom(tok.text);
  }

 private:
  TokenStream &ts_;
  const std::set<std::string, std::less<>> *algebras_;
};

void PrintTo(const Type &t, std::string &out) {
  switch (t->kind) {
    case TypeKind::kAtom:
    case TypeKind::kBase:
      out += t->name;
      return;
    case TypeKind::kBang: {
      out += '!';
      bool paren = t->left->kind == TypeKind::kArrow;
      if (paren) out += '(';
      PrintTo(t->left, out);
      if (paren) out += ')';
      return;
    }
    case TypeKind::kArrow: {
      bool paren = t->left->kind == TypeKind::kArrow;
      if (paren) out += '(';
      PrintTo(t->left, out);
      if (paren) out += ')';
      out += " -o ";
      PrintTo(t->right, out);
      return;
    }
  }
}

}  // namespace

namespace detail {

Type ParseTypeFrom(TokenStream &ts,
                   const std::set<std::string, std::less<>> *algebras) {
  return TypeParser(ts, algebras).ParseArrow();
}

}  // namespace detail

Type ParseType(std::string_view text,
               const std::set<std::string, std::less<>> *algebras) {
  TokenStream ts(detail::Lex(text));
  Type t = detail::ParseTypeFrom(ts, algebras);
  if (!ts.At(Tok::kEnd)) {
    ts.Fail(fmt::format("unexpected '{}'", ts.Peek().text));
  }
  return t;
}

std::string Print(const Type &t) {
  std::string out;
  PrintTo(t, out);
  return out;
}

}  // namespace lightlam
