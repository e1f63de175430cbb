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

#include "lightlam/schemes.h"

#include <fmt/core.h>

#include <vector>

#include "lexer.h"

namespace lightlam {

using detail::Tok;
using detail::TokenStream;

struct Exponential::Node {
  enum class Kind { kLit, kConst, kSum } kind;
  std::string name;
  std::uint64_t value = 0;
  std::shared_ptr<const Node> left;
  std::shared_ptr<const Node> right;
};

Exponential Exponential::Literal(std::string name) {
  Exponential e;
  e.node_ = std::make_shared<const Node>(
      Node{Node::Kind::kLit, std::move(name), 0, nullptr, nullptr});
  return e;
}

Exponential Exponential::Constant(std::uint64_t n) {
  Exponential e;
  if (n == 0) return e;
  e.node_ = std::make_shared<const Node>(
      Node{Node::Kind::kConst, "", n, nullptr, nullptr});
  return e;
}

Exponential Exponential::FromTerms(const ExpTerms &t) {
  Exponential e = Constant(t.constant);
  for (const auto &[name, count] : t.literals) {
    for (int i = 0; i < count; ++i) e = e + Literal(name);
  }
  return e;
}

Exponential Exponential::operator+(const Exponential &o) const {
  if (!node_) return o;
  if (!o.node_) return *this;
  Exponential e;
  e.node_ = std::make_shared<const Node>(
      Node{Node::Kind::kSum, "", 0, node_, o.node_});
  return e;
}

ExpTerms Exponential::Terms() const {
  ExpTerms out;
  std::vector<const Node *> stack;
  if (node_) stack.push_back(node_.get());
  while (!stack.empty()) {
    const Node *n = stack.back();
    stack.pop_back();
    switch (n->kind) {
      case Node::Kind::kLit: ++out.literals[n->name]; break;
      case Node::Kind::kConst: out.constant += n->value; break;
      case Node::Kind::kSum:
        stack.push_back(n->right.get());
        stack.push_back(n->left.get());
        break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Schemes

Scheme SVar(std::string name) {
  return std::make_shared<const SchemeNode>(
      SchemeNode{SchemeKind::kVar, std::move(name), nullptr, nullptr, {}});
}

Scheme SArrow(Scheme a, Scheme b) {
  return std::make_shared<const SchemeNode>(
      SchemeNode{SchemeKind::kArrow, "", std::move(a), std::move(b), {}});
}

Scheme SBase(std::string name) {
  return std::make_shared<const SchemeNode>(
      SchemeNode{SchemeKind::kBase, std::move(name), nullptr, nullptr, {}});
}

Scheme SBanged(Exponential p, Scheme s) {
  if (s->kind == SchemeKind::kBanged) {
    return SBanged(p + s->exp, s->left);
  }
  if (p.Empty()) return s;
  return std::make_shared<const SchemeNode>(
      SchemeNode{SchemeKind::kBanged, "", std::move(s), nullptr, std::move(p)});
}

bool IsLinear(const Scheme &s) { return s->kind != SchemeKind::kBanged; }

bool SchemeEq(const Scheme &a, const Scheme &b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case SchemeKind::kVar:
    case SchemeKind::kBase:
      return a->name == b->name;
    case SchemeKind::kArrow:
      return SchemeEq(a->left, b->left) && SchemeEq(a->right, b->right);
    case SchemeKind::kBanged:
      return a->exp == b->exp && SchemeEq(a->left, b->left);
  }
  return false;
}

bool Occurs(const std::string &var, const Scheme &s) {
  switch (s->kind) {
    case SchemeKind::kVar: return s->name == var;
    case SchemeKind::kBase: return false;
    case SchemeKind::kBanged: return Occurs(var, s->left);
    case SchemeKind::kArrow:
      return Occurs(var, s->left) || Occurs(var, s->right);
  }
  return false;
}

void CollectVars(const Scheme &s, std::set<std::string> &out) {
  switch (s->kind) {
    case SchemeKind::kVar: out.insert(s->name); return;
    case SchemeKind::kBase: return;
    case SchemeKind::kBanged: CollectVars(s->left, out); return;
    case SchemeKind::kArrow:
      CollectVars(s->left, out);
      CollectVars(s->right, out);
      return;
  }
}

void CollectLiterals(const Scheme &s, std::set<std::string> &out) {
  switch (s->kind) {
    case SchemeKind::kVar:
    case SchemeKind::kBase:
      return;
    case SchemeKind::kBanged:
      for (const auto &[l, n] : s->exp.Terms().literals) out.insert(l);
      CollectLiterals(s->left, out);
      return;
    case SchemeKind::kArrow:
      CollectLiterals(s->left, out);
      CollectLiterals(s->right, out);
      return;
  }
}

std::size_t SchemeSize(const Scheme &s) {
  switch (s->kind) {
    case SchemeKind::kVar:
    case SchemeKind::kBase:
      return 1;
    case SchemeKind::kBanged: return 1 + SchemeSize(s->left);
    case SchemeKind::kArrow:
      return 1 + SchemeSize(s->left) + SchemeSize(s->right);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Constraints

bool Constraint::operator<(const Constraint &o) const {
  if (!(lhs == o.lhs)) return lhs < o.lhs;
  if (kind != o.kind) return kind < o.kind;
  return rhs < o.rhs;
}

bool Constraint::operator==(const Constraint &o) const {
  return kind == o.kind && lhs == o.lhs && rhs == o.rhs;
}

namespace {

std::size_t TermCount(const ExpTerms &t) {
  std::size_t n = t.constant > 0 ? 1 : 0;
  for (const auto &[l, c] : t.literals) n += static_cast<std::size_t>(c);
  return n;
}

}  // namespace

std::optional<Constraint> MakeEq(const Exponential &p, const Exponential &q) {
  ExpTerms a = p.Terms();
  ExpTerms b = q.Terms();
  if (a == b) return std::nullopt;
  // Cancel common summands; over the naturals this is an equivalence.
  for (auto it = a.literals.begin(); it != a.literals.end();) {
    auto jt = b.literals.find(it->first);
    if (jt == b.literals.end()) {
      ++it;
      continue;
    }
    int common = std::min(it->second, jt->second);
    it->second -= common;
    jt->second -= common;
    if (jt->second == 0) b.literals.erase(jt);
    it = it->second == 0 ? a.literals.erase(it) : std::next(it);
  }
  std::uint64_t common = std::min(a.constant, b.constant);
  a.constant -= common;
  b.constant -= common;
  if (b.Empty()) return Constraint{Constraint::Kind::kZero, std::move(a), {}};
  if (a.Empty()) return Constraint{Constraint::Kind::kZero, std::move(b), {}};
  std::size_t na = TermCount(a), nb = TermCount(b);
  if (nb < na || (nb == na && b < a)) std::swap(a, b);
  return Constraint{Constraint::Kind::kEq, std::move(a), std::move(b)};
}

Constraint MakePos(const Exponential &p) {
  return Constraint{Constraint::Kind::kPos, p.Terms(), {}};
}

Constraint MakeZero(const Exponential &p) {
  return Constraint{Constraint::Kind::kZero, p.Terms(), {}};
}

void CollectLiterals(const ModalitySet &c, std::set<std::string> &out) {
  for (const Constraint &k : c) {
    for (const auto &[l, n] : k.lhs.literals) out.insert(l);
    for (const auto &[l, n] : k.rhs.literals) out.insert(l);
  }
}

// ---------------------------------------------------------------------------
// Scheme substitutions

std::uint64_t Evaluate(const SchemeSubstitution &s, const ExpTerms &p) {
  std::uint64_t v = p.constant;
  for (const auto &[l, n] : p.literals) {
    auto it = s.literals.find(l);
    if (it == s.literals.end()) {
      throw SchemeError(fmt::format("literal {} is not assigned", l));
    }
    v += it->second * static_cast<std::uint64_t>(n);
  }
  return v;
}

std::uint64_t Evaluate(const SchemeSubstitution &s, const Exponential &p) {
  return Evaluate(s, p.Terms());
}

bool Satisfies(const SchemeSubstitution &s, const Constraint &c) {
  std::uint64_t l = Evaluate(s, c.lhs);
  switch (c.kind) {
    case Constraint::Kind::kEq: return l == Evaluate(s, c.rhs);
    case Constraint::Kind::kPos: return l > 0;
    case Constraint::Kind::kZero: return l == 0;
  }
  return false;
}

bool Satisfies(const SchemeSubstitution &s, const ModalitySet &c) {
  for (const Constraint &k : c) {
    if (!Satisfies(s, k)) return false;
  }
  return true;
}

Type Ground(const SchemeSubstitution &s, const Scheme &sigma) {
  switch (sigma->kind) {
    case SchemeKind::kVar: {
      auto it = s.types.find(sigma->name);
      if (it == s.types.end()) {
        throw SchemeError(
            fmt::format("scheme variable '{} is not assigned", sigma->name));
      }
      return it->second;
    }
    case SchemeKind::kBase: return BaseType(sigma->name);
    case SchemeKind::kArrow:
      return Arrow(Ground(s, sigma->left), Ground(s, sigma->right));
    case SchemeKind::kBanged:
      return Bangs(static_cast<int>(Evaluate(s, sigma->exp)),
                   Ground(s, sigma->left));
  }
  return nullptr;
}

std::optional<Type> ApplySchemeSubst(const SchemeSubstitution &s,
                                     const TypeScheme &z) {
  Type t = Ground(s, z.scheme);
  if (!Satisfies(s, z.constraints)) return std::nullopt;
  return t;
}

std::string FreshNames::Next(const std::string &prefix, std::size_t &counter) {
  for (;;) {
    std::string name = prefix + std::to_string(counter++);
    if (used_.insert(name).second) return name;
  }
}

std::string FreshNames::Literal() { return Next(lit_prefix_, lit_counter_); }
std::string FreshNames::Variable() { return Next(var_prefix_, var_counter_); }

// ---------------------------------------------------------------------------
// Substitutions

Scheme ApplySubst(const Substitution &t, const Scheme &s, ModalitySet *out,
                  FreshNames *fresh) {
  switch (s->kind) {
    case SchemeKind::kVar: {
      auto it = t.map.find(s->name);
      return it == t.map.end() ? s : it->second;
    }
    case SchemeKind::kBase: return s;
    case SchemeKind::kArrow:
      return SArrow(ApplySubst(t, s->left, out, fresh),
                    ApplySubst(t, s->right, out, fresh));
    case SchemeKind::kBanged: {
      Scheme body = ApplySubst(t, s->left, out, fresh);
      if (body->kind == SchemeKind::kBanged && fresh != nullptr) {
        Exponential r = Exponential::Literal(fresh->Literal());
        if (out != nullptr) {
          if (auto c = MakeEq(r, s->exp + body->exp)) out->insert(*c);
        }
        return SBanged(r, body->left);
      }
      return SBanged(s->exp, body);
    }
  }
  return s;
}

TypeScheme ApplySubst(const Substitution &t, const TypeScheme &z,
                      FreshNames *fresh) {
  TypeScheme out;
  out.constraints = t.constraints;
  out.constraints.insert(z.constraints.begin(), z.constraints.end());
  out.scheme = ApplySubst(t, z.scheme, &out.constraints, fresh);
  return out;
}

Substitution Compose(const Substitution &t1, const Substitution &t2,
                     FreshNames *fresh) {
  Substitution out;
  out.constraints = t1.constraints;
  out.constraints.insert(t2.constraints.begin(), t2.constraints.end());
  for (const auto &[v, s] : t1.map) {
    out.map[v] = ApplySubst(t2, s, &out.constraints, fresh);
  }
  for (const auto &[v, s] : t2.map) out.map.emplace(v, s);
  return out;
}

Type Skeleton(const Scheme &s) {
  switch (s->kind) {
    case SchemeKind::kVar: return Atom(s->name);
    case SchemeKind::kBase: return BaseType(s->name);
    case SchemeKind::kBanged: return Skeleton(s->left);
    case SchemeKind::kArrow:
      return Arrow(Skeleton(s->left), Skeleton(s->right));
  }
  return nullptr;
}

Type Skeleton(const TypeScheme &z) { return Skeleton(z.scheme); }

bool EqE(const TypeScheme &a, const TypeScheme &b) {
  return TypeEq(Skeleton(a), Skeleton(b));
}

// ---------------------------------------------------------------------------
// Printing

std::string Print(const ExpTerms &p) {
  std::string out;
  for (const auto &[l, n] : p.literals) {
    for (int i = 0; i < n; ++i) {
      if (!out.empty()) out += '+';
      out += l;
    }
  }
  if (p.constant > 0 || out.empty()) {
    if (!out.empty()) out += '+';
    out += std::to_string(p.constant);
  }
  return out;
}

std::string Print(const Exponential &p) { return Print(p.Terms()); }

namespace {

void PrintTo(const Scheme &s, std::string &out) {
  switch (s->kind) {
    case SchemeKind::kVar:
      out += '\'';
      out += s->name;
      return;
    case SchemeKind::kBase: out += s->name; return;
    case SchemeKind::kBanged: {
      ExpTerms t = s->exp.Terms();
      std::string e = Print(t);
      bool single = TermCount(t) == 1 &&
                    (t.constant == 0 || t.literals.empty());
      out += single ? fmt::format("!^{} ", e) : fmt::format("!^{{{}}} ", e);
      bool paren = s->left->kind == SchemeKind::kArrow;
      if (paren) out += '(';
      PrintTo(s->left, out);
      if (paren) out += ')';
      return;
    }
    case SchemeKind::kArrow: {
      bool paren = s->left->kind == SchemeKind::kArrow;
      if (paren) out += '(';
      PrintTo(s->left, out);
      if (paren) out += ')';
      out += " -o ";
      PrintTo(s->right, out);
      return;
    }
  }
}

}  // namespace

std::string Print(const Scheme &s) {
  std::string out;
  PrintTo(s, out);
  return out;
}

std::string Print(const Constraint &c) {
  switch (c.kind) {
    case Constraint::Kind::kEq:
      return fmt::format("{}={}", Print(c.lhs), Print(c.rhs));
    case Constraint::Kind::kPos: return fmt::format("{}>0", Print(c.lhs));
    case Constraint::Kind::kZero: return fmt::format("{}=0", Print(c.lhs));
  }
  return "?";
}

std::string Print(const ModalitySet &c) {
  std::string out = "{";
  bool first = true;
  for (const Constraint &k : c) {
    if (!first) out += ", ";
    first = false;
    out += Print(k);
  }
  return out + "}";
}

std::string Print(const TypeScheme &z) {
  return fmt::format("{} | {}", Print(z.scheme), Print(z.constraints));
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class SchemeParser {
 public:
  SchemeParser(TokenStream &ts,
               const std::set<std::string, std::less<>> *algebras)
      : ts_(ts), algebras_(algebras) {}

  Scheme ParseArrow() {
    Scheme left = ParsePrefix();
    if (ts_.Accept(Tok::kArrow)) return SArrow(left, ParseArrow());
    return left;
  }

  Scheme ParsePrefix() {
    if (ts_.Accept(Tok::kBang)) {
      Exponential p = Exponential::Constant(1);
      if (ts_.Accept(Tok::kCaret)) {
        if (ts_.Accept(Tok::kLBrace)) {
          p = ParseSum();
          ts_.Expect(Tok::kRBrace);
        } else {
          p = ParseAtom();
        }
      }
      Scheme body = ParsePrefix();
      if (p.Empty()) return body;
      return SBanged(p, body);
    }
    if (ts_.Accept(Tok::kLParen)) {
      Scheme s = ParseArrow();
      ts_.Expect(Tok::kRParen);
      return s;
    }
    if (ts_.At(Tok::kQuoted)) return SVar(ts_.Next().text);
    detail::Token tok = ts_.Expect(Tok::kIdent);
    if (algebras_ != nullptr && algebras_->count(tok.text)) {
      return SBase(tok.text);
    }
    return SVar(tok.text);
  }

  Exponential ParseAtom() {
    if (ts_.At(Tok::kNumber)) {
      return Exponential::Constant(std::stoull(ts_.Next().text));
    }
    return Exponential::Literal(ts_.Expect(Tok::kIdent).text);
  }

  Exponential ParseSum() {
    Exponential p = ParseAtom();
    while (ts_.Accept(Tok::kPlus)) p = p + ParseAtom();
    return p;
  }

  Constraint ParseConstraint() {
    Exponential l = ParseSum();
    if (ts_.Accept(Tok::kGreater)) {
      detail::Token zero = ts_.Expect(Tok::kNumber);
      if (zero.text != "0") TokenStream::FailAt(zero, "expected 0");
      return MakePos(l);
    }
    ts_.Expect(Tok::kEquals);
    Exponential r = ParseSum();
    if (r.Empty()) return MakeZero(l);
    auto c = MakeEq(l, r);
    if (!c) ts_.Fail("trivial equation");
    return *c;
  }

 private:
  TokenStream &ts_;
  const std::set<std::string, std::less<>> *algebras_;
};

void ExpectEnd(TokenStream &ts) {
  if (!ts.At(Tok::kEnd)) {
    ts.Fail(fmt::format("unexpected '{}'", ts.Peek().text));
  }
}

}  // namespace

Scheme ParseScheme(std::string_view text,
                   const std::set<std::string, std::less<>> *algebras) {
  TokenStream ts(detail::Lex(text));
  Scheme s = SchemeParser(ts, algebras).ParseArrow();
  ExpectEnd(ts);
  return s;
}

Exponential ParseExponential(std::string_view text) {
  TokenStream ts(detail::Lex(text));
  Exponential p = SchemeParser(ts, nullptr).ParseSum();
  ExpectEnd(ts);
  return p;
}

ModalitySet ParseModalitySet(std::string_view text) {
  TokenStream ts(detail::Lex(text));
  SchemeParser p(ts, nullptr);
  ModalitySet out;
  bool braced = ts.Accept(Tok::kLBrace);
  if (!ts.At(Tok::kRBrace) && !ts.At(Tok::kEnd)) {
    do {
      out.insert(p.ParseConstraint());
    } while (ts.Accept(Tok::kComma));
  }
  if (braced) ts.Expect(Tok::kRBrace);
  ExpectEnd(ts);
  return out;
}

}  // namespace lightlam
