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

#include "lightlam/eaterm.h"

#include <fmt/core.h>

#include <algorithm>
#include <numeric>
#include <utility>

#include "lexer.h"

namespace lightlam {

using detail::Tok;
using detail::TokenStream;

EATerm EVar(std::string name) {
  return std::make_shared<EANode>(
      EANode{EAKind::kVar, std::move(name), "", nullptr, nullptr, {}});
}

EATerm EAbs(std::string binder, EATerm body) {
  return std::make_shared<EANode>(EANode{
      EAKind::kAbs, std::move(binder), "", std::move(body), nullptr, {}});
}

EATerm EApp(EATerm fn, EATerm arg) {
  return std::make_shared<EANode>(
      EANode{EAKind::kApp, "", "", std::move(fn), std::move(arg), {}});
}

EATerm EProm(EATerm body, std::vector<EABinding> bindings) {
  return std::make_shared<EANode>(EANode{EAKind::kProm, "", "", std::move(body),
                                         nullptr, std::move(bindings)});
}

EATerm EContr(EATerm body, EATerm arg, std::string x, std::string y) {
  return std::make_shared<EANode>(EANode{EAKind::kContr, std::move(x),
                                         std::move(y), std::move(body),
                                         std::move(arg), {}});
}

EATerm FromTerm(const Term &t) {
  switch (t->kind) {
    case TermKind::kVar:
      return EVar(t->name);
    case TermKind::kAbs:
      return EAbs(t->name, FromTerm(t->left));
    case TermKind::kApp:
      return EApp(FromTerm(t->left), FromTerm(t->right));
    case TermKind::kConst:
      break;
  }
  throw std::invalid_argument("constants have no EA-term form");
}

namespace {

class EAParser {
 public:
  explicit EAParser(TokenStream &ts) : ts_(ts) {}

  std::string ParseVar() {
    detail::Token tok = ts_.Expect(Tok::kIdent);
    if (!detail::IsVarName(tok.text)) {
      TokenStream::FailAt(tok, fmt::format("invalid variable '{}'", tok.text));
    }
    return tok.text;
  }

  EATerm ParseExpr() {
    if (ts_.Accept(Tok::kLambda)) {
      std::vector<std::string> binders;
      while (ts_.At(Tok::kIdent)) binders.push_back(ParseVar());
      if (binders.empty()) ts_.Fail("expected a binder after '\\'");
      ts_.Expect(Tok::kDot);
      EATerm body = ParseExpr();
      for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
        body = EAbs(*it, body);
      }
      return body;
    }
    EATerm t = ParsePostfix();
    while (true) {
      if (ts_.At(Tok::kLambda)) {
        t = EApp(t, ParseExpr());
        break;
      }
      if (!ts_.At(Tok::kIdent) && !ts_.At(Tok::kLParen) &&
          !ts_.At(Tok::kBang)) {
        break;
      }
      t = EApp(t, ParsePostfix());
    }
    return t;
  }

  EATerm ParsePostfix() {
    EATerm t = ParseAtom();
    while (ts_.Accept(Tok::kLBracket)) {
      EATerm arg = ParseExpr();
      ts_.Expect(Tok::kSlash);
      std::string x = ParseVar();
      ts_.Expect(Tok::kComma);
      std::string y = ParseVar();
      ts_.Expect(Tok::kRBracket);
      t = EContr(t, arg, x, y);
    }
    return t;
  }

  EATerm ParseAtom() {
    if (ts_.At(Tok::kIdent)) return EVar(ParseVar());
    if (ts_.Accept(Tok::kLParen)) {
      EATerm t = ParseExpr();
      ts_.Expect(Tok::kRParen);
      return t;
    }
    if (ts_.Accept(Tok::kBang)) {
      ts_.Expect(Tok::kLParen);
      EATerm body = ParseExpr();
      ts_.Expect(Tok::kRParen);
      ts_.Expect(Tok::kLBracket);
      std::vector<EABinding> bindings;
      if (!ts_.At(Tok::kRBracket)) {
        do {
          EATerm arg = ParseExpr();
          ts_.Expect(Tok::kSlash);
          bindings.push_back({arg, ParseVar()});
        } while (ts_.Accept(Tok::kComma));
      }
      ts_.Expect(Tok::kRBracket);
      return EProm(body, std::move(bindings));
    }
    ts_.Fail("expected a term");
  }

 private:
  TokenStream &ts_;
};

bool NeedsParens(const EATerm &t) {
  return t->kind == EAKind::kAbs || t->kind == EAKind::kApp;
}

void PrintTo(const EATerm &t, std::string &out) {
  switch (t->kind) {
    case EAKind::kVar:
      out += t->name;
      return;
    case EAKind::kAbs:
      out += '\\';
      out += t->name;
      out += '.';
      PrintTo(t->left, out);
      return;
    case EAKind::kApp: {
      bool pf = t->left->kind == EAKind::kAbs;
      if (pf) out += '(';
      PrintTo(t->left, out);
      if (pf) out += ')';
      out += ' ';
      bool pa = NeedsParens(t->right);
      if (pa) out += '(';
      PrintTo(t->right, out);
      if (pa) out += ')';
      return;
    }
    case EAKind::kProm:
      out += "!(";
      PrintTo(t->left, out);
      out += ")[";
      for (std::size_t i = 0; i < t->bindings.size(); ++i) {
        if (i > 0) out += ',';
        PrintTo(t->bindings[i].arg, out);
        out += '/';
        out += t->bindings[i].var;
      }
      out += ']';
      return;
    case EAKind::kContr: {
      bool pb = NeedsParens(t->left);
      if (pb) out += '(';
      PrintTo(t->left, out);
      if (pb) out += ')';
      out += '[';
      PrintTo(t->right, out);
      out += '/';
      out += t->name;
      out += ',';
      out += t->name2;
      out += ']';
      return;
    }
  }
}

// Free occurrence counts.
void CountInto(const EATerm &t, std::map<std::string, int> &out,
               std::string *why, bool &ok);

std::map<std::string, int> Counts(const EATerm &t, std::string *why,
                                  bool &ok) {
  std::map<std::string, int> m;
  CountInto(t, m, why, ok);
  return m;
}

void Merge(std::map<std::string, int> &into,
           const std::map<std::string, int> &from) {
  for (const auto &[k, v] : from) into[k] += v;
}

void Fail(std::string *why, bool &ok, const std::string &msg) {
  if (ok && why != nullptr) *why = msg;
  ok = false;
}

void Bind(std::map<std::string, int> &body, const std::string &x,
          std::string *why, bool &ok) {
  auto it = body.find(x);
  if (it == body.end()) return;
  if (it->second > 1) {
    Fail(why, ok, fmt::format("bound variable '{}' occurs {} times", x,
                              it->second));
  }
  body.erase(it);
}

void CountInto(const EATerm &t, std::map<std::string, int> &out,
               std::string *why, bool &ok) {
  switch (t->kind) {
    case EAKind::kVar:
      out[t->name] += 1;
      return;
    case EAKind::kAbs: {
      auto body = Counts(t->left, why, ok);
      Bind(body, t->name, why, ok);
      Merge(out, body);
      return;
    }
    case EAKind::kApp:
      CountInto(t->left, out, why, ok);
      CountInto(t->right, out, why, ok);
      return;
    case EAKind::kProm: {
      auto body = Counts(t->left, why, ok);
      std::set<std::string> seen;
      for (const EABinding &b : t->bindings) {
        if (!seen.insert(b.var).second) {
          Fail(why, ok, fmt::format("promotion binds '{}' twice", b.var));
        }
        Bind(body, b.var, why, ok);
        CountInto(b.arg, out, why, ok);
      }
      Merge(out, body);
      return;
    }
    case EAKind::kContr: {
      if (t->name == t->name2) {
        Fail(why, ok, fmt::format("contraction binds '{}' twice", t->name));
      }
      auto body = Counts(t->left, why, ok);
      Bind(body, t->name, why, ok);
      Bind(body, t->name2, why, ok);
      Merge(out, body);
      CountInto(t->right, out, why, ok);
      return;
    }
  }
}

}  // namespace

namespace detail {

EATerm ParseEATermFrom(TokenStream &ts) { return EAParser(ts).ParseExpr(); }

}  // namespace detail

EATerm ParseEATerm(std::string_view text) {
  TokenStream ts(detail::Lex(text));
  EATerm t = detail::ParseEATermFrom(ts);
  if (!ts.At(Tok::kEnd)) {
    ts.Fail(fmt::format("unexpected '{}'", ts.Peek().text));
  }
  std::string why;
  if (!IsLinear(t, &why)) throw LinearityError("linearity violation: " + why);
  return t;
}

std::string Print(const EATerm &t) {
  std::string out;
  PrintTo(t, out);
  return out;
}

std::size_t Length(const EATerm &t) {
  switch (t->kind) {
    case EAKind::kVar:
      return 1;
    case EAKind::kAbs:
      return 1 + Length(t->left);
    case EAKind::kApp:
      return 1 + Length(t->left) + Length(t->right);
    case EAKind::kProm: {
      std::size_t n = Length(t->left) + 1;
      for (const EABinding &b : t->bindings) n += Length(b.arg) + 1;
      return n;
    }
    case EAKind::kContr:
      return Length(t->left) + Length(t->right) + 1;
  }
  return 0;
}

bool IsLinear(const EATerm &t, std::string *why) {
  bool ok = true;
  auto counts = Counts(t, why, ok);
  for (const auto &[x, n] : counts) {
    if (n > 1) {
      Fail(why, ok, fmt::format("free variable '{}' occurs {} times", x, n));
    }
  }
  return ok;
}

std::set<std::string> FreeVars(const EATerm &t) {
  std::set<std::string> out;
  switch (t->kind) {
    case EAKind::kVar:
      out.insert(t->name);
      break;
    case EAKind::kAbs:
      out = FreeVars(t->left);
      out.erase(t->name);
      break;
    case EAKind::kApp: {
      out = FreeVars(t->left);
      auto r = FreeVars(t->right);
      out.insert(r.begin(), r.end());
      break;
    }
    case EAKind::kProm: {
      out = FreeVars(t->left);
      for (const EABinding &b : t->bindings) out.erase(b.var);
      for (const EABinding &b : t->bindings) {
        auto r = FreeVars(b.arg);
        out.insert(r.begin(), r.end());
      }
      break;
    }
    case EAKind::kContr: {
      out = FreeVars(t->left);
      out.erase(t->name);
      out.erase(t->name2);
      auto r = FreeVars(t->right);
      out.insert(r.begin(), r.end());
      break;
    }
  }
  return out;
}

void CollectNames(const EATerm &t, std::set<std::string> &out) {
  switch (t->kind) {
    case EAKind::kVar:
      out.insert(t->name);
      return;
    case EAKind::kAbs:
      out.insert(t->name);
      CollectNames(t->left, out);
      return;
    case EAKind::kApp:
      CollectNames(t->left, out);
      CollectNames(t->right, out);
      return;
    case EAKind::kProm:
      CollectNames(t->left, out);
      for (const EABinding &b : t->bindings) {
        out.insert(b.var);
        CollectNames(b.arg, out);
      }
      return;
    case EAKind::kContr:
      out.insert(t->name);
      out.insert(t->name2);
      CollectNames(t->left, out);
      CollectNames(t->right, out);
      return;
  }
}

namespace {

// Substitutes under `binders`, renaming any that would capture.
EATerm SubstUnder(std::vector<std::string> &binders, const EATerm &body,
                  const std::map<std::string, EATerm> &s) {
  std::set<std::string> body_fv = FreeVars(body);
  std::map<std::string, EATerm> inner;
  for (const auto &[x, n] : s) {
    if (body_fv.count(x) &&
        std::find(binders.begin(), binders.end(), x) == binders.end()) {
      inner.emplace(x, n);
    }
  }
  if (inner.empty()) return body;
  std::set<std::string> avoid;
  for (const auto &[x, n] : inner) {
    auto fv = FreeVars(n);
    avoid.insert(fv.begin(), fv.end());
  }
  std::set<std::string> taken = avoid;
  taken.insert(body_fv.begin(), body_fv.end());
  for (const auto &[x, n] : inner) taken.insert(x);
  taken.insert(binders.begin(), binders.end());
  for (std::string &b : binders) {
    if (!avoid.count(b)) continue;
    std::string fresh =
        PrimeFresh(b, [&](const std::string &c) { return !taken.count(c); });
    taken.insert(fresh);
    inner.emplace(b, EVar(fresh));
    b = fresh;
  }
  return SubstituteAll(body, inner);
}

}  // namespace

EATerm SubstituteAll(const EATerm &m, const std::map<std::string, EATerm> &s) {
  if (s.empty()) return m;
  switch (m->kind) {
    case EAKind::kVar: {
      auto it = s.find(m->name);
      return it == s.end() ? m : it->second;
    }
    case EAKind::kApp: {
      EATerm f = SubstituteAll(m->left, s);
      EATerm a = SubstituteAll(m->right, s);
      if (f == m->left && a == m->right) return m;
      return EApp(f, a);
    }
    case EAKind::kAbs: {
      std::vector<std::string> bs{m->name};
      EATerm body = SubstUnder(bs, m->left, s);
      if (body == m->left) return m;
      return EAbs(bs[0], body);
    }
    case EAKind::kProm: {
      std::vector<std::string> bs;
      for (const EABinding &b : m->bindings) bs.push_back(b.var);
      EATerm body = SubstUnder(bs, m->left, s);
      bool changed = body != m->left;
      std::vector<EABinding> nb;
      for (std::size_t i = 0; i < bs.size(); ++i) {
        EATerm a = SubstituteAll(m->bindings[i].arg, s);
        changed = changed || a != m->bindings[i].arg;
        nb.push_back({a, bs[i]});
      }
      if (!changed) return m;
      return EProm(body, std::move(nb));
    }
    case EAKind::kContr: {
      std::vector<std::string> bs{m->name, m->name2};
      EATerm body = SubstUnder(bs, m->left, s);
      EATerm arg = SubstituteAll(m->right, s);
      if (body == m->left && arg == m->right) return m;
      return EContr(body, arg, bs[0], bs[1]);
    }
  }
  return m;
}

EATerm Substitute(const EATerm &m, const std::string &x, const EATerm &n) {
  return SubstituteAll(m, {{x, n}});
}

EATerm Rename(const EATerm &m, const std::map<std::string, std::string> &r) {
  std::map<std::string, EATerm> s;
  for (const auto &[from, to] : r) s.emplace(from, EVar(to));
  return SubstituteAll(m, s);
}

namespace {

using Scope = std::vector<std::pair<std::string, int>>;

int Lookup(const Scope &scope, const std::string &name) {
  for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
    if (it->first == name) return it->second;
  }
  return -1;
}

bool Eq(const EATerm &a, const EATerm &b, Scope &sa, Scope &sb, int depth);

bool MatchBindings(const EATerm &a, const EATerm &b, Scope &sa, Scope &sb,
                   int depth, std::size_t i, std::vector<bool> &used,
                   std::vector<std::size_t> &perm) {
  std::size_t n = a->bindings.size();
  if (i == n) {
    for (std::size_t k = 0; k < n; ++k) {
      sa.emplace_back(a->bindings[k].var, depth + static_cast<int>(k));
      sb.emplace_back(b->bindings[perm[k]].var, depth + static_cast<int>(k));
    }
    bool r = Eq(a->left, b->left, sa, sb, depth + static_cast<int>(n));
    sa.resize(sa.size() - n);
    sb.resize(sb.size() - n);
    return r;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (used[j]) continue;
    if (!Eq(a->bindings[i].arg, b->bindings[j].arg, sa, sb, depth)) continue;
    used[j] = true;
    perm[i] = j;
    if (MatchBindings(a, b, sa, sb, depth, i + 1, used, perm)) return true;
    used[j] = false;
  }
  return false;
}

bool Eq(const EATerm &a, const EATerm &b, Scope &sa, Scope &sb, int depth) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case EAKind::kVar: {
      int la = Lookup(sa, a->name);
      int lb = Lookup(sb, b->name);
      if (la < 0 && lb < 0) return a->name == b->name;
      return la == lb;
    }
    case EAKind::kAbs: {
      sa.emplace_back(a->name, depth);
      sb.emplace_back(b->name, depth);
      bool r = Eq(a->left, b->left, sa, sb, depth + 1);
      sa.pop_back();
      sb.pop_back();
      return r;
    }
    case EAKind::kApp:
      return Eq(a->left, b->left, sa, sb, depth) &&
             Eq(a->right, b->right, sa, sb, depth);
    case EAKind::kProm: {
      if (a->bindings.size() != b->bindings.size()) return false;
      std::vector<bool> used(a->bindings.size(), false);
      std::vector<std::size_t> perm(a->bindings.size(), 0);
      return MatchBindings(a, b, sa, sb, depth, 0, used, perm);
    }
    case EAKind::kContr: {
      if (!Eq(a->right, b->right, sa, sb, depth)) return false;
      sa.emplace_back(a->name, depth);
      sa.emplace_back(a->name2, depth + 1);
      sb.emplace_back(b->name, depth);
      sb.emplace_back(b->name2, depth + 1);
      bool r = Eq(a->left, b->left, sa, sb, depth + 2);
      sa.resize(sa.size() - 2);
      sb.resize(sb.size() - 2);
      return r;
    }
  }
  return false;
}

void KeyInto(const EATerm &t, Scope &scope, int depth, std::string &out);

std::string Key(const EATerm &t, Scope &scope, int depth) {
  std::string s;
  KeyInto(t, scope, depth, s);
  return s;
}

void KeyInto(const EATerm &t, Scope &scope, int depth, std::string &out) {
  switch (t->kind) {
    case EAKind::kVar: {
      int l = Lookup(scope, t->name);
      if (l < 0) {
        out += t->name;
      } else {
        out += '#';
        out += std::to_string(l);
      }
      return;
    }
    case EAKind::kAbs:
      out += "(\\";
      scope.emplace_back(t->name, depth);
      KeyInto(t->left, scope, depth + 1, out);
      scope.pop_back();
      out += ')';
      return;
    case EAKind::kApp:
      out += '(';
      KeyInto(t->left, scope, depth, out);
      out += ' ';
      KeyInto(t->right, scope, depth, out);
      out += ')';
      return;
    case EAKind::kProm: {
      std::size_t n = t->bindings.size();
      std::vector<std::string> keys;
      for (const EABinding &b : t->bindings) {
        keys.push_back(Key(b.arg, scope, depth));
      }
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t x, std::size_t y) {
                         return keys[x] < keys[y];
                       });
      // Equal arguments are interchangeable: pick the ordering with the
      // smallest body key. Bounded so pathological inputs stay cheap.
      auto body_key = [&](const std::vector<std::size_t> &ord) {
        for (std::size_t k = 0; k < n; ++k) {
          scope.emplace_back(t->bindings[ord[k]].var,
                             depth + static_cast<int>(k));
        }
        std::string s = Key(t->left, scope, depth + static_cast<int>(n));
        scope.resize(scope.size() - n);
        return s;
      };
      std::string best = body_key(order);
      std::vector<std::size_t> cur = order;
      std::size_t tries = 0;
      auto next_tie_perm = [&](std::vector<std::size_t> &ord) {
        // Advance to the next permutation within each block of equal keys.
        std::size_t end = n;
        while (end > 0) {
          std::size_t begin = end - 1;
          while (begin > 0 && keys[ord[begin - 1]] == keys[ord[end - 1]]) {
            --begin;
          }
          if (std::next_permutation(ord.begin() + begin, ord.begin() + end)) {
            return true;
          }
          end = begin;
        }
        return false;
      };
      for (std::size_t b = 0; b < n;) {
        std::size_t e = b;
        while (e < n && keys[order[e]] == keys[order[b]]) ++e;
        std::sort(cur.begin() + b, cur.begin() + e);
        b = e;
      }
      while (next_tie_perm(cur) && ++tries < 720) {
        std::string s = body_key(cur);
        if (s < best) best = std::move(s);
      }
      out += "!(";
      out += best;
      out += ")[";
      for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) out += ',';
        out += keys[order[k]];
      }
      out += ']';
      return;
    }
    case EAKind::kContr:
      out += "(";
      scope.emplace_back(t->name, depth);
      scope.emplace_back(t->name2, depth + 1);
      KeyInto(t->left, scope, depth + 2, out);
      scope.resize(scope.size() - 2);
      out += ")[";
      KeyInto(t->right, scope, depth, out);
      out += ']';
      return;
  }
}

}  // namespace

bool AlphaEq(const EATerm &a, const EATerm &b) {
  Scope sa, sb;
  return Eq(a, b, sa, sb, 0);
}

std::string CanonicalKey(const EATerm &t) {
  Scope scope;
  return Key(t, scope, 0);
}

namespace {

EATerm Child(const EATerm &t, int k, const Path &p) {
  switch (t->kind) {
    case EAKind::kAbs:
      if (k == 0) return t->left;
      break;
    case EAKind::kApp:
    case EAKind::kContr:
      if (k == 0) return t->left;
      if (k == 1) return t->right;
      break;
    case EAKind::kProm:
      if (k == 0) return t->left;
      if (k >= 1 && static_cast<std::size_t>(k) <= t->bindings.size()) {
        return t->bindings[k - 1].arg;
      }
      break;
    case EAKind::kVar:
      break;
  }
  throw std::out_of_range("invalid occurrence " + PathString(p));
}

EATerm ReplaceFrom(const EATerm &t, const Path &p, std::size_t i,
                   EATerm r) {
  if (i == p.size()) return r;
  int k = p[i];
  EATerm sub = ReplaceFrom(Child(t, k, p), p, i + 1, std::move(r));
  switch (t->kind) {
    case EAKind::kAbs:
      return EAbs(t->name, sub);
    case EAKind::kApp:
      return k == 0 ? EApp(sub, t->right) : EApp(t->left, sub);
    case EAKind::kContr:
      return k == 0 ? EContr(sub, t->right, t->name, t->name2)
                    : EContr(t->left, sub, t->name, t->name2);
    case EAKind::kProm: {
      if (k == 0) return EProm(sub, t->bindings);
      std::vector<EABinding> bs = t->bindings;
      bs[k - 1].arg = sub;
      return EProm(t->left, std::move(bs));
    }
    case EAKind::kVar:
      break;
  }
  throw std::out_of_range("invalid occurrence " + PathString(p));
}

}  // namespace

EATerm SubtermAt(const EATerm &t, const Path &p) {
  EATerm cur = t;
  for (int k : p) cur = Child(cur, k, p);
  return cur;
}

EATerm ReplaceAt(const EATerm &t, const Path &p, EATerm replacement) {
  return ReplaceFrom(t, p, 0, std::move(replacement));
}

}  // namespace lightlam
