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

#include "lightlam/syntax.h"

#include <fmt/core.h>

#include <cctype>
#include <functional>
#include <utility>

#include "lexer.h"

namespace lightlam {

using detail::Tok;
using detail::TokenStream;

Term Var(std::string name) {
  return std::make_shared<TermNode>(
      TermNode{TermKind::kVar, std::move(name), nullptr, nullptr, nullptr});
}

Term Abs(std::string binder, Term body) {
  return std::make_shared<TermNode>(TermNode{
      TermKind::kAbs, std::move(binder), std::move(body), nullptr, nullptr});
}

Term App(Term fn, Term arg) {
  return std::make_shared<TermNode>(
      TermNode{TermKind::kApp, "", std::move(fn), std::move(arg), nullptr});
}

Term Const(ConstRef c) {
  std::string name = c->name;
  return std::make_shared<TermNode>(TermNode{
      TermKind::kConst, std::move(name), nullptr, nullptr, std::move(c)});
}

Term Apply(Term fn, const std::vector<Term> &args) {
  for (const Term &a : args) fn = App(fn, a);
  return fn;
}

std::string PathString(const Path &p) {
  if (p.empty()) return "e";
  std::string s;
  for (int k : p) s += static_cast<char>('0' + k);
  return s;
}

namespace {

class TermParser {
 public:
  TermParser(TokenStream &ts, const ConstantEnv *env) : ts_(ts), env_(env) {}

  Term ParseExpr() {
    if (ts_.Accept(Tok::kLambda)) {
      std::vector<std::string> binders;
      while (ts_.At(Tok::kIdent)) {
        detail::Token tok = ts_.Next();
        if (!detail::IsVarName(tok.text)) {
          TokenStream::FailAt(tok, fmt::format("invalid binder '{}'", tok.text));
        }
        binders.push_back(tok.text);
      }
      if (binders.empty()) ts_.Fail("expected a binder after '\\'");
      ts_.Expect(Tok::kDot);
      Term body = ParseExpr();
      for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
        body = Abs(*it, body);
      }
      return body;
    }
    Term t = ParseAtom();
    while (true) {
      if (ts_.At(Tok::kLambda)) {
        t = App(t, ParseExpr());
        break;
      }
      if (!ts_.At(Tok::kIdent) && !ts_.At(Tok::kLParen)) break;
      t = App(t, ParseAtom());
    }
    return t;
  }

  Term ParseAtom() {
    if (ts_.At(Tok::kIdent)) {
      detail::Token tok = ts_.Next();
      if (env_ != nullptr) {
        auto it = env_->find(tok.text);
        if (it != env_->end()) return Const(it->second);
      }
      if (tok.text.find('_') != std::string::npos) {
        TokenStream::FailAt(tok, fmt::format("unknown constant '{}'", tok.text));
      }
      if (!detail::IsVarName(tok.text)) {
        TokenStream::FailAt(tok, fmt::format("invalid variable '{}'", tok.text));
      }
      return Var(tok.text);
    }
    if (ts_.Accept(Tok::kLParen)) {
      Term t = ParseExpr();
      ts_.Expect(Tok::kRParen);
      return t;
    }
    ts_.Fail("expected a term");
  }

 private:
  TokenStream &ts_;
  const ConstantEnv *env_;
};

void PrintTo(const Term &t, std::string &out) {
  switch (t->kind) {
    case TermKind::kVar:
    case TermKind::kConst:
      out += t->name;
      return;
    case TermKind::kAbs:
      out += '\\';
      out += t->name;
      out += '.';
      PrintTo(t->left, out);
      return;
    case TermKind::kApp: {
      bool paren_fn = t->left->kind == TermKind::kAbs;
      if (paren_fn) out += '(';
      PrintTo(t->left, out);
      if (paren_fn) out += ')';
      out += ' ';
      bool paren_arg = t->right->kind == TermKind::kAbs ||
                       t->right->kind == TermKind::kApp;
      if (paren_arg) out += '(';
      PrintTo(t->right, out);
      if (paren_arg) out += ')';
      return;
    }
  }
}

void FreeVarsInto(const Term &t, std::set<std::string> &bound,
                  std::set<std::string> &out) {
  switch (t->kind) {
    case TermKind::kVar:
      if (!bound.count(t->name)) out.insert(t->name);
      return;
    case TermKind::kConst:
      return;
    case TermKind::kAbs: {
      bool inserted = bound.insert(t->name).second;
      FreeVarsInto(t->left, bound, out);
      if (inserted) bound.erase(t->name);
      return;
    }
    case TermKind::kApp:
      FreeVarsInto(t->left, bound, out);
      FreeVarsInto(t->right, bound, out);
      return;
  }
}

}  // namespace

namespace detail {

Term ParseTermFrom(TokenStream &ts, const ConstantEnv *env) {
  return TermParser(ts, env).ParseExpr();
}

}  // namespace detail

Term ParseTerm(std::string_view text, const ConstantEnv *env) {
  TokenStream ts(detail::Lex(text));
  Term t = detail::ParseTermFrom(ts, env);
  if (!ts.At(Tok::kEnd)) ts.Fail(fmt::format("unexpected '{}'", ts.Peek().text));
  return t;
}

std::string Print(const Term &t) {
  std::string out;
  PrintTo(t, out);
  return out;
}

std::size_t Length(const Term &t) {
  switch (t->kind) {
    case TermKind::kVar:
    case TermKind::kConst:
      return 1;
    case TermKind::kAbs:
      return 1 + Length(t->left);
    case TermKind::kApp:
      return 1 + Length(t->left) + Length(t->right);
  }
  return 0;
}

std::set<std::string> FreeVars(const Term &t) {
  std::set<std::string> bound, out;
  FreeVarsInto(t, bound, out);
  return out;
}

std::size_t CountFree(const Term &t, std::string_view x) {
  switch (t->kind) {
    case TermKind::kVar:
      return t->name == x ? 1 : 0;
    case TermKind::kConst:
      return 0;
    case TermKind::kAbs:
      return t->name == x ? 0 : CountFree(t->left, x);
    case TermKind::kApp:
      return CountFree(t->left, x) + CountFree(t->right, x);
  }
  return 0;
}

bool IsFree(const Term &t, std::string_view x) {
  switch (t->kind) {
    case TermKind::kVar:
      return t->name == x;
    case TermKind::kConst:
      return false;
    case TermKind::kAbs:
      return t->name != x && IsFree(t->left, x);
    case TermKind::kApp:
      return IsFree(t->left, x) || IsFree(t->right, x);
  }
  return false;
}

void CollectNames(const Term &t, std::set<std::string> &out) {
  switch (t->kind) {
    case TermKind::kVar:
      out.insert(t->name);
      return;
    case TermKind::kConst:
      return;
    case TermKind::kAbs:
      out.insert(t->name);
      CollectNames(t->left, out);
      return;
    case TermKind::kApp:
      CollectNames(t->left, out);
      CollectNames(t->right, out);
      return;
  }
}

Term SubstituteAll(const Term &m, const std::map<std::string, Term> &s) {
  if (s.empty()) return m;
  switch (m->kind) {
    case TermKind::kVar: {
      auto it = s.find(m->name);
      return it == s.end() ? m : it->second;
    }
    case TermKind::kConst:
      return m;
    case TermKind::kApp: {
      Term f = SubstituteAll(m->left, s);
      Term a = SubstituteAll(m->right, s);
      if (f == m->left && a == m->right) return m;
      return App(std::move(f), std::move(a));
    }
    case TermKind::kAbs: {
      std::map<std::string, Term> inner;
      std::set<std::string> body_fv = FreeVars(m->left);
      for (const auto &[x, n] : s) {
        if (x != m->name && body_fv.count(x)) inner.emplace(x, n);
      }
      if (inner.empty()) return m;
      std::set<std::string> range_fv;
      for (const auto &[x, n] : inner) {
        std::set<std::string> fv = FreeVars(n);
        range_fv.insert(fv.begin(), fv.end());
      }
      std::string binder = m->name;
      if (range_fv.count(binder)) {
        binder = PrimeFresh(binder, [&](const std::string &c) {
          return !range_fv.count(c) && !body_fv.count(c) && !inner.count(c);
        });
        inner.emplace(m->name, Var(binder));
      }
      return Abs(binder, SubstituteAll(m->left, inner));
    }
  }
  return m;
}

Term Substitute(const Term &m, const std::string &x, const Term &n) {
  return SubstituteAll(m, {{x, n}});
}

namespace {

using Scope = std::vector<std::pair<std::string, int>>;

int Lookup(const Scope &scope, const std::string &name) {
  for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
    if (it->first == name) return it->second;
  }
  return -1;
}

bool AlphaEqIn(const Term &a, const Term &b, Scope &sa, Scope &sb, int depth) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::kVar: {
      int la = Lookup(sa, a->name);
      int lb = Lookup(sb, b->name);
      if (la < 0 && lb < 0) return a->name == b->name;
      return la == lb;
    }
    case TermKind::kConst:
      return a->name == b->name;
    case TermKind::kAbs: {
      sa.emplace_back(a->name, depth);
      sb.emplace_back(b->name, depth);
      bool r = AlphaEqIn(a->left, b->left, sa, sb, depth + 1);
      sa.pop_back();
      sb.pop_back();
      return r;
    }
    case TermKind::kApp:
      return AlphaEqIn(a->left, b->left, sa, sb, depth) &&
             AlphaEqIn(a->right, b->right, sa, sb, depth);
  }
  return false;
}

void KeyInto(const Term &t, Scope &scope, int depth, std::string &out) {
  switch (t->kind) {
    case TermKind::kVar: {
      int l = Lookup(scope, t->name);
      if (l < 0) {
        out += t->name;
      } else {
        out += '#';
        out += std::to_string(l);
      }
      return;
    }
    case TermKind::kConst:
      out += t->name;
      return;
    case TermKind::kAbs:
      out += "(\\";
      scope.emplace_back(t->name, depth);
      KeyInto(t->left, scope, depth + 1, out);
      scope.pop_back();
      out += ')';
      return;
    case TermKind::kApp:
      out += '(';
      KeyInto(t->left, scope, depth, out);
      out += ' ';
      KeyInto(t->right, scope, depth, out);
      out += ')';
      return;
  }
}

}  // namespace

bool AlphaEq(const Term &a, const Term &b) {
  Scope sa, sb;
  return AlphaEqIn(a, b, sa, sb, 0);
}

bool Identical(const Term &a, const Term &b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->name != b->name) return false;
  switch (a->kind) {
    case TermKind::kVar:
    case TermKind::kConst:
      return true;
    case TermKind::kAbs:
      return Identical(a->left, b->left);
    case TermKind::kApp:
      return Identical(a->left, b->left) && Identical(a->right, b->right);
  }
  return false;
}

std::string CanonicalKey(const Term &t) {
  Scope scope;
  std::string out;
  KeyInto(t, scope, 0, out);
  return out;
}

Term Head(const Term &t, std::vector<Term> *args) {
  Term h = t;
  std::vector<Term> rev;
  while (h->kind == TermKind::kApp) {
    rev.push_back(h->right);
    h = h->left;
  }
  if (args != nullptr) args->assign(rev.rbegin(), rev.rend());
  return h;
}

bool IsValue(const Term &t) {
  switch (t->kind) {
    case TermKind::kVar:
    case TermKind::kAbs:
    case TermKind::kConst:
      return true;
    case TermKind::kApp: {
      std::vector<Term> args;
      Term h = Head(t, &args);
      if (h->kind != TermKind::kConst) return false;
      if (static_cast<int>(args.size()) > h->constant->max_value_args) {
        return false;
      }
      for (const Term &a : args) {
        if (!IsValue(a)) return false;
      }
      return true;
    }
  }
  return false;
}

bool IsClosed(const Term &t) { return FreeVars(t).empty(); }

Term SubtermAt(const Term &t, const Path &p) {
  Term cur = t;
  for (int k : p) {
    if (cur->kind == TermKind::kAbs && k == 0) {
      cur = cur->left;
    } else if (cur->kind == TermKind::kApp && (k == 0 || k == 1)) {
      cur = k == 0 ? cur->left : cur->right;
    } else {
      throw std::out_of_range("invalid occurrence " + PathString(p));
    }
  }
  return cur;
}

namespace {

Term ReplaceFrom(const Term &t, const Path &p, std::size_t i, Term r) {
  if (i == p.size()) return r;
  int k = p[i];
  if (t->kind == TermKind::kAbs && k == 0) {
    return Abs(t->name, ReplaceFrom(t->left, p, i + 1, std::move(r)));
  }
  if (t->kind == TermKind::kApp && k == 0) {
    return App(ReplaceFrom(t->left, p, i + 1, std::move(r)), t->right);
  }
  if (t->kind == TermKind::kApp && k == 1) {
    return App(t->left, ReplaceFrom(t->right, p, i + 1, std::move(r)));
  }
  throw std::out_of_range("invalid occurrence " + PathString(p));
}

}  // namespace

Term ReplaceAt(const Term &t, const Path &p, Term replacement) {
  return ReplaceFrom(t, p, 0, std::move(replacement));
}

std::string NameSupply::Fresh(std::string_view hint) {
  std::string base(hint);
  while (!base.empty() &&
         (base.back() == '\'' ||
          std::isdigit(static_cast<unsigned char>(base.back())))) {
    base.pop_back();
  }
  if (base.empty() || !std::islower(static_cast<unsigned char>(base[0])) ||
      !detail::IsVarName(base)) {
    base = "v";
  }
  while (true) {
    std::string cand = base + std::to_string(counter_++);
    if (used_.insert(cand).second) return cand;
  }
}

}  // namespace lightlam
