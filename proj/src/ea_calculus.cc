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

#include "lightlam/ea_calculus.h"

#include <fmt/format.h>

#include <deque>
#include <map>
#include <set>
#include <unordered_map>

#include "lexer.h"
#include "lightlam/eval.h"

namespace lightlam {

namespace {

using detail::Tok;
using detail::TokenStream;

std::string FreshAvoiding(const std::string &hint,
                          const std::set<std::string> &avoid) {
  return PrimeFresh(hint, [&](const std::string &s) {
    return avoid.count(s) == 0;
  });
}

std::string PrintMap(const TypeMap &m) {
  std::string out;
  for (const auto &[k, t] : m) {
    if (!out.empty()) out += ", ";
    out += fmt::format("{} : {}", k, Print(t));
  }
  return out;
}

}  // namespace

std::string_view NealRuleName(NealRule r) {
  switch (r) {
    case NealRule::kAx: return "A";
    case NealRule::kContr: return "C";
    case NealRule::kIntro: return "I";
    case NealRule::kElim: return "E";
    case NealRule::kProm: return "!";
  }
  return "?";
}

NealDerivation MakeNeal(NealRule rule, TypeMap ctx, EATerm term, Type type,
                        std::vector<NealDerivation> children) {
  return std::make_shared<const NealNode>(NealNode{
      rule, NealJudgement{std::move(ctx), std::move(term), std::move(type)},
      std::move(children)});
}

// ---------------------------------------------------------------------------
// Checking

namespace {

// Disjoint union of `parts` into out; false on a shared name.
bool DisjointUnion(const std::vector<const TypeMap *> &parts, TypeMap &out,
                   std::string &clash) {
  for (const TypeMap *p : parts) {
    for (const auto &[k, t] : *p) {
      if (!out.emplace(k, t).second) {
        clash = k;
        return false;
      }
    }
  }
  return true;
}

std::string CheckNealNode(const NealDerivation &d) {
  const NealJudgement &j = d->j;
  if (!j.term || !j.type) return "missing term or type";
  auto arity = [&](std::size_t n) -> std::string {
    if (d->children.size() != n) {
      return fmt::format("expected {} premises, found {}", n,
                         d->children.size());
    }
    return {};
  };
  std::string clash;
  switch (d->rule) {
    case NealRule::kAx: {
      if (auto e = arity(0); !e.empty()) return e;
      if (j.term->kind != EAKind::kVar) return "axiom term is not a variable";
      auto it = j.ctx.find(j.term->name);
      if (it == j.ctx.end()) return j.term->name + " is not in context";
      if (!TypeEq(it->second, j.type)) return "axiom type mismatch";
      return {};
    }
    case NealRule::kIntro: {
      if (auto e = arity(1); !e.empty()) return e;
      if (j.term->kind != EAKind::kAbs) return "term is not an abstraction";
      if (j.type->kind != TypeKind::kArrow) return "type is not an arrow";
      if (j.ctx.count(j.term->name)) return "binder already in context";
      const NealJudgement &c = d->children[0]->j;
      TypeMap want = j.ctx;
      want.emplace(j.term->name, j.type->left);
      if (!TypeMapEq(c.ctx, want)) return "premise context mismatch";
      if (!AlphaEq(c.term, j.term->left)) return "premise term mismatch";
      if (!TypeEq(c.type, j.type->right)) return "premise type mismatch";
      return {};
    }
    case NealRule::kElim: {
      if (auto e = arity(2); !e.empty()) return e;
      if (j.term->kind != EAKind::kApp) return "term is not an application";
      const NealJudgement &f = d->children[0]->j;
      const NealJudgement &a = d->children[1]->j;
      if (!AlphaEq(f.term, j.term->left) || !AlphaEq(a.term, j.term->right)) {
        return "premise term mismatch";
      }
      if (f.type->kind != TypeKind::kArrow || !TypeEq(f.type->left, a.type) ||
          !TypeEq(f.type->right, j.type)) {
        return fmt::format("cannot apply {} to {}", Print(f.type),
                           Print(a.type));
      }
      TypeMap u;
      if (!DisjointUnion({&f.ctx, &a.ctx}, u, clash)) {
        return "premise contexts share " + clash;
      }
      if (!TypeMapEq(u, j.ctx)) return "context is not the premises' union";
      return {};
    }
    case NealRule::kContr: {
      if (auto e = arity(2); !e.empty()) return e;
      if (j.term->kind != EAKind::kContr) return "term is not a contraction";
      const NealJudgement &m = d->children[0]->j;
      const NealJudgement &n = d->children[1]->j;
      if (!IsModal(m.type)) {
        return fmt::format("contracted type {} is not modal", Print(m.type));
      }
      if (!AlphaEq(m.term, j.term->right) || !AlphaEq(n.term, j.term->left)) {
        return "premise term mismatch";
      }
      const std::string &x = j.term->name;
      const std::string &y = j.term->name2;
      auto ix = n.ctx.find(x);
      auto iy = n.ctx.find(y);
      if (ix == n.ctx.end() || iy == n.ctx.end() ||
          !TypeEq(ix->second, m.type) || !TypeEq(iy->second, m.type)) {
        return fmt::format("body context lacks {}, {} : {}", x, y,
                           Print(m.type));
      }
      TypeMap psi = n.ctx;
      psi.erase(x);
      psi.erase(y);
      TypeMap u;
      if (!DisjointUnion({&m.ctx, &psi}, u, clash)) {
        return "premise contexts share " + clash;
      }
      if (!TypeMapEq(u, j.ctx)) return "context is not the premises' union";
      if (!TypeEq(n.type, j.type)) return "premise type mismatch";
      return {};
    }
    case NealRule::kProm: {
      if (j.term->kind != EAKind::kProm) return "term is not a promotion";
      const auto &bs = j.term->bindings;
      if (auto e = arity(bs.size() + 1); !e.empty()) return e;
      if (j.type->kind != TypeKind::kBang) return "type is not modal";
      const NealJudgement &body = d->children.back()->j;
      if (!AlphaEq(body.term, j.term->left)) return "body term mismatch";
      if (!TypeEq(body.type, j.type->left)) return "body type mismatch";
      TypeMap want;
      std::vector<const TypeMap *> parts;
      for (std::size_t i = 0; i < bs.size(); ++i) {
        const NealJudgement &m = d->children[i]->j;
        if (!AlphaEq(m.term, bs[i].arg)) return "argument term mismatch";
        if (!IsModal(m.type)) {
          return fmt::format("argument {} has linear type {}", i,
                             Print(m.type));
        }
        if (!want.emplace(bs[i].var, m.type->left).second) {
          return "repeated promotion binder " + bs[i].var;
        }
        parts.push_back(&m.ctx);
      }
      if (!TypeMapEq(body.ctx, want)) {
        return "body context must be exactly the promotion binders";
      }
      TypeMap u;
      if (!DisjointUnion(parts, u, clash)) {
        return "argument contexts share " + clash;
      }
      for (const auto &[k, t] : u) {
        auto it = j.ctx.find(k);
        if (it == j.ctx.end() || !TypeEq(it->second, t)) {
          return fmt::format("conclusion lacks {} : {}", k, Print(t));
        }
      }
      return {};
    }
  }
  return "unknown rule";
}

bool CheckNealRec(const NealDerivation &d, const std::string &where,
                  std::string &err) {
  if (!d) {
    err = where + ": missing node";
    return false;
  }
  if (auto e = CheckNealNode(d); !e.empty()) {
    err = fmt::format("{} ({}): {}", where, NealRuleName(d->rule), e);
    return false;
  }
  for (std::size_t i = 0; i < d->children.size(); ++i) {
    if (!CheckNealRec(d->children[i], fmt::format("{}.{}", where, i), err)) {
      return false;
    }
  }
  return true;
}

}  // namespace

NealCheckResult CheckNeal(const NealDerivation &d) {
  NealCheckResult r;
  r.ok = CheckNealRec(d, "root", r.error);
  return r;
}

// ---------------------------------------------------------------------------
// Text form

namespace {

void SerializeNealRec(const NealDerivation &d, int indent, std::string &out) {
  out += std::string(indent, ' ');
  std::string ctx = PrintMap(d->j.ctx);
  out += fmt::format("({} ({}|- {} : {})", NealRuleName(d->rule),
                     ctx.empty() ? "" : ctx + " ", Print(d->j.term),
                     Print(d->j.type));
  for (const auto &c : d->children) {
    out += '\n';
    SerializeNealRec(c, indent + 2, out);
  }
  out += ')';
}

NealDerivation ParseNealNode(TokenStream &ts) {
  ts.Expect(Tok::kLParen);
  NealRule rule;
  if (ts.Accept(Tok::kBang)) {
    rule = NealRule::kProm;
  } else {
    auto tok = ts.Expect(Tok::kIdent);
    static const std::map<std::string, NealRule, std::less<>> kRules = {
        {"A", NealRule::kAx},
        {"C", NealRule::kContr},
        {"I", NealRule::kIntro},
        {"E", NealRule::kElim}};
    auto it = kRules.find(tok.text);
    if (it == kRules.end()) {
      TokenStream::FailAt(tok, fmt::format("unknown rule {}", tok.text));
    }
    rule = it->second;
  }
  ts.Expect(Tok::kLParen);
  TypeMap ctx;
  if (!ts.At(Tok::kTurnstile)) {
    do {
      auto name = ts.Expect(Tok::kIdent);
      if (!detail::IsVarName(name.text)) {
        TokenStream::FailAt(name, "invalid variable " + name.text);
      }
      ts.Expect(Tok::kColon);
      if (!ctx.emplace(name.text, detail::ParseTypeFrom(ts, nullptr))
               .second) {
        TokenStream::FailAt(name, "duplicate variable " + name.text);
      }
    } while (ts.Accept(Tok::kComma));
  }
  ts.Expect(Tok::kTurnstile);
  EATerm term = detail::ParseEATermFrom(ts);
  ts.Expect(Tok::kColon);
  Type type = detail::ParseTypeFrom(ts, nullptr);
  ts.Expect(Tok::kRParen);
  std::vector<NealDerivation> children;
  while (ts.At(Tok::kLParen)) children.push_back(ParseNealNode(ts));
  ts.Expect(Tok::kRParen);
  return MakeNeal(rule, std::move(ctx), std::move(term), std::move(type),
                  std::move(children));
}

}  // namespace

std::string Serialize(const NealDerivation &d) {
  std::string out;
  SerializeNealRec(d, 0, out);
  return out;
}

NealDerivation ParseNealDerivation(std::string_view text) {
  TokenStream ts(detail::Lex(text));
  NealDerivation d = ParseNealNode(ts);
  ts.Expect(Tok::kEnd);
  return d;
}

// ---------------------------------------------------------------------------
// Translations

Term TranslateStar(const EATerm &m) {
  switch (m->kind) {
    case EAKind::kVar: return Var(m->name);
    case EAKind::kAbs: return Abs(m->name, TranslateStar(m->left));
    case EAKind::kApp:
      return App(TranslateStar(m->left), TranslateStar(m->right));
    case EAKind::kContr: {
      Term n = TranslateStar(m->right);
      return SubstituteAll(TranslateStar(m->left),
                           {{m->name, n}, {m->name2, n}});
    }
    case EAKind::kProm: {
      std::map<std::string, Term> s;
      for (const auto &b : m->bindings) s.emplace(b.var, TranslateStar(b.arg));
      return SubstituteAll(TranslateStar(m->left), s);
    }
  }
  return nullptr;
}

namespace {

// Introduced binders carry a '#' so SharpToStar can find their redexes.
class Sharp {
 public:
  explicit Sharp(bool mark) : mark_(mark) {}

  Term Run(const EATerm &m) {
    switch (m->kind) {
      case EAKind::kVar: return Var(m->name);
      case EAKind::kAbs: return Abs(m->name, Run(m->left));
      case EAKind::kApp: return App(Run(m->left), Run(m->right));
      case EAKind::kContr: {
        Term body = Run(m->left);
        if (m->right->kind == EAKind::kVar) {
          Term v = Var(m->right->name);
          return SubstituteAll(body, {{m->name, v}, {m->name2, v}});
        }
        std::set<std::string> names;
        CollectNames(body, names);
        std::string z = Binder(FreshAvoiding("z", names));
        Term zv = Var(z);
        return App(Abs(z, SubstituteAll(body, {{m->name, zv},
                                               {m->name2, zv}})),
                   Run(m->right));
      }
      case EAKind::kProm: return Prom(m, 0);
    }
    return nullptr;
  }

 private:
  std::string Binder(const std::string &base) {
    return mark_ ? fmt::format("{}#{}", base, counter_++) : base;
  }

  Term Prom(const EATerm &m, std::size_t i) {
    if (i == m->bindings.size()) return Run(m->left);
    const EABinding &b = m->bindings[i];
    Term rest = Prom(m, i + 1);
    if (b.arg->kind == EAKind::kVar) {
      return Substitute(rest, b.var, Var(b.arg->name));
    }
    std::string x = Binder(b.var);
    if (x != b.var) rest = Substitute(rest, b.var, Var(x));
    return App(Abs(x, rest), Run(b.arg));
  }

  bool mark_;
  int counter_ = 0;
};

bool FindMarked(const Term &t, Path &p) {
  if (t->kind == TermKind::kApp && t->left->kind == TermKind::kAbs &&
      t->left->name.find('#') != std::string::npos) {
    return true;
  }
  if (t->kind == TermKind::kApp) {
    p.push_back(0);
    if (FindMarked(t->left, p)) return true;
    p.back() = 1;
    if (FindMarked(t->right, p)) return true;
    p.pop_back();
  } else if (t->kind == TermKind::kAbs) {
    p.push_back(0);
    if (FindMarked(t->left, p)) return true;
    p.pop_back();
  }
  return false;
}

}  // namespace

Term TranslateSharp(const EATerm &m) { return Sharp(false).Run(m); }

std::vector<Term> SharpToStar(const EATerm &m) {
  std::vector<Term> seq{Sharp(true).Run(m)};
  while (true) {
    Path p;
    if (!FindMarked(seq.back(), p)) return seq;
    seq.push_back(ContractAt(seq.back(), p));
  }
}

// ---------------------------------------------------------------------------
// Normalization rules

namespace {

class StepCollector {
 public:
  StepCollector(const EATerm &root, std::vector<EAStep> &out)
      : root_(root), out_(out) {
    std::set<std::string> names;
    CollectNames(root, names);
    base_ = NameSupply(std::move(names));
  }

  void Walk(const EATerm &t, Path &p) {
    Local(t, p);
    switch (t->kind) {
      case EAKind::kVar: break;
      case EAKind::kAbs:
        p.push_back(0);
        Walk(t->left, p);
        p.pop_back();
        break;
      case EAKind::kApp:
      case EAKind::kContr:
        p.push_back(0);
        Walk(t->left, p);
        p.back() = 1;
        Walk(t->right, p);
        p.pop_back();
        break;
      case EAKind::kProm:
        p.push_back(0);
        Walk(t->left, p);
        for (std::size_t i = 0; i < t->bindings.size(); ++i) {
          p.back() = static_cast<int>(i) + 1;
          Walk(t->bindings[i].arg, p);
        }
        p.pop_back();
        break;
    }
  }

 private:
  void Emit(const char *rule, const Path &p, EATerm r) {
    out_.push_back({rule, p, ReplaceAt(root_, p, std::move(r))});
  }

  void Local(const EATerm &t, const Path &p) {
    switch (t->kind) {
      case EAKind::kApp: {
        if (t->left->kind == EAKind::kAbs) {
          Emit("beta", p,
               Substitute(t->left->left, t->left->name, t->right));
        }
        if (t->left->kind == EAKind::kContr) {
          const EATerm &c = t->left;
          NameSupply s = base_;
          std::string a = s.Fresh(c->name), b = s.Fresh(c->name2);
          Emit("@-c", p,
               EContr(EApp(Rename(c->left, {{c->name, a}, {c->name2, b}}),
                           t->right),
                      c->right, a, b));
        }
        if (t->right->kind == EAKind::kContr) {
          const EATerm &c = t->right;
          NameSupply s = base_;
          std::string a = s.Fresh(c->name), b = s.Fresh(c->name2);
          Emit("@-c", p,
               EContr(EApp(t->left,
                           Rename(c->left, {{c->name, a}, {c->name2, b}})),
                      c->right, a, b));
        }
        break;
      }
      case EAKind::kContr: {
        if (t->right->kind == EAKind::kProm && BoxIsClosed(t->right)) {
          Dup(t, p);
        }
        if (t->right->kind == EAKind::kContr) {
          const EATerm &c = t->right;
          NameSupply s = base_;
          std::string a = s.Fresh(c->name), b = s.Fresh(c->name2);
          Emit("c-c", p,
               EContr(EContr(t->left,
                             Rename(c->left, {{c->name, a}, {c->name2, b}}),
                             t->name, t->name2),
                      c->right, a, b));
        }
        break;
      }
      case EAKind::kProm: {
        for (std::size_t i = 0; i < t->bindings.size(); ++i) {
          const EATerm &arg = t->bindings[i].arg;
          if (arg->kind == EAKind::kProm) BangBang(t, i, p);
          if (arg->kind == EAKind::kContr) {
            NameSupply s = base_;
            std::string a = s.Fresh(arg->name), b = s.Fresh(arg->name2);
            auto bs = t->bindings;
            bs[i].arg = Rename(arg->left, {{arg->name, a}, {arg->name2, b}});
            Emit("!-c", p, EContr(EProm(t->left, bs), arg->right, a, b));
          }
        }
        break;
      }
      case EAKind::kAbs: {
        const EATerm &c = t->left;
        if (c->kind != EAKind::kContr || IsFreeIn(t->name, c->right)) break;
        EATerm body = c->left;
        std::string a = c->name, b = c->name2;
        if (a == t->name || b == t->name) {
          NameSupply s = base_;
          a = s.Fresh(a);
          b = s.Fresh(b);
          body = Rename(body, {{c->name, a}, {c->name2, b}});
        }
        Emit("lambda-c", p, EContr(EAbs(t->name, body), c->right, a, b));
        break;
      }
      case EAKind::kVar: break;
    }
  }

  static bool BoxIsClosed(const EATerm &box) {
    std::set<std::string> binders;
    for (const auto &b : box->bindings) binders.insert(b.var);
    for (const auto &v : FreeVars(box->left)) {
      if (!binders.count(v)) return false;
    }
    return true;
  }

  static bool IsFreeIn(const std::string &x, const EATerm &t) {
    return FreeVars(t).count(x) > 0;
  }

  void Dup(const EATerm &t, const Path &p) {
    const EATerm &box = t->right;
    NameSupply s = base_;
    std::vector<EABinding> first, second;
    std::map<std::string, std::string> copy_names;
    std::vector<std::pair<std::string, std::string>> args;
    for (const auto &b : box->bindings) {
      std::string x1 = s.Fresh(b.var), y1 = s.Fresh(b.var);
      std::string y = s.Fresh(b.var);
      first.push_back({EVar(x1), b.var});
      second.push_back({EVar(y1), y});
      copy_names.emplace(b.var, y);
      args.emplace_back(x1, y1);
    }
    EATerm copy = Rename(box->left, copy_names);
    EATerm r = Substitute(t->left, t->name, EProm(box->left, first));
    r = Substitute(r, t->name2, EProm(copy, second));
    for (std::size_t i = 0; i < args.size(); ++i) {
      r = EContr(r, box->bindings[i].arg, args[i].first, args[i].second);
    }
    Emit("dup", p, r);
  }

  void BangBang(const EATerm &t, std::size_t i, const Path &p) {
    const EATerm &inner = t->bindings[i].arg;
    NameSupply s = base_;
    std::set<std::string> avoid;
    CollectNames(t->left, avoid);
    for (std::size_t k = 0; k < t->bindings.size(); ++k) {
      if (k != i) avoid.insert(t->bindings[k].var);
    }
    EATerm n = inner->left;
    std::vector<EABinding> lifted;
    for (const auto &c : inner->bindings) {
      std::string v = c.var;
      if (avoid.count(v)) {
        v = s.Fresh(v);
        n = Rename(n, {{c.var, v}});
      }
      avoid.insert(v);
      lifted.push_back({c.arg, v});
    }
    std::vector<EABinding> bs;
    for (std::size_t k = 0; k < t->bindings.size(); ++k) {
      if (k == i) {
        bs.insert(bs.end(), lifted.begin(), lifted.end());
      } else {
        bs.push_back(t->bindings[k]);
      }
    }
    Emit("!-!", p, EProm(Substitute(t->left, t->bindings[i].var, n), bs));
  }

  EATerm root_;
  std::vector<EAStep> &out_;
  NameSupply base_;
};

}  // namespace

std::vector<EAStep> EASteps(const EATerm &m) {
  std::vector<EAStep> out;
  StepCollector c(m, out);
  Path p;
  c.Walk(m, p);
  return out;
}

bool IsExpansion(const EATerm &m) {
  if (m->kind == EAKind::kProm) {
    for (const auto &b : m->bindings) {
      if (b.arg->kind != EAKind::kVar) return false;
    }
    return true;
  }
  return m->kind == EAKind::kContr && m->right->kind == EAKind::kVar &&
         IsExpansion(m->left);
}

// ---------------------------------------------------------------------------
// NEAL to ETAS

namespace {

Context Split(const TypeMap &phi) {
  Context c;
  for (const auto &[k, t] : phi) (IsModal(t) ? c.delta : c.gamma).emplace(k, t);
  return c;
}

Context ModalPart(const Context &c) {
  Context out;
  out.delta = c.delta;
  return out;
}

std::set<std::string> DerivationNames(const Derivation &d) {
  std::set<std::string> out;
  CollectNames(d, out);
  return out;
}

Derivation ToEtas(const NealDerivation &d) {
  const NealJudgement &j = d->j;
  Context ctx = Split(j.ctx);
  switch (d->rule) {
    case NealRule::kAx:
      return MakeDerivation(IsModal(j.type) ? Rule::kAI : Rule::kAL, ctx,
                            Var(j.term->name), j.type);
    case NealRule::kIntro: {
      Derivation c = ToEtas(d->children[0]);
      Rule r = IsModal(j.type->left) ? Rule::kII : Rule::kIL;
      return MakeDerivation(r, ctx, Abs(j.term->name, c->j.term), j.type, {c});
    }
    case NealRule::kElim: {
      Derivation f = ToEtas(d->children[0]);
      Derivation a = ToEtas(d->children[1]);
      Derivation fw = Weaken(f, ModalPart(a->j.ctx));
      Derivation aw = Weaken(a, ModalPart(f->j.ctx));
      return MakeDerivation(Rule::kE, ctx, App(fw->j.term, aw->j.term),
                            j.type, {fw, aw});
    }
    case NealRule::kContr: {
      Derivation m = ToEtas(d->children[0]);
      Derivation n = ToEtas(d->children[1]);
      const std::string &x = j.term->name;
      const std::string &y = j.term->name2;
      if (j.term->right->kind == EAKind::kVar) {
        Derivation c = Contract(n, x, y, j.term->right->name);
        return WeakenTo(c, ctx);
      }
      auto avoid = DerivationNames(m);
      auto more = DerivationNames(n);
      avoid.insert(more.begin(), more.end());
      std::string z = FreshAvoiding("z", avoid);
      Derivation c = Contract(n, x, y, z);
      Context abs_ctx = c->j.ctx;
      abs_ctx.delta.erase(z);
      Derivation abs =
          MakeDerivation(Rule::kII, abs_ctx, Abs(z, c->j.term),
                         Arrow(m->j.type, j.type), {c});
      Derivation fw = Weaken(abs, ModalPart(m->j.ctx));
      Derivation aw = Weaken(m, ModalPart(abs->j.ctx));
      return MakeDerivation(Rule::kE, ctx, App(fw->j.term, aw->j.term),
                            j.type, {fw, aw});
    }
    case NealRule::kProm: {
      const auto &bs = j.term->bindings;
      Derivation body = ToEtas(d->children.back());
      std::vector<std::string> xs;
      auto avoid = DerivationNames(body);
      for (const auto &[k, t] : j.ctx) avoid.insert(k);
      for (const auto &b : bs) {
        std::string x = b.var;
        if (j.ctx.count(x)) {
          x = FreshAvoiding(x, avoid);
          avoid.insert(x);
          body = RenameFree(body, b.var, x);
        }
        xs.push_back(x);
      }
      Context bctx;
      for (const auto &[k, t] : body->j.ctx.gamma) bctx.delta.emplace(k, Bang(t));
      for (const auto &[k, t] : body->j.ctx.delta) bctx.delta.emplace(k, Bang(t));
      Derivation cur = MakeDerivation(Rule::kBang, bctx, body->j.term, j.type,
                                      {body});
      for (std::size_t k = bs.size(); k-- > 0;) {
        Derivation arg = ToEtas(d->children[k]);
        if (bs[k].arg->kind == EAKind::kVar) {
          const std::string &v = bs[k].arg->name;
          cur = RenameFree(cur, xs[k], v);
          Context rest = arg->j.ctx;
          rest.delta.erase(v);
          cur = Weaken(cur, rest);
          continue;
        }
        Context abs_ctx = cur->j.ctx;
        Type xt = abs_ctx.delta.at(xs[k]);
        abs_ctx.delta.erase(xs[k]);
        Derivation abs = MakeDerivation(Rule::kII, abs_ctx,
                                        Abs(xs[k], cur->j.term),
                                        Arrow(xt, cur->j.type), {cur});
        Derivation fw = Weaken(abs, ModalPart(arg->j.ctx));
        Derivation aw = Weaken(arg, ModalPart(abs->j.ctx));
        Context e_ctx = fw->j.ctx;
        for (const auto &[v, t] : aw->j.ctx.gamma) e_ctx.gamma.emplace(v, t);
        cur = MakeDerivation(Rule::kE, e_ctx, App(fw->j.term, aw->j.term),
                             cur->j.type, {fw, aw});
      }
      return WeakenTo(cur, ctx);
    }
  }
  return nullptr;
}

}  // namespace

Derivation NealToEtas(const NealDerivation &d) {
  auto r = CheckNeal(d);
  if (!r.ok) throw DerivationError("invalid NEAL derivation: " + r.error);
  return ToEtas(d);
}

// ---------------------------------------------------------------------------
// ETAS to NEAL

namespace {

NealDerivation NealRename(const NealDerivation &d, const std::string &from,
                          const std::string &to) {
  auto it = d->j.ctx.find(from);
  if (it == d->j.ctx.end()) return d;
  TypeMap ctx = d->j.ctx;
  ctx.emplace(to, it->second);
  ctx.erase(from);
  std::vector<NealDerivation> ch;
  std::size_t n = d->children.size();
  for (std::size_t i = 0; i < n; ++i) {
    // The body of a promotion only sees its binders.
    bool body = d->rule == NealRule::kProm && i + 1 == n;
    ch.push_back(body ? d->children[i] : NealRename(d->children[i], from, to));
  }
  return MakeNeal(d->rule, std::move(ctx), Rename(d->j.term, {{from, to}}),
                  d->j.type, std::move(ch));
}

NealDerivation NealWeaken(const NealDerivation &d, const TypeMap &extra) {
  if (extra.empty()) return d;
  TypeMap ctx = d->j.ctx;
  for (const auto &[k, t] : extra) {
    if (!ctx.emplace(k, t).second) {
      throw DerivationError("cannot weaken by " + k + ": in use");
    }
  }
  auto ch = d->children;
  switch (d->rule) {
    case NealRule::kAx:
    case NealRule::kProm: break;
    case NealRule::kIntro:
      if (extra.count(d->j.term->name)) {
        throw DerivationError("weakening clashes with a binder");
      }
      ch[0] = NealWeaken(ch[0], extra);
      break;
    case NealRule::kElim: ch[0] = NealWeaken(ch[0], extra); break;
    case NealRule::kContr:
      if (extra.count(d->j.term->name) || extra.count(d->j.term->name2)) {
        throw DerivationError("weakening clashes with a binder");
      }
      ch[1] = NealWeaken(ch[1], extra);
      break;
  }
  return MakeNeal(d->rule, std::move(ctx), d->j.term, d->j.type,
                  std::move(ch));
}

NealDerivation NealAxiom(const std::string &x, const Type &t) {
  return MakeNeal(NealRule::kAx, {{x, t}}, EVar(x), t);
}

// Wraps `cur` in a contraction of a and b with the variable `into`.
NealDerivation ContractInto(const NealDerivation &cur, const std::string &a,
                            const std::string &b, const std::string &into) {
  Type t = cur->j.ctx.at(a);
  TypeMap ctx = cur->j.ctx;
  ctx.erase(a);
  ctx.erase(b);
  ctx.emplace(into, t);
  return MakeNeal(NealRule::kContr, std::move(ctx),
                  EContr(cur->j.term, EVar(into), a, b), cur->j.type,
                  {NealAxiom(into, t), cur});
}

class ToNeal {
 public:
  explicit ToNeal(const Derivation &root) {
    std::set<std::string> names;
    CollectNames(root, names);
    supply_ = NameSupply(std::move(names));
  }

  struct Out {
    NealDerivation d;
    // Occurrence copy -> parked variable it stands for.
    std::map<std::string, std::string> copies;
  };

  Out Run(const Derivation &e) {
    const Judgement &j = e->j;
    switch (e->rule) {
      case Rule::kAL:
      case Rule::kAI: return {NealAxiom(j.term->name, j.type), {}};
      case Rule::kAP: {
        std::string c = supply_.Fresh(j.term->name);
        return {NealAxiom(c, j.type), {{c, j.term->name}}};
      }
      case Rule::kConst:
        throw DerivationError("constants have no EA-term counterpart");
      case Rule::kIL:
      case Rule::kII: {
        Out c = Run(e->children[0]);
        const std::string &x = j.term->name;
        NealDerivation body = c.d;
        if (!body->j.ctx.count(x)) {
          body = NealWeaken(body, {{x, j.type->left}});
        }
        TypeMap ctx = body->j.ctx;
        ctx.erase(x);
        c.d = MakeNeal(NealRule::kIntro, std::move(ctx),
                       EAbs(x, body->j.term), j.type, {body});
        return c;
      }
      case Rule::kE: {
        Out f = Run(e->children[0]);
        Out a = Run(e->children[1]);
        std::vector<std::string> shared;
        for (const auto &[k, t] : f.d->j.ctx) {
          if (a.d->j.ctx.count(k)) shared.push_back(k);
        }
        std::vector<std::array<std::string, 3>> merges;
        for (const auto &v : shared) {
          std::string l = supply_.Fresh(v), r = supply_.Fresh(v);
          f.d = NealRename(f.d, v, l);
          a.d = NealRename(a.d, v, r);
          merges.push_back({l, r, v});
        }
        TypeMap ctx = f.d->j.ctx;
        ctx.insert(a.d->j.ctx.begin(), a.d->j.ctx.end());
        Out out;
        out.d = MakeNeal(NealRule::kElim, std::move(ctx),
                         EApp(f.d->j.term, a.d->j.term), j.type, {f.d, a.d});
        for (const auto &[l, r, v] : merges) {
          out.d = ContractInto(out.d, l, r, v);
        }
        out.copies = f.copies;
        out.copies.insert(a.copies.begin(), a.copies.end());
        return out;
      }
      case Rule::kBang: {
        Out c = Run(e->children[0]);
        std::vector<EABinding> bs;
        std::vector<NealDerivation> premises;
        std::map<std::string, std::vector<std::string>> pending;
        TypeMap ctx;
        for (const auto &[u, t] : c.d->j.ctx) {
          auto it = c.copies.find(u);
          std::string arg = u;
          if (it != c.copies.end()) {
            arg = supply_.Fresh(it->second);
            pending[it->second].push_back(arg);
          }
          bs.push_back({EVar(arg), u});
          premises.push_back(NealAxiom(arg, Bang(t)));
          ctx.emplace(arg, Bang(t));
        }
        premises.push_back(c.d);
        Out out;
        out.d = MakeNeal(NealRule::kProm, std::move(ctx),
                         EProm(c.d->j.term, bs), j.type, std::move(premises));
        for (auto &[x, args] : pending) {
          if (args.size() == 1) {
            out.d = NealRename(out.d, args[0], x);
            continue;
          }
          while (args.size() > 2) {
            std::string b = supply_.Fresh(x);
            out.d = ContractInto(out.d, args[args.size() - 2], args.back(), b);
            args.resize(args.size() - 2);
            args.push_back(b);
          }
          out.d = ContractInto(out.d, args[0], args[1], x);
        }
        return out;
      }
    }
    return {};
  }

 private:
  NameSupply supply_;
};

}  // namespace

EtasToNealResult EtasToNeal(const Derivation &d) {
  if (!d->j.ctx.theta.empty()) {
    throw DerivationError("root has a nonempty parking zone");
  }
  auto check = CheckEtas(d);
  if (!check.ok) throw DerivationError("invalid derivation: " + check.error);
  ToNeal conv(d);
  ToNeal::Out out = conv.Run(d);
  TypeMap extra;
  for (const TypeMap *m : {&d->j.ctx.gamma, &d->j.ctx.delta}) {
    for (const auto &[k, t] : *m) {
      if (!out.d->j.ctx.count(k)) extra.emplace(k, t);
    }
  }
  NealDerivation nd = NealWeaken(out.d, extra);
  return {nd->j.term, nd};
}

// ---------------------------------------------------------------------------
// Simulation

SimulateResult SimulateCbv(const EATerm &m, std::size_t budget,
                           std::size_t max_states) {
  SimulateResult res;
  auto st = Step(TranslateSharp(m), Strategy::kCbv);
  if (!st) return res;
  res.target = st->result;
  struct State {
    EATerm term;
    std::size_t parent;
    std::string rule;
    std::size_t depth;
  };
  std::vector<State> states{{m, 0, "", 0}};
  std::unordered_map<std::string, std::size_t> seen{{CanonicalKey(m), 0}};
  std::deque<std::size_t> queue{0};
  auto finish = [&](std::size_t idx) {
    std::vector<std::size_t> chain;
    for (std::size_t i = idx; i != 0; i = states[i].parent) chain.push_back(i);
    res.sequence.push_back(m);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      res.sequence.push_back(states[*it].term);
      res.rules.push_back(states[*it].rule);
    }
    res.status = SimulateResult::Status::kFound;
  };
  bool truncated = false;
  while (!queue.empty()) {
    std::size_t cur = queue.front();
    queue.pop_front();
    ++res.explored;
    if (states[cur].depth >= budget) {
      truncated = true;
      continue;
    }
    for (auto &s : EASteps(states[cur].term)) {
      if (AlphaEq(TranslateSharp(s.result), res.target)) {
        states.push_back({s.result, cur, s.rule, states[cur].depth + 1});
        finish(states.size() - 1);
        return res;
      }
      auto key = CanonicalKey(s.result);
      if (seen.count(key)) continue;
      if (states.size() >= max_states) {
        truncated = true;
        continue;
      }
      seen.emplace(key, states.size());
      states.push_back({s.result, cur, s.rule, states[cur].depth + 1});
      queue.push_back(states.size() - 1);
    }
  }
  res.status = truncated ? SimulateResult::Status::kBudgetExhausted
                         : SimulateResult::Status::kNotFound;
  return res;
}

}  // namespace lightlam
