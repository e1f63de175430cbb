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

#include "lightlam/etas.h"

#include <fmt/format.h>

#include <algorithm>
#include <functional>

#include "lexer.h"

namespace lightlam {

namespace {

using detail::Tok;
using detail::TokenStream;

bool IsLinear(const Type &t) { return !IsModal(t); }

std::set<std::string> Dom(const Context &c) {
  std::set<std::string> out;
  for (const TypeMap *m : {&c.gamma, &c.delta, &c.theta}) {
    for (const auto &[k, v] : *m) out.insert(k);
  }
  return out;
}

TypeMap &ZoneMap(Context &c, Zone z) {
  switch (z) {
    case Zone::kGamma: return c.gamma;
    case Zone::kDelta: return c.delta;
    default: return c.theta;
  }
}

const TypeMap &ZoneMap(const Context &c, Zone z) {
  return ZoneMap(const_cast<Context &>(c), z);
}

bool Empty(const Context &c) {
  return c.gamma.empty() && c.delta.empty() && c.theta.empty();
}

Context Without(Context c, const std::string &x) {
  c.gamma.erase(x);
  c.delta.erase(x);
  c.theta.erase(x);
  return c;
}

// Union of two contexts; shared names must agree on zone and type.
Context Union(const Context &a, const Context &b) {
  Context out = a;
  for (Zone z : {Zone::kGamma, Zone::kDelta, Zone::kTheta}) {
    for (const auto &[k, t] : ZoneMap(b, z)) {
      Zone za = ZoneOf(a, k);
      if (za == Zone::kNone) {
        ZoneMap(out, z).emplace(k, t);
      } else if (za != z || !TypeEq(ZoneMap(a, z).at(k), t)) {
        throw DerivationError(
            fmt::format("contexts disagree on variable {}", k));
      }
    }
  }
  return out;
}

std::set<std::string> AllNames(const Derivation &d) {
  std::set<std::string> out;
  CollectNames(d, out);
  return out;
}

std::string FreshAvoiding(const std::string &hint,
                          const std::set<std::string> &avoid) {
  return PrimeFresh(hint, [&](const std::string &s) {
    return avoid.count(s) == 0;
  });
}

const Derivation &Child(const Derivation &d, std::size_t i) {
  if (i >= d->children.size()) {
    throw DerivationError(fmt::format("{} node lacks premise {}",
                                      RuleName(d->rule), i));
  }
  return d->children[i];
}

const std::string &Binder(const Derivation &d) {
  if (d->j.term->kind != TermKind::kAbs) {
    throw DerivationError("introduction node without an abstraction");
  }
  return d->j.term->name;
}

// The term of a node recomputed from its premises.
Term NodeTerm(const Derivation &d, const std::vector<Derivation> &ch,
              const std::string &binder = {}) {
  switch (d->rule) {
    case Rule::kIL:
    case Rule::kII:
      return Abs(binder.empty() ? d->j.term->name : binder, ch[0]->j.term);
    case Rule::kE: return App(ch[0]->j.term, ch[1]->j.term);
    case Rule::kBang: return ch[0]->j.term;
    default: return d->j.term;
  }
}

Derivation Rebuild(const Derivation &d, Context ctx,
                   std::vector<Derivation> ch) {
  Term t = NodeTerm(d, ch);
  return MakeDerivation(d->rule, std::move(ctx), std::move(t), d->j.type,
                        std::move(ch));
}

// Renames the binder of an introduction node.
Derivation RenameBinder(const Derivation &d, const std::string &to) {
  const std::string &b = Binder(d);
  Derivation child = RenameFree(Child(d, 0), b, to);
  return MakeDerivation(d->rule, d->j.ctx, Abs(to, child->j.term), d->j.type,
                        {child});
}

bool IsAxiom(Rule r) {
  return r == Rule::kAL || r == Rule::kAP || r == Rule::kAI ||
         r == Rule::kConst;
}

std::size_t Arity(Rule r) {
  switch (r) {
    case Rule::kIL:
    case Rule::kII:
    case Rule::kBang: return 1;
    case Rule::kE: return 2;
    default: return 0;
  }
}

}  // namespace

Zone ZoneOf(const Context &c, const std::string &x) {
  if (c.gamma.count(x)) return Zone::kGamma;
  if (c.delta.count(x)) return Zone::kDelta;
  if (c.theta.count(x)) return Zone::kTheta;
  return Zone::kNone;
}

const Type *Lookup(const Context &c, const std::string &x) {
  for (const TypeMap *m : {&c.gamma, &c.delta, &c.theta}) {
    auto it = m->find(x);
    if (it != m->end()) return &it->second;
  }
  return nullptr;
}

bool TypeMapEq(const TypeMap &a, const TypeMap &b) {
  if (a.size() != b.size()) return false;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
    if (ia->first != ib->first || !TypeEq(ia->second, ib->second)) {
      return false;
    }
  }
  return true;
}

bool ContextEq(const Context &a, const Context &b) {
  return TypeMapEq(a.gamma, b.gamma) && TypeMapEq(a.delta, b.delta) &&
         TypeMapEq(a.theta, b.theta);
}

std::string_view RuleName(Rule r) {
  switch (r) {
    case Rule::kAL: return "AL";
    case Rule::kAP: return "AP";
    case Rule::kAI: return "AI";
    case Rule::kIL: return "IL";
    case Rule::kII: return "II";
    case Rule::kE: return "E";
    case Rule::kBang: return "!";
    case Rule::kConst: return "Const";
  }
  return "?";
}

Derivation MakeDerivation(Rule rule, Context ctx, Term term, Type type,
                          std::vector<Derivation> children) {
  return std::make_shared<const DerivationNode>(DerivationNode{
      rule, Judgement{std::move(ctx), std::move(term), std::move(type)},
      std::move(children)});
}

// ---------------------------------------------------------------------------
// Checking

namespace {

std::string CheckContext(const Context &c) {
  std::set<std::string> seen;
  for (Zone z : {Zone::kGamma, Zone::kDelta, Zone::kTheta}) {
    for (const auto &[k, t] : ZoneMap(c, z)) {
      if (!seen.insert(k).second) {
        return fmt::format("variable {} occurs in two zones", k);
      }
      if (z == Zone::kDelta && !IsModal(t)) {
        return fmt::format("modal zone holds {} at linear type {}", k,
                           Print(t));
      }
      if (z != Zone::kDelta && !IsLinear(t)) {
        return fmt::format("linear zone holds {} at modal type {}", k,
                           Print(t));
      }
    }
  }
  return {};
}

std::string CheckNode(const Derivation &d) {
  const Judgement &j = d->j;
  if (!j.term || !j.type) return "missing term or type";
  if (d->children.size() != Arity(d->rule)) {
    return fmt::format("expected {} premises, found {}", Arity(d->rule),
                       d->children.size());
  }
  if (std::string e = CheckContext(j.ctx); !e.empty()) return e;
  auto axiom = [&](const TypeMap &zone, const char *what) -> std::string {
    if (j.term->kind != TermKind::kVar) return "axiom term is not a variable";
    auto it = zone.find(j.term->name);
    if (it == zone.end()) {
      return fmt::format("{} is not in the {} zone", j.term->name, what);
    }
    if (!TypeEq(it->second, j.type)) {
      return fmt::format("{} has type {}, not {}", j.term->name,
                         Print(it->second), Print(j.type));
    }
    return {};
  };
  switch (d->rule) {
    case Rule::kAL: return axiom(j.ctx.gamma, "linear");
    case Rule::kAP: return axiom(j.ctx.theta, "parking");
    case Rule::kAI: return axiom(j.ctx.delta, "modal");
    case Rule::kConst: {
      if (j.term->kind != TermKind::kConst) return "not a constant";
      if (!MatchConstantType(*j.term->constant, j.type)) {
        return fmt::format("{} cannot have type {}", j.term->constant->name,
                           Print(j.type));
      }
      return {};
    }
    case Rule::kIL:
    case Rule::kII: {
      if (j.term->kind != TermKind::kAbs) return "term is not an abstraction";
      if (j.type->kind != TypeKind::kArrow) return "type is not an arrow";
      const std::string &x = j.term->name;
      const Type &a = j.type->left;
      bool modal = d->rule == Rule::kII;
      if (modal != IsModal(a)) {
        return fmt::format("binder type {} is {}", Print(a),
                           modal ? "linear" : "modal");
      }
      if (ZoneOf(j.ctx, x) != Zone::kNone) {
        return fmt::format("binder {} already in context", x);
      }
      const Judgement &c = d->children[0]->j;
      Context want = j.ctx;
      (modal ? want.delta : want.gamma).emplace(x, a);
      if (!ContextEq(c.ctx, want)) return "premise context mismatch";
      if (!AlphaEq(c.term, j.term->left)) return "premise term mismatch";
      if (!TypeEq(c.type, j.type->right)) return "premise type mismatch";
      return {};
    }
    case Rule::kE: {
      if (j.term->kind != TermKind::kApp) return "term is not an application";
      const Judgement &f = d->children[0]->j;
      const Judgement &a = d->children[1]->j;
      if (!AlphaEq(f.term, j.term->left) || !AlphaEq(a.term, j.term->right)) {
        return "premise term mismatch";
      }
      if (f.type->kind != TypeKind::kArrow ||
          !TypeEq(f.type->left, a.type) || !TypeEq(f.type->right, j.type)) {
        return fmt::format("cannot apply {} to {}", Print(f.type),
                           Print(a.type));
      }
      if (!TypeMapEq(f.ctx.delta, j.ctx.delta) ||
          !TypeMapEq(a.ctx.delta, j.ctx.delta) ||
          !TypeMapEq(f.ctx.theta, j.ctx.theta) ||
          !TypeMapEq(a.ctx.theta, j.ctx.theta)) {
        return "premises must share modal and parking zones";
      }
      TypeMap g = f.ctx.gamma;
      for (const auto &[k, t] : a.ctx.gamma) {
        if (!g.emplace(k, t).second) {
          return fmt::format("linear variable {} used in both premises", k);
        }
      }
      if (!TypeMapEq(g, j.ctx.gamma)) return "linear zone is not the split";
      return {};
    }
    case Rule::kBang: {
      if (j.type->kind != TypeKind::kBang) return "type is not modal";
      const Judgement &c = d->children[0]->j;
      if (!AlphaEq(c.term, j.term)) return "premise term mismatch";
      if (!TypeEq(c.type, j.type->left)) return "premise type mismatch";
      for (Zone z : {Zone::kGamma, Zone::kDelta, Zone::kTheta}) {
        for (const auto &[k, t] : ZoneMap(c.ctx, z)) {
          auto it = j.ctx.delta.find(k);
          if (it == j.ctx.delta.end() || !TypeEq(it->second, Bang(t))) {
            return fmt::format("conclusion lacks {} : {}", k,
                               Print(Bang(t)));
          }
        }
      }
      return {};
    }
  }
  return "unknown rule";
}

bool CheckRec(const Derivation &d, const std::string &where,
              std::string &err) {
  if (!d) {
    err = fmt::format("{}: missing node", where);
    return false;
  }
  if (std::string e = CheckNode(d); !e.empty()) {
    err = fmt::format("{} ({}): {}", where, RuleName(d->rule), e);
    return false;
  }
  for (std::size_t i = 0; i < d->children.size(); ++i) {
    if (!CheckRec(d->children[i], fmt::format("{}.{}", where, i), err)) {
      return false;
    }
  }
  return true;
}

}  // namespace

CheckResult CheckEtas(const Derivation &d) {
  CheckResult r;
  r.ok = CheckRec(d, "root", r.error);
  r.typing_judgement = r.ok && d->j.ctx.theta.empty();
  return r;
}

// ---------------------------------------------------------------------------
// Measures

std::uint64_t LevelProfile::Total() const {
  std::uint64_t s = 0;
  for (auto v : sizes) s += v;
  return s;
}

namespace {

std::vector<std::uint64_t> SizesOf(const Derivation &d) {
  switch (d->rule) {
    case Rule::kAL:
    case Rule::kAP:
    case Rule::kConst: return {1};
    case Rule::kAI: {
      std::vector<std::uint64_t> s(LeadingBangs(d->j.type) + 1, 0);
      s.back() = 1;
      return s;
    }
    case Rule::kIL:
    case Rule::kII: {
      auto s = SizesOf(d->children[0]);
      s[0] += 1;
      return s;
    }
    case Rule::kE: {
      auto a = SizesOf(d->children[0]);
      auto b = SizesOf(d->children[1]);
      if (a.size() < b.size()) a.resize(b.size(), 0);
      for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
      a[0] += 1;
      return a;
    }
    case Rule::kBang: {
      auto s = SizesOf(d->children[0]);
      s.insert(s.begin(), 0);
      return s;
    }
  }
  return {};
}

}  // namespace

LevelProfile Measures(const Derivation &d) {
  LevelProfile p;
  p.sizes = SizesOf(d);
  while (p.sizes.size() > 1 && p.sizes.back() == 0) p.sizes.pop_back();
  p.level = static_cast<int>(p.sizes.size()) - 1;
  return p;
}

std::size_t CountNodes(const Derivation &d) {
  std::size_t n = 1;
  for (const auto &c : d->children) n += CountNodes(c);
  return n;
}

void CollectNames(const Derivation &d, std::set<std::string> &out) {
  for (const auto &n : Dom(d->j.ctx)) out.insert(n);
  CollectNames(d->j.term, out);
  for (const auto &c : d->children) CollectNames(c, out);
}

// ---------------------------------------------------------------------------
// Structural transformations

Derivation RenameFree(const Derivation &d, const std::string &from,
                      const std::string &to) {
  Zone z = ZoneOf(d->j.ctx, from);
  if (z == Zone::kNone || from == to) return d;
  if (ZoneOf(d->j.ctx, to) != Zone::kNone) {
    throw DerivationError(fmt::format("cannot rename {} to {}: in use", from,
                                      to));
  }
  Context ctx = d->j.ctx;
  auto &zone = ZoneMap(ctx, z);
  zone.emplace(to, zone.at(from));
  zone.erase(from);
  if (IsAxiom(d->rule)) {
    Term t = d->j.term;
    if (t->kind == TermKind::kVar && t->name == from) t = Var(to);
    return MakeDerivation(d->rule, ctx, t, d->j.type);
  }
  Derivation node = d;
  if ((d->rule == Rule::kIL || d->rule == Rule::kII) && Binder(d) == to) {
    auto avoid = AllNames(d);
    avoid.insert(to);
    node = RenameBinder(d, FreshAvoiding(to, avoid));
  }
  std::vector<Derivation> ch;
  for (const auto &c : node->children) ch.push_back(RenameFree(c, from, to));
  return Rebuild(node, ctx, std::move(ch));
}

Derivation Weaken(const Derivation &d, const Context &extra) {
  if (Empty(extra)) return d;
  for (const auto &n : Dom(extra)) {
    if (ZoneOf(d->j.ctx, n) != Zone::kNone) {
      throw DerivationError(fmt::format("cannot weaken by {}: in use", n));
    }
  }
  Context ctx = Union(d->j.ctx, extra);
  switch (d->rule) {
    case Rule::kAL:
    case Rule::kAP:
    case Rule::kAI:
    case Rule::kConst:
      return MakeDerivation(d->rule, ctx, d->j.term, d->j.type);
    case Rule::kBang:
      return MakeDerivation(d->rule, ctx, d->j.term, d->j.type, d->children);
    case Rule::kIL:
    case Rule::kII: {
      Derivation node = d;
      auto dom = Dom(extra);
      if (dom.count(Binder(d))) {
        auto avoid = AllNames(d);
        avoid.insert(dom.begin(), dom.end());
        node = RenameBinder(d, FreshAvoiding(Binder(d), avoid));
      }
      return Rebuild(node, ctx, {Weaken(node->children[0], extra)});
    }
    case Rule::kE: {
      Context shared = extra;
      shared.gamma.clear();
      return Rebuild(d, ctx,
                     {Weaken(d->children[0], extra),
                      Weaken(d->children[1], shared)});
    }
  }
  return d;
}

Derivation WeakenTo(const Derivation &d, const Context &target) {
  Context extra;
  for (Zone z : {Zone::kGamma, Zone::kDelta, Zone::kTheta}) {
    for (const auto &[k, t] : ZoneMap(target, z)) {
      Zone have = ZoneOf(d->j.ctx, k);
      if (have == Zone::kNone) {
        ZoneMap(extra, z).emplace(k, t);
      } else if (have != z || !TypeEq(ZoneMap(d->j.ctx, z).at(k), t)) {
        throw DerivationError(fmt::format("cannot weaken {} to target", k));
      }
    }
  }
  if (Dom(d->j.ctx).size() + Dom(extra).size() != Dom(target).size()) {
    throw DerivationError("weakening target misses a variable");
  }
  return Weaken(d, extra);
}

Derivation Shift(const Derivation &d, const std::string &x) {
  auto it = d->j.ctx.gamma.find(x);
  if (it == d->j.ctx.gamma.end()) {
    throw DerivationError(fmt::format("{} is not a linear variable", x));
  }
  Type t = it->second;
  Context ctx = d->j.ctx;
  ctx.gamma.erase(x);
  ctx.theta.emplace(x, t);
  switch (d->rule) {
    case Rule::kAL: {
      bool own = d->j.term->name == x;
      return MakeDerivation(own ? Rule::kAP : Rule::kAL, ctx, d->j.term,
                            d->j.type);
    }
    case Rule::kAP:
    case Rule::kAI:
    case Rule::kConst:
      return MakeDerivation(d->rule, ctx, d->j.term, d->j.type);
    case Rule::kBang:
      return MakeDerivation(d->rule, ctx, d->j.term, d->j.type, d->children);
    case Rule::kIL:
    case Rule::kII:
      return Rebuild(d, ctx, {Shift(d->children[0], x)});
    case Rule::kE: {
      Context park;
      park.theta.emplace(x, t);
      bool left = d->children[0]->j.ctx.gamma.count(x) > 0;
      const Derivation &f = d->children[0];
      const Derivation &a = d->children[1];
      if (left) return Rebuild(d, ctx, {Shift(f, x), Weaken(a, park)});
      return Rebuild(d, ctx, {Weaken(f, park), Shift(a, x)});
    }
  }
  return d;
}

Derivation ShiftAll(const Derivation &d) {
  Derivation out = d;
  std::vector<std::string> names;
  for (const auto &[k, t] : d->j.ctx.gamma) names.push_back(k);
  for (const auto &n : names) out = Shift(out, n);
  return out;
}

namespace {

Derivation ContractRec(const Derivation &d, const std::string &x,
                       const std::string &y, const std::string &z) {
  Zone zx = ZoneOf(d->j.ctx, x);
  Zone zy = ZoneOf(d->j.ctx, y);
  if (zx == Zone::kNone && zy == Zone::kNone) return d;
  Zone zone = zx != Zone::kNone ? zx : zy;
  Type t = *Lookup(d->j.ctx, zx != Zone::kNone ? x : y);
  Context ctx = Without(Without(d->j.ctx, x), y);
  ZoneMap(ctx, zone).emplace(z, t);
  switch (d->rule) {
    case Rule::kAL:
    case Rule::kAP:
    case Rule::kAI:
    case Rule::kConst: {
      Term term = d->j.term;
      if (term->kind == TermKind::kVar &&
          (term->name == x || term->name == y)) {
        term = Var(z);
      }
      return MakeDerivation(d->rule, ctx, term, d->j.type);
    }
    case Rule::kIL:
    case Rule::kII: {
      Derivation node = d;
      if (Binder(d) == z) {
        auto avoid = AllNames(d);
        node = RenameBinder(d, FreshAvoiding(z, avoid));
      }
      return Rebuild(node, ctx, {ContractRec(node->children[0], x, y, z)});
    }
    case Rule::kE:
      return Rebuild(d, ctx,
                     {ContractRec(d->children[0], x, y, z),
                      ContractRec(d->children[1], x, y, z)});
    case Rule::kBang: {
      const Derivation &c = d->children[0];
      if (zone != Zone::kDelta) return Rebuild(d, ctx, {c});
      Zone cx = ZoneOf(c->j.ctx, x);
      Zone cy = ZoneOf(c->j.ctx, y);
      Derivation nc = c;
      if (cx != Zone::kNone && cy == Zone::kNone) {
        nc = RenameFree(c, x, z);
      } else if (cy != Zone::kNone && cx == Zone::kNone) {
        nc = RenameFree(c, y, z);
      } else if (cx != Zone::kNone) {
        if (cx == Zone::kGamma) nc = Shift(nc, x);
        if (cy == Zone::kGamma) nc = Shift(nc, y);
        nc = Contract(nc, x, y, z);
      }
      return Rebuild(d, ctx, {nc});
    }
  }
  return d;
}

}  // namespace

Derivation Contract(const Derivation &d, const std::string &x,
                    const std::string &y, const std::string &z) {
  Zone zx = ZoneOf(d->j.ctx, x);
  Zone zy = ZoneOf(d->j.ctx, y);
  if (x == y || zx != zy || (zx != Zone::kDelta && zx != Zone::kTheta)) {
    throw DerivationError(fmt::format(
        "{} and {} must be distinct and both modal or both parked", x, y));
  }
  if (!TypeEq(*Lookup(d->j.ctx, x), *Lookup(d->j.ctx, y))) {
    throw DerivationError(fmt::format("{} and {} differ in type", x, y));
  }
  if (z == x || z == y) {
    const std::string &old = z;
    std::string tmp = FreshAvoiding(old, AllNames(d));
    Derivation r = RenameFree(d, old, tmp);
    return z == x ? Contract(r, tmp, y, z) : Contract(r, x, tmp, z);
  }
  if (ZoneOf(d->j.ctx, z) != Zone::kNone) {
    throw DerivationError(fmt::format("{} is already in context", z));
  }
  return ContractRec(d, x, y, z);
}

Derivation PeelBang(const Derivation &d) {
  if (d->rule == Rule::kBang) return d->children[0];
  if (d->rule == Rule::kAI && d->j.type->kind == TypeKind::kBang) {
    const std::string &x = d->j.term->name;
    Type inner = d->j.type->left;
    Context ctx;
    if (IsModal(inner)) {
      ctx.delta.emplace(x, inner);
      return MakeDerivation(Rule::kAI, ctx, d->j.term, inner);
    }
    ctx.gamma.emplace(x, inner);
    return MakeDerivation(Rule::kAL, ctx, d->j.term, inner);
  }
  throw DerivationError("derivation does not end with a promotion");
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

enum class SubCase { kLinear, kParked, kModal };

// Renames the binder of an introduction node in `main` if it clashes with
// the variables of `arg`.
Derivation AvoidBinderClash(const Derivation &main, const Derivation &arg) {
  auto argdom = Dom(arg->j.ctx);
  const std::string &b = Binder(main);
  if (!argdom.count(b)) return main;
  auto avoid = AllNames(main);
  auto more = AllNames(arg);
  avoid.insert(more.begin(), more.end());
  return RenameBinder(main, FreshAvoiding(b, avoid));
}

Derivation Sub(SubCase which, const Derivation &main, const std::string &x,
               const Derivation &arg);

Derivation SubIntro(SubCase which, const Derivation &main,
                    const std::string &x, const Derivation &arg,
                    Context ctx) {
  Derivation node = AvoidBinderClash(main, arg);
  Derivation a = arg;
  if (node->rule == Rule::kII) {
    Context extra;
    extra.delta.emplace(Binder(node), node->j.type->left);
    a = Weaken(arg, extra);
  }
  return Rebuild(node, std::move(ctx), {Sub(which, node->children[0], x, a)});
}

Derivation AxiomMinus(const Derivation &main, Context ctx) {
  return MakeDerivation(main->rule, std::move(ctx), main->j.term,
                        main->j.type);
}

Derivation SubLinear(const Derivation &main, const std::string &x,
                     const Derivation &arg) {
  Context ctx = Without(main->j.ctx, x);
  for (const auto &[k, t] : arg->j.ctx.gamma) ctx.gamma.emplace(k, t);
  switch (main->rule) {
    case Rule::kAL:
      if (main->j.term->name == x) {
        Context extra;
        extra.gamma = Without(main->j.ctx, x).gamma;
        return Weaken(arg, extra);
      }
      return AxiomMinus(main, ctx);
    case Rule::kAP:
    case Rule::kAI:
    case Rule::kConst: return AxiomMinus(main, ctx);
    case Rule::kIL:
    case Rule::kII: return SubIntro(SubCase::kLinear, main, x, arg, ctx);
    case Rule::kE: {
      const Derivation &f = main->children[0];
      const Derivation &a = main->children[1];
      if (f->j.ctx.gamma.count(x)) {
        return Rebuild(main, ctx, {SubLinear(f, x, arg), a});
      }
      return Rebuild(main, ctx, {f, SubLinear(a, x, arg)});
    }
    case Rule::kBang: return Rebuild(main, ctx, {main->children[0]});
  }
  return main;
}

Derivation SubParked(const Derivation &main, const std::string &x,
                     const Derivation &arg) {
  Context ctx = Without(main->j.ctx, x);
  switch (main->rule) {
    case Rule::kAP:
      if (main->j.term->name == x) {
        Context extra;
        extra.gamma = main->j.ctx.gamma;
        return Weaken(arg, extra);
      }
      return AxiomMinus(main, ctx);
    case Rule::kAL:
    case Rule::kAI:
    case Rule::kConst: return AxiomMinus(main, ctx);
    case Rule::kIL:
    case Rule::kII: return SubIntro(SubCase::kParked, main, x, arg, ctx);
    case Rule::kE:
      return Rebuild(main, ctx,
                     {SubParked(main->children[0], x, arg),
                      SubParked(main->children[1], x, arg)});
    case Rule::kBang: return Rebuild(main, ctx, {main->children[0]});
  }
  return main;
}

Derivation DropLinear(const Derivation &d) {
  if (d->j.ctx.gamma.empty()) return d;
  if (d->rule != Rule::kBang && d->rule != Rule::kAI) {
    throw DerivationError("modal argument must end with a promotion");
  }
  Context ctx = d->j.ctx;
  ctx.gamma.clear();
  return MakeDerivation(d->rule, ctx, d->j.term, d->j.type, d->children);
}

Derivation SubModal(const Derivation &main, const std::string &x,
                    const Derivation &arg) {
  Context ctx = Without(main->j.ctx, x);
  for (const auto &[k, t] : arg->j.ctx.gamma) ctx.gamma.emplace(k, t);
  switch (main->rule) {
    case Rule::kAI:
      if (main->j.term->name == x) {
        Context extra;
        extra.gamma = main->j.ctx.gamma;
        return Weaken(arg, extra);
      }
      return AxiomMinus(main, ctx);
    case Rule::kAL:
    case Rule::kAP:
    case Rule::kConst: return AxiomMinus(main, ctx);
    case Rule::kIL:
    case Rule::kII: return SubIntro(SubCase::kModal, main, x, arg, ctx);
    case Rule::kE: {
      Derivation chi = DropLinear(arg);
      Context lin;
      lin.gamma = arg->j.ctx.gamma;
      return Rebuild(main, ctx,
                     {Weaken(SubModal(main->children[0], x, chi), lin),
                      SubModal(main->children[1], x, chi)});
    }
    case Rule::kBang: {
      const Derivation &phi = main->children[0];
      Zone zx = ZoneOf(phi->j.ctx, x);
      if (zx == Zone::kNone) return Rebuild(main, ctx, {phi});
      Derivation psi = ShiftAll(PeelBang(arg));
      Derivation xi = ShiftAll(phi);
      Context target = Union(Without(xi->j.ctx, x), psi->j.ctx);
      Context xtarget = target;
      ZoneMap(xtarget, ZoneOf(xi->j.ctx, x)).emplace(x, *Lookup(xi->j.ctx, x));
      xi = WeakenTo(xi, xtarget);
      psi = WeakenTo(psi, target);
      Derivation mu = ZoneOf(xi->j.ctx, x) == Zone::kDelta
                          ? SubModal(xi, x, psi)
                          : SubParked(xi, x, psi);
      return Rebuild(main, ctx, {mu});
    }
  }
  return main;
}

Derivation Sub(SubCase which, const Derivation &main, const std::string &x,
               const Derivation &arg) {
  switch (which) {
    case SubCase::kLinear: return SubLinear(main, x, arg);
    case SubCase::kParked: return SubParked(main, x, arg);
    case SubCase::kModal: return SubModal(main, x, arg);
  }
  return main;
}

}  // namespace

Derivation SubstituteDerivation(const Derivation &main, const std::string &x,
                                const Derivation &arg) {
  const Context &mc = main->j.ctx;
  const Context &ac = arg->j.ctx;
  Zone z = ZoneOf(mc, x);
  if (z == Zone::kNone) {
    throw DerivationError(fmt::format("{} is not in context", x));
  }
  if (!TypeEq(*Lookup(mc, x), arg->j.type)) {
    throw DerivationError(fmt::format("{} has type {}, argument has {}", x,
                                      Print(*Lookup(mc, x)),
                                      Print(arg->j.type)));
  }
  Context rest = Without(mc, x);
  if (!TypeMapEq(ac.delta, rest.delta) || !TypeMapEq(ac.theta, rest.theta)) {
    throw DerivationError("argument must share modal and parking zones");
  }
  for (const auto &[k, t] : ac.gamma) {
    if (ZoneOf(rest, k) != Zone::kNone) {
      throw DerivationError(
          fmt::format("linear variable {} of the argument is in use", k));
    }
  }
  switch (z) {
    case Zone::kGamma: return SubLinear(main, x, arg);
    case Zone::kTheta:
      if (!ac.gamma.empty()) {
        throw DerivationError("parked substitution needs no linear context");
      }
      return SubParked(main, x, arg);
    case Zone::kDelta:
      if (!IsValue(arg->j.term)) {
        throw DerivationError("modal substitution needs a value");
      }
      return SubModal(main, x, arg);
    case Zone::kNone: break;
  }
  return main;
}

// ---------------------------------------------------------------------------
// Reduction

namespace {

// Derivation of a closed algebra term under the given shared zones.
Derivation AlgebraDerivation(const Term &t, const Context &shared) {
  std::vector<Term> args;
  Term h = Head(t, &args);
  Type u = BaseType(h->constant->algebra);
  Derivation cur = MakeDerivation(Rule::kConst, shared, h,
                                  ConstantType(*h->constant, u));
  for (const auto &a : args) {
    Derivation ad = AlgebraDerivation(a, shared);
    cur = MakeDerivation(Rule::kE, shared, App(cur->j.term, a),
                         cur->j.type->right, {cur, ad});
  }
  return cur;
}

Derivation DeltaDerivation(const Derivation &node) {
  std::vector<Derivation> args;
  Derivation cur = node;
  while (cur->rule == Rule::kE) {
    args.insert(args.begin(), cur->children[1]);
    cur = cur->children[0];
  }
  if (cur->rule != Rule::kConst || !DeltaStep(node->j.term)) {
    throw DerivationError("no redex at the given position");
  }
  const ConstInfo &c = *cur->j.term->constant;
  const Term &t = args[0]->j.term;
  std::vector<Term> targs;
  const ConstInfo &ctor = *Head(t, &targs)->constant;

  if (c.kind == ConstKind::kCond) {
    const Derivation &v = args[1 + ctor.index];
    Context shared = node->j.ctx;
    shared.gamma.clear();
    Context extra;
    for (const auto &[k, ty] : node->j.ctx.gamma) {
      if (!v->j.ctx.gamma.count(k)) extra.gamma.emplace(k, ty);
    }
    Derivation out = Weaken(v, extra);
    for (const auto &a : targs) {
      Derivation ad = AlgebraDerivation(a, shared);
      out = MakeDerivation(Rule::kE, node->j.ctx, App(out->j.term, a),
                           out->j.type->right, {out, ad});
    }
    return out;
  }

  std::vector<Derivation> steps;
  Context target;
  for (std::size_t i = 1; i < args.size(); ++i) {
    steps.push_back(ShiftAll(PeelBang(args[i])));
    target = Union(target, steps.back()->j.ctx);
  }
  for (auto &s : steps) s = WeakenTo(s, target);
  std::function<Derivation(const Term &)> fold = [&](const Term &u) {
    std::vector<Term> us;
    const ConstInfo &k = *Head(u, &us)->constant;
    Derivation out = steps[k.index];
    for (const auto &a : us) {
      Derivation ad = fold(a);
      out = MakeDerivation(Rule::kE, target, App(out->j.term, ad->j.term),
                           out->j.type->right, {out, ad});
    }
    return out;
  };
  Derivation body = fold(t);
  return MakeDerivation(Rule::kBang, node->j.ctx, body->j.term, node->j.type,
                        {body});
}

Derivation ContractNode(const Derivation &node) {
  const Derivation &fn = node->children[0];
  const Derivation &arg = node->children[1];
  if (fn->rule == Rule::kIL) {
    return SubstituteDerivation(fn->children[0], Binder(fn), arg);
  }
  if (fn->rule == Rule::kII) {
    return SubstituteDerivation(fn->children[0], Binder(fn), arg);
  }
  throw DerivationError("redex function is not typed by an introduction");
}

Derivation ReduceRec(const Derivation &d, const Path &p, std::size_t i,
                     int &level, bool &delta) {
  if (d->rule == Rule::kBang) {
    ++level;
    return Rebuild(d, d->j.ctx, {ReduceRec(d->children[0], p, i, level,
                                           delta)});
  }
  if (i == p.size()) {
    if (d->rule != Rule::kE) {
      throw DerivationError("no redex at the given position");
    }
    const Term &t = d->j.term;
    if (t->left->kind == TermKind::kAbs) {
      if (!IsValue(t->right)) {
        throw DerivationError("argument of the redex is not a value");
      }
      return ContractNode(d);
    }
    delta = true;
    return DeltaDerivation(d);
  }
  int step = p[i];
  switch (d->rule) {
    case Rule::kIL:
    case Rule::kII:
      if (step != 0) break;
      return Rebuild(d, d->j.ctx,
                     {ReduceRec(d->children[0], p, i + 1, level, delta)});
    case Rule::kE: {
      if (step != 0 && step != 1) break;
      auto ch = d->children;
      ch[step] = ReduceRec(ch[step], p, i + 1, level, delta);
      return Rebuild(d, d->j.ctx, std::move(ch));
    }
    default: break;
  }
  throw DerivationError(fmt::format("path {} leaves the term",
                                    PathString(p)));
}

}  // namespace

ReduceResult ReduceDerivation(const Derivation &d, const Path &redex) {
  ReduceResult r;
  r.derivation = ReduceRec(d, redex, 0, r.level, r.delta);
  return r;
}

int LevelAt(const Derivation &d, const Path &p) {
  int level = 0;
  Derivation cur = d;
  std::size_t i = 0;
  while (true) {
    if (cur->rule == Rule::kBang) {
      ++level;
      cur = cur->children[0];
      continue;
    }
    if (i == p.size()) return level;
    if (cur->rule == Rule::kE && (p[i] == 0 || p[i] == 1)) {
      cur = cur->children[p[i++]];
    } else if ((cur->rule == Rule::kIL || cur->rule == Rule::kII) &&
               p[i] == 0) {
      cur = cur->children[0];
      ++i;
    } else {
      throw DerivationError(fmt::format("path {} leaves the term",
                                        PathString(p)));
    }
  }
}

// ---------------------------------------------------------------------------
// Text form

namespace {

std::string PrintZone(const TypeMap &m) {
  std::string out;
  for (const auto &[k, t] : m) {
    if (!out.empty()) out += ", ";
    out += fmt::format("{} : {}", k, Print(t));
  }
  return out;
}

void SerializeRec(const Derivation &d, int indent, std::string &out) {
  out += std::string(indent, ' ');
  out += fmt::format("({} ({})", RuleName(d->rule), Print(d->j));
  for (const auto &c : d->children) {
    out += '\n';
    SerializeRec(c, indent + 2, out);
  }
  out += ')';
}

TypeMap ParseZone(TokenStream &ts,
                  const std::set<std::string, std::less<>> *algebras,
                  std::set<std::string> &seen) {
  TypeMap m;
  if (ts.At(Tok::kBar) || ts.At(Tok::kTurnstile)) return m;
  do {
    auto name = ts.Expect(Tok::kIdent);
    if (!detail::IsVarName(name.text)) {
      TokenStream::FailAt(name, fmt::format("invalid variable {}", name.text));
    }
    if (!seen.insert(name.text).second) {
      TokenStream::FailAt(name,
                          fmt::format("duplicate variable {}", name.text));
    }
    ts.Expect(Tok::kColon);
    m.emplace(name.text, detail::ParseTypeFrom(ts, algebras));
  } while (ts.Accept(Tok::kComma));
  return m;
}

Derivation ParseNode(TokenStream &ts, const Signature *sig) {
  ts.Expect(Tok::kLParen);
  Rule rule;
  if (ts.Accept(Tok::kBang)) {
    rule = Rule::kBang;
  } else {
    auto tok = ts.Expect(Tok::kIdent);
    static const std::map<std::string, Rule, std::less<>> kRules = {
        {"AL", Rule::kAL}, {"AP", Rule::kAP}, {"AI", Rule::kAI},
        {"IL", Rule::kIL}, {"II", Rule::kII}, {"E", Rule::kE},
        {"Const", Rule::kConst}};
    auto it = kRules.find(tok.text);
    if (it == kRules.end()) {
      TokenStream::FailAt(tok, fmt::format("unknown rule {}", tok.text));
    }
    rule = it->second;
  }
  const auto *algebras = sig ? &sig->type_names : nullptr;
  const auto *env = sig ? &sig->constants : nullptr;
  ts.Expect(Tok::kLParen);
  std::set<std::string> seen;
  Context ctx;
  ctx.gamma = ParseZone(ts, algebras, seen);
  ts.Expect(Tok::kBar);
  ctx.delta = ParseZone(ts, algebras, seen);
  ts.Expect(Tok::kBar);
  ctx.theta = ParseZone(ts, algebras, seen);
  ts.Expect(Tok::kTurnstile);
  Term term = detail::ParseTermFrom(ts, env);
  ts.Expect(Tok::kColon);
  Type type = detail::ParseTypeFrom(ts, algebras);
  ts.Expect(Tok::kRParen);
  std::vector<Derivation> children;
  while (ts.At(Tok::kLParen)) children.push_back(ParseNode(ts, sig));
  ts.Expect(Tok::kRParen);
  return MakeDerivation(rule, std::move(ctx), std::move(term),
                        std::move(type), std::move(children));
}

}  // namespace

std::string Print(const Context &c) {
  std::vector<std::string> parts;
  for (const TypeMap *m : {&c.gamma, &c.delta, &c.theta}) {
    parts.push_back(PrintZone(*m));
  }
  std::string out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) {
    out += out.empty() ? "|" : " |";
    if (!parts[i].empty()) out += " " + parts[i];
  }
  return out;
}

std::string Print(const Judgement &j) {
  return fmt::format("{} |- {} : {}", Print(j.ctx), Print(j.term),
                     Print(j.type));
}

std::string Serialize(const Derivation &d) {
  std::string out;
  SerializeRec(d, 0, out);
  return out;
}

Derivation ParseDerivation(std::string_view text, const Signature *sig) {
  TokenStream ts(detail::Lex(text));
  Derivation d = ParseNode(ts, sig);
  ts.Expect(Tok::kEnd);
  return d;
}

}  // namespace lightlam
