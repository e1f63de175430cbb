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

#include "lightlam/infer.h"

#include <fmt/core.h>

#include <functional>

#include "lightlam/algebra.h"

namespace lightlam {

namespace {

struct PTFailure {
  UnifyFailure reason;
  std::string detail;
};

struct Entry {
  Scheme scheme;
  int count = 0;
};

using SchemeContext = std::map<std::string, Entry>;

struct Partial {
  SchemeContext ctx;
  Scheme type;
  PTTree node;
};

// Placeholder atom for the free result type of a constant.
constexpr const char *kHole = "\x01";

Scheme ToScheme(const Type &t, const Scheme &hole) {
  switch (t->kind) {
    case TypeKind::kAtom: return hole;
    case TypeKind::kBase: return SBase(t->name);
    case TypeKind::kArrow:
      return SArrow(ToScheme(t->left, hole), ToScheme(t->right, hole));
    case TypeKind::kBang: {
      int k = LeadingBangs(t);
      return SBanged(Exponential::Constant(static_cast<std::uint64_t>(k)),
                     ToScheme(StripBangs(t), hole));
    }
  }
  return hole;
}

class Inference {
 public:
  Partial Infer(const Term &m) {
    switch (m->kind) {
      case TermKind::kVar: {
        Exponential a = Lit();
        Scheme s = SBanged(a, Var());
        Partial out;
        out.ctx[m->name] = Entry{s, 1};
        out.type = s;
        out.node = Node(PTKind::kVar, m, s, {}, nullptr, {});
        return out;
      }
      case TermKind::kConst: {
        const ConstInfo &c = *m->constant;
        Scheme hole = c.kind == ConstKind::kCtor ? nullptr : Var();
        Scheme schema = ToScheme(ConstantType(c, Atom(kHole)), hole);
        Exponential b = Lit();
        Partial out;
        out.type = SBanged(b, schema);
        out.node = Node(PTKind::kConst, m, schema, b, nullptr, {});
        return out;
      }
      case TermKind::kAbs: return InferAbs(m);
      case TermKind::kApp: return InferApp(m);
    }
    return {};
  }

  BindingStore store;
  ModalitySet constraints;
  std::vector<std::string> literals;
  std::vector<std::string> variables;

 private:
  Exponential Lit() {
    literals.push_back(fresh_.Literal());
    return Exponential::Literal(literals.back());
  }
  Scheme Var() {
    variables.push_back(fresh_.Variable());
    return SVar(variables.back());
  }

  static PTTree Node(PTKind kind, const Term &m, Scheme inner,
                     Exponential wrap, Scheme binder,
                     std::vector<PTTree> children) {
    return std::make_shared<const PTNode>(
        PTNode{kind, m, std::move(inner), std::move(wrap), std::move(binder),
               std::move(children)});
  }

  static void Wrap(SchemeContext &ctx, const Exponential &b) {
    for (auto &[x, e] : ctx) e.scheme = SBanged(b, e.scheme);
  }

  void Unify(const Scheme &a, const Scheme &b) {
    std::string detail;
    UnifyFailure f = store.Unify(a, b, constraints, &detail);
    if (f != UnifyFailure::kNone) throw PTFailure{f, detail};
  }

  Partial InferAbs(const Term &m) {
    Partial body = Infer(m->left);
    Partial out;
    out.ctx = std::move(body.ctx);
    auto it = out.ctx.find(m->name);
    Scheme binder;
    Exponential wrap;
    if (it == out.ctx.end()) {
      Exponential a = Lit();
      binder = SBanged(a, Var());
      wrap = Lit();
    } else {
      binder = it->second.scheme;
      int count = it->second.count;
      out.ctx.erase(it);
      if (count > 1) {
        Exponential a = Lit();
        constraints.insert(MakePos(a));
        Unify(binder, SBanged(a, Var()));
      }
      wrap = Lit();
    }
    Scheme inner = SArrow(binder, body.type);
    Wrap(out.ctx, wrap);
    out.type = SBanged(wrap, inner);
    out.node = Node(PTKind::kAbs, m, inner, wrap, binder, {body.node});
    return out;
  }

  Partial InferApp(const Term &m) {
    Partial fn = Infer(m->left);
    Partial arg = Infer(m->right);
    Exponential a = Lit();
    Scheme result = SBanged(a, Var());
    Unify(fn.type, SArrow(arg.type, result));
    for (const auto &[x, e] : fn.ctx) {
      auto it = arg.ctx.find(x);
      if (it != arg.ctx.end()) Unify(e.scheme, it->second.scheme);
    }
    Partial out;
    bool fn_larger = fn.ctx.size() >= arg.ctx.size();
    out.ctx = std::move(fn_larger ? fn.ctx : arg.ctx);
    const SchemeContext &other = fn_larger ? arg.ctx : fn.ctx;
    for (const auto &[x, e] : other) {
      auto [slot, inserted] = out.ctx.emplace(x, e);
      if (inserted) continue;
      // Shared entries keep the function side's scheme.
      if (!fn_larger) slot->second.scheme = e.scheme;
      slot->second.count += e.count;
    }
    Exponential b = Lit();
    Wrap(out.ctx, b);
    out.type = SBanged(b, result);
    out.node =
        Node(PTKind::kApp, m, result, b, nullptr, {fn.node, arg.node});
    return out;
  }

  FreshNames fresh_;
};

}  // namespace

InferResult PrincipalType(const Term &m) {
  InferResult r;
  auto inf = std::make_shared<Inference>();
  Partial out;
  try {
    out = inf->Infer(m);
  } catch (const PTFailure &f) {
    r.reason = f.reason;
    r.error = fmt::format("untypable: {} ({})", f.detail,
                          UnifyFailureName(f.reason));
    return r;
  }
  PrincipalTyping p;
  for (const auto &[x, e] : out.ctx) {
    p.context[x] = inf->store.Resolve(e.scheme);
  }
  p.type = inf->store.Resolve(out.type);
  p.constraints = std::move(inf->constraints);
  p.term = m;
  p.tree = out.node;
  p.literals = std::move(inf->literals);
  p.variables = std::move(inf->variables);
  p.store = std::shared_ptr<const BindingStore>(inf, &inf->store);
  r.typing = std::move(p);
  return r;
}

std::string FormatPrincipal(const PrincipalTyping &p) {
  std::string out = "PRINCIPAL\n";
  for (const auto &[x, s] : p.context) {
    out += fmt::format("CTX {} : {}\n", x, Print(s));
  }
  out += fmt::format("RES {}\n", Print(p.type));
  out += fmt::format("CONSTRAINTS {}\n", Print(p.constraints));
  return out;
}

bool Typable(const Term &m) {
  InferResult r = PrincipalType(m);
  if (!r.ok()) return false;
  return SolveConstraints(r.typing->constraints, SolveMode::kAny).sat();
}

// ---------------------------------------------------------------------------
// Instantiation

namespace {

class Elaborator {
 public:
  Elaborator(const PrincipalTyping &p, const SchemeSubstitution &s)
      : p_(p), s_(s) {
    CollectNames(p.term, used_);
  }

  Type GroundOf(const Scheme &sigma) const {
    return Ground(s_, p_.store->Resolve(sigma));
  }

  Derivation Elab(const PTTree &node, const Term &actual,
                  const Context &ctx) {
    int n = node->wrap.Empty()
                ? 0
                : static_cast<int>(Evaluate(s_, node->wrap));
    return ElabBangs(node, actual, ctx, n, GroundOf(node->inner));
  }

 private:
  Derivation ElabBangs(const PTTree &node, const Term &actual,
                       const Context &ctx, int n, const Type &g) {
    if (n > 0) {
      Context premise;
      for (const std::string &x : FreeVars(actual)) {
        const Type *t = Lookup(ctx, x);
        if (t == nullptr) {
          throw InstantiateError(fmt::format("{} has no context entry", x));
        }
        if (!IsModal(*t)) {
          throw InstantiateError(fmt::format(
              "{} : {} is linear under a promotion", x, Print(*t)));
        }
        PlaceDefault(premise, actual, x, (*t)->left);
      }
      Derivation child = ElabBangs(node, actual, premise, n - 1, g);
      return MakeDerivation(Rule::kBang, ctx, actual, Bangs(n, g), {child});
    }
    switch (node->kind) {
      case PTKind::kVar: {
        const std::string &x = actual->name;
        const Type *t = Lookup(ctx, x);
        if (t == nullptr || !TypeEq(*t, g)) {
          throw InstantiateError(fmt::format(
              "{} is used at {} but the context gives {}", x, Print(g),
              t == nullptr ? "nothing" : Print(*t)));
        }
        Rule r = Rule::kAL;
        switch (ZoneOf(ctx, x)) {
          case Zone::kDelta: r = Rule::kAI; break;
          case Zone::kTheta: r = Rule::kAP; break;
          default: break;
        }
        return MakeDerivation(r, ctx, actual, g);
      }
      case PTKind::kConst:
        return MakeDerivation(Rule::kConst, ctx, actual, g);
      case PTKind::kAbs: {
        Type b = GroundOf(node->binder);
        std::string x = actual->name;
        Term body = actual->left;
        Term term = actual;
        if (ZoneOf(ctx, x) != Zone::kNone) {
          std::string y = PrimeFresh(x, [&](const std::string &c) {
            return ZoneOf(ctx, c) == Zone::kNone && !used_.count(c);
          });
          used_.insert(y);
          body = Substitute(body, x, Var(y));
          x = y;
          term = Abs(x, body);
        }
        Context premise = ctx;
        (IsModal(b) ? premise.delta : premise.gamma).emplace(x, b);
        Derivation child = Elab(node->children[0], body, premise);
        return MakeDerivation(IsModal(b) ? Rule::kII : Rule::kIL, ctx, term,
                              g, {child});
      }
      case PTKind::kApp: {
        const Term &f = actual->left;
        const Term &a = actual->right;
        Context cf{{}, ctx.delta, ctx.theta};
        Context ca{{}, ctx.delta, ctx.theta};
        for (const auto &[y, t] : ctx.gamma) {
          bool in_f = IsFree(f, y), in_a = IsFree(a, y);
          if (in_f && in_a) {
            throw InstantiateError(fmt::format(
                "linear variable {} is used in both premises of {}", y,
                Print(actual)));
          }
          (in_a ? ca : cf).gamma.emplace(y, t);
        }
        Derivation df = Elab(node->children[0], f, cf);
        Derivation da = Elab(node->children[1], a, ca);
        return MakeDerivation(Rule::kE, ctx, actual, g, {df, da});
      }
    }
    throw InstantiateError("unknown template node");
  }

 public:
  static void PlaceDefault(Context &c, const Term &m, const std::string &x,
                           const Type &t) {
    if (IsModal(t)) {
      c.delta.emplace(x, t);
    } else if (CountFree(m, x) > 1) {
      c.theta.emplace(x, t);
    } else {
      c.gamma.emplace(x, t);
    }
  }

 private:
  const PrincipalTyping &p_;
  const SchemeSubstitution &s_;
  std::set<std::string> used_;
};

void RequireDefined(const PrincipalTyping &p, const SchemeSubstitution &s) {
  for (const Constraint &c : p.constraints) {
    if (!Satisfies(s, c)) {
      throw InstantiateError(
          fmt::format("constraint {} is violated", Print(c)));
    }
  }
}

Instance Finish(const PrincipalTyping &p, const SchemeSubstitution &s,
                const Context &root) {
  Elaborator e(p, s);
  Instance out;
  out.ctx = root;
  out.derivation = e.Elab(p.tree, p.term, root);
  out.term = out.derivation->j.term;
  out.type = out.derivation->j.type;
  return out;
}

}  // namespace

Instance Instantiate(const PrincipalTyping &p, const SchemeSubstitution &s) {
  try {
    RequireDefined(p, s);
    Context root;
    for (const auto &[x, sigma] : p.context) {
      Elaborator::PlaceDefault(root, p.term, x, Ground(s, sigma));
    }
    return Finish(p, s, root);
  } catch (const SchemeError &e) {
    throw InstantiateError(e.what());
  }
}

Instance Instantiate(const PrincipalTyping &p, const SchemeSubstitution &s,
                     const Context &target) {
  try {
    RequireDefined(p, s);
    for (const auto &[x, sigma] : p.context) {
      const Type *t = Lookup(target, x);
      if (t == nullptr) {
        throw InstantiateError(fmt::format("no placement for {}", x));
      }
      Type want = Ground(s, sigma);
      if (!TypeEq(*t, want)) {
        throw InstantiateError(fmt::format(
            "{} is placed at {} but the instance gives {}", x, Print(*t),
            Print(want)));
      }
      Zone z = ZoneOf(target, x);
      if ((z == Zone::kDelta) != IsModal(want)) {
        throw InstantiateError(fmt::format(
            "{} : {} cannot sit in the {} zone", x, Print(want),
            z == Zone::kDelta ? "modal" : "linear or parking"));
      }
    }
    return Finish(p, s, target);
  } catch (const SchemeError &e) {
    throw InstantiateError(e.what());
  }
}

std::optional<SchemeSubstitution> CompleteSubstitution(
    const PrincipalTyping &p, const SchemeSubstitution &partial) {
  ModalitySet c = p.constraints;
  for (const auto &[l, v] : partial.literals) {
    if (auto eq = MakeEq(Exponential::Literal(l), Exponential::Constant(v))) {
      c.insert(*eq);
    }
  }
  std::set<std::string> all(p.literals.begin(), p.literals.end());
  SolveResult r = SolveConstraints(c, SolveMode::kPreferSmall, &all);
  if (!r.sat()) return std::nullopt;
  SchemeSubstitution s = partial;
  for (const auto &[l, v] : r.assignment) s.literals.emplace(l, v);
  for (const std::string &v : p.variables) s.types.emplace(v, Atom(v));
  return s;
}

std::optional<Instance> DefaultInstance(const PrincipalTyping &p) {
  auto s = CompleteSubstitution(p);
  if (!s) return std::nullopt;
  return Instantiate(p, *s);
}

// ---------------------------------------------------------------------------
// Instance search

namespace {

struct MatchState {
  std::map<std::string, Type> vars;
  ModalitySet eqs;
  bool ok = true;
};

using Work = std::vector<std::pair<Scheme, Type>>;

void AddEq(MatchState &st, const Exponential &p, int k) {
  ExpTerms t = p.Terms();
  if (t.constant > static_cast<std::uint64_t>(k)) {
    st.ok = false;
    return;
  }
  if (auto c = MakeEq(p, Exponential::Constant(static_cast<std::uint64_t>(k)))) {
    st.eqs.insert(*c);
  }
}

// Calls `leaf` for each way of matching; stops when it returns true.
bool Enumerate(Work work, MatchState st,
               const std::function<bool(const MatchState &)> &leaf) {
  while (!work.empty() && st.ok) {
    auto [sigma, t] = work.back();
    work.pop_back();
    switch (sigma->kind) {
      case SchemeKind::kVar: {
        auto it = st.vars.find(sigma->name);
        if (it == st.vars.end()) {
          st.vars.emplace(sigma->name, t);
        } else if (!TypeEq(it->second, t)) {
          st.ok = false;
        }
        break;
      }
      case SchemeKind::kBase:
        st.ok = t->kind == TypeKind::kBase && t->name == sigma->name;
        break;
      case SchemeKind::kArrow:
        if (t->kind != TypeKind::kArrow) {
          st.ok = false;
          break;
        }
        work.emplace_back(sigma->right, t->right);
        work.emplace_back(sigma->left, t->left);
        break;
      case SchemeKind::kBanged: {
        int k = LeadingBangs(t);
        const Scheme &body = sigma->left;
        if (body->kind != SchemeKind::kVar) {
          AddEq(st, sigma->exp, k);
          work.emplace_back(body, StripBangs(t));
          break;
        }
        auto it = st.vars.find(body->name);
        if (it != st.vars.end()) {
          int j = LeadingBangs(it->second);
          if (j > k || !TypeEq(StripBangs(it->second), StripBangs(t))) {
            st.ok = false;
          } else {
            AddEq(st, sigma->exp, k - j);
          }
          break;
        }
        // The variable may absorb any number of the bangs.
        Type core = StripBangs(t);
        for (int j = 0; j <= k; ++j) {
          MatchState branch = st;
          branch.vars.emplace(body->name, Bangs(j, core));
          AddEq(branch, sigma->exp, k - j);
          if (Enumerate(work, std::move(branch), leaf)) return true;
        }
        return false;
      }
    }
  }
  if (!st.ok) return false;
  return leaf(st);
}

}  // namespace

std::optional<Instance> FindInstance(const PrincipalTyping &p,
                                     const Context *target, const Type *type,
                                     std::string *why) {
  Work work;
  if (type != nullptr) work.emplace_back(p.type, *type);
  if (target != nullptr) {
    for (const auto &[x, sigma] : p.context) {
      const Type *t = Lookup(*target, x);
      if (t == nullptr) {
        if (why != nullptr) *why = fmt::format("no placement for {}", x);
        return std::nullopt;
      }
      work.emplace_back(sigma, *t);
    }
  }
  std::optional<Instance> found;
  std::string last = "no instance matches the requested types";
  std::set<std::string> all(p.literals.begin(), p.literals.end());
  Enumerate(work, MatchState{}, [&](const MatchState &st) {
    ModalitySet c = p.constraints;
    c.insert(st.eqs.begin(), st.eqs.end());
    SolveResult r = SolveConstraints(c, SolveMode::kPreferSmall, &all);
    if (!r.sat()) {
      last = "the constraints have no solution for the requested types";
      return false;
    }
    SchemeSubstitution s;
    s.literals = r.assignment;
    s.types = st.vars;
    for (const std::string &v : p.variables) s.types.emplace(v, Atom(v));
    try {
      found = target != nullptr ? Instantiate(p, s, *target)
                                : Instantiate(p, s);
    } catch (const InstantiateError &e) {
      last = e.what();
      return false;
    }
    return true;
  });
  if (!found && why != nullptr) *why = last;
  return found;
}

}  // namespace lightlam
