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

// Independent oracles used by the inference tests: Robinson unification on
// simple types, type equality up to renaming, and a scheme matcher that
// compares exponentials modulo the equations of a modality set.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lightlam/schemes.h"
#include "lightlam/syntax.h"
#include "lightlam/types.h"

namespace lightlam::testing {

/** Simple types by Robinson unification, written without the library. */
class SimpleTypes {
 public:
  Type Fresh() { return Atom("t" + std::to_string(counter_++)); }

  Type Walk(Type t) const {
    while (t->kind == TypeKind::kAtom) {
      auto it = subst_.find(t->name);
      if (it == subst_.end()) break;
      t = it->second;
    }
    return t;
  }

  Type Zonk(const Type &t) const {
    Type w = Walk(t);
    if (w->kind == TypeKind::kArrow) return Arrow(Zonk(w->left), Zonk(w->right));
    if (w->kind == TypeKind::kBang) return Bang(Zonk(w->left));
    return w;
  }

  bool Unify(const Type &a0, const Type &b0) {
    Type a = Walk(a0), b = Walk(b0);
    if (a->kind == TypeKind::kAtom && b->kind == TypeKind::kAtom &&
        a->name == b->name) {
      return true;
    }
    if (a->kind == TypeKind::kAtom) return Bind(a->name, b);
    if (b->kind == TypeKind::kAtom) return Bind(b->name, a);
    if (a->kind != b->kind) return false;
    if (a->kind == TypeKind::kBase) return a->name == b->name;
    if (a->kind == TypeKind::kBang) return Unify(a->left, b->left);
    return Unify(a->left, b->left) && Unify(a->right, b->right);
  }

  /** Principal simple type; free variables are added to `env`. */
  std::optional<Type> Infer(const Term &m, std::map<std::string, Type> &env) {
    switch (m->kind) {
      case TermKind::kVar: {
        auto it = env.find(m->name);
        if (it == env.end()) it = env.emplace(m->name, Fresh()).first;
        return it->second;
      }
      case TermKind::kAbs: {
        Type a = Fresh();
        std::optional<Type> saved;
        if (auto it = env.find(m->name); it != env.end()) saved = it->second;
        env[m->name] = a;
        auto body = Infer(m->left, env);
        if (saved) {
          env[m->name] = *saved;
        } else {
          env.erase(m->name);
        }
        if (!body) return std::nullopt;
        return Arrow(a, *body);
      }
      case TermKind::kApp: {
        auto f = Infer(m->left, env);
        if (!f) return std::nullopt;
        auto a = Infer(m->right, env);
        if (!a) return std::nullopt;
        Type r = Fresh();
        if (!Unify(*f, Arrow(*a, r))) return std::nullopt;
        return r;
      }
      case TermKind::kConst: return std::nullopt;
    }
    return std::nullopt;
  }

 private:
  bool OccursIn(const std::string &v, const Type &t) const {
    Type w = Walk(t);
    if (w->kind == TypeKind::kAtom) return w->name == v;
    if (w->kind == TypeKind::kBase) return false;
    if (w->kind == TypeKind::kBang) return OccursIn(v, w->left);
    return OccursIn(v, w->left) || OccursIn(v, w->right);
  }
  bool Bind(const std::string &v, const Type &t) {
    if (OccursIn(v, t)) return false;
    subst_[v] = t;
    return true;
  }

  std::map<std::string, Type> subst_;
  int counter_ = 0;
};

/** Type equality up to an injective renaming of atoms. */
inline bool TypeEqUpToRenaming(const Type &a, const Type &b,
                               std::map<std::string, std::string> &fw,
                               std::map<std::string, std::string> &bw) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TypeKind::kAtom: {
      auto f = fw.emplace(a->name, b->name).first;
      auto g = bw.emplace(b->name, a->name).first;
      return f->second == b->name && g->second == a->name;
    }
    case TypeKind::kBase: return a->name == b->name;
    case TypeKind::kBang: return TypeEqUpToRenaming(a->left, b->left, fw, bw);
    case TypeKind::kArrow:
      return TypeEqUpToRenaming(a->left, b->left, fw, bw) &&
             TypeEqUpToRenaming(a->right, b->right, fw, bw);
  }
  return false;
}

inline bool TypeEqUpToRenaming(const Type &a, const Type &b) {
  std::map<std::string, std::string> fw, bw;
  return TypeEqUpToRenaming(a, b, fw, bw);
}

/** Linear equalities over literals, for entailment checks. */
class LinearSpan {
 public:
  using Rat = boost::multiprecision::cpp_rational;
  using Vec = std::map<std::string, Rat>;

  explicit LinearSpan(const ModalitySet &c) {
    for (const Constraint &k : c) {
      if (k.kind == Constraint::Kind::kPos) continue;
      Add(Diff(k.lhs, k.rhs));
    }
    // Sums of naturals equal to zero force each summand to zero.
    for (const Constraint &k : c) {
      if (k.kind == Constraint::Kind::kZero) {
        for (const auto &[l, n] : k.lhs.literals) Add(Vec{{l, 1}});
      }
    }
    for (bool changed = true; changed;) {
      changed = false;
      for (const Constraint &k : c) {
        if (k.kind != Constraint::Kind::kEq) continue;
        Vec v = Reduce(Diff(k.lhs, k.rhs));
        bool pos = !v.empty(), neg = !v.empty();
        for (const auto &[l, a] : v) {
          pos = pos && a > 0;
          neg = neg && a < 0;
        }
        if (pos || neg) {
          for (const auto &[l, a] : v) Add(Vec{{l, 1}});
          changed = true;
        }
      }
    }
  }

  static Vec Diff(const ExpTerms &p, const ExpTerms &q) {
    Vec v;
    for (const auto &[l, n] : p.literals) v[l] += n;
    for (const auto &[l, n] : q.literals) v[l] -= n;
    v["#"] += Rat(static_cast<long long>(p.constant)) -
              Rat(static_cast<long long>(q.constant));
    Clean(v);
    return v;
  }

  bool Entails(const ExpTerms &p, const ExpTerms &q) const {
    return Reduce(Diff(p, q)).empty();
  }

 private:
  static void Clean(Vec &v) {
    for (auto it = v.begin(); it != v.end();) {
      it = it->second == 0 ? v.erase(it) : std::next(it);
    }
  }

  Vec Reduce(Vec v) const {
    for (const auto &[pivot, row] : rows_) {
      auto it = v.find(pivot);
      if (it == v.end()) continue;
      Rat f = it->second;
      for (const auto &[l, a] : row) v[l] -= f * a;
      Clean(v);
    }
    return v;
  }

  void Add(Vec v) {
    v = Reduce(std::move(v));
    if (v.empty()) return;
    std::string pivot;
    for (const auto &[l, a] : v) {
      if (l != "#") {
        pivot = l;
        break;
      }
    }
    if (pivot.empty()) return;  // inconsistent; ignored by the matcher
    Rat f = v[pivot];
    for (auto &[l, a] : v) a /= f;
    // Keep rows fully reduced against the new pivot.
    for (auto &[p, row] : rows_) {
      auto it = row.find(pivot);
      if (it == row.end()) continue;
      Rat g = it->second;
      for (const auto &[l, a] : v) row[l] -= g * a;
      Clean(row);
    }
    rows_.emplace_back(pivot, std::move(v));
  }

  std::vector<std::pair<std::string, Vec>> rows_;
};

/**
 * Matches a computed scheme against a reference written with other names.
 * Variables are renamed injectively; literals are renamed injectively and
 * each exponential pair must be equal modulo the computed constraints.
 * Reference equations and positivity facts must be entailed too.
 */
class SchemeMatcher {
 public:
  SchemeMatcher(ModalitySet mine, std::vector<std::string> my_literals)
      : mine_(std::move(mine)), span_(mine_),
        my_literals_(std::move(my_literals)) {}

  bool AddScheme(const Scheme &mine, const Scheme &ref) {
    if (mine->kind != ref->kind) return false;
    switch (mine->kind) {
      case SchemeKind::kVar: {
        auto f = vars_.emplace(ref->name, mine->name).first;
        auto g = vars_back_.emplace(mine->name, ref->name).first;
        return f->second == mine->name && g->second == ref->name;
      }
      case SchemeKind::kBase: return mine->name == ref->name;
      case SchemeKind::kBanged:
        eqs_.push_back({mine->exp.Terms(), ref->exp.Terms()});
        return AddScheme(mine->left, ref->left);
      case SchemeKind::kArrow:
        return AddScheme(mine->left, ref->left) &&
               AddScheme(mine->right, ref->right);
    }
    return false;
  }

  void AddReference(const ModalitySet &ref) {
    for (const Constraint &c : ref) {
      if (c.kind == Constraint::Kind::kPos) {
        pos_.push_back(c.lhs);
      } else {
        ref_eqs_.push_back({c.lhs, c.rhs});
      }
    }
  }

  /** Searches for a literal renaming; the result maps reference to mine. */
  std::optional<std::map<std::string, std::string>> Solve() {
    std::vector<std::string> order;
    std::set<std::string> seen;
    auto note = [&](const ExpTerms &t) {
      for (const auto &[l, n] : t.literals) {
        if (seen.insert(l).second) order.push_back(l);
      }
    };
    for (const auto &[m, r] : eqs_) note(r);
    for (const auto &[l, r] : ref_eqs_) {
      note(l);
      note(r);
    }
    for (const ExpTerms &p : pos_) note(p);
    std::map<std::string, std::string> map;
    std::set<std::string> used;
    if (Search(order, 0, map, used)) return map;
    return std::nullopt;
  }

  const std::map<std::string, std::string> &variables() const {
    return vars_;
  }

 private:
  static std::optional<ExpTerms> Rename(
      const ExpTerms &t, const std::map<std::string, std::string> &map) {
    ExpTerms out;
    out.constant = t.constant;
    for (const auto &[l, n] : t.literals) {
      auto it = map.find(l);
      if (it == map.end()) return std::nullopt;
      out.literals[it->second] += n;
    }
    return out;
  }

  bool Consistent(const std::map<std::string, std::string> &map) const {
    for (const auto &[m, r] : eqs_) {
      auto rr = Rename(r, map);
      if (rr && !span_.Entails(m, *rr)) return false;
    }
    for (const auto &[l, r] : ref_eqs_) {
      auto ll = Rename(l, map), rr = Rename(r, map);
      if (ll && rr && !span_.Entails(*ll, *rr)) return false;
    }
    for (const ExpTerms &p : pos_) {
      auto pp = Rename(p, map);
      if (!pp) continue;
      bool ok = false;
      for (const Constraint &c : mine_) {
        if (c.kind == Constraint::Kind::kPos && span_.Entails(c.lhs, *pp)) {
          ok = true;
        }
      }
      if (!ok) return false;
    }
    return true;
  }

  bool Search(const std::vector<std::string> &order, std::size_t i,
              std::map<std::string, std::string> &map,
              std::set<std::string> &used) {
    if (!Consistent(map)) return false;
    if (i == order.size()) return true;
    for (const std::string &cand : my_literals_) {
      if (used.count(cand)) continue;
      map[order[i]] = cand;
      used.insert(cand);
      if (Search(order, i + 1, map, used)) return true;
      used.erase(cand);
      map.erase(order[i]);
    }
    return false;
  }

  ModalitySet mine_;
  LinearSpan span_;
  std::vector<std::string> my_literals_;
  std::map<std::string, std::string> vars_, vars_back_;
  std::vector<std::pair<ExpTerms, ExpTerms>> eqs_;
  std::vector<std::pair<ExpTerms, ExpTerms>> ref_eqs_;
  std::vector<ExpTerms> pos_;
};

/** Random schemes over small pools of variables and literals. */
class SchemeGen {
 public:
  explicit SchemeGen(unsigned seed, int vars = 3, int lits = 6)
      : rng_(seed), vars_(vars), lits_(lits) {}

  Scheme Gen(int depth) {
    Scheme body;
    if (depth <= 0 || Pick(3) == 0) {
      body = SVar("v" + std::to_string(Pick(vars_)));
    } else {
      body = SArrow(Gen(depth - 1), Gen(depth - 1));
    }
    if (Pick(2) == 0) return body;
    Exponential p = Lit();
    if (Pick(3) == 0) p = p + Lit();
    return SBanged(p, body);
  }

  Type GroundType(int depth) {
    Type t = depth <= 0 || Pick(2) == 0
                 ? Atom(std::string(1, static_cast<char>('A' + Pick(2))))
                 : Arrow(GroundType(depth - 1), GroundType(depth - 1));
    return Bangs(Pick(3) == 0 ? 1 : 0, t);
  }

  int Pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  std::mt19937 &rng() { return rng_; }

 private:
  Exponential Lit() {
    return Exponential::Literal("l" + std::to_string(Pick(lits_)));
  }

  std::mt19937 rng_;
  int vars_;
  int lits_;
};

}  // namespace lightlam::testing
