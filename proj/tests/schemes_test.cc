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

#include <gtest/gtest.h>

#include <map>
#include <string>

#include "oracles.h"

namespace lightlam {
namespace {

using testing::SchemeGen;

TypeScheme Z(const std::string &s, const std::string &c = "") {
  return {ParseScheme(s), ParseModalitySet(c)};
}

// Removes every bang.
Type Erase(const Type &t) {
  switch (t->kind) {
    case TypeKind::kBang: return Erase(t->left);
    case TypeKind::kArrow: return Arrow(Erase(t->left), Erase(t->right));
    default: return t;
  }
}

Type SubstAtoms(const Type &t, const std::map<std::string, Type> &m) {
  switch (t->kind) {
    case TypeKind::kAtom: {
      auto it = m.find(t->name);
      return it == m.end() ? t : it->second;
    }
    case TypeKind::kBang: return Bang(SubstAtoms(t->left, m));
    case TypeKind::kArrow:
      return Arrow(SubstAtoms(t->left, m), SubstAtoms(t->right, m));
    default: return t;
  }
}

bool NoNestedBang(const Scheme &s) {
  switch (s->kind) {
    case SchemeKind::kBanged:
      return s->left->kind != SchemeKind::kBanged && NoNestedBang(s->left);
    case SchemeKind::kArrow: return NoNestedBang(s->left) && NoNestedBang(s->right);
    default: return true;
  }
}

// Replaces literals defined by r=sum (r not occurring elsewhere on a left
// side) by their definitions, recursively.
Scheme ExpandDefs(const Scheme &s, const ModalitySet &c) {
  std::map<std::string, ExpTerms> defs;
  for (const Constraint &k : c) {
    if (k.kind == Constraint::Kind::kEq && k.lhs.literals.size() == 1 &&
        k.lhs.literals.begin()->second == 1 && k.lhs.constant == 0) {
      defs[k.lhs.literals.begin()->first] = k.rhs;
    }
  }
  std::function<ExpTerms(const ExpTerms &)> expand = [&](const ExpTerms &t) {
    ExpTerms out;
    out.constant = t.constant;
    for (const auto &[l, n] : t.literals) {
      auto it = defs.find(l);
      if (it == defs.end()) {
        out.literals[l] += n;
        continue;
      }
      ExpTerms sub = expand(it->second);
      for (const auto &[m, k] : sub.literals) out.literals[m] += n * k;
      out.constant += n * sub.constant;
    }
    return out;
  };
  std::function<Scheme(const Scheme &)> rec = [&](const Scheme &x) -> Scheme {
    switch (x->kind) {
      case SchemeKind::kBanged:
        return SBanged(Exponential::FromTerms(expand(x->exp.Terms())),
                       rec(x->left));
      case SchemeKind::kArrow: return SArrow(rec(x->left), rec(x->right));
      default: return x;
    }
  };
  return rec(s);
}

Substitution RandomSubst(SchemeGen &g) {
  Substitution t;
  for (int v = 0; v < 3; ++v) {
    if (g.Pick(3) == 0) continue;
    t.map["v" + std::to_string(v)] = g.Gen(2);
  }
  return t;
}

TEST(Skeleton, ErasesBangs) {
  EXPECT_TRUE(TypeEq(Skeleton(Z("!^a 'al")), Atom("al")));
  EXPECT_TRUE(TypeEq(Skeleton(Z("!^a 'al -o !^b 'be", "a>0")),
                     ParseType("al -o be")));
  EXPECT_TRUE(TypeEq(Skeleton(Z("'al", "a=0")), Atom("al")));
}

TEST(ApplySchemeSubst, PrefixesBangs) {
  SchemeSubstitution s{{{"al", Atom("A")}}, {{"a", 2}}};
  auto t = ApplySchemeSubst(s, Z("!^a 'al"));
  ASSERT_TRUE(t);
  EXPECT_EQ(Print(*t), Print(ParseType("!!A")));
}

TEST(ApplySchemeSubst, UndefinedWhenConstraintFails) {
  SchemeSubstitution s{{{"al", Atom("A")}}, {{"a", 0}}};
  EXPECT_FALSE(ApplySchemeSubst(s, Z("!^a 'al", "a>0")));
}

TEST(ApplySchemeSubst, SumsLiterals) {
  SchemeSubstitution s{{{"al", Atom("A")}}, {{"a", 1}, {"b", 2}}};
  EXPECT_EQ(Evaluate(s, ParseExponential("a+b")), 3u);
  auto t = ApplySchemeSubst(s, Z("!^{a+b} 'al"));
  ASSERT_TRUE(t);
  EXPECT_TRUE(TypeEq(*t, ParseType("!!!A")));
}

TEST(ApplySchemeSubst, UnmappedNameThrows) {
  SchemeSubstitution s{{}, {{"a", 1}}};
  EXPECT_THROW(ApplySchemeSubst(s, Z("!^a 'al")), SchemeError);
}

TEST(ApplySubst, VariableClauseUnionsConstraints) {
  Substitution t{{{"al", SVar("be")}}, ParseModalitySet("a=0")};
  auto z = ApplySubst(t, Z("'al", "b>0"));
  EXPECT_EQ(Print(z), "'be | {a=0, b>0}");
}

TEST(ApplySubst, FlatteningEmitsSum) {
  Substitution t{{{"al", ParseScheme("!^q 'be")}}, {}};
  FreshNames fresh("r", "w");
  fresh.Reserve("p");
  fresh.Reserve("q");
  auto z = ApplySubst(t, Z("!^p 'al"), &fresh);
  EXPECT_EQ(Print(z), "!^r0 'be | {r0=p+q}");
  // Without a generator the exponents are merged in place.
  EXPECT_EQ(Print(ApplySubst(t, Z("!^p 'al"))), "!^{p+q} 'be | {}");
}

TEST(ApplySubst, IdentityLeavesSchemeAlone) {
  SchemeGen g(7);
  for (int i = 0; i < 50; ++i) {
    TypeScheme z{g.Gen(3), ParseModalitySet("l0>0")};
    auto out = ApplySubst(Substitution{}, z);
    EXPECT_TRUE(SchemeEq(out.scheme, z.scheme));
    EXPECT_EQ(out.constraints, z.constraints);
  }
}

TEST(Compose, IdentityOnTheLeft) {
  SchemeGen g(11);
  for (int i = 0; i < 50; ++i) {
    Substitution t = RandomSubst(g);
    TypeScheme z{g.Gen(3), {}};
    EXPECT_TRUE(SchemeEq(ApplySubst(Compose(Substitution{}, t), z).scheme,
                         ApplySubst(t, z).scheme));
  }
}

TEST(Compose, Chains) {
  Substitution t1{{{"al", SVar("be")}}, {}};
  Substitution t2{{{"be", SVar("ga")}}, {}};
  EXPECT_EQ(Print(ApplySubst(Compose(t1, t2), Z("'al"))), "'ga | {}");
}

TEST(Compose, FlatteningTwiceEmitsTwoSums) {
  Substitution t1{{{"al", ParseScheme("!^q 'be")}}, {}};
  Substitution t2{{{"be", ParseScheme("!^u 'ga")}}, {}};
  FreshNames fresh("r", "w");
  for (const char *n : {"p", "q", "u"}) fresh.Reserve(n);
  TypeScheme z = Z("!^p 'al");
  auto composed = ApplySubst(Compose(t1, t2, &fresh), z, &fresh);
  auto stepwise = ApplySubst(t2, ApplySubst(t1, z, &fresh), &fresh);
  int sums = 0;
  for (const Constraint &c : stepwise.constraints) {
    sums += c.kind == Constraint::Kind::kEq;
  }
  EXPECT_EQ(sums, 2);
  Scheme expect = ParseScheme("!^{p+q+u} 'ga");
  EXPECT_TRUE(SchemeEq(ExpandDefs(stepwise.scheme, stepwise.constraints),
                       expect));
  EXPECT_TRUE(SchemeEq(ExpandDefs(composed.scheme, composed.constraints),
                       expect));
}

TEST(EqE, ComparesSkeletons) {
  EXPECT_TRUE(EqE(Z("!^a 'al", "a>0"), Z("!^b 'al", "b=0")));
  EXPECT_FALSE(EqE(Z("'al"), Z("'al -o 'be")));
  EXPECT_TRUE(EqE(Z("!^a 'al -o 'be"), Z("'al -o !^c 'be")));
}

TEST(SchemePrint, Forms) {
  EXPECT_EQ(Print(ParseScheme("!^{b+a} ('v0 -o 'v1)")), "!^{a+b} ('v0 -o 'v1)");
  EXPECT_EQ(Print(ParseScheme("!^a !^b 'v0")), "!^{a+b} 'v0");
  EXPECT_EQ(Print(ParseScheme("! U", nullptr)), "!^1 'U");
  EXPECT_EQ(Print(ParseModalitySet("{r=p+q, f>0, a=0}")), "{a=0, f>0, r=p+q}");
  EXPECT_EQ(Print(ParseExponential("a+a")), "a+a");
}

TEST(SchemePrint, MultisetsKeepRepeats) {
  EXPECT_FALSE(ParseExponential("a+a") == ParseExponential("a"));
}

TEST(SchemePrint, RoundTrip) {
  SchemeGen g(3);
  for (int i = 0; i < 200; ++i) {
    Scheme s = g.Gen(4);
    EXPECT_TRUE(SchemeEq(ParseScheme(Print(s)), s)) << Print(s);
  }
}

TEST(SchemeProperties, SubstitutionPreservesGrammar) {
  SchemeGen g(21);
  for (int i = 0; i < 300; ++i) {
    Substitution t = RandomSubst(g);
    Scheme s = g.Gen(4);
    FreshNames fresh("r", "w");
    EXPECT_TRUE(NoNestedBang(ApplySubst(t, s)));
    EXPECT_TRUE(NoNestedBang(ApplySubst(t, s, nullptr, &fresh)));
  }
}

TEST(SchemeProperties, SkeletonInvariance) {
  SchemeGen g(5);
  for (int i = 0; i < 300; ++i) {
    Scheme s = g.Gen(4);
    SchemeSubstitution sub;
    std::set<std::string> vars, lits;
    CollectVars(s, vars);
    CollectLiterals(s, lits);
    std::map<std::string, Type> erased;
    for (const auto &v : vars) {
      sub.types[v] = g.GroundType(2);
      erased[v] = Erase(sub.types[v]);
    }
    for (const auto &l : lits) sub.literals[l] = g.Pick(3);
    auto t = ApplySchemeSubst(sub, {s, {}});
    ASSERT_TRUE(t);
    EXPECT_TRUE(TypeEq(Erase(*t), SubstAtoms(Skeleton(s), erased)));
  }
}

TEST(SchemeProperties, ComposeIsAssociative) {
  SchemeGen g(9);
  for (int i = 0; i < 200; ++i) {
    Substitution a = RandomSubst(g), b = RandomSubst(g), c = RandomSubst(g);
    TypeScheme z{g.Gen(3), {}};
    auto left = ApplySubst(Compose(Compose(a, b), c), z);
    auto right = ApplySubst(Compose(a, Compose(b, c)), z);
    auto step = ApplySubst(c, ApplySubst(b, ApplySubst(a, z)));
    EXPECT_TRUE(SchemeEq(left.scheme, right.scheme));
    EXPECT_TRUE(SchemeEq(left.scheme, step.scheme));
  }
}

TEST(SchemeProperties, FreshComposeAgreesAfterExpansion) {
  SchemeGen g(13);
  for (int i = 0; i < 200; ++i) {
    Substitution a = RandomSubst(g), b = RandomSubst(g);
    TypeScheme z{g.Gen(3), {}};
    FreshNames fresh("r", "w");
    auto composed = ApplySubst(Compose(a, b, &fresh), z, &fresh);
    auto plain = ApplySubst(b, ApplySubst(a, z));
    EXPECT_TRUE(SchemeEq(ExpandDefs(composed.scheme, composed.constraints),
                         plain.scheme))
        << Print(composed) << " vs " << Print(plain);
  }
}

}  // namespace
}  // namespace lightlam
