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

#include <gtest/gtest.h>

#include <algorithm>
#include <string>

#include "fixtures.h"
#include "lightlam/algebra.h"
#include "lightlam/eaterm.h"

namespace lightlam {
namespace {

using testing::EAGen;
using testing::TermGen;

TEST(ParseTerm, NestedAbstraction) {
  Term t = ParseTerm(R"(\x.\y.x (x y))");
  Term want = Abs("x", Abs("y", App(Var("x"), App(Var("x"), Var("y")))));
  EXPECT_TRUE(Identical(t, want));
}

TEST(ParseTerm, ApplicationAssociatesLeft) {
  EXPECT_TRUE(Identical(ParseTerm("x y z"),
                        App(App(Var("x"), Var("y")), Var("z"))));
}

TEST(ParseTerm, MultiBinderSugar) {
  EXPECT_TRUE(Identical(ParseTerm(R"(\x y.x)"), Abs("x", Abs("y", Var("x")))));
}

TEST(ParseTerm, BodyExtendsRight) {
  EXPECT_TRUE(Identical(ParseTerm(R"(\x.x y)"),
                        Abs("x", App(Var("x"), Var("y")))));
}

TEST(ParseTerm, MissingBinderIsAnError) {
  try {
    ParseTerm(R"(\.x)");
    FAIL() << "parsed";
  } catch (const SyntaxError &e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_GE(e.column(), 1);
  }
}

TEST(ParseTerm, ConstantNeedsSignature) {
  EXPECT_THROW(ParseTerm("iter_U"), SyntaxError);
  Signature sig = LoadSignature("algebra U { s/1, z/0 }");
  Term t = ParseTerm("iter_U (s_U z_U)", &sig.constants);
  EXPECT_EQ(t->left->kind, TermKind::kConst);
}

TEST(ParseEATerm, Promotion) {
  EATerm t = ParseEATerm("!(x)[y/x]");
  ASSERT_EQ(t->kind, EAKind::kProm);
  EXPECT_EQ(t->left->name, "x");
  ASSERT_EQ(t->bindings.size(), 1u);
  EXPECT_EQ(t->bindings[0].arg->name, "y");
  EXPECT_EQ(t->bindings[0].var, "x");
}

TEST(ParseEATerm, Contraction) {
  EATerm t = ParseEATerm("(x y)[w/x,y]");
  ASSERT_EQ(t->kind, EAKind::kContr);
  EXPECT_EQ(t->right->name, "w");
  EXPECT_EQ(t->name, "x");
  EXPECT_EQ(t->name2, "y");
}

TEST(ParseEATerm, RepeatedVariableRejected) {
  EXPECT_THROW(ParseEATerm("!(x x)[]"), LinearityError);
}

TEST(Length, Examples) {
  EXPECT_EQ(Length(Var("x")), 1u);
  EXPECT_EQ(Length(ParseTerm(R"(\x.\y.x (x y))")), 7u);
  EXPECT_EQ(Length(ParseEATerm("(x y)[w/x,y]")), 5u);
}

TEST(Substitute, Replaces) {
  Term r = Substitute(ParseTerm("x y"), "x", ParseTerm(R"(\z.z)"));
  EXPECT_TRUE(AlphaEq(r, ParseTerm(R"((\z.z) y)")));
}

TEST(Substitute, AvoidsCapture) {
  Term r = Substitute(ParseTerm(R"(\y.x)"), "x", Var("y"));
  ASSERT_EQ(r->kind, TermKind::kAbs);
  EXPECT_NE(r->name, "y");
  EXPECT_TRUE(Identical(r->left, Var("y")));
}

TEST(Substitute, AbsentVariable) {
  EXPECT_TRUE(Identical(Substitute(Var("x"), "y", ParseTerm("z z")), Var("x")));
}

TEST(IsValue, Examples) {
  EXPECT_TRUE(IsValue(ParseTerm(R"(\x.x)")));
  EXPECT_TRUE(IsValue(Var("x")));
  EXPECT_FALSE(IsValue(ParseTerm(R"((\x.x) (\y.y))")));
  Signature sig = LoadSignature("algebra U { s/1, z/0 }");
  EXPECT_TRUE(IsValue(ParseTerm("iter_U z_U", &sig.constants)));
}

TEST(AlphaEq, Examples) {
  EXPECT_TRUE(AlphaEq(ParseTerm(R"(\x.x)"), ParseTerm(R"(\y.y)")));
  EXPECT_FALSE(AlphaEq(ParseTerm(R"(\x.\y.x)"), ParseTerm(R"(\x.\y.y)")));
  EXPECT_FALSE(AlphaEq(Var("x"), Var("y")));
  EXPECT_EQ(CanonicalKey(ParseTerm(R"(\x.x z)")),
            CanonicalKey(ParseTerm(R"(\w.w z)")));
}

TEST(EAAlphaEq, BindingsAreAMultiset) {
  EXPECT_TRUE(AlphaEq(ParseEATerm("!(x y)[a/x, b/y]"),
                      ParseEATerm("!(x y)[b/y, a/x]")));
  EXPECT_FALSE(AlphaEq(ParseEATerm("!(x y)[a/x, b/y]"),
                       ParseEATerm("!(x y)[b/x, a/y]")));
}

TEST(SyntaxProperties, TermRoundTrip) {
  TermGen gen(1);
  for (int i = 0; i < 500; ++i) {
    Term t = gen.Open(1 + i % 30);
    EXPECT_TRUE(AlphaEq(ParseTerm(Print(t)), t)) << Print(t);
  }
}

TEST(SyntaxProperties, EATermRoundTripKeepsLinearity) {
  EAGen gen(2);
  for (int i = 0; i < 500; ++i) {
    EATerm t = gen.Gen(1 + i % 40);
    ASSERT_TRUE(IsLinear(t)) << Print(t);
    EATerm back = ParseEATerm(Print(t));
    EXPECT_TRUE(AlphaEq(back, t)) << Print(t);
    EXPECT_TRUE(IsLinear(back));
    if (t->kind == EAKind::kProm) {
      auto bs = t->bindings;
      std::reverse(bs.begin(), bs.end());
      EATerm perm = EProm(t->left, bs);
      EXPECT_TRUE(IsLinear(perm));
      EXPECT_TRUE(AlphaEq(perm, t));
    }
  }
}

TEST(SyntaxProperties, SubstitutionLengthBound) {
  TermGen gen(3);
  for (int i = 0; i < 500; ++i) {
    Term m = gen.Open(1 + i % 20), n = gen.Open(1 + i % 7);
    Term r = Substitute(m, "p", n);
    EXPECT_LE(Length(r), Length(m) + CountFree(m, "p") * Length(n));
    if (!IsFree(m, "p")) EXPECT_TRUE(AlphaEq(r, m));
  }
}

}  // namespace
}  // namespace lightlam
