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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
// and exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <fmt/core.h>
#include <fmt/ranges.h>

#include "fixtures.h"
#include "lightlam/algebra.h"
#include "lightlam/ea_calculus.h"
#include "lightlam/etas.h"
#include "lightlam/eval.h"
#include "lightlam/infer.h"
#include "lightlam/solve.h"
#include "lightlam/unify.h"
#include "oracles.h"

namespace lightlam {
namespace {

using Clock = std::chrono::steady_clock;
using testing::ConstTermGen;
using testing::EAGen;
using testing::SchemeGen;
using testing::SchemeMatcher;
using testing::SimpleTypes;
using testing::TermGen;

struct Outcome {
  bool pass = true;
  std::string detail;

  // Records the first failure only.
  void Require(bool ok, const std::string &why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

const char *kTwo = R"(\x.\y.x (x y))";
const char *kThree = R"(\x.\y.x (x (x y)))";
const std::string kTwoThree =
    std::string("(") + kTwo + ") (" + kThree + ")";

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::optional<PrincipalTyping> PT(const std::string &m) {
  auto r = PrincipalType(ParseTerm(m));
  if (!r.ok()) return std::nullopt;
  return *r.typing;
}

struct Match {
  std::map<std::string, std::string> literals;
  std::map<std::string, std::string> variables;
};

std::optional<Match> MatchReference(const PrincipalTyping &p,
                                    const std::string &scheme,
                                    const std::string &constraints) {
  SchemeMatcher m(p.constraints, p.literals);
  if (!m.AddScheme(p.type, ParseScheme(scheme))) return std::nullopt;
  m.AddReference(ParseModalitySet(constraints));
  auto lits = m.Solve();
  if (!lits) return std::nullopt;
  return Match{*lits, m.variables()};
}

SchemeSubstitution Translate(const Match &m,
                             const std::map<std::string, std::uint64_t> &lits,
                             const std::map<std::string, Type> &vars) {
  SchemeSubstitution s;
  for (const auto &[l, v] : lits) s.literals[m.literals.at(l)] = v;
  for (const auto &[x, t] : vars) s.types[m.variables.at(x)] = t;
  return s;
}

const char *kTwoScheme =
    "!^i (!^f (!^b 'be -o !^e 'be) -o !^k (!^{h+b+d} 'be -o !^{h+e} 'be))";
const char *kTwoConstraints =
    "{a=0, a1=0, a1=a+d, c+d=b, c=e, f=k+h+a1, f>0}";
const char *kThreeScheme =
    "!^s (!^g (!^bp 'al -o !^ep 'al) -o "
    "!^r (!^{q+hp+bp+dp} 'al -o !^{p+q} 'al))";
const char *kThreeConstraints =
    "{ap=0, a1p=0, a1p=dp+ap, bp=cp+dp, ep=cp, n=0, n=hp+a1p, "
    "bp=hp+ep, ep=p, g=r+q+hp+a1p, g>0}";
const char *kTwoThreeScheme =
    "!^{t+w} (!^{h+b+d} (!^bp 'al -o !^ep 'al) -o "
    "!^{h+e} (!^bp 'al -o !^ep 'al))";
const char *kTwoThreeConstraints =
    "{i=0, s=k+h+a1, t=k, b=g, e=r, ep=p+q, bp=q+hp+bp+dp, "
    "g=r+q+hp+a1p, g>0, f=k+h+a1, f>0}";

bool ValidTyping(const Derivation &d) {
  auto c = CheckEtas(d);
  return c.ok && c.typing_judgement;
}

// 1. Principal types of the numeral examples.
Outcome PrincipalExamples() {
  Outcome o;
  struct Case {
    std::string term;
    const char *scheme, *constraints;
  };
  double worst = 0;
  for (const Case &c : {Case{kTwo, kTwoScheme, kTwoConstraints},
                        Case{kThree, kThreeScheme, kThreeConstraints},
                        Case{kTwoThree, kTwoThreeScheme, kTwoThreeConstraints}}) {
    auto start = Clock::now();
    auto p = PT(c.term);
    worst = std::max(worst, Seconds(start));
    o.Require(p.has_value(), "untypable: " + c.term);
    if (!p) return o;
    o.Require(MatchReference(*p, c.scheme, c.constraints).has_value(),
              "no match for " + c.term);
  }
  o.Require(worst < 1.0, fmt::format("slowest took {:.3f}s", worst));
  if (o.pass) o.detail = fmt::format("3 matches, slowest {:.4f}s", worst);
  return o;
}

// 2. Concrete typings obtained by instantiating principal typings.
Outcome ConcreteTypings() {
  Outcome o;
  Type a = Atom("A");
  auto two = PT(kTwo);
  auto m2 = MatchReference(*two, kTwoScheme, kTwoConstraints);
  o.Require(m2.has_value(), "2 does not match");
  if (!m2) return o;
  auto s2 = CompleteSubstitution(
      *two, Translate(*m2,
                      {{"b", 0}, {"e", 0}, {"h", 0}, {"d", 0}, {"a1", 0},
                       {"a", 0}, {"k", 1}, {"f", 1}, {"i", 0}},
                      {{"be", a}}));
  o.Require(s2.has_value(), "2: assignment rejected");
  if (s2) {
    Instance inst = Instantiate(*two, *s2);
    o.Require(TypeEq(inst.type, ParseType("!(A -o A) -o !(A -o A)")),
              "2: got " + Print(inst.type));
    o.Require(ValidTyping(inst.derivation), "2: invalid derivation");
  }
  for (const char *t : {"!(A -o A) -o !(A -o A)", "!(A -o A) -o !A -o !A",
                        "!!(A -o A) -o !(!A -o !A)"}) {
    Type want = ParseType(t);
    auto inst = FindInstance(*two, nullptr, &want);
    o.Require(inst && ValidTyping(inst->derivation),
              std::string("2 not typed at ") + t);
  }

  auto tt = PT(kTwoThree);
  auto m23 = MatchReference(*tt, kTwoThreeScheme, kTwoThreeConstraints);
  o.Require(m23.has_value(), "2 3 does not match");
  if (!m23) return o;
  // b = e = bp = ep = 0 with t = h = 1 contradicts b = g, g > 0.
  bool zeroes = CompleteSubstitution(
                    *tt, Translate(*m23,
                                   {{"b", 0}, {"e", 0}, {"bp", 0}, {"ep", 0},
                                    {"t", 1}, {"h", 1}, {"w", 0}},
                                   {{"al", a}}))
                    .has_value();
  o.Require(!zeroes, "2 3: contradictory assignment accepted");
  auto s23 = CompleteSubstitution(
      *tt, Translate(*m23,
                     {{"b", 1}, {"e", 1}, {"d", 0}, {"bp", 0}, {"ep", 0},
                      {"t", 1}, {"h", 0}, {"w", 0}},
                     {{"al", a}}));
  o.Require(s23.has_value(), "2 3: assignment rejected");
  if (s23) {
    Instance inst = Instantiate(*tt, *s23);
    o.Require(TypeEq(inst.type, ParseType("!(!(A -o A) -o !(A -o A))")),
              "2 3: got " + Print(inst.type));
    o.Require(ValidTyping(inst.derivation), "2 3: invalid derivation");
  }
  if (o.pass) {
    o.detail = "2 at three types; 2 3 at !(!(A -o A) -o !(A -o A)) with b=e=1";
  }
  return o;
}

// 3. Level and sizes of the typing of 2, and size equals length.
Outcome SizesMatchLength() {
  Outcome o;
  auto two = PT(kTwo);
  Type want = ParseType(testing::Expand("!$C -o !$C"));
  std::string why;
  auto inst = FindInstance(*two, nullptr, &want, &why);
  o.Require(inst.has_value(), "2 not typed at !C -o !C: " + why);
  if (inst) {
    LevelProfile p = Measures(inst->derivation);
    o.Require(p.level == 2 &&
                  p.sizes == std::vector<std::uint64_t>{1, 5, 1},
              fmt::format("level {} sizes [{}]", p.level,
                          fmt::join(p.sizes, ",")));
  }
  TermGen gen(1001);
  int checked = 0;
  for (int i = 0; i < 20000 && checked < 500; ++i) {
    Term m = gen.Open(2 + i % 39);
    auto r = PrincipalType(m);
    if (!r.ok()) continue;
    auto d = DefaultInstance(*r.typing);
    if (!d) continue;
    ++checked;
    o.Require(Measures(d->derivation).Total() == Length(m),
              "size differs from length for " + Print(m));
  }
  o.Require(checked == 500, fmt::format("only {} terms", checked));
  if (o.pass) o.detail = "level 2 sizes [1,5,1]; 500 random typings";
  return o;
}

// 4. Every call-by-value redex along a run preserves the judgement.
Outcome SubjectReduction() {
  Outcome o;
  TermGen gen(1002);
  int terms = 0;
  std::size_t redexes = 0;
  for (int i = 0; i < 20000 && terms < 300; ++i) {
    Term m = gen.Closed(3 + i % 28);
    auto r = PrincipalType(m);
    if (!r.ok()) continue;
    auto inst = DefaultInstance(*r.typing);
    if (!inst) continue;
    ++terms;
    Derivation d = inst->derivation;
    for (int k = 0; k < 200 && o.pass; ++k) {
      auto paths = RedexPaths(d->j.term, Strategy::kCbv);
      if (paths.empty()) break;
      std::optional<Derivation> next;
      auto step = Step(d->j.term, Strategy::kCbv);
      for (const Path &p : paths) {
        ++redexes;
        ReduceResult red = ReduceDerivation(d, p);
        std::string where = Print(d->j.term) + " at " + PathString(p);
        auto c = CheckEtas(red.derivation);
        o.Require(c.ok, "invalid after " + where + ": " + c.error);
        o.Require(ContextEq(red.derivation->j.ctx, d->j.ctx) &&
                      TypeEq(red.derivation->j.type, d->j.type),
                  "judgement changed after " + where);
        o.Require(AlphaEq(red.derivation->j.term, ContractAt(d->j.term, p)),
                  "wrong reduct after " + where);
        if (step && PathString(p) == PathString(step->redex)) {
          next = red.derivation;
        }
      }
      if (!next) break;
      d = *next;
    }
  }
  o.Require(terms == 300, fmt::format("only {} terms", terms));
  if (o.pass) o.detail = fmt::format("300 terms, {} redexes", redexes);
  return o;
}

// 5. A call-by-name reduct of a typable term need not be typable.
Outcome CallByNameCounterexample() {
  Outcome o;
  Context ctx;
  ctx.gamma = {{"y", ParseType("!A -o !A -o A")},
               {"w", ParseType("A -o !A")},
               {"z", ParseType("A")}};
  Type a = ParseType("A");
  auto good = PT(R"((\x.y x x) (w z))");
  o.Require(good.has_value(), "redex untypable");
  if (!good) return o;
  auto inst = FindInstance(*good, &ctx, &a);
  o.Require(inst && ValidTyping(inst->derivation), "redex not typed");
  auto bad = PT("y (w z) (w z)");
  o.Require(!bad || !FindInstance(*bad, &ctx, &a), "reduct typed");
  if (o.pass) o.detail = "redex typed, reduct rejected in the same context";
  return o;
}

// 6. Size inequalities and elementary bounds on instrumented runs.
Outcome StratifiedBounds() {
  Outcome o;
  auto t = ElementaryBounds(1, 1);
  o.Require(t.f[1].value == 17 && t.g[1].value == 18,
            "f1(1), g1(1) = " + t.f[1].ToString() + ", " + t.g[1].ToString());
  TermGen gen(1003);
  int runs = 0;
  std::size_t steps = 0;
  for (int i = 0; i < 40000 && runs < 200; ++i) {
    Term m = gen.Closed(4 + i % 37);
    auto r = PrincipalType(m);
    if (!r.ok()) continue;
    auto inst = DefaultInstance(*r.typing);
    if (!inst || Measures(inst->derivation).level > 2) continue;
    auto res = InstrumentedReduce(inst->derivation, 500);
    ++runs;
    steps += res.trace.size();
    o.Require(res.violations.empty(),
              Print(m) + ": " +
                  (res.violations.empty() ? "" : res.violations[0]));
    auto b = ElementaryBounds(res.initial.level, res.initial.Total(), 4096);
    o.Require(b.g.back().Admits(res.trace.size()), "step bound: " + Print(m));
    for (const auto &s : res.trace) {
      o.Require(b.f.back().Admits(s.profile->Total()),
                "size bound: " + Print(m));
    }
  }
  o.Require(runs == 200, fmt::format("only {} runs", runs));
  if (o.pass) o.detail = fmt::format("200 runs, {} steps", steps);
  return o;
}

// 7. The sharp translation at most doubles length and reduces to star.
Outcome SharpTranslation() {
  Outcome o;
  EAGen gen(1004);
  for (int i = 0; i < 500; ++i) {
    EATerm m = gen.Gen(1 + i % 60);
    std::string s = Print(m);
    o.Require(Length(TranslateSharp(m)) <= 2 * Length(m), "length: " + s);
    auto seq = SharpToStar(m);
    o.Require(!seq.empty() && AlphaEq(seq.front(), TranslateSharp(m)) &&
                  AlphaEq(seq.back(), TranslateStar(m)),
              "sharp to star: " + s);
  }
  if (o.pass) o.detail = "500 terms";
  return o;
}

// 8. Call-by-value steps of the sharp image are simulated.
Outcome Simulation() {
  Outcome o;
  TermGen gen(1005);
  int tried = 0, found = 0, exhausted = 0, multi = 0;
  std::set<std::string> seen;
  for (int i = 0; i < 40000 && tried < 100; ++i) {
    Term m = gen.Closed(3 + i % 20);
    auto r = PrincipalType(m);
    if (!r.ok()) continue;
    // Random exponents; the smallest solution rarely promotes anything.
    SchemeSubstitution partial;
    for (const auto &l : r.typing->literals) {
      if (gen.rng()() % 2 == 0) partial.literals[l] = gen.rng()() % 3;
    }
    auto s = CompleteSubstitution(*r.typing, partial);
    if (!s) continue;
    auto neal = EtasToNeal(Instantiate(*r.typing, *s).derivation);
    if (!CheckNeal(neal.derivation).ok) {
      o.Require(false, "elaboration not typable: " + Print(neal.term));
      continue;
    }
    if (Length(neal.term) > 25) continue;
    // Keep terms with box arguments or contractions.
    if (Print(neal.term).find('/') == std::string::npos) continue;
    Term sharp = TranslateSharp(neal.term);
    auto step = Step(sharp, Strategy::kCbv);
    if (!step) continue;
    if (!seen.insert(CanonicalKey(TranslateStar(neal.term)) + Print(neal.term))
             .second) {
      continue;
    }
    ++tried;
    auto sim = SimulateCbv(neal.term);
    switch (sim.status) {
      case SimulateResult::Status::kFound:
        o.Require(AlphaEq(sim.target, step->result) &&
                      AlphaEq(TranslateSharp(sim.sequence.back()), sim.target),
                  "wrong match for " + Print(neal.term));
        ++found;
        multi += sim.rules.size() > 1;
        break;
      case SimulateResult::Status::kBudgetExhausted:
        fmt::print("  budget exhausted: {}\n", Print(neal.term));
        ++exhausted;
        break;
      default:
        fmt::print("  not simulated: {}\n", Print(neal.term));
        break;
    }
  }
  o.Require(tried == 100, fmt::format("only {} terms", tried));
  o.Require(found * 100 >= 95 * tried,
            fmt::format("{}/{} simulated, {} exhausted", found, tried,
                        exhausted));
  if (o.pass) {
    o.detail = fmt::format("{}/{} simulated, {} in several steps, {} exhausted",
                           found, tried, multi, exhausted);
  }
  return o;
}

std::optional<SchemeSubstitution> RandomModel(SchemeGen &g,
                                              const ModalitySet &c,
                                              const std::set<std::string> &lits,
                                              const std::set<std::string> &vars) {
  for (int attempt = 0; attempt < 6; ++attempt) {
    ModalitySet fixed = c;
    for (const auto &l : lits) {
      if (attempt < 5 && g.Pick(2) == 0) {
        if (auto e = MakeEq(Exponential::Literal(l),
                            Exponential::Constant(g.Pick(3)))) {
          fixed.insert(*e);
        }
      }
    }
    auto r = SolveConstraints(fixed, SolveMode::kPreferSmall, &lits);
    if (!r.sat()) continue;
    SchemeSubstitution s;
    s.literals = r.assignment;
    for (const auto &v : vars) s.types[v] = g.GroundType(2);
    return s;
  }
  return std::nullopt;
}

// 9. Unification is sound on ground instances and agrees with Robinson.
Outcome Unification() {
  Outcome o;
  SchemeGen g(1006);
  int successes = 0;
  for (int tries = 0; successes < 200 && tries < 20000; ++tries) {
    TypeScheme z1{g.Gen(3), {}}, z2{g.Gen(3), {}};
    auto r = Unify(z1, z2);
    if (!r.ok) continue;
    ++successes;
    auto a = ApplySubst(r.subst, z1), b = ApplySubst(r.subst, z2);
    std::string pair = Print(z1) + " ~ " + Print(z2);
    o.Require(EqE(a, b), "unequal: " + pair);
    std::set<std::string> lits, vars;
    CollectLiterals(a.scheme, lits);
    CollectLiterals(b.scheme, lits);
    CollectLiterals(r.subst.constraints, lits);
    CollectVars(a.scheme, vars);
    CollectVars(b.scheme, vars);
    for (int k = 0; k < 20; ++k) {
      auto s = RandomModel(g, r.subst.constraints, lits, vars);
      o.Require(s && Satisfies(*s, r.subst.constraints), "no model: " + pair);
      if (!s) break;
      o.Require(TypeEq(Ground(*s, a.scheme), Ground(*s, b.scheme)),
                "ground instances differ: " + pair);
    }
  }
  o.Require(successes == 200, fmt::format("only {} unifiable", successes));
  int disagreements = 0;
  for (int i = 0; i < 2000; ++i) {
    TypeScheme z1{g.Gen(3), {}}, z2{g.Gen(3), {}};
    SimpleTypes oracle;
    bool simple = oracle.Unify(Skeleton(z1), Skeleton(z2));
    auto r = Unify(z1, z2);
    disagreements += simple != r.ok;
  }
  o.Require(disagreements == 0,
            fmt::format("{} disagreements with Robinson", disagreements));
  if (o.pass) o.detail = "200x20 ground checks, 2000 skeleton pairs";
  return o;
}

// 10. Algebra constants, exponential and coercion, normal forms.
Outcome Algebras() {
  Outcome o;
  Signature sig = LoadSignature("algebra U { s/1, z/0 }");
  auto eval = [](const Term &m) {
    return Normalize(m, Strategy::kCbv, 20000).term;
  };
  auto n = [&](int k) { return Numeral(sig, "U", k); };
  Term iter = Apply(Const(sig.Constant("iter_U")), {n(3), Var("f"), Var("b")});
  o.Require(AlphaEq(eval(iter), ParseTerm("f (f (f b))")), "iter 3 f b");
  for (int m = 0; m <= 4; ++m) {
    Term vm = eval(App(ExpTerm(sig, "U"), n(m)));
    for (int p = 0; p <= 3; ++p) {
      o.Require(AsNumeral(eval(App(vm, n(p)))) == (1 << m) + p,
                fmt::format("exp {} {}", m, p));
    }
  }
  for (int k = 0; k <= 2; ++k) {
    for (int m = 0; m <= 5; ++m) {
      o.Require(AlphaEq(eval(App(CoercTerm(sig, "U", k), n(m))), n(m)),
                fmt::format("coerc {} {}", k, m));
    }
  }
  ConstTermGen gen(1007);
  int values = 0;
  for (int i = 0; i < 10000 && values < 200; ++i) {
    Term m = gen.Closed(3 + i % 15);
    if (!Typable(m)) continue;
    auto r = Normalize(m, Strategy::kCbv, 2000);
    if (r.exhausted) continue;
    ++values;
    o.Require(IsValue(r.term), "not a value: " + Print(r.term));
  }
  o.Require(values == 200, fmt::format("only {} terms", values));
  if (o.pass) o.detail = "iter, exp, coerc, 200 normal forms";
  return o;
}

// 11. Inference time on a chain of nested applications.
Outcome InferenceScaling() {
  Outcome o;
  std::vector<std::pair<std::size_t, double>> times;
  for (std::size_t target : {250u, 500u, 1000u, 2000u}) {
    std::size_t k = (target - 1) / 3;
    Term body = Var("y");
    for (std::size_t i = k; i >= 1; --i) {
      body = App(Var("x" + std::to_string(i)), body);
    }
    for (std::size_t i = k; i >= 1; --i) {
      body = Abs("x" + std::to_string(i), body);
    }
    double best = 1e9;
    for (int rep = 0; rep < 3; ++rep) {
      auto start = Clock::now();
      auto r = PrincipalType(body);
      best = std::min(best, Seconds(start));
      o.Require(r.ok(), "untypable chain");
    }
    times.push_back({Length(body), best});
    o.Require(best < 1.0, fmt::format("L={} took {:.3f}s", Length(body), best));
  }
  // Quadratic growth allows a factor 4 per doubling; small timings are noisy.
  for (std::size_t i = 1; i < times.size(); ++i) {
    double allowed = 4.0 * 1.5 * std::max(times[i - 1].second, 1e-3);
    o.Require(times[i].second <= allowed,
              fmt::format("L={} {:.4f}s after {:.4f}s", times[i].first,
                          times[i].second, times[i - 1].second));
  }
  std::string list;
  for (const auto &[l, s] : times) list += fmt::format(" L={}:{:.4f}s", l, s);
  if (o.pass) o.detail = list.substr(1);
  return o;
}

}  // namespace
}  // namespace lightlam

int main() {
  using namespace lightlam;
  const std::vector<std::pair<const char *, std::function<Outcome()>>> checks =
      {{"principal types of 2, 3 and 2 3", PrincipalExamples},
       {"concrete typings by instantiation", ConcreteTypings},
       {"level sizes and size equals length", SizesMatchLength},
       {"subject reduction on call-by-value redexes", SubjectReduction},
       {"call-by-name counterexample", CallByNameCounterexample},
       {"size inequalities and elementary bounds", StratifiedBounds},
       {"sharp translation", SharpTranslation},
       {"simulation of call-by-value steps", Simulation},
       {"unification", Unification},
       {"algebras", Algebras},
       {"inference scaling", InferenceScaling}};
  int failed = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    auto start = Clock::now();
    Outcome o;
    try {
      o = checks[i].second();
    } catch (const std::exception &e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    fmt::print("{} {:2} {} ({}; {:.1f}s)\n", o.pass ? "PASS" : "FAIL", i + 1,
               checks[i].first, o.detail, Seconds(start));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
