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

// lightlam: principal typing, checking and evaluation from the shell.
// Exit codes: 0 success, 1 untypable / invalid / unsatisfiable, 2 usage.

#include <fmt/core.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "lightlam/algebra.h"
#include "lightlam/ea_calculus.h"
#include "lightlam/eaterm.h"
#include "lightlam/etas.h"
#include "lightlam/eval.h"
#include "lightlam/infer.h"

namespace lightlam {
namespace {

constexpr int kOk = 0;
constexpr int kNo = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string ReadSource(const std::string &file) {
  if (file == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(file);
  if (!in) throw UsageError(fmt::format("cannot read '{}'", file));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// FILE or -e EXPR, exactly one.
std::string Input(const std::string &file, const std::string &expr) {
  if (!file.empty() && !expr.empty()) {
    throw UsageError("give either FILE or -e EXPR, not both");
  }
  if (!expr.empty()) return expr;
  if (file.empty()) throw UsageError("missing FILE or -e EXPR");
  return ReadSource(file);
}

std::optional<Signature> LoadAlgebra(const std::string &flag) {
  std::string path = flag;
  if (path.empty()) {
    if (const char *env = std::getenv("LIGHTLAM_ALGEBRA")) path = env;
  }
  if (path.empty()) return std::nullopt;
  return LoadSignature(ReadSource(path));
}

Term ParseInput(const std::string &text, const std::optional<Signature> &sig) {
  return ParseTerm(text, sig ? &sig->constants : nullptr);
}

std::string FormatAssignment(const PrincipalTyping &p,
                             const SchemeSubstitution &s) {
  std::string out;
  for (const std::string &l : p.literals) {
    auto it = s.literals.find(l);
    if (it == s.literals.end()) continue;
    out += fmt::format("{}{}={}", out.empty() ? "" : ", ", l, it->second);
  }
  for (const std::string &v : p.variables) {
    auto it = s.types.find(v);
    if (it == s.types.end() || p.store->Bound(v)) continue;
    out += fmt::format("{}'{}={}", out.empty() ? "" : ", ", v, Print(it->second));
  }
  return out;
}

void DumpTree(const PrincipalTyping &p, const PTTree &n, int depth) {
  static const char *kKinds[] = {"var", "abs", "app", "const"};
  std::string line(2 * depth, ' ');
  line += fmt::format("{} {} : {}", kKinds[static_cast<int>(n->kind)],
                      Print(n->term), Print(p.store->Resolve(n->inner)));
  if (!n->wrap.Empty()) line += fmt::format(" wrap {}", Print(n->wrap));
  if (n->binder) {
    line += fmt::format(" binder {}", Print(p.store->Resolve(n->binder)));
  }
  std::cout << line << "\n";
  for (const PTTree &c : n->children) DumpTree(p, c, depth + 1);
}

// `a0=1,'v2=!(A -o A)`; types may contain commas only inside parentheses.
SchemeSubstitution ParseAssign(const PrincipalTyping &p, const std::string &text,
                               const std::optional<Signature> &sig) {
  std::set<std::string> lits(p.literals.begin(), p.literals.end());
  std::set<std::string> vars(p.variables.begin(), p.variables.end());
  SchemeSubstitution s;
  std::vector<std::string> items;
  int depth = 0;
  std::string cur;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      items.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) items.push_back(cur);
  for (std::string item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("bad assignment '" + item + "'");
    std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    auto trim = [](std::string &x) {
      x.erase(0, x.find_first_not_of(" \t"));
      x.erase(x.find_last_not_of(" \t") + 1);
    };
    trim(key);
    trim(value);
    if (!key.empty() && key[0] == '\'') key.erase(0, 1);
    if (lits.count(key)) {
      try {
        s.literals[key] = std::stoull(value);
      } catch (const std::exception &) {
        throw UsageError(fmt::format("literal {} needs a natural", key));
      }
    } else if (vars.count(key)) {
      s.types[key] = ParseType(value, sig ? &sig->type_names : nullptr);
    } else {
      throw UsageError(fmt::format("unknown literal or variable '{}'", key));
    }
  }
  return s;
}

int RunInfer(const std::string &file, const std::string &expr, bool solve,
             const std::string &assign, const std::string &algebra, bool dump,
             bool derivation) {
  auto sig = LoadAlgebra(algebra);
  Term m = ParseInput(Input(file, expr), sig);
  InferResult r = PrincipalType(m);
  if (!r.ok()) {
    std::cout << "UNTYPABLE " << UnifyFailureName(r.reason) << "\n";
    std::cerr << r.error << "\n";
    return kNo;
  }
  const PrincipalTyping &p = *r.typing;
  std::cout << FormatPrincipal(p);
  if (dump) {
    std::cout << "TREE\n";
    DumpTree(p, p.tree, 1);
  }
  if (!solve && assign.empty()) return kOk;
  SchemeSubstitution partial;
  if (!assign.empty()) partial = ParseAssign(p, assign, sig);
  auto s = CompleteSubstitution(p, partial);
  if (!s) {
    std::cout << "UNSAT\n";
    return kNo;
  }
  std::cout << "ASSIGNMENT " << FormatAssignment(p, *s) << "\n";
  Instance inst;
  try {
    inst = Instantiate(p, *s);
  } catch (const InstantiateError &e) {
    std::cout << "INVALID\n";
    std::cerr << e.what() << "\n";
    return kNo;
  }
  std::cout << "TYPE " << Print(inst.type) << "\n";
  std::cout << "JUDGEMENT " << Print(inst.derivation->j) << "\n";
  if (derivation) std::cout << Serialize(inst.derivation);
  return kOk;
}

int RunCheck(bool etas, bool neal, const std::string &file,
             const std::string &algebra) {
  if (etas == neal) throw UsageError("choose exactly one of --etas, --neal");
  std::string text = ReadSource(file);
  if (etas) {
    auto sig = LoadAlgebra(algebra);
    Derivation d = ParseDerivation(text, sig ? &*sig : nullptr);
    CheckResult c = CheckEtas(d);
    if (!c.ok) {
      std::cout << "INVALID " << c.error << "\n";
      return kNo;
    }
    LevelProfile prof = Measures(d);
    std::cout << (c.typing_judgement ? "VALID typing" : "VALID parked") << "\n";
    std::string sizes;
    for (auto v : prof.sizes) sizes += fmt::format("{}{}", sizes.empty() ? "" : ",", v);
    std::cout << fmt::format("LEVEL {} SIZES [{}]\n", prof.level, sizes);
    return kOk;
  }
  NealDerivation d = ParseNealDerivation(text);
  NealCheckResult c = CheckNeal(d);
  if (!c.ok) {
    std::cout << "INVALID " << c.error << "\n";
    return kNo;
  }
  std::cout << "VALID\n";
  return kOk;
}

int RunEval(const std::string &file, const std::string &expr,
            const std::string &strategy, std::size_t max_steps, bool trace,
            bool numerals, const std::string &algebra) {
  Strategy s;
  if (strategy == "cbv") {
    s = Strategy::kCbv;
  } else if (strategy == "cbn") {
    s = Strategy::kCbn;
  } else {
    throw UsageError("--strategy must be cbv or cbn");
  }
  auto sig = LoadAlgebra(algebra);
  Term m = ParseInput(Input(file, expr), sig);
  NormalizeResult r = Normalize(m, s, max_steps);
  if (trace) {
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
      std::cout << FormatTraceStep(i + 1, r.trace[i]) << "\n";
    }
  }
  std::cout << (numerals ? PrintWithNumerals(r.term) : Print(r.term)) << "\n";
  std::cout << "STEPS " << r.trace.size() << "\n";
  if (r.exhausted) {
    std::cout << "FUEL EXHAUSTED\n";
    return kNo;
  }
  return kOk;
}

int RunBounds(const std::string &file, const std::string &expr,
              std::size_t max_steps, const std::string &algebra) {
  auto sig = LoadAlgebra(algebra);
  Term m = ParseInput(Input(file, expr), sig);
  InferResult r = PrincipalType(m);
  if (!r.ok()) {
    std::cout << "UNTYPABLE " << UnifyFailureName(r.reason) << "\n";
    return kNo;
  }
  auto inst = DefaultInstance(*r.typing);
  if (!inst) {
    std::cout << "UNSAT\n";
    return kNo;
  }
  std::cout << "JUDGEMENT " << Print(inst->derivation->j) << "\n";
  if (!inst->ctx.theta.empty()) {
    std::cout << "NOT A TYPING JUDGEMENT\n";
    return kNo;
  }
  InstrumentedResult run = InstrumentedReduce(inst->derivation, max_steps);
  auto sizes = [](const LevelProfile &p) {
    std::string out;
    for (auto v : p.sizes) out += fmt::format("{}{}", out.empty() ? "" : ",", v);
    return "[" + out + "]";
  };
  std::cout << fmt::format("LEVEL {} SIZES {}\n", run.initial.level,
                           sizes(run.initial));
  for (std::size_t i = 0; i < run.trace.size(); ++i) {
    std::cout << FormatTraceStep(i + 1, run.trace[i]) << "\n";
  }
  BoundTable t = ElementaryBounds(run.initial.level, run.initial.Total());
  // Towers get long; large values are shown by their digit count.
  auto show = [](const Bound &b) {
    std::string v = b.ToString();
    return v.size() > 40 ? fmt::format("<{} digits>", v.size()) : v;
  };
  for (std::size_t e = 0; e < t.f.size(); ++e) {
    std::cout << fmt::format("BOUND {} f={} g={}\n", e, show(t.f[e]),
                             show(t.g[e]));
  }
  bool within = t.g.back().Admits(run.trace.size());
  for (const auto &s : run.trace) {
    within = within && t.f.back().Admits(s.profile->Total());
  }
  std::cout << "STEPS " << run.trace.size()
            << (run.exhausted ? " (fuel exhausted)" : "") << "\n";
  for (const std::string &v : run.violations) std::cout << "VIOLATION " << v << "\n";
  if (!within) std::cout << "BOUND EXCEEDED\n";
  bool ok = run.violations.empty() && within;
  std::cout << (ok ? "INEQUALITIES HOLD" : "INEQUALITIES FAIL") << "\n";
  return ok ? kOk : kNo;
}

int RunTranslate(bool sharp, bool star, const std::string &file,
                 const std::string &expr) {
  if (sharp == star) throw UsageError("choose exactly one of --sharp, --star");
  EATerm m = ParseEATerm(Input(file, expr));
  std::cout << Print(sharp ? TranslateSharp(m) : TranslateStar(m)) << "\n";
  return kOk;
}

int RunEAStep(const std::string &file, const std::string &expr, bool all) {
  EATerm m = ParseEATerm(Input(file, expr));
  auto steps = EASteps(m);
  if (steps.empty()) {
    std::cout << "NORMAL\n";
    return kOk;
  }
  for (const EAStep &s : steps) {
    std::cout << fmt::format("{} {} {}\n", s.rule, PathString(s.path),
                             Print(s.result));
    if (!all) break;
  }
  return kOk;
}

int Main(int argc, char **argv) {
  CLI::App app{"Principal typing and evaluation for elementary affine lambda terms"};
  app.require_subcommand(1);

  std::string file, expr, algebra, assign, strategy = "cbv";
  bool solve = false, dump = false, derivation = false, trace = false;
  bool numerals = false, etas = false, neal = false, sharp = false,
       star = false, all = false;
  std::size_t max_steps = 1000;

  auto *infer = app.add_subcommand("infer", "principal typing of a term");
  infer->add_option("file", file, "term file, or - for stdin");
  infer->add_option("-e,--expr", expr, "term text");
  infer->add_flag("--solve", solve, "solve the constraints and instantiate");
  infer->add_option("--assign", assign, "fix literals and variables: a0=1,'v0=A");
  infer->add_option("--algebra", algebra, "algebra signature file");
  infer->add_flag("--dump", dump, "print the derivation template");
  infer->add_flag("--derivation", derivation, "print the elaborated derivation");

  auto *check = app.add_subcommand("check", "validate a serialized derivation");
  check->add_flag("--etas", etas, "three-zone derivation");
  check->add_flag("--neal", neal, "EA-term derivation");
  check->add_option("file", file, "derivation file")->required();
  check->add_option("--algebra", algebra, "algebra signature file");

  auto *eval = app.add_subcommand("eval", "reduce a term");
  eval->add_option("file", file, "term file, or - for stdin");
  eval->add_option("-e,--expr", expr, "term text");
  eval->add_option("--strategy", strategy, "cbv or cbn");
  eval->add_option("--max-steps", max_steps, "fuel");
  eval->add_flag("--trace", trace, "print every step");
  eval->add_flag("--numerals", numerals, "print unary numerals as digits");
  eval->add_option("--algebra", algebra, "algebra signature file");

  auto *bounds = app.add_subcommand("bounds", "instrumented reduction and bounds");
  bounds->add_option("file", file, "term file, or - for stdin");
  bounds->add_option("-e,--expr", expr, "term text");
  bounds->add_option("--max-steps", max_steps, "fuel");
  bounds->add_option("--algebra", algebra, "algebra signature file");

  auto *translate = app.add_subcommand("translate", "EA-term translations");
  translate->add_flag("--sharp", sharp, "compile explicit substitutions");
  translate->add_flag("--star", star, "execute explicit substitutions");
  translate->add_option("file", file, "EA-term file, or - for stdin");
  translate->add_option("-e,--expr", expr, "EA-term text");

  auto *ea_step = app.add_subcommand("ea-step", "EA-term reducts");
  ea_step->add_option("file", file, "EA-term file, or - for stdin");
  ea_step->add_option("-e,--expr", expr, "EA-term text");
  ea_step->add_flag("--all", all, "every reduct instead of the first");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*infer) return RunInfer(file, expr, solve, assign, algebra, dump, derivation);
    if (*check) return RunCheck(etas, neal, file, algebra);
    if (*eval) {
      return RunEval(file, expr, strategy, max_steps, trace, numerals, algebra);
    }
    if (*bounds) return RunBounds(file, expr, max_steps, algebra);
    if (*translate) return RunTranslate(sharp, star, file, expr);
    if (*ea_step) return RunEAStep(file, expr, all);
  } catch (const UsageError &e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const SyntaxError &e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const LinearityError &e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const DerivationError &e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kNo;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNo;
  }
  return kUsage;
}

}  // namespace
}  // namespace lightlam

int main(int argc, char **argv) { return lightlam::Main(argc, argv); }
