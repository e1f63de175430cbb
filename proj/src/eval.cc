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

#include "lightlam/eval.h"

#include <fmt/format.h>

#include "lightlam/algebra.h"

namespace lightlam {

namespace {

bool IsBetaRedex(const Term &t, Strategy s) {
  if (t->kind != TermKind::kApp || t->left->kind != TermKind::kAbs) {
    return false;
  }
  return s == Strategy::kCbn || IsValue(t->right);
}

bool IsDeltaRedex(const Term &t) {
  return t->kind == TermKind::kApp && DeltaStep(t).has_value();
}

bool IsRedex(const Term &t, Strategy s) {
  return IsBetaRedex(t, s) || IsDeltaRedex(t);
}

void Collect(const Term &t, Strategy s, Path &p, std::vector<Path> &out) {
  if (IsRedex(t, s)) out.push_back(p);
  if (t->kind == TermKind::kApp) {
    p.push_back(0);
    Collect(t->left, s, p, out);
    p.back() = 1;
    Collect(t->right, s, p, out);
    p.pop_back();
  } else if (t->kind == TermKind::kAbs) {
    p.push_back(0);
    Collect(t->left, s, p, out);
    p.pop_back();
  }
}

bool FindFirst(const Term &t, Strategy s, Path &p) {
  if (IsRedex(t, s)) return true;
  if (t->kind == TermKind::kApp) {
    p.push_back(0);
    if (FindFirst(t->left, s, p)) return true;
    p.back() = 1;
    if (FindFirst(t->right, s, p)) return true;
    p.pop_back();
  } else if (t->kind == TermKind::kAbs) {
    p.push_back(0);
    if (FindFirst(t->left, s, p)) return true;
    p.pop_back();
  }
  return false;
}

}  // namespace

std::string_view StrategyName(Strategy s) {
  return s == Strategy::kCbv ? "cbv" : "cbn";
}

std::vector<Path> RedexPaths(const Term &m, Strategy s) {
  std::vector<Path> out;
  Path p;
  Collect(m, s, p, out);
  return out;
}

Term ContractAt(const Term &m, const Path &p) {
  Term r = SubtermAt(m, p);
  if (r->kind == TermKind::kApp && r->left->kind == TermKind::kAbs) {
    return ReplaceAt(m, p, Substitute(r->left->left, r->left->name, r->right));
  }
  if (auto d = DeltaStep(r)) return ReplaceAt(m, p, *d);
  throw std::invalid_argument("no redex at " + PathString(p));
}

std::optional<StepResult> Step(const Term &m, Strategy s) {
  Path p;
  if (!FindFirst(m, s, p)) return std::nullopt;
  StepResult r;
  r.delta = !IsBetaRedex(SubtermAt(m, p), s);
  r.result = ContractAt(m, p);
  r.redex = std::move(p);
  return r;
}

NormalizeResult Normalize(const Term &m, Strategy s, std::size_t fuel) {
  NormalizeResult out;
  out.term = m;
  while (true) {
    auto st = Step(out.term, s);
    if (!st) return out;
    if (out.trace.size() >= fuel) {
      out.exhausted = true;
      return out;
    }
    out.term = st->result;
    TraceStep t;
    t.strategy = s;
    t.redex = st->redex;
    t.delta = st->delta;
    t.result = st->result;
    out.trace.push_back(std::move(t));
  }
}

InstrumentedResult InstrumentedReduce(const Derivation &d, std::size_t fuel,
                                      const RedexChooser &choose) {
  auto check = CheckEtas(d);
  if (!check.ok) throw DerivationError("invalid derivation: " + check.error);
  if (!check.typing_judgement) {
    throw DerivationError("root is not a typing judgement");
  }
  InstrumentedResult out;
  out.final = d;
  out.initial = Measures(d);
  LevelProfile before = out.initial;
  while (true) {
    const Term &m = out.final->j.term;
    std::optional<Path> p;
    if (choose) {
      p = choose(m);
    } else if (auto st = Step(m, Strategy::kCbv)) {
      p = st->redex;
    }
    if (!p) return out;
    if (out.trace.size() >= fuel) {
      out.exhausted = true;
      return out;
    }
    std::size_t index = out.trace.size();
    ReduceResult r = ReduceDerivation(out.final, *p);
    LevelProfile after = Measures(r.derivation);
    Term expected = ContractAt(m, *p);
    auto complain = [&](const std::string &what) {
      out.violations.push_back(fmt::format("step {}: {}", index, what));
    };
    auto valid = CheckEtas(r.derivation);
    if (!valid.ok) complain("derivation invalid: " + valid.error);
    if (!ContextEq(r.derivation->j.ctx, out.final->j.ctx) ||
        !TypeEq(r.derivation->j.type, out.final->j.type)) {
      complain("root judgement changed");
    }
    if (!AlphaEq(r.derivation->j.term, expected)) {
      complain("subject is not the reduct");
    }
    if (!r.delta) {
      int i = r.level;
      int top = std::max(before.level, after.level);
      std::uint64_t prefix = 0;
      for (int j = 0; j <= top; ++j) {
        prefix += before.At(j);
        if (j < i && after.At(j) != before.At(j)) {
          complain(fmt::format("size at level {} changed below redex", j));
        }
        if (j == i && after.At(j) >= before.At(j)) {
          complain(fmt::format("size at redex level {} did not drop", j));
        }
        if (j > i && after.At(j) > before.At(j) * prefix) {
          complain(fmt::format("size at level {} grew past its bound", j));
        }
      }
    }
    TraceStep t;
    t.redex = *p;
    t.delta = r.delta;
    t.level = r.level;
    t.result = r.derivation->j.term;
    t.profile = after;
    out.trace.push_back(std::move(t));
    out.final = r.derivation;
    before = after;
  }
}

std::string FormatTraceStep(std::size_t index, const TraceStep &t) {
  std::string out = fmt::format("{}", index);
  if (t.level >= 0) out += fmt::format(" level {}", t.level);
  out += fmt::format(" path {}", PathString(t.redex));
  if (t.delta) out += " delta";
  if (t.profile) {
    out += " sizes";
    for (auto v : t.profile->sizes) out += fmt::format(" {}", v);
  }
  out += fmt::format(" {}", PrintWithNumerals(t.result));
  return out;
}

std::string Bound::ToString() const {
  return saturated ? std::string("saturated") : value.str();
}

namespace {

std::size_t Bits(const BigNat &x) {
  return x == 0 ? 0 : boost::multiprecision::msb(x) + 1;
}

// base^(2^e), saturated when it would exceed max_bits.
Bound PowTwoPow(const BigNat &base, const BigNat &e, std::size_t max_bits) {
  Bound b;
  if (base <= 1) {
    b.value = base;
    return b;
  }
  if (e >= 62) {
    b.saturated = true;
    return b;
  }
  unsigned long long exp = 1ULL << e.convert_to<unsigned>();
  if (exp > max_bits || (Bits(base) - 1) * exp > max_bits) {
    b.saturated = true;
    return b;
  }
  b.value = boost::multiprecision::pow(base, static_cast<unsigned>(exp));
  if (Bits(b.value) > max_bits) b.saturated = true;
  return b;
}

Bound Add(const Bound &a, const Bound &b, std::size_t max_bits) {
  Bound r;
  r.saturated = a.saturated || b.saturated;
  if (!r.saturated) {
    r.value = a.value + b.value;
    r.saturated = Bits(r.value) > max_bits;
  }
  return r;
}

}  // namespace

BoundTable ElementaryBounds(int d, const BigNat &n, std::size_t max_bits) {
  BoundTable t;
  Bound base;
  base.value = n;
  base.saturated = Bits(n) > max_bits;
  t.f.push_back(base);
  t.g.push_back(base);
  for (int e = 1; e <= d; ++e) {
    const Bound &f = t.f.back();
    const Bound &g = t.g.back();
    Bound nf, ng;
    if (f.saturated || g.saturated) {
      nf.saturated = ng.saturated = true;
    } else {
      nf = Add(f, PowTwoPow(f.value + g.value, g.value + 1, max_bits),
               max_bits);
      ng = g;
      for (BigNat i = 0; i <= g.value && !ng.saturated; ++i) {
        ng = Add(ng, PowTwoPow(f.value + i, i + 1, max_bits), max_bits);
      }
    }
    t.f.push_back(nf);
    t.g.push_back(ng);
  }
  return t;
}

}  // namespace lightlam
