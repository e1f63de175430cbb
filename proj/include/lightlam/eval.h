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

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lightlam/etas.h"
#include "lightlam/syntax.h"

namespace lightlam {

enum class Strategy { kCbv, kCbn };

std::string_view StrategyName(Strategy s);

/** Occurrences of redexes for `s`, leftmost-outermost first. */
std::vector<Path> RedexPaths(const Term &m, Strategy s);

// Contracts the beta or delta redex at p.
Term ContractAt(const Term &m, const Path &p);

struct StepResult {
  Path redex;
  Term result;
  bool delta = false;
};

/**
 * One leftmost-outermost step. For cbv the argument of a beta redex must
 * be a value; reduction goes under abstractions.
 */
std::optional<StepResult> Step(const Term &m, Strategy s);

struct TraceStep {
  Strategy strategy = Strategy::kCbv;
  Path redex;
  bool delta = false;
  // -1 unless instrumented.
  int level = -1;
  Term result;
  std::optional<LevelProfile> profile;
};

struct NormalizeResult {
  Term term;
  std::vector<TraceStep> trace;
  bool exhausted = false;
};

NormalizeResult Normalize(const Term &m, Strategy s, std::size_t fuel);

struct InstrumentedResult {
  std::vector<TraceStep> trace;
  std::vector<std::string> violations;
  Derivation final;
  LevelProfile initial;
  bool exhausted = false;
};

// Picks the redex to contract; nullopt stops the run.
using RedexChooser = std::function<std::optional<Path>(const Term &)>;

/**
 * Reduces the subject of d step by step through ReduceDerivation and
 * checks, at every beta step at level i, that sizes below i are unchanged,
 * size i drops, and size j > i is at most S(j) times the sizes up to j.
 * Throws DerivationError unless d is a valid typing judgement.
 */
InstrumentedResult InstrumentedReduce(const Derivation &d, std::size_t fuel,
                                      const RedexChooser &choose = {});

std::string FormatTraceStep(std::size_t index, const TraceStep &t);

using BigNat = boost::multiprecision::cpp_int;

/** A bound value, or a marker that it exceeds what is computed. */
struct Bound {
  bool saturated = false;
  BigNat value;

  bool Admits(const BigNat &x) const { return saturated || x <= value; }
  std::string ToString() const;
};

struct BoundTable {
  // f[e] and g[e] for e = 0..d at the initial size.
  std::vector<Bound> f;
  std::vector<Bound> g;
};

/**
 * f_0 = g_0 = n, then
 *   f_d = f_{d-1} + (f_{d-1} + g_{d-1})^(2^(g_{d-1} + 1))
 *   g_d = g_{d-1} + sum_{i=0}^{g_{d-1}} (f_{d-1} + i)^(2^(i + 1)).
 * Values above 2^max_bits are reported saturated.
 */
BoundTable ElementaryBounds(int d, const BigNat &n,
                            std::size_t max_bits = std::size_t{1} << 22);

}  // namespace lightlam
