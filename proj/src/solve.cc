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

#include "lightlam/solve.h"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <optional>
#include <vector>

namespace lightlam {

namespace {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// sum c[v] * x_v + k
struct Lin {
  std::map<int, long long> c;
  long long k = 0;

  void AddScaled(const Lin &o, long long f) {
    for (const auto &[v, a] : o.c) {
      long long &slot = c[v];
      slot += f * a;
      if (slot == 0) c.erase(v);
    }
    k += f * o.k;
  }
  void Substitute(int v, const Lin &def) {
    auto it = c.find(v);
    if (it == c.end()) return;
    long long f = it->second;
    c.erase(it);
    AddScaled(def, f);
  }
};

enum class RowKind { kEq, kGe };

struct Row {
  RowKind kind;
  Lin e;
};

// ---------------------------------------------------------------------------
// Dense two-phase simplex over exact rationals, Bland's rule.

struct LpRow {
  std::vector<Rat> a;
  Rat b;
  bool eq;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

class Simplex {
 public:
  Simplex(int n, const std::vector<LpRow> &rows, const std::vector<Rat> &cost)
      : n_(n) {
    int ge = 0;
    for (const LpRow &r : rows) ge += r.eq ? 0 : 1;
    int m = static_cast<int>(rows.size());
    slack0_ = n;
    art0_ = n + ge;
    cols_ = n + ge + m;
    int s = slack0_;
    for (int i = 0; i < m; ++i) {
      std::vector<Rat> t(cols_ + 1);
      for (int j = 0; j < n; ++j) t[j] = rows[i].a[j];
      Rat rhs = rows[i].b;
      if (!rows[i].eq) t[s++] = -1;
      if (rhs < 0) {
        for (Rat &x : t) x = -x;
        rhs = -rhs;
      }
      t[art0_ + i] = 1;
      t[cols_] = rhs;
      tab_.push_back(std::move(t));
      basis_.push_back(art0_ + i);
    }
    cost_ = cost;
    cost_.resize(cols_);
  }

  LpStatus Solve(std::vector<Rat> &x, Rat &obj) {
    std::vector<Rat> phase1(cols_);
    for (int j = art0_; j < cols_; ++j) phase1[j] = 1;
    Run(phase1, true);
    Rat infeas = 0;
    for (std::size_t i = 0; i < tab_.size(); ++i) {
      if (basis_[i] >= art0_) infeas += tab_[i][cols_];
    }
    if (infeas > 0) return LpStatus::kInfeasible;
    // Drive zero-level artificials out of the basis or drop their rows.
    for (std::size_t i = 0; i < tab_.size();) {
      if (basis_[i] < art0_) {
        ++i;
        continue;
      }
      int col = -1;
      for (int j = 0; j < art0_ && col < 0; ++j) {
        if (tab_[i][j] != 0) col = j;
      }
      if (col < 0) {
        tab_.erase(tab_.begin() + static_cast<long>(i));
        basis_.erase(basis_.begin() + static_cast<long>(i));
        continue;
      }
      Pivot(static_cast<int>(i), col);
      ++i;
    }
    if (!Run(cost_, false)) return LpStatus::kUnbounded;
    x.assign(n_, 0);
    obj = 0;
    for (std::size_t i = 0; i < tab_.size(); ++i) {
      if (basis_[i] < n_) x[basis_[i]] = tab_[i][cols_];
    }
    for (int j = 0; j < n_; ++j) obj += cost_[j] * x[j];
    return LpStatus::kOptimal;
  }

 private:
  // Returns false when unbounded.
  bool Run(const std::vector<Rat> &cost, bool allow_art) {
    int limit = allow_art ? cols_ : art0_;
    for (;;) {
      int enter = -1;
      for (int j = 0; j < limit && enter < 0; ++j) {
        if (IsBasic(j)) continue;
        Rat r = cost[j];
        for (std::size_t i = 0; i < tab_.size(); ++i) {
          if (tab_[i][j] != 0) r -= cost[basis_[i]] * tab_[i][j];
        }
        if (r < 0) enter = j;
      }
      if (enter < 0) return true;
      int leave = -1;
      Rat best;
      for (std::size_t i = 0; i < tab_.size(); ++i) {
        if (tab_[i][enter] <= 0) continue;
        Rat ratio = tab_[i][cols_] / tab_[i][enter];
        if (leave < 0 || ratio < best ||
            (ratio == best && basis_[i] < basis_[leave])) {
          leave = static_cast<int>(i);
          best = ratio;
        }
      }
      if (leave < 0) return false;
      Pivot(leave, enter);
    }
  }

  bool IsBasic(int j) const {
    return std::find(basis_.begin(), basis_.end(), j) != basis_.end();
  }

  void Pivot(int r, int c) {
    Rat p = tab_[r][c];
    for (Rat &x : tab_[r]) x /= p;
    for (std::size_t i = 0; i < tab_.size(); ++i) {
      if (static_cast<int>(i) == r || tab_[i][c] == 0) continue;
      Rat f = tab_[i][c];
      for (int j = 0; j <= cols_; ++j) {
        if (tab_[r][j] != 0) tab_[i][j] -= f * tab_[r][j];
      }
    }
    basis_[r] = c;
  }

  int n_;
  int slack0_ = 0;
  int art0_ = 0;
  int cols_ = 0;
  std::vector<std::vector<Rat>> tab_;
  std::vector<int> basis_;
  std::vector<Rat> cost_;
};

bool IsIntegral(const Rat &r) {
  return boost::multiprecision::denominator(r) == 1;
}

struct Problem {
  int n = 0;
  std::vector<Row> rows;
  std::vector<Rat> cost;
};

struct Bounds {
  std::vector<std::optional<BigInt>> lo, hi;
};

std::optional<std::pair<std::vector<Rat>, Rat>> SolveRelaxation(
    const Problem &p, const Bounds &bd) {
  std::vector<LpRow> rows;
  for (const Row &r : p.rows) {
    LpRow lr{std::vector<Rat>(p.n), Rat(-r.e.k), r.kind == RowKind::kEq};
    for (const auto &[v, a] : r.e.c) lr.a[v] = a;
    rows.push_back(std::move(lr));
  }
  for (int j = 0; j < p.n; ++j) {
    if (bd.lo[j]) {
      LpRow lr{std::vector<Rat>(p.n), Rat(*bd.lo[j]), false};
      lr.a[j] = 1;
      rows.push_back(std::move(lr));
    }
    if (bd.hi[j]) {
      LpRow lr{std::vector<Rat>(p.n), Rat(-*bd.hi[j]), false};
      lr.a[j] = -1;
      rows.push_back(std::move(lr));
    }
  }
  Simplex s(p.n, rows, p.cost);
  std::vector<Rat> x;
  Rat obj;
  if (s.Solve(x, obj) != LpStatus::kOptimal) return std::nullopt;
  return std::make_pair(std::move(x), obj);
}

BigInt Floor(const Rat &r) {
  BigInt q = boost::multiprecision::numerator(r) /
             boost::multiprecision::denominator(r);
  if (r < 0 && Rat(q) != r) q -= 1;
  return q;
}

class BranchAndBound {
 public:
  BranchAndBound(const Problem &p, std::size_t limit) : p_(p), limit_(limit) {}

  // Least-cost integral point; exhausted() tells whether it is proven.
  std::optional<std::vector<BigInt>> Run() {
    Bounds bd;
    bd.lo.resize(p_.n);
    bd.hi.resize(p_.n);
    Visit(bd);
    return best_;
  }
  bool exhausted() const { return nodes_ >= limit_; }

 private:
  void Visit(const Bounds &bd) {
    if (nodes_++ >= limit_) return;
    auto rel = SolveRelaxation(p_, bd);
    if (!rel) return;
    const auto &[x, obj] = *rel;
    // Costs are integral, so the optimum of a branch is at least ceil(obj).
    if (best_ && -Floor(-obj) >= best_cost_) return;
    int frac = -1;
    for (int j = 0; j < p_.n && frac < 0; ++j) {
      if (!IsIntegral(x[j])) frac = j;
    }
    if (frac < 0) {
      std::vector<BigInt> xi;
      for (const Rat &v : x) xi.push_back(boost::multiprecision::numerator(v));
      best_ = std::move(xi);
      best_cost_ = Floor(obj);
      return;
    }
    BigInt f = Floor(x[frac]);
    Bounds down = bd;
    down.hi[frac] = f;
    Visit(down);
    Bounds up = bd;
    up.lo[frac] = f + 1;
    Visit(up);
  }

  const Problem &p_;
  std::size_t limit_;
  std::size_t nodes_ = 0;
  std::optional<std::vector<BigInt>> best_;
  BigInt best_cost_;
};

bool Scalable(const std::vector<Row> &rows) {
  for (const Row &r : rows) {
    if (r.kind == RowKind::kEq ? r.e.k != 0 : r.e.k > 0) return false;
  }
  return true;
}

}  // namespace

SolveResult SolveConstraints(const ModalitySet &cs, SolveMode mode,
                             const std::set<std::string> *extra,
                             std::size_t node_limit) {
  std::set<std::string> names;
  CollectLiterals(cs, names);
  if (extra != nullptr) names.insert(extra->begin(), extra->end());
  std::vector<std::string> by_index(names.begin(), names.end());
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < by_index.size(); ++i) {
    index[by_index[i]] = static_cast<int>(i);
  }
  auto lin = [&](const ExpTerms &t, long long sign, Lin &out) {
    for (const auto &[l, n] : t.literals) {
      out.AddScaled(Lin{{{index[l], n}}, 0}, sign);
    }
    out.k += sign * static_cast<long long>(t.constant);
  };

  std::vector<Row> rows;
  for (const Constraint &c : cs) {
    Row r{RowKind::kEq, {}};
    lin(c.lhs, 1, r.e);
    if (c.kind == Constraint::Kind::kEq) lin(c.rhs, -1, r.e);
    if (c.kind == Constraint::Kind::kPos) {
      r.kind = RowKind::kGe;
      r.e.k -= 1;
    }
    rows.push_back(std::move(r));
  }

  SolveResult unsat;
  unsat.status = SolveStatus::kUnsat;
  // Eliminated variables in order, each defined over later ones.
  std::vector<std::pair<int, Lin>> defs;
  auto eliminate = [&](int v, const Lin &def) {
    for (Row &r : rows) r.e.Substitute(v, def);
    defs.emplace_back(v, def);
  };

  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < rows.size() && !changed; ++i) {
      Row &r = rows[i];
      bool all_pos = true, all_neg = true;
      for (const auto &[v, a] : r.e.c) {
        all_pos = all_pos && a > 0;
        all_neg = all_neg && a < 0;
      }
      auto drop = [&] {
        rows.erase(rows.begin() + static_cast<long>(i));
        changed = true;
      };
      auto zero_all = [&] {
        std::vector<int> vs;
        for (const auto &[v, a] : r.e.c) vs.push_back(v);
        rows.erase(rows.begin() + static_cast<long>(i));
        for (int v : vs) eliminate(v, Lin{});
        changed = true;
      };
      if (r.e.c.empty()) {
        bool ok = r.kind == RowKind::kEq ? r.e.k == 0 : r.e.k >= 0;
        if (!ok) return unsat;
        drop();
        continue;
      }
      if (r.kind == RowKind::kGe) {
        if (all_pos && r.e.k >= 0) {
          drop();
        } else if (all_neg && r.e.k <= 0) {
          if (r.e.k < 0) return unsat;
          zero_all();
        }
        continue;
      }
      if (all_pos || all_neg) {
        long long k = all_pos ? r.e.k : -r.e.k;
        if (k > 0) return unsat;
        if (k == 0) {
          zero_all();
          continue;
        }
      }
      for (const auto &[v, a] : r.e.c) {
        if (a != 1 && a != -1) continue;
        // v = -(rest)/a
        int var = v;
        Lin def = r.e;
        def.c.erase(var);
        Lin scaled;
        scaled.AddScaled(def, -a);
        rows.erase(rows.begin() + static_cast<long>(i));
        eliminate(var, scaled);
        rows.push_back(Row{RowKind::kGe, scaled});
        changed = true;
        break;
      }
    }
  }

  // Residual problem over the variables still mentioned.
  std::set<int> live;
  for (const Row &r : rows) {
    for (const auto &[v, a] : r.e.c) live.insert(v);
  }
  std::vector<int> residual(live.begin(), live.end());
  std::map<int, int> pos;
  for (std::size_t i = 0; i < residual.size(); ++i) {
    pos[residual[i]] = static_cast<int>(i);
  }
  Problem prob;
  prob.n = static_cast<int>(residual.size());
  for (const Row &r : rows) {
    Row rr{r.kind, {}};
    rr.e.k = r.e.k;
    for (const auto &[v, a] : r.e.c) rr.e.c[pos[v]] = a;
    prob.rows.push_back(std::move(rr));
  }
  // Objective: every original literal expressed over residual variables.
  std::map<int, Lin> value;
  for (auto it = defs.rbegin(); it != defs.rend(); ++it) {
    Lin e;
    e.k = it->second.k;
    for (const auto &[v, a] : it->second.c) {
      auto found = value.find(v);
      if (found != value.end()) {
        e.AddScaled(found->second, a);
      } else {
        e.AddScaled(Lin{{{v, 1}}, 0}, a);
      }
    }
    value.emplace(it->first, std::move(e));
  }
  prob.cost.assign(prob.n, 0);
  for (std::size_t v = 0; v < by_index.size(); ++v) {
    auto found = value.find(static_cast<int>(v));
    if (found == value.end()) {
      if (pos.count(static_cast<int>(v))) prob.cost[pos[v]] += 1;
      continue;
    }
    for (const auto &[u, a] : found->second.c) {
      if (pos.count(u)) prob.cost[pos[u]] += a;
    }
  }

  std::vector<BigInt> point(prob.n);
  if (prob.n > 0) {
    Bounds root;
    root.lo.resize(prob.n);
    root.hi.resize(prob.n);
    auto rel = SolveRelaxation(prob, root);
    if (!rel) return unsat;
    bool integral = std::all_of(rel->first.begin(), rel->first.end(),
                                [](const Rat &r) { return IsIntegral(r); });
    auto scaled = [&] {
      BigInt lcd = 1;
      for (const Rat &r : rel->first) {
        BigInt d = boost::multiprecision::denominator(r);
        lcd = lcd / boost::multiprecision::gcd(lcd, d) * d;
      }
      std::vector<BigInt> out;
      for (const Rat &r : rel->first) {
        out.push_back(boost::multiprecision::numerator(Rat(r * lcd)));
      }
      return out;
    };
    if (integral) {
      for (int j = 0; j < prob.n; ++j) {
        point[j] = boost::multiprecision::numerator(rel->first[j]);
      }
    }
    if (!integral || mode == SolveMode::kPreferSmall) {
      if (mode == SolveMode::kAny && Scalable(prob.rows)) {
        point = scaled();
      } else {
        BranchAndBound bb(prob, node_limit);
        auto best = bb.Run();
        if (best) {
          point = *best;
        } else if (Scalable(prob.rows)) {
          point = scaled();
        } else {
          SolveResult r;
          r.status = bb.exhausted() ? SolveStatus::kUnknown
                                    : SolveStatus::kUnsat;
          return r;
        }
      }
    }
  }

  std::vector<BigInt> full(by_index.size(), 0);
  for (int j = 0; j < prob.n; ++j) full[residual[j]] = point[j];
  for (auto it = defs.rbegin(); it != defs.rend(); ++it) {
    BigInt v = it->second.k;
    for (const auto &[u, a] : it->second.c) v += BigInt(a) * full[u];
    full[it->first] = v;
  }
  SolveResult out;
  out.status = SolveStatus::kSat;
  for (std::size_t v = 0; v < by_index.size(); ++v) {
    if (full[v] < 0) return SolveResult{SolveStatus::kUnknown, {}};
    out.assignment[by_index[v]] = static_cast<std::uint64_t>(full[v]);
  }
  SchemeSubstitution check;
  check.literals = out.assignment;
  if (!Satisfies(check, cs)) return SolveResult{SolveStatus::kUnknown, {}};
  return out;
}

}  // namespace lightlam
