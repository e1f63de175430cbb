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

// Shared fixtures and random generators for the tests.

#pragma once

#include <random>
#include <string>
#include <vector>

#include "lightlam/algebra.h"
#include "lightlam/eaterm.h"
#include "lightlam/etas.h"
#include "lightlam/syntax.h"

namespace lightlam::testing {

// $B and $C abbreviate !(a -o a) and $B -o $B.
inline std::string Expand(std::string s) {
  auto sub = [&](const std::string &from, const std::string &to) {
    for (std::size_t p = s.find(from); p != std::string::npos;
         p = s.find(from, p + to.size())) {
      s.replace(p, from.size(), to);
    }
  };
  sub("$C", "($B -o $B)");
  sub("$B", "!(a -o a)");
  return s;
}

// The derivation typing 2 at !C -o !C.
inline Derivation Two() {
  return ParseDerivation(Expand(R"(
    (II ( | | |- \x.\y.x (x y) : !$C -o !$C)
      (! ( | x : !$C | |- \y.x (x y) : !$C)
        (II ( | | x : $C |- \y.x (x y) : $C)
          (E ( | y : $B | x : $C |- x (x y) : $B)
            (AP ( | y : $B | x : $C |- x : $C))
            (E ( | y : $B | x : $C |- x y : $B)
              (AP ( | y : $B | x : $C |- x : $C))
              (! ( | y : $B | x : $C |- y : $B)
                (AL (y : a -o a | | |- y : a -o a))))))))
  )"));
}

// The derivation typing 3 at $C.
inline Derivation Three() {
  return ParseDerivation(Expand(R"(
    (II ( | | |- \x.\y.x (x (x y)) : $C)
      (! ( | x : $B | |- \y.x (x (x y)) : $B)
        (IL ( | | x : a -o a |- \y.x (x (x y)) : a -o a)
          (E (y : a | | x : a -o a |- x (x (x y)) : a)
            (AP ( | | x : a -o a |- x : a -o a))
            (E (y : a | | x : a -o a |- x (x y) : a)
              (AP ( | | x : a -o a |- x : a -o a))
              (E (y : a | | x : a -o a |- x y : a)
                (AP ( | | x : a -o a |- x : a -o a))
                (AL (y : a | | x : a -o a |- y : a))))))))
  )"));
}

inline Derivation IdRedex() {
  return ParseDerivation(R"(
    (E ( | | |- (\x.x) (\y.y) : a -o a)
      (IL ( | | |- \x.x : (a -o a) -o a -o a)
        (AL (x : a -o a | | |- x : a -o a)))
      (IL ( | | |- \y.y : a -o a)
        (AL (y : a | | |- y : a))))
  )");
}

/** Random pure lambda terms over a small variable pool. */
class TermGen {
 public:
  explicit TermGen(unsigned seed) : rng_(seed) {}

  Term Closed(int size) {
    std::vector<std::string> scope;
    return Gen(size, scope, false);
  }
  Term Open(int size) {
    std::vector<std::string> scope;
    return Gen(size, scope, true);
  }

  std::mt19937 &rng() { return rng_; }

 private:
  int Pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  Term Gen(int size, std::vector<std::string> &scope, bool open) {
    if (size <= 1 || (size <= 3 && Pick(3) == 0)) {
      if (scope.empty() || (open && Pick(4) == 0)) {
        if (scope.empty() && !open) {
          std::string x = Name();
          return Abs(x, Var(x));
        }
        return Var(std::string(1, static_cast<char>('p' + Pick(4))));
      }
      return Var(scope[Pick(static_cast<int>(scope.size()))]);
    }
    if (Pick(5) < 2) {
      std::string x = Name();
      scope.push_back(x);
      Term body = Gen(size - 1, scope, open);
      scope.pop_back();
      return Abs(x, body);
    }
    int left = 1 + Pick(size - 2 > 0 ? size - 2 : 1);
    return App(Gen(left, scope, open), Gen(size - 1 - left, scope, open));
  }

  std::string Name() {
    static const char *kNames[] = {"x", "y", "z", "w", "u", "v"};
    return kNames[Pick(6)];
  }

  std::mt19937 rng_;
};

/** Random linear EA-terms; every variable is used at most once. */
class EAGen {
 public:
  explicit EAGen(unsigned seed) : rng_(seed) {}

  EATerm Gen(int size) {
    counter_ = 0;
    std::vector<std::string> pool;
    return Rec(size, pool, true);
  }

 private:
  int Pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::string Fresh(const char *base) {
    return std::string(base) + std::to_string(counter_++);
  }

  // Box bodies may only mention the box's binders.
  EATerm Leaf(std::vector<std::string> &pool, bool open) {
    if (!pool.empty() && (!open || Pick(4) != 0)) {
      int i = Pick(static_cast<int>(pool.size()));
      std::string v = pool[i];
      pool.erase(pool.begin() + i);
      return EVar(v);
    }
    if (!open) {
      std::string v = Fresh("i");
      return EAbs(v, EVar(v));
    }
    return EVar(Fresh("f"));
  }

  EATerm Rec(int size, std::vector<std::string> &pool, bool open) {
    if (size <= 1) return Leaf(pool, open);
    switch (Pick(6)) {
      case 0:
      case 1: {
        std::string x = Fresh("x");
        pool.push_back(x);
        EATerm body = Rec(size - 1, pool, open);
        Drop(pool, x);
        return EAbs(x, body);
      }
      case 2:
      case 3: {
        int left = 1 + Pick(std::max(1, size - 2));
        EATerm f = Rec(left, pool, open);
        return EApp(f, Rec(std::max(1, size - 1 - left), pool, open));
      }
      case 4: {
        std::string x = Fresh("c"), y = Fresh("c");
        int argsize = 1 + Pick(std::max(1, size / 2));
        EATerm arg = Rec(argsize, pool, open);
        pool.push_back(x);
        pool.push_back(y);
        EATerm body = Rec(std::max(1, size - 1 - argsize), pool, open);
        Drop(pool, x);
        Drop(pool, y);
        return EContr(body, arg, x, y);
      }
      default: {
        int n = Pick(3);
        std::vector<EABinding> bs;
        int left = size - 1;
        for (int i = 0; i < n && left > 1; ++i) {
          int s = 1 + Pick(std::max(1, left / 2));
          bs.push_back({Rec(s, pool, open), Fresh("b")});
          left -= s;
        }
        std::vector<std::string> inner;
        for (const auto &b : bs) inner.push_back(b.var);
        EATerm body = Rec(std::max(1, left), inner, false);
        return EProm(body, std::move(bs));
      }
    }
  }

  static void Drop(std::vector<std::string> &pool, const std::string &x) {
    for (auto it = pool.begin(); it != pool.end(); ++it) {
      if (*it == x) {
        pool.erase(it);
        return;
      }
    }
  }

  std::mt19937 rng_;
  int counter_ = 0;
};

/** Random closed terms over the unary algebra `U { s/1, z/0 }`. */
class ConstTermGen {
 public:
  explicit ConstTermGen(unsigned seed)
      : rng_(seed), sig_(LoadSignature("algebra U { s/1, z/0 }")) {}

  const Signature &sig() const { return sig_; }

  Term Closed(int size) {
    std::vector<std::string> scope;
    counter_ = 0;
    return Gen(size, scope);
  }

 private:
  int Pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  Term C(const char *name) { return Const(sig_.Constant(name)); }

  Term Gen(int size, std::vector<std::string> &scope) {
    if (size <= 1) {
      if (!scope.empty() && Pick(3) != 0) {
        return Var(scope[Pick(static_cast<int>(scope.size()))]);
      }
      return Numeral(sig_, "U", Pick(4));
    }
    switch (Pick(7)) {
      case 0:
        return App(C("s_U"), Gen(size - 1, scope));
      case 1:
      case 2: {
        std::string x = "x" + std::to_string(counter_++);
        scope.push_back(x);
        Term body = Gen(size - 1, scope);
        scope.pop_back();
        return Abs(x, body);
      }
      case 3: {
        int left = 1 + Pick(std::max(1, size - 2));
        return App(Gen(left, scope), Gen(std::max(1, size - 1 - left), scope));
      }
      default: {
        // iter or cond with a step function and a base case.
        bool iter = Pick(2) == 0;
        int third = std::max(1, (size - 1) / 3);
        std::string y = "x" + std::to_string(counter_++);
        Term n = Gen(third, scope);
        scope.push_back(y);
        Term step = Abs(y, Gen(third, scope));
        scope.pop_back();
        Term base = Gen(third, scope);
        return Apply(C(iter ? "iter_U" : "cond_U"), {n, step, base});
      }
    }
  }

  std::mt19937 rng_;
  Signature sig_;
  int counter_ = 0;
};

}  // namespace lightlam::testing
