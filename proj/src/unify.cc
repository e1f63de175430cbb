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

#include "lightlam/unify.h"

#include <fmt/core.h>

namespace lightlam {

std::string_view UnifyFailureName(UnifyFailure f) {
  switch (f) {
    case UnifyFailure::kNone: return "none";
    case UnifyFailure::kOccurs: return "occurs";
    case UnifyFailure::kClash: return "clash";
  }
  return "?";
}

Scheme BindingStore::Shallow(const Scheme &s) const {
  Scheme cur = s;
  while (cur->kind == SchemeKind::kVar) {
    auto it = map_.find(cur->name);
    if (it == map_.end()) return cur;
    cur = it->second;
  }
  if (cur->kind == SchemeKind::kBanged) {
    Scheme body = Shallow(cur->left);
    if (body != cur->left) return SBanged(cur->exp, body);
  }
  return cur;
}

Scheme BindingStore::Resolve(const Scheme &s) const {
  Scheme h = Shallow(s);
  switch (h->kind) {
    case SchemeKind::kVar:
    case SchemeKind::kBase:
      return h;
    case SchemeKind::kArrow: {
      Scheme l = Resolve(h->left), r = Resolve(h->right);
      if (l == h->left && r == h->right) return h;
      return SArrow(l, r);
    }
    case SchemeKind::kBanged: {
      Scheme b = Resolve(h->left);
      return b == h->left ? h : SBanged(h->exp, b);
    }
  }
  return h;
}

bool BindingStore::OccursIn(const std::string &var, const Scheme &s) const {
  Scheme h = Shallow(s);
  switch (h->kind) {
    case SchemeKind::kVar: return h->name == var;
    case SchemeKind::kBase: return false;
    case SchemeKind::kBanged: return OccursIn(var, h->left);
    case SchemeKind::kArrow:
      return OccursIn(var, h->left) || OccursIn(var, h->right);
  }
  return false;
}

UnifyFailure BindingStore::Unify(const Scheme &a0, const Scheme &b0,
                                 ModalitySet &out, std::string *detail) {
  Scheme a = Shallow(a0);
  Scheme b = Shallow(b0);
  auto fail = [&](UnifyFailure f) {
    if (detail != nullptr) {
      *detail = fmt::format("cannot unify {} with {}", Print(Resolve(a)),
                            Print(Resolve(b)));
    }
    return f;
  };
  auto emit = [&](std::optional<Constraint> c) {
    if (c) out.insert(*c);
  };
  // U1
  if (a->kind == SchemeKind::kVar && b->kind == SchemeKind::kVar &&
      a->name == b->name) {
    return UnifyFailure::kNone;
  }
  // U2, U3
  if (a->kind == SchemeKind::kVar || b->kind == SchemeKind::kVar) {
    const Scheme &v = a->kind == SchemeKind::kVar ? a : b;
    const Scheme &s = a->kind == SchemeKind::kVar ? b : a;
    // alpha against !^p alpha: only p=0 identifies the instances.
    if (s->kind == SchemeKind::kBanged && s->left->kind == SchemeKind::kVar &&
        s->left->name == v->name) {
      out.insert(MakeZero(s->exp));
      return UnifyFailure::kNone;
    }
    if (OccursIn(v->name, s)) return fail(UnifyFailure::kOccurs);
    map_[v->name] = s;
    return UnifyFailure::kNone;
  }
  bool ab = a->kind == SchemeKind::kBanged;
  bool bb = b->kind == SchemeKind::kBanged;
  // U6
  if (ab && bb) {
    emit(MakeEq(a->exp, b->exp));
    return Unify(a->left, b->left, out, detail);
  }
  // U4, U5
  if (ab) {
    out.insert(MakeZero(a->exp));
    return Unify(a->left, b, out, detail);
  }
  if (bb) {
    out.insert(MakeZero(b->exp));
    return Unify(a, b->left, out, detail);
  }
  if (a->kind == SchemeKind::kBase || b->kind == SchemeKind::kBase) {
    if (a->kind == b->kind && a->name == b->name) return UnifyFailure::kNone;
    return fail(UnifyFailure::kClash);
  }
  // U7
  if (UnifyFailure f = Unify(a->left, b->left, out, detail);
      f != UnifyFailure::kNone) {
    return f;
  }
  return Unify(a->right, b->right, out, detail);
}

Substitution BindingStore::ToSubstitution() const {
  Substitution t;
  for (const auto &[v, s] : map_) t.map[v] = Resolve(s);
  return t;
}

UnifyResult Unify(const TypeScheme &z1, const TypeScheme &z2) {
  BindingStore store;
  UnifyResult r;
  r.reason = store.Unify(z1.scheme, z2.scheme, r.subst.constraints, &r.detail);
  r.ok = r.reason == UnifyFailure::kNone;
  if (r.ok) {
    ModalitySet c = std::move(r.subst.constraints);
    r.subst = store.ToSubstitution();
    r.subst.constraints = std::move(c);
  } else {
    r.subst = {};
  }
  return r;
}

}  // namespace lightlam
