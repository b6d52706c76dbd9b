#pragma once

#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "konig/category.hpp"
#include "konig/diagram.hpp"
#include "konig/error.hpp"
#include "konig/functor.hpp"

namespace konig {

/// A functor base → Cat: one fiber category per base object and one
/// transition functor per base arrow, strictly functorial.
struct CatValuedFunctor {
  FinCategory base;
  std::vector<FinCategory> fiber;       // per base object
  std::vector<FunctorData> transition;  // per base arrow: fiber[src] -> fiber[tgt]
};

inline void validate_catvalued(const CatValuedFunctor& s) {
  if (s.fiber.size() != s.base.object_count() || s.transition.size() != s.base.arrow_count())
    fail(Errc::NotAFunctor, "fiber/transition tables do not cover the base category");
  for (ArrId f = 0; f < static_cast<ArrId>(s.base.arrow_count()); ++f)
    check_functor_laws(s.fiber[s.base.source(f)], s.fiber[s.base.target(f)], s.transition[f]);
  for (ObjId r = 0; r < static_cast<ObjId>(s.base.object_count()); ++r)
    if (!(s.transition[s.base.identity(r)] == identity_functor(s.fiber[r])))
      fail(Errc::NotAFunctor, "transition of the identity at '" + s.base.object_name(r) + "' is not the identity");
  for (ArrId g = 0; g < static_cast<ArrId>(s.base.arrow_count()); ++g)
    for (ArrId f = 0; f < static_cast<ArrId>(s.base.arrow_count()); ++f) {
      if (!s.base.composable(g, f)) continue;
      if (!(s.transition[s.base.compose(g, f)] == compose_functors(s.transition[f], s.transition[g])))
        fail(Errc::NotAFunctor, "transitions do not compose along '" + s.base.arrow_name(g) + "'∘'" +
                                    s.base.arrow_name(f) + "'");
    }
}

/// Product category. Object (i,j) sits at index i·|obj D| + j and arrow
/// (f,g) at index f·|arr D| + g, so closed-form count checks are direct.
inline FinCategory product(const FinCategory& c, const FinCategory& d) {
  RawCategory raw;
  auto obj_name = [&](ObjId i, ObjId j) { return "(" + c.object_name(i) + "," + d.object_name(j) + ")"; };
  auto arr_name = [&](ArrId f, ArrId g) { return "(" + c.arrow_name(f) + "," + d.arrow_name(g) + ")"; };
  for (ObjId i = 0; i < static_cast<ObjId>(c.object_count()); ++i)
    for (ObjId j = 0; j < static_cast<ObjId>(d.object_count()); ++j) raw.objects.push_back(obj_name(i, j));
  for (ArrId f = 0; f < static_cast<ArrId>(c.arrow_count()); ++f)
    for (ArrId g = 0; g < static_cast<ArrId>(d.arrow_count()); ++g)
      raw.arrows.push_back({arr_name(f, g), obj_name(c.source(f), d.source(g)), obj_name(c.target(f), d.target(g))});
  for (ObjId i = 0; i < static_cast<ObjId>(c.object_count()); ++i)
    for (ObjId j = 0; j < static_cast<ObjId>(d.object_count()); ++j)
      raw.identities[obj_name(i, j)] = arr_name(c.identity(i), d.identity(j));
  for (ArrId f2 = 0; f2 < static_cast<ArrId>(c.arrow_count()); ++f2)
    for (ArrId f1 = 0; f1 < static_cast<ArrId>(c.arrow_count()); ++f1) {
      if (!c.composable(f2, f1)) continue;
      for (ArrId g2 = 0; g2 < static_cast<ArrId>(d.arrow_count()); ++g2)
        for (ArrId g1 = 0; g1 < static_cast<ArrId>(d.arrow_count()); ++g1) {
          if (!d.composable(g2, g1)) continue;
          raw.compose.push_back(
              {arr_name(f2, g2), arr_name(f1, g1), arr_name(c.compose(f2, f1), d.compose(g2, g1))});
        }
    }
  return validate_category(raw);
}

struct EltsResult {
  FinCategory total;
  FunctorData projection; // total -> base
  std::vector<std::pair<ObjId, ObjId>> object_pair;        // (base object, fiber object)
  std::vector<std::tuple<ArrId, ArrId, ObjId>> arrow_data; // (base arrow f, fiber arrow φ, source fiber object)
};

/// Category of elements of a Cat-valued functor: objects (R, S∈fiber R),
/// arrows (f, φ) with f: R→R′ in the base and φ: S_f(S)→S′ in the fiber
/// over R′. Composition (g,ψ)∘(f,φ) = (g∘f, ψ∘S_g(φ)); the result is
/// revalidated rather than trusted.
inline EltsResult grothendieck_elts(const CatValuedFunctor& s) {
  validate_catvalued(s);
  EltsResult out;
  RawCategory raw;
  RawFunctor raw_proj;
  auto obj_name = [&](ObjId r, ObjId x) {
    return "(" + s.base.object_name(r) + "," + s.fiber[r].object_name(x) + ")";
  };
  std::map<std::pair<ObjId, ObjId>, ObjId> obj_index;
  for (ObjId r = 0; r < static_cast<ObjId>(s.base.object_count()); ++r)
    for (ObjId x = 0; x < static_cast<ObjId>(s.fiber[r].object_count()); ++x) {
      obj_index[{r, x}] = static_cast<ObjId>(raw.objects.size());
      raw.objects.push_back(obj_name(r, x));
      raw_proj.objects[obj_name(r, x)] = s.base.object_name(r);
      out.object_pair.emplace_back(r, x);
    }

  auto arr_name = [&](ArrId f, ArrId phi, ObjId src_fiber_obj) {
    ObjId r = s.base.source(f);
    return "(" + s.base.arrow_name(f) + ";" + s.fiber[s.base.target(f)].arrow_name(phi) + ";" +
           s.fiber[r].object_name(src_fiber_obj) + ")";
  };
  std::map<std::tuple<ArrId, ArrId, ObjId>, ArrId> arr_index;
  for (ArrId f = 0; f < static_cast<ArrId>(s.base.arrow_count()); ++f) {
    ObjId r = s.base.source(f), r2 = s.base.target(f);
    const FinCategory& fib2 = s.fiber[r2];
    for (ObjId x = 0; x < static_cast<ObjId>(s.fiber[r].object_count()); ++x) {
      ObjId moved = s.transition[f].obj_map[x];
      for (ArrId phi = 0; phi < static_cast<ArrId>(fib2.arrow_count()); ++phi) {
        if (fib2.source(phi) != moved) continue;
        arr_index[{f, phi, x}] = static_cast<ArrId>(raw.arrows.size());
        raw.arrows.push_back({arr_name(f, phi, x), raw.objects[obj_index[{r, x}]],
                              raw.objects[obj_index[{r2, fib2.target(phi)}]]});
        raw_proj.arrows[arr_name(f, phi, x)] = s.base.arrow_name(f);
        out.arrow_data.emplace_back(f, phi, x);
      }
    }
  }

  for (ObjId r = 0; r < static_cast<ObjId>(s.base.object_count()); ++r)
    for (ObjId x = 0; x < static_cast<ObjId>(s.fiber[r].object_count()); ++x)
      raw.identities[obj_name(r, x)] = raw.arrows[arr_index[{s.base.identity(r), s.fiber[r].identity(x), x}]].id;

  for (const auto& [key1, a1] : arr_index) {
    auto [f, phi, x] = key1;
    ObjId r2 = s.base.target(f);
    ObjId y = s.fiber[r2].target(phi); // a1: (r,x) -> (r2,y)
    for (const auto& [key2, a2] : arr_index) {
      auto [g, psi, x2] = key2;
      if (s.base.source(g) != r2 || x2 != y) continue;
      ArrId gf = s.base.compose(g, f);
      ArrId moved_phi = s.transition[g].arr_map[phi];
      ArrId comp = s.fiber[s.base.target(g)].compose(psi, moved_phi);
      raw.compose.push_back({raw.arrows[a2].id, raw.arrows[a1].id, raw.arrows[arr_index[{gf, comp, x}]].id});
    }
  }

  out.total = validate_category(raw);
  out.projection = validate_functor(out.total, s.base, raw_proj);
  return out;
}

/// Rebuilds a category with renamed objects/arrows; indices are preserved.
inline FinCategory rename_category(const FinCategory& cat,
                                   const std::function<std::string(const std::string&)>& obj_rename,
                                   const std::function<std::string(const std::string&)>& arr_rename) {
  RawCategory raw = cat.to_raw();
  for (auto& o : raw.objects) o = obj_rename(o);
  for (auto& a : raw.arrows) {
    a.id = arr_rename(a.id);
    a.src = obj_rename(a.src);
    a.tgt = obj_rename(a.tgt);
  }
  for (auto& c : raw.compose) {
    c.g = arr_rename(c.g);
    c.f = arr_rename(c.f);
    c.result = arr_rename(c.result);
  }
  std::map<std::string, std::string> identities;
  for (auto& [obj, arr] : raw.identities) identities[obj_rename(obj)] = arr_rename(arr);
  raw.identities = std::move(identities);
  return validate_category(raw);
}

struct SliceResult {
  FinCategory category;
  FunctorData projection; // slice -> base
};

/// Slice under A, constructed as the category of elements of the discrete
/// fibers C ↦ hom(A,C). Objects are named by the arrows out of A; arrows
/// are commuting triangles f@u : u → f∘u.
inline SliceResult slice(const FinCategory& cat, ObjId a) {
  if (a < 0 || a >= static_cast<ObjId>(cat.object_count())) fail(Errc::UnknownObject, "slice object out of range");
  CatValuedFunctor s;
  s.base = cat;
  s.fiber.resize(cat.object_count());
  s.transition.resize(cat.arrow_count());
  for (ObjId c = 0; c < static_cast<ObjId>(cat.object_count()); ++c) {
    RawCategory fib;
    for (ArrId u : cat.hom(a, c)) {
      fib.objects.push_back(cat.arrow_name(u));
      fib.arrows.push_back({"id:" + cat.arrow_name(u), cat.arrow_name(u), cat.arrow_name(u)});
      fib.identities[cat.arrow_name(u)] = "id:" + cat.arrow_name(u);
      fib.compose.push_back({"id:" + cat.arrow_name(u), "id:" + cat.arrow_name(u), "id:" + cat.arrow_name(u)});
    }
    s.fiber[c] = validate_category(fib);
  }
  for (ArrId f = 0; f < static_cast<ArrId>(cat.arrow_count()); ++f) {
    ObjId src = cat.source(f), tgt = cat.target(f);
    FunctorData post;
    const auto& hom_src = cat.hom(a, src);
    post.obj_map.resize(hom_src.size());
    post.arr_map.resize(hom_src.size());
    for (std::size_t u = 0; u < hom_src.size(); ++u) {
      ArrId fu = cat.compose(f, hom_src[u]);
      ObjId idx = *s.fiber[tgt].object_index(cat.arrow_name(fu));
      post.obj_map[u] = idx;
      post.arr_map[u] = s.fiber[tgt].identity(idx);
    }
    s.transition[f] = std::move(post);
  }
  EltsResult elts = grothendieck_elts(s);
  // (C,u) carries the name of u; the triangle over f with source u becomes f@u.
  std::map<std::string, std::string> obj_rename, arr_rename;
  for (ObjId i = 0; i < static_cast<ObjId>(elts.total.object_count()); ++i) {
    auto [r, x] = elts.object_pair[i];
    obj_rename[elts.total.object_name(i)] = s.fiber[r].object_name(x);
  }
  for (ArrId j = 0; j < static_cast<ArrId>(elts.total.arrow_count()); ++j) {
    auto [f, phi, x] = elts.arrow_data[j];
    arr_rename[elts.total.arrow_name(j)] = cat.arrow_name(f) + "@" + s.fiber[cat.source(f)].object_name(x);
  }
  FinCategory renamed = rename_category(
      elts.total, [&](const std::string& name) { return obj_rename.at(name); },
      [&](const std::string& name) { return arr_rename.at(name); });
  return SliceResult{renamed, elts.projection};
}

/// Naturality data for a transformation id_C ⇒ G∘F with components
/// Δ_c: c → G(F(c)) living in C.
struct NatTransformData {
  std::vector<ArrId> component; // per object of C
};

/// Pulls a solution of diag∘G^op back along F and Δ:
/// c ↦ D_{Δ_c}(x_{F(c)}). Validates naturality, the input solution and the
/// output.
inline Solution transfer_solution(const FinCategory& c, const FinCategory& b, const FunctorData& f_to_b,
                                  const FunctorData& g_to_c, const NatTransformData& delta,
                                  const SetDiagram& diag, const Solution& sol) {
  check_functor_laws(c, b, f_to_b);
  check_functor_laws(b, c, g_to_c);
  if (delta.component.size() != c.object_count()) fail(Errc::NotNatural, "one component per object required");
  FunctorData gf = compose_functors(f_to_b, g_to_c);
  for (ObjId o = 0; o < static_cast<ObjId>(c.object_count()); ++o) {
    ArrId d = delta.component[o];
    if (c.source(d) != o || c.target(d) != gf.obj_map[o])
      fail(Errc::NotNatural, "component at '" + c.object_name(o) + "' has wrong endpoints");
  }
  for (ArrId u = 0; u < static_cast<ArrId>(c.arrow_count()); ++u) {
    if (c.compose(delta.component[c.target(u)], u) != c.compose(gf.arr_map[u], delta.component[c.source(u)]))
      fail(Errc::NotNatural, "naturality square at '" + c.arrow_name(u) + "' does not commute");
  }
  // sol must solve the pulled-back diagram on B.
  if (sol.choice.size() != b.object_count()) fail(Errc::NotASolution, "solution does not cover the source base");
  for (ArrId h = 0; h < static_cast<ArrId>(b.arrow_count()); ++h) {
    ArrId gh = g_to_c.arr_map[h];
    if (sol.choice[b.source(h)] != diag.action[gh][sol.choice[b.target(h)]])
      fail(Errc::NotASolution, "input does not solve the pulled-back diagram at '" + b.arrow_name(h) + "'");
  }
  Solution out;
  out.choice.resize(c.object_count());
  for (ObjId o = 0; o < static_cast<ObjId>(c.object_count()); ++o)
    out.choice[o] = diag.action[delta.component[o]][sol.choice[f_to_b.obj_map[o]]];
  if (!is_solution(c, diag, out)) fail(Errc::NotASolution, "transferred tuple fails an arrow equation");
  return out;
}

} // namespace konig
