#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "konig/category.hpp"
#include "konig/error.hpp"

namespace konig {

/// Object and arrow maps of a functor, indexed by the source category.
/// The source/target categories travel alongside; several operations pass
/// them explicitly.
struct FunctorData {
  std::vector<ObjId> obj_map;
  std::vector<ArrId> arr_map;

  bool operator==(const FunctorData& other) const {
    return obj_map == other.obj_map && arr_map == other.arr_map;
  }
};

struct RawFunctor {
  std::map<std::string, std::string> objects;
  std::map<std::string, std::string> arrows;
};

/// Throws NotAFunctor unless F preserves endpoints, identities and
/// composition.
inline void check_functor_laws(const FinCategory& src, const FinCategory& tgt, const FunctorData& f) {
  if (f.obj_map.size() != src.object_count() || f.arr_map.size() != src.arrow_count())
    fail(Errc::NotAFunctor, "object/arrow maps do not cover the source category");
  for (ArrId a = 0; a < static_cast<ArrId>(src.arrow_count()); ++a) {
    ArrId fa = f.arr_map[a];
    if (tgt.source(fa) != f.obj_map[src.source(a)] || tgt.target(fa) != f.obj_map[src.target(a)])
      fail(Errc::NotAFunctor, "arrow '" + src.arrow_name(a) + "' maps to '" + tgt.arrow_name(fa) +
                                  "' with mismatched endpoints");
  }
  for (ObjId o = 0; o < static_cast<ObjId>(src.object_count()); ++o)
    if (f.arr_map[src.identity(o)] != tgt.identity(f.obj_map[o]))
      fail(Errc::NotAFunctor, "identity of '" + src.object_name(o) + "' is not sent to an identity");
  for (ArrId g = 0; g < static_cast<ArrId>(src.arrow_count()); ++g)
    for (ArrId h = 0; h < static_cast<ArrId>(src.arrow_count()); ++h) {
      if (!src.composable(g, h)) continue;
      if (f.arr_map[src.compose(g, h)] != tgt.compose(f.arr_map[g], f.arr_map[h]))
        fail(Errc::NotAFunctor, "composition of '" + src.arrow_name(h) + "' and '" + src.arrow_name(g) +
                                    "' is not preserved");
    }
}

inline FunctorData validate_functor(const FinCategory& src, const FinCategory& tgt, const RawFunctor& raw) {
  FunctorData f;
  f.obj_map.assign(src.object_count(), -1);
  f.arr_map.assign(src.arrow_count(), kNoArrow);
  for (const auto& [from, to] : raw.objects) {
    auto s = src.object_index(from);
    if (!s) fail(Errc::UnknownReference, "functor maps unknown object '" + from + "'");
    auto t = tgt.object_index(to);
    if (!t) fail(Errc::UnknownReference, "functor sends '" + from + "' to unknown object '" + to + "'");
    f.obj_map[*s] = *t;
  }
  for (const auto& [from, to] : raw.arrows) {
    auto s = src.arrow_index(from);
    if (!s) fail(Errc::UnknownReference, "functor maps unknown arrow '" + from + "'");
    auto t = tgt.arrow_index(to);
    if (!t) fail(Errc::UnknownReference, "functor sends '" + from + "' to unknown arrow '" + to + "'");
    f.arr_map[*s] = *t;
  }
  for (ObjId o = 0; o < static_cast<ObjId>(src.object_count()); ++o)
    if (f.obj_map[o] == -1) fail(Errc::NotAFunctor, "object '" + src.object_name(o) + "' has no image");
  for (ArrId a = 0; a < static_cast<ArrId>(src.arrow_count()); ++a)
    if (f.arr_map[a] == kNoArrow) fail(Errc::NotAFunctor, "arrow '" + src.arrow_name(a) + "' has no image");
  check_functor_laws(src, tgt, f);
  return f;
}

inline FunctorData identity_functor(const FinCategory& cat) {
  FunctorData f;
  f.obj_map.resize(cat.object_count());
  f.arr_map.resize(cat.arrow_count());
  for (ObjId o = 0; o < static_cast<ObjId>(cat.object_count()); ++o) f.obj_map[o] = o;
  for (ArrId a = 0; a < static_cast<ArrId>(cat.arrow_count()); ++a) f.arr_map[a] = a;
  return f;
}

/// g_after ∘ f_first, both already validated.
inline FunctorData compose_functors(const FunctorData& f_first, const FunctorData& g_after) {
  FunctorData out;
  out.obj_map.resize(f_first.obj_map.size());
  out.arr_map.resize(f_first.arr_map.size());
  for (std::size_t o = 0; o < f_first.obj_map.size(); ++o) out.obj_map[o] = g_after.obj_map[f_first.obj_map[o]];
  for (std::size_t a = 0; a < f_first.arr_map.size(); ++a) out.arr_map[a] = g_after.arr_map[f_first.arr_map[a]];
  return out;
}

struct FibrationCheck {
  bool ok = true;
  ObjId object = -1;     // total object with the bad lift count
  ArrId base_arrow = kNoArrow;
  int lifts = 0;
};

/// Unique-lift property: for every total object E and base arrow f into
/// F(E) there must be exactly one arrow over f with target E.
inline FibrationCheck is_discrete_fibration(const FinCategory& src, const FinCategory& tgt,
                                            const FunctorData& f) {
  for (ObjId e = 0; e < static_cast<ObjId>(src.object_count()); ++e) {
    for (ArrId base = 0; base < static_cast<ArrId>(tgt.arrow_count()); ++base) {
      if (tgt.target(base) != f.obj_map[e]) continue;
      int lifts = 0;
      for (ArrId g = 0; g < static_cast<ArrId>(src.arrow_count()); ++g)
        if (src.target(g) == e && f.arr_map[g] == base) ++lifts;
      if (lifts != 1) return FibrationCheck{false, e, base, lifts};
    }
  }
  return FibrationCheck{};
}

} // namespace konig
