#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "konig/category.hpp"
#include "konig/diagram.hpp"
#include "konig/error.hpp"
#include "konig/functor.hpp"

namespace konig {

/// A surjective discrete fibration π: total → base with precomputed fibers
/// and a lift table. Owns copies of both categories, so values are freely
/// shareable.
struct Expansion {
  FinCategory total;
  FinCategory base;
  FunctorData proj;
  std::vector<std::vector<ObjId>> fibers;  // per base object, total objects in declaration order
  std::vector<int> fiber_pos;              // total object -> position inside its fiber
  std::vector<ArrId> lifts;                // [e * base.arrow_count() + f] -> unique lift arrow

  ArrId lift(ObjId total_target, ArrId base_arrow) const {
    return lifts[static_cast<std::size_t>(total_target) * base.arrow_count() + base_arrow];
  }
};

/// Validates the two expansion axioms and precomputes fibers and lifts.
inline Expansion as_expansion(const FinCategory& total, const FinCategory& base, const FunctorData& proj) {
  check_functor_laws(total, base, proj);
  Expansion pi;
  pi.total = total;
  pi.base = base;
  pi.proj = proj;
  pi.fibers.assign(base.object_count(), {});
  pi.fiber_pos.assign(total.object_count(), -1);
  for (ObjId e = 0; e < static_cast<ObjId>(total.object_count()); ++e) {
    pi.fiber_pos[e] = static_cast<int>(pi.fibers[proj.obj_map[e]].size());
    pi.fibers[proj.obj_map[e]].push_back(e);
  }
  for (ObjId c = 0; c < static_cast<ObjId>(base.object_count()); ++c)
    if (pi.fibers[c].empty()) fail(Errc::NotSurjective, "fiber over '" + base.object_name(c) + "' is empty");

  auto check = is_discrete_fibration(total, base, proj);
  if (!check.ok)
    fail(Errc::NotFibration, "base arrow '" + base.arrow_name(check.base_arrow) + "' has " +
                                 std::to_string(check.lifts) + " lifts with target '" +
                                 total.object_name(check.object) + "'");

  pi.lifts.assign(total.object_count() * base.arrow_count(), kNoArrow);
  for (ArrId g = 0; g < static_cast<ArrId>(total.arrow_count()); ++g)
    pi.lifts[static_cast<std::size_t>(total.target(g)) * base.arrow_count() + proj.arr_map[g]] = g;
  return pi;
}

inline Expansion identity_expansion(const FinCategory& cat) {
  return as_expansion(cat, cat, identity_functor(cat));
}

/// The diagram of fibers: carrier C ↦ π⁻¹(C), the action of f: C′→C sends
/// a fiber object to the source of its unique lift.
inline SetDiagram expansion_to_diagram(const Expansion& pi) {
  RawDiagram raw;
  for (ObjId c = 0; c < static_cast<ObjId>(pi.base.object_count()); ++c) {
    std::vector<std::string> labels;
    for (ObjId e : pi.fibers[c]) labels.push_back(pi.total.object_name(e));
    raw.sets[pi.base.object_name(c)] = std::move(labels);
  }
  for (ArrId f = 0; f < static_cast<ArrId>(pi.base.arrow_count()); ++f) {
    std::map<std::string, std::string> action;
    for (ObjId e : pi.fibers[pi.base.target(f)]) {
      ArrId g = pi.lift(e, f);
      action[pi.total.object_name(e)] = pi.total.object_name(pi.total.source(g));
    }
    raw.maps[pi.base.arrow_name(f)] = std::move(action);
  }
  return validate_diagram(pi.base, raw);
}

/// The category of elements of a diagram with nonempty carriers: objects
/// are pairs (C, x ∈ D_C), arrows over f: C′→C are pairs (f, x) whenever
/// D_f(x) is the source element. Inverse to expansion_to_diagram up to
/// relabeling.
inline Expansion diagram_to_expansion(const FinCategory& cat, const SetDiagram& diag) {
  for (ObjId o = 0; o < static_cast<ObjId>(cat.object_count()); ++o)
    if (diag.carrier[o].empty()) fail(Errc::EmptyCarrier, "carrier at '" + cat.object_name(o) + "' is empty");

  RawCategory raw;
  RawFunctor raw_proj;
  auto obj_name = [&](ObjId c, int x) { return cat.object_name(c) + ":" + diag.carrier[c][x]; };
  for (ObjId c = 0; c < static_cast<ObjId>(cat.object_count()); ++c)
    for (int x = 0; x < static_cast<int>(diag.carrier[c].size()); ++x) {
      raw.objects.push_back(obj_name(c, x));
      raw_proj.objects[obj_name(c, x)] = cat.object_name(c);
    }
  auto arr_name = [&](ArrId f, int x) { return cat.arrow_name(f) + "@" + diag.carrier[cat.target(f)][x]; };
  for (ArrId f = 0; f < static_cast<ArrId>(cat.arrow_count()); ++f) {
    ObjId src = cat.source(f), tgt = cat.target(f);
    for (int x = 0; x < static_cast<int>(diag.carrier[tgt].size()); ++x) {
      raw.arrows.push_back({arr_name(f, x), obj_name(src, diag.action[f][x]), obj_name(tgt, x)});
      raw_proj.arrows[arr_name(f, x)] = cat.arrow_name(f);
    }
  }
  for (ObjId c = 0; c < static_cast<ObjId>(cat.object_count()); ++c)
    for (int x = 0; x < static_cast<int>(diag.carrier[c].size()); ++x)
      raw.identities[obj_name(c, x)] = arr_name(cat.identity(c), x);
  // (g, x)∘(f, D_g(x)) = (g∘f, x)
  for (ArrId g = 0; g < static_cast<ArrId>(cat.arrow_count()); ++g)
    for (ArrId f = 0; f < static_cast<ArrId>(cat.arrow_count()); ++f) {
      if (!cat.composable(g, f)) continue;
      ArrId gf = cat.compose(g, f);
      for (int x = 0; x < static_cast<int>(diag.carrier[cat.target(g)].size()); ++x)
        raw.compose.push_back({arr_name(g, x), arr_name(f, diag.action[g][x]), arr_name(gf, x)});
    }
  FinCategory total = validate_category(raw);
  FunctorData proj = validate_functor(total, cat, raw_proj);
  return as_expansion(total, cat, proj);
}

namespace detail {

// Fiber-valued diagram on π.total whose solutions are exactly the
// expansion homomorphisms π → ρ, with actions given by unique ρ-lifts.
inline SetDiagram hom_search_diagram(const Expansion& pi, const Expansion& rho) {
  RawDiagram raw;
  for (ObjId e = 0; e < static_cast<ObjId>(pi.total.object_count()); ++e) {
    std::vector<std::string> labels;
    for (ObjId f : rho.fibers[pi.proj.obj_map[e]]) labels.push_back(rho.total.object_name(f));
    raw.sets[pi.total.object_name(e)] = std::move(labels);
  }
  for (ArrId g = 0; g < static_cast<ArrId>(pi.total.arrow_count()); ++g) {
    ArrId base_arrow = pi.proj.arr_map[g];
    std::map<std::string, std::string> action;
    for (ObjId f : rho.fibers[pi.proj.obj_map[pi.total.target(g)]]) {
      ArrId lifted = rho.lift(f, base_arrow);
      action[rho.total.object_name(f)] = rho.total.object_name(rho.total.source(lifted));
    }
    raw.maps[pi.total.arrow_name(g)] = std::move(action);
  }
  return validate_diagram(pi.total, raw);
}

inline FunctorData hom_from_solution(const Expansion& pi, const Expansion& rho, const Solution& sol) {
  FunctorData alpha;
  alpha.obj_map.resize(pi.total.object_count());
  alpha.arr_map.resize(pi.total.arrow_count());
  for (ObjId e = 0; e < static_cast<ObjId>(pi.total.object_count()); ++e)
    alpha.obj_map[e] = rho.fibers[pi.proj.obj_map[e]][sol.choice[e]];
  for (ArrId g = 0; g < static_cast<ArrId>(pi.total.arrow_count()); ++g)
    alpha.arr_map[g] = rho.lift(alpha.obj_map[pi.total.target(g)], pi.proj.arr_map[g]);
  check_functor_laws(pi.total, rho.total, alpha);
  if (!(compose_functors(alpha, rho.proj) == pi.proj))
    fail(Errc::NotAFunctor, "reconstructed homomorphism does not commute with the projections");
  return alpha;
}

} // namespace detail

/// Expansion homomorphisms π → ρ over a shared base, i.e. functors α with
/// ρ∘α = π. Determined by their object maps; found by solving the fiber
/// diagram, in its solution order.
inline std::vector<FunctorData> enumerate_expansion_homs(const Expansion& pi, const Expansion& rho,
                                                         std::optional<std::size_t> cap = std::nullopt) {
  SetDiagram diag = detail::hom_search_diagram(pi, rho);
  std::vector<FunctorData> out;
  for (const auto& sol : enumerate_solutions(pi.total, diag, cap))
    out.push_back(detail::hom_from_solution(pi, rho, sol));
  return out;
}

inline std::optional<FunctorData> find_expansion_hom(const Expansion& pi, const Expansion& rho) {
  SetDiagram diag = detail::hom_search_diagram(pi, rho);
  auto sol = enumerate_solutions(pi.total, diag, 1);
  if (sol.empty()) return std::nullopt;
  return detail::hom_from_solution(pi, rho, sol.front());
}

/// All endomorphisms of the expansion, in solution order.
inline std::vector<FunctorData> enumerate_endomorphisms(const Expansion& pi) {
  return enumerate_expansion_homs(pi, pi);
}

/// A functor α: base → total with π∘α = id, when one exists. Equivalent to
/// solving the fiber diagram of π.
inline std::optional<FunctorData> section(const Expansion& pi) {
  SetDiagram diag = expansion_to_diagram(pi);
  auto sol = solve(pi.base, diag);
  if (!sol) return std::nullopt;
  FunctorData alpha;
  alpha.obj_map.resize(pi.base.object_count());
  alpha.arr_map.resize(pi.base.arrow_count());
  for (ObjId c = 0; c < static_cast<ObjId>(pi.base.object_count()); ++c)
    alpha.obj_map[c] = pi.fibers[c][sol->choice[c]];
  for (ArrId f = 0; f < static_cast<ArrId>(pi.base.arrow_count()); ++f)
    alpha.arr_map[f] = pi.lift(alpha.obj_map[pi.base.target(f)], f);
  check_functor_laws(pi.base, pi.total, alpha);
  if (!(compose_functors(alpha, pi.proj) == identity_functor(pi.base)))
    fail(Errc::NotAFunctor, "section does not split the projection");
  return alpha;
}

struct EPReport {
  bool has_ep = true;
  /// Per base object C: the first C′ such that every fiber object over C
  /// maps into every fiber object over C′; unset where none exists.
  std::vector<std::optional<ObjId>> witness;
  std::optional<ObjId> failing_object;
};

inline EPReport has_expansion_property(const Expansion& pi) {
  EPReport report;
  report.witness.resize(pi.base.object_count());
  for (ObjId c = 0; c < static_cast<ObjId>(pi.base.object_count()); ++c) {
    for (ObjId c2 = 0; c2 < static_cast<ObjId>(pi.base.object_count()); ++c2) {
      bool all = true;
      for (ObjId e : pi.fibers[c]) {
        for (ObjId e2 : pi.fibers[c2])
          if (pi.total.hom(e, e2).empty()) {
            all = false;
            break;
          }
        if (!all) break;
      }
      if (all) {
        report.witness[c] = c2;
        break;
      }
    }
    if (!report.witness[c]) {
      report.has_ep = false;
      if (!report.failing_object) report.failing_object = c;
    }
  }
  return report;
}

/// Restriction of π to a subcategory of its total category (which must be
/// closed); revalidates the expansion axioms.
inline Expansion restrict_expansion(const Expansion& pi, const std::vector<ObjId>& objs,
                                    const std::vector<ArrId>& arrs) {
  FinCategory sub = subcategory(pi.total, objs, arrs);
  FunctorData proj;
  proj.obj_map.resize(sub.object_count());
  proj.arr_map.resize(sub.arrow_count());
  for (ObjId o = 0; o < static_cast<ObjId>(sub.object_count()); ++o)
    proj.obj_map[o] = pi.proj.obj_map[*pi.total.object_index(sub.object_name(o))];
  for (ArrId a = 0; a < static_cast<ArrId>(sub.arrow_count()); ++a)
    proj.arr_map[a] = pi.proj.arr_map[*pi.total.arrow_index(sub.arrow_name(a))];
  return as_expansion(sub, pi.base, proj);
}

enum class EndoOrder { forward, reverse };

struct CoreResult {
  Expansion core;
  /// The collapsing endomorphism, expressed into the core's index space.
  FunctorData collapse;
  std::vector<ObjId> kept_objects; // indices into the original total category
  std::vector<ArrId> kept_arrows;
  bool core_law_verified = false;  // every endomorphism of the result is bijective
};

/// Minimal endomorphism image: enumerates all endomorphisms, takes a
/// ⊆-minimal image subcategory (finite minimization in place of a chain
/// argument) and restricts the expansion to it.
inline CoreResult compute_core(const Expansion& pi, EndoOrder order = EndoOrder::forward) {
  std::vector<FunctorData> endos = enumerate_endomorphisms(pi);
  if (order == EndoOrder::reverse) std::reverse(endos.begin(), endos.end());

  struct Image {
    std::vector<ObjId> objs;
    std::vector<ArrId> arrs;
    std::size_t endo_index;
    std::size_t weight() const { return objs.size() + arrs.size(); }
  };
  std::vector<Image> images;
  for (std::size_t i = 0; i < endos.size(); ++i) {
    std::set<ObjId> objs(endos[i].obj_map.begin(), endos[i].obj_map.end());
    std::set<ArrId> arrs(endos[i].arr_map.begin(), endos[i].arr_map.end());
    images.push_back({{objs.begin(), objs.end()}, {arrs.begin(), arrs.end()}, i});
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < images.size(); ++i)
    if (images[i].weight() < images[best].weight()) best = i;
  // A smallest image is ⊆-minimal; confirm by pairwise inclusion anyway.
  for (const auto& other : images) {
    bool contained =
        std::includes(images[best].objs.begin(), images[best].objs.end(), other.objs.begin(), other.objs.end()) &&
        std::includes(images[best].arrs.begin(), images[best].arrs.end(), other.arrs.begin(), other.arrs.end());
    if (contained && other.weight() < images[best].weight())
      fail(Errc::NotClosed, "image minimality violated");
  }

  CoreResult result{restrict_expansion(pi, images[best].objs, images[best].arrs),
                    FunctorData{},
                    images[best].objs,
                    images[best].arrs,
                    false};
  const FunctorData& alpha = endos[images[best].endo_index];
  result.collapse.obj_map.resize(pi.total.object_count());
  result.collapse.arr_map.resize(pi.total.arrow_count());
  for (ObjId e = 0; e < static_cast<ObjId>(pi.total.object_count()); ++e)
    result.collapse.obj_map[e] = *result.core.total.object_index(pi.total.object_name(alpha.obj_map[e]));
  for (ArrId g = 0; g < static_cast<ArrId>(pi.total.arrow_count()); ++g)
    result.collapse.arr_map[g] = *result.core.total.arrow_index(pi.total.arrow_name(alpha.arr_map[g]));
  check_functor_laws(pi.total, result.core.total, result.collapse);

  result.core_law_verified = true;
  for (const auto& endo : enumerate_endomorphisms(result.core)) {
    std::set<ObjId> image(endo.obj_map.begin(), endo.obj_map.end());
    if (image.size() != result.core.total.object_count()) {
      result.core_law_verified = false;
      break;
    }
  }
  return result;
}

inline bool is_bijective_on_objects(const FunctorData& f, std::size_t target_objects) {
  std::set<ObjId> image(f.obj_map.begin(), f.obj_map.end());
  return image.size() == f.obj_map.size() && image.size() == target_objects;
}

/// A bijective expansion homomorphism π → ρ, when one exists. Bijective
/// homomorphisms of expansions are exactly the isomorphisms.
inline std::optional<FunctorData> find_expansion_isomorphism(const Expansion& pi, const Expansion& rho) {
  if (pi.total.object_count() != rho.total.object_count()) return std::nullopt;
  for (const auto& hom : enumerate_expansion_homs(pi, rho))
    if (is_bijective_on_objects(hom, rho.total.object_count())) return hom;
  return std::nullopt;
}

} // namespace konig
