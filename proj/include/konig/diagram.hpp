#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "konig/category.hpp"
#include "konig/error.hpp"

namespace konig {

/// Contravariant set-valued diagram over a FinCategory: a finite carrier
/// per object and, for every arrow f: A→B, a function carrier(B)→carrier(A)
/// stored as an index map. Functoriality is established by
/// validate_diagram and preserved by the library constructors.
struct SetDiagram {
  std::vector<std::vector<std::string>> carrier; // per object: element labels
  std::vector<std::vector<int>> action;          // per arrow: index map D_tgt -> D_src

  std::size_t carrier_size(ObjId o) const { return carrier[o].size(); }
  const std::string& element_label(ObjId o, int x) const { return carrier[o][x]; }
  int apply(ArrId f, int x) const { return action[f][x]; }
};

struct RawDiagram {
  std::map<std::string, std::vector<std::string>> sets;              // object -> labels
  std::map<std::string, std::map<std::string, std::string>> maps;    // arrow -> {target elem -> source elem}
};

/// One element chosen per object, stored as carrier indices.
struct Solution {
  std::vector<int> choice;

  bool operator==(const Solution& other) const { return choice == other.choice; }
};

inline RawDiagram to_raw(const FinCategory& cat, const SetDiagram& diag) {
  RawDiagram raw;
  for (ObjId o = 0; o < static_cast<ObjId>(cat.object_count()); ++o)
    raw.sets[cat.object_name(o)] = diag.carrier[o];
  for (ArrId f = 0; f < static_cast<ArrId>(cat.arrow_count()); ++f) {
    std::map<std::string, std::string> m;
    ObjId src = cat.source(f), tgt = cat.target(f);
    for (int x = 0; x < static_cast<int>(diag.carrier[tgt].size()); ++x)
      m[diag.carrier[tgt][x]] = diag.carrier[src][diag.action[f][x]];
    raw.maps[cat.arrow_name(f)] = std::move(m);
  }
  return raw;
}

/// Checks totality, range and functoriality of the raw actions. Identity
/// actions may be omitted and are synthesized. Empty carriers are legal
/// (counterexample constructors produce them) but reported as warnings.
inline SetDiagram validate_diagram(const FinCategory& cat, const RawDiagram& raw,
                                   std::vector<std::string>* warnings = nullptr) {
  SetDiagram diag;
  diag.carrier.assign(cat.object_count(), {});
  std::vector<std::map<std::string, int>> elem_index(cat.object_count());
  for (const auto& [obj, elems] : raw.sets)
    if (!cat.object_index(obj)) fail(Errc::UnknownReference, "carrier declared for unknown object '" + obj + "'");
  for (ObjId o = 0; o < static_cast<ObjId>(cat.object_count()); ++o) {
    auto it = raw.sets.find(cat.object_name(o));
    if (it == raw.sets.end()) fail(Errc::MissingCarrier, "object '" + cat.object_name(o) + "' has no carrier");
    diag.carrier[o] = it->second;
    for (int i = 0; i < static_cast<int>(it->second.size()); ++i)
      if (!elem_index[o].emplace(it->second[i], i).second)
        fail(Errc::NotAFunction, "duplicate element label '" + it->second[i] + "' at '" + cat.object_name(o) + "'");
    if (it->second.empty() && warnings)
      warnings->push_back("empty carrier at object '" + cat.object_name(o) + "'");
  }

  diag.action.assign(cat.arrow_count(), {});
  for (const auto& [arr, m] : raw.maps)
    if (!cat.arrow_index(arr)) fail(Errc::UnknownReference, "action declared for unknown arrow '" + arr + "'");
  for (ArrId f = 0; f < static_cast<ArrId>(cat.arrow_count()); ++f) {
    ObjId src = cat.source(f), tgt = cat.target(f);
    auto it = raw.maps.find(cat.arrow_name(f));
    if (it == raw.maps.end()) {
      if (!cat.is_identity(f))
        fail(Errc::MissingAction, "arrow '" + cat.arrow_name(f) + "' has no action");
      diag.action[f].resize(diag.carrier[src].size());
      for (int i = 0; i < static_cast<int>(diag.action[f].size()); ++i) diag.action[f][i] = i;
      continue;
    }
    diag.action[f].assign(diag.carrier[tgt].size(), -1);
    for (const auto& [from, to] : it->second) {
      auto fi = elem_index[tgt].find(from);
      if (fi == elem_index[tgt].end())
        fail(Errc::NotAFunction, "action of '" + cat.arrow_name(f) + "' maps unknown element '" + from + "'");
      auto ti = elem_index[src].find(to);
      if (ti == elem_index[src].end())
        fail(Errc::NotAFunction,
             "action of '" + cat.arrow_name(f) + "' sends '" + from + "' outside the carrier of '" +
                 cat.object_name(src) + "'");
      diag.action[f][fi->second] = ti->second;
    }
    for (int x = 0; x < static_cast<int>(diag.action[f].size()); ++x)
      if (diag.action[f][x] == -1)
        fail(Errc::NotAFunction, "action of '" + cat.arrow_name(f) + "' is not total (misses '" +
                                     diag.carrier[tgt][x] + "')");
  }

  // Identity actions must be identities.
  for (ObjId o = 0; o < static_cast<ObjId>(cat.object_count()); ++o) {
    ArrId id = cat.identity(o);
    for (int x = 0; x < static_cast<int>(diag.carrier[o].size()); ++x)
      if (diag.action[id][x] != x)
        fail(Errc::FunctorialityViolated,
             "identity action at '" + cat.object_name(o) + "' is not the identity function");
  }

  // D_{g∘f} = D_f ∘ D_g over every composable pair.
  for (ArrId g = 0; g < static_cast<ArrId>(cat.arrow_count()); ++g) {
    for (ArrId f = 0; f < static_cast<ArrId>(cat.arrow_count()); ++f) {
      if (!cat.composable(g, f)) continue;
      ArrId gf = cat.compose(g, f);
      ObjId c = cat.target(g);
      for (int x = 0; x < static_cast<int>(diag.carrier[c].size()); ++x)
        if (diag.action[f][diag.action[g][x]] != diag.action[gf][x])
          fail(Errc::FunctorialityViolated,
               "pair f='" + cat.arrow_name(f) + "', g='" + cat.arrow_name(g) + "'");
    }
  }
  return diag;
}

inline bool satisfies_arrow(const FinCategory& cat, const SetDiagram& diag, const Solution& sol, ArrId f) {
  return sol.choice[cat.source(f)] == diag.action[f][sol.choice[cat.target(f)]];
}

inline bool is_solution(const FinCategory& cat, const SetDiagram& diag, const Solution& sol,
                        const std::vector<ArrId>* restrict_to = nullptr) {
  if (sol.choice.size() != cat.object_count()) return false;
  for (ObjId o = 0; o < static_cast<ObjId>(cat.object_count()); ++o)
    if (sol.choice[o] < 0 || sol.choice[o] >= static_cast<int>(diag.carrier[o].size())) return false;
  if (restrict_to) {
    for (ArrId f : *restrict_to)
      if (!satisfies_arrow(cat, diag, sol, f)) return false;
    return true;
  }
  for (ArrId f = 0; f < static_cast<ArrId>(cat.arrow_count()); ++f)
    if (!satisfies_arrow(cat, diag, sol, f)) return false;
  return true;
}

namespace detail {

// Domains as per-object membership flags; propagation prunes in both
// directions of each functional constraint x_src = D_f(x_tgt).
struct SolverState {
  std::vector<std::vector<char>> live; // per object, per element
  std::vector<int> count;              // live elements per object

  bool prune(ObjId o, int x) {
    if (!live[o][x]) return false;
    live[o][x] = 0;
    --count[o];
    return true;
  }
};

inline bool propagate(const FinCategory& cat, const SetDiagram& diag, const std::vector<ArrId>& arrows,
                      SolverState& st) {
  std::deque<ArrId> queue(arrows.begin(), arrows.end());
  std::vector<char> queued(cat.arrow_count(), 0);
  for (ArrId f : arrows) queued[f] = 1;
  // Arrows incident to an object, for requeueing after a prune.
  while (!queue.empty()) {
    ArrId f = queue.front();
    queue.pop_front();
    queued[f] = 0;
    ObjId src = cat.source(f), tgt = cat.target(f);
    bool changed = false;
    std::vector<char> hit(diag.carrier[src].size(), 0);
    for (int x = 0; x < static_cast<int>(diag.carrier[tgt].size()); ++x) {
      if (!st.live[tgt][x]) continue;
      if (!st.live[src][diag.action[f][x]]) {
        st.prune(tgt, x);
        changed = true;
      } else {
        hit[diag.action[f][x]] = 1;
      }
    }
    for (int a = 0; a < static_cast<int>(diag.carrier[src].size()); ++a) {
      if (st.live[src][a] && !hit[a]) {
        st.prune(src, a);
        changed = true;
      }
    }
    if (st.count[src] == 0 || st.count[tgt] == 0) return false;
    if (changed) {
      for (ArrId g : arrows) {
        if (queued[g]) continue;
        if (cat.source(g) == src || cat.target(g) == src || cat.source(g) == tgt || cat.target(g) == tgt) {
          queue.push_back(g);
          queued[g] = 1;
        }
      }
    }
  }
  return true;
}

inline bool backtrack(const FinCategory& cat, const SetDiagram& diag, const std::vector<ArrId>& arrows,
                      const std::vector<ObjId>& order, std::size_t depth, SolverState& st,
                      const std::function<bool(const SolverState&)>& emit) {
  if (depth == order.size()) return emit(st);
  ObjId o = order[depth];
  for (int x = 0; x < static_cast<int>(diag.carrier[o].size()); ++x) {
    if (!st.live[o][x]) continue;
    SolverState next = st;
    for (int y = 0; y < static_cast<int>(diag.carrier[o].size()); ++y)
      if (y != x) next.prune(o, y);
    if (propagate(cat, diag, arrows, next))
      if (backtrack(cat, diag, arrows, order, depth + 1, next, emit)) return true;
  }
  return false;
}

// emit returns true to stop the search.
inline void search(const FinCategory& cat, const SetDiagram& diag, const std::vector<ArrId>& arrows,
                   const std::vector<ObjId>& order, const std::function<bool(const SolverState&)>& emit) {
  SolverState st;
  st.live.resize(cat.object_count());
  st.count.resize(cat.object_count());
  for (ObjId o = 0; o < static_cast<ObjId>(cat.object_count()); ++o) {
    st.live[o].assign(diag.carrier[o].size(), 1);
    st.count[o] = static_cast<int>(diag.carrier[o].size());
    if (st.count[o] == 0) return; // empty product, no tuples at all
  }
  if (!propagate(cat, diag, arrows, st)) return;
  backtrack(cat, diag, arrows, order, 0, st, emit);
}

inline std::vector<ObjId> degree_order(const FinCategory& cat, const std::vector<ArrId>& arrows) {
  std::vector<int> degree(cat.object_count(), 0);
  for (ArrId f : arrows) {
    ++degree[cat.source(f)];
    ++degree[cat.target(f)];
  }
  std::vector<ObjId> order(cat.object_count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](ObjId a, ObjId b) { return degree[a] > degree[b]; });
  return order;
}

inline Solution extract(const SolverState& st) {
  Solution sol;
  sol.choice.resize(st.live.size());
  for (std::size_t o = 0; o < st.live.size(); ++o) {
    int pick = -1;
    for (int x = 0; x < static_cast<int>(st.live[o].size()); ++x)
      if (st.live[o][x]) {
        pick = x;
        break;
      }
    sol.choice[o] = pick;
  }
  return sol;
}

inline std::vector<ArrId> all_arrows(const FinCategory& cat) {
  std::vector<ArrId> arrows(cat.arrow_count());
  std::iota(arrows.begin(), arrows.end(), 0);
  return arrows;
}

} // namespace detail

/// One solution of the full diagram, or nullopt when the limit is empty.
/// Propagation to fixpoint, then backtracking over objects in decreasing
/// arrow-degree order (ties by declaration order).
inline std::optional<Solution> solve(const FinCategory& cat, const SetDiagram& diag) {
  auto arrows = detail::all_arrows(cat);
  std::optional<Solution> result;
  detail::search(cat, diag, arrows, detail::degree_order(cat, arrows), [&](const detail::SolverState& st) {
    result = detail::extract(st);
    return true;
  });
  return result;
}

/// All solutions (or the first `cap`) in lexicographic order over carriers,
/// objects in declaration order.
inline std::vector<Solution> enumerate_solutions(const FinCategory& cat, const SetDiagram& diag,
                                                 std::optional<std::size_t> cap = std::nullopt) {
  auto arrows = detail::all_arrows(cat);
  std::vector<ObjId> order(cat.object_count());
  std::iota(order.begin(), order.end(), 0);
  std::vector<Solution> out;
  detail::search(cat, diag, arrows, order, [&](const detail::SolverState& st) {
    out.push_back(detail::extract(st));
    return cap && out.size() >= *cap;
  });
  return out;
}

/// M-solution: the arrow equations are imposed only for arrows in M;
/// coordinates not constrained through M default to the first carrier
/// element. Nullopt when no M-solution exists (in particular whenever some
/// carrier is empty, since a tuple must still pick everywhere).
inline std::optional<Solution> solve_restricted(const FinCategory& cat, const SetDiagram& diag,
                                                const std::vector<ArrId>& m) {
  for (ArrId f : m)
    if (f < 0 || f >= static_cast<ArrId>(cat.arrow_count())) fail(Errc::UnknownArrow, "restriction arrow out of range");
  for (ObjId o = 0; o < static_cast<ObjId>(cat.object_count()); ++o)
    if (diag.carrier[o].empty()) return std::nullopt;
  std::optional<Solution> result;
  detail::search(cat, diag, m, detail::degree_order(cat, m), [&](const detail::SolverState& st) {
    result = detail::extract(st);
    return true;
  });
  return result;
}

/// When the diagram is unsolvable, a ⊆-minimal arrow set M with no
/// M-solution, found by greedy single deletion in declaration order.
/// Nullopt when the diagram is solvable.
inline std::optional<std::vector<ArrId>> minimal_unsat_core(const FinCategory& cat, const SetDiagram& diag) {
  if (solve(cat, diag)) return std::nullopt;
  std::vector<ArrId> core = detail::all_arrows(cat);
  for (ArrId drop = 0; drop < static_cast<ArrId>(cat.arrow_count()); ++drop) {
    std::vector<ArrId> trial;
    trial.reserve(core.size());
    for (ArrId f : core)
      if (f != drop) trial.push_back(f);
    if (trial.size() == core.size()) continue;
    if (!solve_restricted(cat, diag, trial)) core = std::move(trial);
  }
  return core;
}

} // namespace konig
