#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "konig/category.hpp"
#include "konig/diagram.hpp"
#include "konig/error.hpp"

namespace konig {

/// A coloring of hom(dom_src, dom_tgt), one color index per arrow of the
/// hom-set in declaration order.
struct Coloring {
  ObjId dom_src = -1;
  ObjId dom_tgt = -1;
  int colors = 0;
  std::vector<int> assign;
};

inline std::string coloring_label(const std::vector<int>& digits, int colors) {
  std::string label = "c";
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (colors > 10 && i > 0) label += ',';
    label += std::to_string(digits[i]);
  }
  return label;
}

struct WitnessCheck {
  bool witness = false;
  std::optional<Coloring> violating; // lexicographically first, when not a witness
};

namespace detail {

inline std::uint64_t coloring_count(int colors, std::size_t slots) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < slots; ++i) {
    if (total > (std::uint64_t(1) << 30) / std::uint64_t(colors))
      fail(Errc::BadInput, "coloring space exceeds the exhaustive-search budget");
    total *= std::uint64_t(colors);
  }
  return total;
}

// Digits of `index` base `colors`, most significant digit first, so that
// index order equals lexicographic order over the hom-set tuple.
inline void coloring_digits(std::uint64_t index, int colors, std::vector<int>& digits) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    digits[i] = static_cast<int>(index % std::uint64_t(colors));
    index /= std::uint64_t(colors);
  }
}

// comp_pos[g][f] = position of g∘f inside hom(A,C), precomputed once per
// (A,B,C) triple.
inline std::vector<std::vector<int>> composition_positions(const FinCategory& cat, ObjId a, ObjId b, ObjId c) {
  const auto& hom_ac = cat.hom(a, c);
  const auto& hom_ab = cat.hom(a, b);
  const auto& hom_bc = cat.hom(b, c);
  std::vector<int> pos_of(cat.arrow_count(), -1);
  for (int i = 0; i < static_cast<int>(hom_ac.size()); ++i) pos_of[hom_ac[i]] = i;
  std::vector<std::vector<int>> comp(hom_bc.size(), std::vector<int>(hom_ab.size()));
  for (std::size_t g = 0; g < hom_bc.size(); ++g)
    for (std::size_t f = 0; f < hom_ab.size(); ++f)
      comp[g][f] = pos_of[cat.compose(hom_bc[g], hom_ab[f])];
  return comp;
}

inline bool constant_on_copy(const std::vector<int>& chi, const std::vector<int>& positions) {
  for (std::size_t f = 1; f < positions.size(); ++f)
    if (chi[positions[f]] != chi[positions[0]]) return false;
  return true;
}

// A map from the empty hom-set is constant, so any g works.
inline bool has_monochromatic_copy(const std::vector<int>& chi, const std::vector<std::vector<int>>& comp) {
  for (const auto& positions : comp)
    if (constant_on_copy(chi, positions)) return true;
  return false;
}

// Smallest coloring index in [begin, end) with no monochromatic copy, or
// nullopt. Partitioned across threads when asked; the result is the global
// minimum either way.
inline std::optional<std::uint64_t> first_violating(std::uint64_t total, int colors, std::size_t slots,
                                                    const std::vector<std::vector<int>>& comp, int threads) {
  auto scan = [&](std::uint64_t begin, std::uint64_t end, std::atomic<std::uint64_t>& best) {
    std::vector<int> digits(slots);
    for (std::uint64_t i = begin; i < end && i < best.load(std::memory_order_relaxed); ++i) {
      coloring_digits(i, colors, digits);
      if (!has_monochromatic_copy(digits, comp)) {
        std::uint64_t expected = best.load();
        while (i < expected && !best.compare_exchange_weak(expected, i)) {
        }
        return;
      }
    }
  };
  std::atomic<std::uint64_t> best{total};
  if (threads <= 1 || total < 1024) {
    scan(0, total, best);
  } else {
    std::vector<std::thread> pool;
    std::uint64_t chunk = (total + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      std::uint64_t begin = chunk * t;
      std::uint64_t end = std::min(total, begin + chunk);
      if (begin < end) pool.emplace_back(scan, begin, end, std::ref(best));
    }
    for (auto& th : pool) th.join();
  }
  if (best.load() == total) return std::nullopt;
  return best.load();
}

} // namespace detail

/// Exhaustive check of the witness property of C for the pair (A,B) and N
/// colors: every coloring of hom(A,C) must be constant on g∘hom(A,B) for
/// some g: B→C. Colorings run in lexicographic (odometer) order, so the
/// certificate on failure is canonical.
inline WitnessCheck is_ramsey_witness(const FinCategory& cat, ObjId a, ObjId b, ObjId c, int colors,
                                      int threads = 1) {
  if (colors < 1) fail(Errc::InvalidColorCount, "need at least one color");
  const auto comp = detail::composition_positions(cat, a, b, c);
  const std::size_t slots = cat.hom(a, c).size();
  WitnessCheck result;
  if (comp.empty()) {
    // No arrow B→C at all, so no coloring has a copy.
    result.witness = false;
    std::vector<int> digits(slots, 0);
    result.violating = Coloring{a, c, colors, digits};
    return result;
  }
  const std::uint64_t total = detail::coloring_count(colors, slots);
  auto bad = detail::first_violating(total, colors, slots, comp, threads);
  if (!bad) {
    result.witness = true;
    return result;
  }
  std::vector<int> digits(slots);
  detail::coloring_digits(*bad, colors, digits);
  result.witness = false;
  result.violating = Coloring{a, c, colors, digits};
  return result;
}

/// First Ramsey witness of (A,B,N) in ascending |hom(A,C)| order, ties by
/// declaration order.
inline std::optional<ObjId> find_witness(const FinCategory& cat, ObjId a, ObjId b, int colors,
                                         int threads = 1) {
  if (colors < 1) fail(Errc::InvalidColorCount, "need at least one color");
  std::vector<ObjId> candidates(cat.object_count());
  std::iota(candidates.begin(), candidates.end(), 0);
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](ObjId x, ObjId y) { return cat.hom(a, x).size() < cat.hom(a, y).size(); });
  for (ObjId c : candidates)
    if (is_ramsey_witness(cat, a, b, c, colors, threads).witness) return c;
  return std::nullopt;
}

struct PairVerdict {
  ObjId a = -1;
  ObjId b = -1;
  std::optional<ObjId> witness;
  /// When no witness exists: one violating coloring per candidate object,
  /// in declaration order of the candidates.
  std::vector<std::pair<ObjId, Coloring>> failures;
};

struct RamseyReport {
  int colors = 2;
  bool ramsey = true;
  std::vector<PairVerdict> pairs;
};

/// Whole-category verdict for N colors: a witness search for every ordered
/// object pair. Failing pairs carry a certificate against every candidate.
inline RamseyReport is_ramsey(const FinCategory& cat, int colors = 2, int threads = 1) {
  if (colors < 1) fail(Errc::InvalidColorCount, "need at least one color");
  RamseyReport report;
  report.colors = colors;
  for (ObjId a = 0; a < static_cast<ObjId>(cat.object_count()); ++a) {
    for (ObjId b = 0; b < static_cast<ObjId>(cat.object_count()); ++b) {
      PairVerdict verdict;
      verdict.a = a;
      verdict.b = b;
      verdict.witness = find_witness(cat, a, b, colors, threads);
      if (!verdict.witness) {
        report.ramsey = false;
        for (ObjId c = 0; c < static_cast<ObjId>(cat.object_count()); ++c) {
          auto check = is_ramsey_witness(cat, a, b, c, colors, threads);
          verdict.failures.emplace_back(c, *check.violating);
        }
      }
      report.pairs.push_back(std::move(verdict));
    }
  }
  return report;
}

struct MonoCopy {
  ArrId g = kNoArrow;
  /// Common value D_f(D_g(x)) over all f: A→B; nullopt when hom(A,B) = ∅.
  std::optional<int> value;
};

/// Given x ∈ D_C, colors hom(A,C) by h ↦ D_h(x) and extracts an arrow
/// g: B→C on which the induced coloring is constant, together with the
/// common value. Throws NotAWitness if no such g exists.
inline MonoCopy monochromatic_copy(const FinCategory& cat, const SetDiagram& diag, ObjId a, ObjId b, ObjId c,
                                   int x) {
  const auto& hom_ac = cat.hom(a, c);
  const auto& hom_ab = cat.hom(a, b);
  std::vector<int> chi(hom_ac.size());
  for (std::size_t i = 0; i < hom_ac.size(); ++i) chi[i] = diag.apply(hom_ac[i], x);
  const auto comp = detail::composition_positions(cat, a, b, c);
  const auto& hom_bc = cat.hom(b, c);
  for (std::size_t g = 0; g < hom_bc.size(); ++g) {
    if (detail::constant_on_copy(chi, comp[g])) {
      MonoCopy out;
      out.g = hom_bc[g];
      if (!hom_ab.empty()) out.value = chi[comp[g][0]];
      return out;
    }
  }
  fail(Errc::NotAWitness, "object '" + cat.object_name(c) + "' admits no monochromatic copy for the given element");
}

/// M-solution by the iterated-witness construction: joins the endpoint
/// objects of M under a common cocone apex, chains Ramsey witnesses over
/// the apex (one per endpoint, color count = carrier size), then walks the
/// witness chain backwards transporting a single element. Endpoints are
/// processed in decreasing carrier-size order so the large color counts
/// meet the smallest possible hom-sets; the construction is order-sensitive
/// in a finite ambient category.
inline Solution iterated_m_solution(const FinCategory& ambient, const SetDiagram& diag,
                                    const std::vector<ArrId>& m, int threads = 1) {
  for (ObjId o = 0; o < static_cast<ObjId>(ambient.object_count()); ++o)
    if (diag.carrier[o].empty())
      fail(Errc::EmptyCarrier, "carrier at '" + ambient.object_name(o) + "' is empty");

  Solution sol;
  sol.choice.assign(ambient.object_count(), 0);
  if (m.empty()) return sol;

  std::vector<char> seen(ambient.object_count(), 0);
  for (ArrId f : m) {
    if (f < 0 || f >= static_cast<ArrId>(ambient.arrow_count())) fail(Errc::UnknownArrow, "restriction arrow out of range");
    seen[ambient.source(f)] = 1;
    seen[ambient.target(f)] = 1;
  }
  std::vector<ObjId> endpoints;
  for (ObjId o = 0; o < static_cast<ObjId>(ambient.object_count()); ++o)
    if (seen[o]) endpoints.push_back(o);
  std::stable_sort(endpoints.begin(), endpoints.end(),
                   [&](ObjId x, ObjId y) { return diag.carrier[x].size() > diag.carrier[y].size(); });

  // Common cocone apex over all endpoints, accumulated pairwise.
  ObjId apex = endpoints[0];
  std::vector<ArrId> to_apex(endpoints.size());
  to_apex[0] = ambient.identity(apex);
  for (std::size_t i = 1; i < endpoints.size(); ++i) {
    ObjId next = endpoints[i];
    std::optional<ObjId> found;
    for (ObjId v = 0; v < static_cast<ObjId>(ambient.object_count()); ++v) {
      if (!ambient.hom(apex, v).empty() && !ambient.hom(next, v).empty()) {
        found = v;
        break;
      }
    }
    if (!found)
      fail(Errc::NoCocone, "no common cocone over '" + ambient.object_name(apex) + "' and '" +
                               ambient.object_name(next) + "'");
    ArrId p = ambient.hom(apex, *found).front();
    for (std::size_t j = 0; j < i; ++j) to_apex[j] = ambient.compose(p, to_apex[j]);
    to_apex[i] = ambient.hom(next, *found).front();
    apex = *found;
  }

  // Witness chain C_1..C_n over the apex.
  std::vector<ObjId> chain(endpoints.size());
  ObjId prev = apex;
  for (std::size_t i = 0; i < endpoints.size(); ++i) {
    int colors = static_cast<int>(diag.carrier[endpoints[i]].size());
    auto witness = find_witness(ambient, endpoints[i], prev, colors, threads);
    if (!witness)
      fail(Errc::NoWitness, "no Ramsey witness of ('" + ambient.object_name(endpoints[i]) + "','" +
                                ambient.object_name(prev) + "') with " + std::to_string(colors) + " colors");
    chain[i] = *witness;
    prev = *witness;
  }

  // Backward walk: pick the first element at the top and transport it down,
  // choosing at each step a hop on which the induced coloring is constant.
  int x = 0;
  for (std::size_t i = endpoints.size(); i-- > 0;) {
    ObjId c_curr = chain[i];
    ObjId c_prev = i == 0 ? apex : chain[i - 1];
    ObjId b = endpoints[i];
    const auto& hom_bc = ambient.hom(b, c_curr);
    std::vector<int> chi(hom_bc.size());
    for (std::size_t h = 0; h < hom_bc.size(); ++h) chi[h] = diag.apply(hom_bc[h], x);
    std::vector<int> pos_of(ambient.arrow_count(), -1);
    for (int h = 0; h < static_cast<int>(hom_bc.size()); ++h) pos_of[hom_bc[h]] = h;
    const auto& hom_prev_curr = ambient.hom(c_prev, c_curr);
    const auto& hom_b_prev = ambient.hom(b, c_prev);
    std::optional<ArrId> hop;
    for (ArrId h : hom_prev_curr) {
      bool constant = true;
      std::optional<int> value;
      for (ArrId f : hom_b_prev) {
        int color = chi[pos_of[ambient.compose(h, f)]];
        if (value && *value != color) {
          constant = false;
          break;
        }
        value = color;
      }
      if (constant) {
        hop = h;
        break;
      }
    }
    if (!hop)
      fail(Errc::NoWitness, "witness chain broke at '" + ambient.object_name(c_curr) + "'");
    x = diag.apply(*hop, x);
  }

  // x now lives in the carrier of the apex; push it along the cocone legs.
  for (std::size_t i = 0; i < endpoints.size(); ++i) sol.choice[endpoints[i]] = diag.apply(to_apex[i], x);

  if (!is_solution(ambient, diag, sol, &m))
    fail(Errc::NotASolution, "iterated witness construction produced an invalid M-solution");
  return sol;
}

/// The two-valued diagram refuting solvability over a connected pair with
/// no cocone: {0} under A, {1} under B, {0,1} elsewhere, inclusions as
/// actions. Throws ConfluentPair when a cocone exists after all.
inline SetDiagram confluence_counterexample_diagram(const FinCategory& cat, ObjId a, ObjId b) {
  if (!objects_connected(cat, a, b))
    fail(Errc::BadInput, "objects '" + cat.object_name(a) + "' and '" + cat.object_name(b) + "' are not connected");
  RawDiagram raw;
  std::vector<int> kind(cat.object_count()); // 0: {0}, 1: {1}, 2: {0,1}
  for (ObjId c = 0; c < static_cast<ObjId>(cat.object_count()); ++c) {
    bool from_a = !cat.hom(a, c).empty();
    bool from_b = !cat.hom(b, c).empty();
    if (from_a && from_b)
      fail(Errc::ConfluentPair, "'" + cat.object_name(c) + "' is a cocone of the pair; the two cases overlap");
    kind[c] = from_a ? 0 : from_b ? 1 : 2;
    raw.sets[cat.object_name(c)] =
        kind[c] == 0 ? std::vector<std::string>{"0"} : kind[c] == 1 ? std::vector<std::string>{"1"}
                                                                    : std::vector<std::string>{"0", "1"};
  }
  for (ArrId f = 0; f < static_cast<ArrId>(cat.arrow_count()); ++f) {
    std::map<std::string, std::string> inclusion;
    for (const auto& label : raw.sets[cat.object_name(cat.target(f))]) inclusion[label] = label;
    raw.maps[cat.arrow_name(f)] = std::move(inclusion);
  }
  return validate_diagram(cat, raw);
}

/// The diagram of colorings that defeat each object as a Ramsey witness of
/// (A,B,N); its carrier at C is empty exactly when C is a witness, and the
/// whole diagram is unsolvable whenever the carrier under B is inhabited.
inline SetDiagram bad_coloring_diagram(const FinCategory& cat, ObjId a, ObjId b, int colors) {
  if (colors < 1) fail(Errc::InvalidColorCount, "need at least one color");
  RawDiagram raw;
  // Per object: surviving colorings as digit vectors, in odometer order.
  std::vector<std::vector<std::vector<int>>> carrier(cat.object_count());
  for (ObjId c = 0; c < static_cast<ObjId>(cat.object_count()); ++c) {
    const auto comp = detail::composition_positions(cat, a, b, c);
    const std::size_t slots = cat.hom(a, c).size();
    const std::uint64_t total = detail::coloring_count(colors, slots);
    std::vector<std::string> labels;
    std::vector<int> digits(slots);
    for (std::uint64_t i = 0; i < total; ++i) {
      detail::coloring_digits(i, colors, digits);
      if (!detail::has_monochromatic_copy(digits, comp)) {
        carrier[c].push_back(digits);
        labels.push_back(coloring_label(digits, colors));
      }
    }
    raw.sets[cat.object_name(c)] = std::move(labels);
  }
  for (ArrId f = 0; f < static_cast<ArrId>(cat.arrow_count()); ++f) {
    ObjId src = cat.source(f), tgt = cat.target(f);
    const auto& hom_a_src = cat.hom(a, src);
    std::vector<int> pos_of(cat.arrow_count(), -1);
    const auto& hom_a_tgt = cat.hom(a, tgt);
    for (int i = 0; i < static_cast<int>(hom_a_tgt.size()); ++i) pos_of[hom_a_tgt[i]] = i;
    std::map<std::string, std::string> action;
    for (const auto& chi : carrier[tgt]) {
      std::vector<int> pulled(hom_a_src.size());
      for (std::size_t u = 0; u < hom_a_src.size(); ++u) pulled[u] = chi[pos_of[cat.compose(f, hom_a_src[u])]];
      action[coloring_label(chi, colors)] = coloring_label(pulled, colors);
    }
    raw.maps[cat.arrow_name(f)] = std::move(action);
  }
  return validate_diagram(cat, raw);
}

} // namespace konig
