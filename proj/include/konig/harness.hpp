#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "konig/category.hpp"
#include "konig/diagram.hpp"
#include "konig/error.hpp"
#include "konig/ramsey.hpp"

namespace konig {

/// Visits every valid diagram over cat whose carriers have size
/// 1..max_carrier, enumerating all raw action combinations and keeping the
/// functorial ones. The visitor returns false to stop early.
inline void enumerate_all_diagrams(const FinCategory& cat, int max_carrier,
                                   const std::function<bool(const SetDiagram&)>& visit) {
  std::vector<ArrId> free_arrows;
  for (ArrId a = 0; a < static_cast<ArrId>(cat.arrow_count()); ++a)
    if (!cat.is_identity(a)) free_arrows.push_back(a);

  std::vector<int> sizes(cat.object_count(), 1);
  while (true) {
    // All action combinations for the current carrier sizes.
    std::vector<std::vector<int>> action(cat.arrow_count());
    for (ObjId o = 0; o < static_cast<ObjId>(cat.object_count()); ++o) {
      auto& id_action = action[cat.identity(o)];
      id_action.resize(sizes[o]);
      for (int i = 0; i < sizes[o]; ++i) id_action[i] = i;
    }
    for (ArrId a : free_arrows) action[a].assign(sizes[cat.target(a)], 0);

    bool more_actions = true;
    while (more_actions) {
      SetDiagram diag;
      diag.carrier.resize(cat.object_count());
      for (ObjId o = 0; o < static_cast<ObjId>(cat.object_count()); ++o) {
        diag.carrier[o].resize(sizes[o]);
        for (int i = 0; i < sizes[o]; ++i) diag.carrier[o][i] = "e" + std::to_string(i);
      }
      diag.action = action;

      bool functorial = true;
      for (ArrId g = 0; g < static_cast<ArrId>(cat.arrow_count()) && functorial; ++g)
        for (ArrId f = 0; f < static_cast<ArrId>(cat.arrow_count()) && functorial; ++f) {
          if (!cat.composable(g, f)) continue;
          ArrId gf = cat.compose(g, f);
          for (int x = 0; x < sizes[cat.target(g)]; ++x)
            if (diag.action[f][diag.action[g][x]] != diag.action[gf][x]) {
              functorial = false;
              break;
            }
        }
      if (functorial && !visit(diag)) return;

      // Advance the action odometer over the free arrows.
      std::size_t ai = 0;
      while (ai < free_arrows.size()) {
        auto& act = action[free_arrows[ai]];
        int radix = sizes[cat.source(free_arrows[ai])];
        std::size_t pos = 0;
        while (pos < act.size() && act[pos] + 1 == radix) act[pos++] = 0;
        if (pos < act.size()) {
          ++act[pos];
          break;
        }
        ++ai;
      }
      if (ai == free_arrows.size()) more_actions = false;
    }

    std::size_t oi = 0;
    while (oi < sizes.size() && sizes[oi] == max_carrier) sizes[oi++] = 1;
    if (oi == sizes.size()) break;
    ++sizes[oi];
  }
}

/// One random valid diagram with carrier sizes 1..max_carrier, or nullopt
/// when max_tries rejections pass. Composite arrows take their action from
/// a factorization when one is available, which keeps the acceptance rate
/// workable on bases with many forced composites.
inline std::optional<SetDiagram> sample_diagram(const FinCategory& cat, int max_carrier, std::mt19937_64& rng,
                                                int max_tries = 2000) {
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    std::vector<int> sizes(cat.object_count());
    for (auto& s : sizes) s = 1 + static_cast<int>(rng() % max_carrier);
    RawDiagram raw;
    for (ObjId o = 0; o < static_cast<ObjId>(cat.object_count()); ++o) {
      std::vector<std::string> labels(sizes[o]);
      for (int i = 0; i < sizes[o]; ++i) labels[i] = "e" + std::to_string(i);
      raw.sets[cat.object_name(o)] = labels;
    }

    std::vector<std::vector<int>> action(cat.arrow_count());
    std::vector<char> assigned(cat.arrow_count(), 0);
    for (ObjId o = 0; o < static_cast<ObjId>(cat.object_count()); ++o) {
      ArrId id = cat.identity(o);
      action[id].resize(sizes[o]);
      for (int i = 0; i < sizes[o]; ++i) action[id][i] = i;
      assigned[id] = 1;
    }
    std::size_t remaining = 0;
    for (ArrId a = 0; a < static_cast<ArrId>(cat.arrow_count()); ++a)
      if (!assigned[a]) ++remaining;
    while (remaining > 0) {
      // Derive from an assigned factorization where possible.
      ArrId derived = kNoArrow, via_f = kNoArrow, via_g = kNoArrow;
      for (ArrId h = 0; h < static_cast<ArrId>(cat.arrow_count()) && derived == kNoArrow; ++h) {
        if (assigned[h]) continue;
        for (ArrId g = 0; g < static_cast<ArrId>(cat.arrow_count()) && derived == kNoArrow; ++g) {
          if (!assigned[g] || g == h) continue;
          for (ArrId f = 0; f < static_cast<ArrId>(cat.arrow_count()); ++f) {
            if (!assigned[f] || f == h || !cat.composable(g, f)) continue;
            if (cat.compose(g, f) == h) {
              derived = h;
              via_f = f;
              via_g = g;
              break;
            }
          }
        }
      }
      if (derived != kNoArrow) {
        action[derived].resize(sizes[cat.target(via_g)]);
        for (int x = 0; x < sizes[cat.target(via_g)]; ++x)
          action[derived][x] = action[via_f][action[via_g][x]];
        assigned[derived] = 1;
      } else {
        ArrId pick = kNoArrow;
        for (ArrId a = 0; a < static_cast<ArrId>(cat.arrow_count()); ++a)
          if (!assigned[a]) {
            pick = a;
            break;
          }
        action[pick].resize(sizes[cat.target(pick)]);
        for (auto& v : action[pick]) v = static_cast<int>(rng() % sizes[cat.source(pick)]);
        assigned[pick] = 1;
      }
      --remaining;
    }
    for (ArrId a = 0; a < static_cast<ArrId>(cat.arrow_count()); ++a) {
      if (cat.is_identity(a)) continue;
      std::map<std::string, std::string> m;
      for (int x = 0; x < sizes[cat.target(a)]; ++x)
        m["e" + std::to_string(x)] = "e" + std::to_string(action[a][x]);
      raw.maps[cat.arrow_name(a)] = std::move(m);
    }
    try {
      return validate_diagram(cat, raw);
    } catch (const Error&) {
      // Functoriality clash between independent factorizations; resample.
    }
  }
  return std::nullopt;
}

struct HarnessOptions {
  int colors = 2;
  int exhaustive_carrier = 2;
  std::size_t exhaustive_arrow_limit = 6;
  int sampled_carrier = 3;
  int samples = 200;
  std::uint64_t seed = 0xC0FFEE;
  int threads = 1;
};

struct HarnessReport {
  bool confluent = false;
  bool ramsey = false;
  bool expect_solvable = false;
  std::size_t exhaustive_checked = 0;
  bool exhaustive_all_solvable = true;
  std::size_t sampled_checked = 0;
  bool sampled_all_solvable = true;
  std::string counterexample_kind; // "confluence" or "coloring", when a side fails
  bool counterexample_nonempty_carriers = false;
  bool counterexample_unsolvable = false;
  bool consistent = false;
  ConfluenceReport confluence;
  RamseyReport ramsey_report;
};

/// Exercises both directions of the solvability characterization on one
/// category: solvable diagrams everywhere when the category is confluent
/// and Ramsey, an explicit unsolvable diagram with nonempty carriers
/// otherwise.
inline HarnessReport run_theorem_harness(const FinCategory& cat, const HarnessOptions& opt = {}) {
  HarnessReport report;
  report.confluence = is_confluent(cat);
  report.confluent = report.confluence.confluent;
  report.ramsey_report = is_ramsey(cat, opt.colors, opt.threads);
  report.ramsey = report.ramsey_report.ramsey;
  report.expect_solvable = report.confluent && report.ramsey;

  if (report.expect_solvable) {
    if (cat.arrow_count() <= opt.exhaustive_arrow_limit) {
      enumerate_all_diagrams(cat, opt.exhaustive_carrier, [&](const SetDiagram& diag) {
        ++report.exhaustive_checked;
        if (!solve(cat, diag)) {
          report.exhaustive_all_solvable = false;
          return false;
        }
        return true;
      });
    }
    std::mt19937_64 rng(opt.seed);
    for (int i = 0; i < opt.samples; ++i) {
      auto diag = sample_diagram(cat, opt.sampled_carrier, rng);
      if (!diag) break;
      ++report.sampled_checked;
      if (!solve(cat, *diag)) {
        report.sampled_all_solvable = false;
        break;
      }
    }
    report.consistent = report.exhaustive_all_solvable && report.sampled_all_solvable &&
                        report.sampled_checked == static_cast<std::size_t>(opt.samples);
  } else {
    SetDiagram bad;
    if (!report.confluent) {
      report.counterexample_kind = "confluence";
      auto [a, b] = *report.confluence.counterexample;
      bad = confluence_counterexample_diagram(cat, a, b);
    } else {
      report.counterexample_kind = "coloring";
      for (const auto& pair : report.ramsey_report.pairs)
        if (!pair.witness) {
          bad = bad_coloring_diagram(cat, pair.a, pair.b, opt.colors);
          break;
        }
    }
    report.counterexample_nonempty_carriers = true;
    for (const auto& c : bad.carrier)
      if (c.empty()) report.counterexample_nonempty_carriers = false;
    report.counterexample_unsolvable = !solve(cat, bad).has_value();
    report.consistent = report.counterexample_nonempty_carriers && report.counterexample_unsolvable;
  }
  return report;
}

} // namespace konig
