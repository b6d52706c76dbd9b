#include <catch2/catch_amalgamated.hpp>

#include <konig/harness.hpp>
#include <konig/konig.hpp>

#include <random>

#include "support/corpus.hpp"
#include "support/oracle.hpp"

using namespace konig;

namespace {

/// The unsolvable span diagram {0} ↪ {0,1} ↩ {1}.
SetDiagram span_diagram(const FinCategory& span) {
  RawDiagram raw;
  raw.sets = {{"A", {"0"}}, {"D", {"0", "1"}}, {"B", {"1"}}};
  raw.maps = {{"l", {{"0", "0"}}}, {"r", {{"1", "1"}}}};
  return validate_diagram(span, raw);
}

/// The parallel-pair diagram with constant actions 0 and 1.
SetDiagram parallel_diagram(const FinCategory& pp) {
  RawDiagram raw;
  raw.sets = {{"a", {"0", "1"}}, {"b", {"*"}}};
  raw.maps = {{"f0", {{"*", "0"}}}, {"f1", {{"*", "1"}}}};
  return validate_diagram(pp, raw);
}

} // namespace

TEST_CASE("diagram validation") {
  SECTION("chain of singletons validates, identity actions synthesized") {
    FinCategory chain = corpus::chain3();
    RawDiagram raw;
    raw.sets = {{"1", {"a1"}}, {"2", {"a2"}}, {"3", {"a3"}}};
    raw.maps = {{"f", {{"a2", "a1"}}}, {"g", {{"a3", "a2"}}}, {"gf", {{"a3", "a1"}}}};
    SetDiagram diag = validate_diagram(chain, raw);
    REQUIRE(diag.carrier.size() == 3);
    REQUIRE(diag.action[chain.identity(0)].size() == 1);
  }
  SECTION("parallel-pair coloring diagram validates") {
    REQUIRE_NOTHROW(parallel_diagram(corpus::parallel_pair()));
  }
  SECTION("broken functoriality is caught with the pair") {
    FinCategory chain = corpus::chain3();
    RawDiagram raw;
    raw.sets = {{"1", {"x", "y"}}, {"2", {"x", "y"}}, {"3", {"x", "y"}}};
    raw.maps = {{"f", {{"x", "x"}, {"y", "y"}}},
                {"g", {{"x", "x"}, {"y", "y"}}},
                {"gf", {{"x", "y"}, {"y", "x"}}}};
    try {
      validate_diagram(chain, raw);
      FAIL("expected FunctorialityViolated");
    } catch (const Error& err) {
      REQUIRE(err.code() == Errc::FunctorialityViolated);
    }
  }
  SECTION("missing carrier and action") {
    FinCategory chain = corpus::chain2();
    RawDiagram raw;
    raw.sets = {{"1", {"x"}}};
    try {
      validate_diagram(chain, raw);
      FAIL("expected MissingCarrier");
    } catch (const Error& err) {
      REQUIRE(err.code() == Errc::MissingCarrier);
    }
    raw.sets = {{"1", {"x"}}, {"2", {"y"}}};
    try {
      validate_diagram(chain, raw);
      FAIL("expected MissingAction");
    } catch (const Error& err) {
      REQUIRE(err.code() == Errc::MissingAction);
    }
  }
  SECTION("empty carriers warn but validate") {
    FinCategory pt = corpus::point();
    RawDiagram raw;
    raw.sets = {{"*", {}}};
    std::vector<std::string> warnings;
    validate_diagram(pt, raw, &warnings);
    REQUIRE(warnings.size() == 1);
  }
}

TEST_CASE("solve") {
  SECTION("all singleton carriers give the unique tuple") {
    FinCategory chain = corpus::chain3();
    RawDiagram raw;
    raw.sets = {{"1", {"a1"}}, {"2", {"a2"}}, {"3", {"a3"}}};
    raw.maps = {{"f", {{"a2", "a1"}}}, {"g", {{"a3", "a2"}}}, {"gf", {{"a3", "a1"}}}};
    auto sol = solve(chain, validate_diagram(chain, raw));
    REQUIRE(sol.has_value());
    REQUIRE(sol->choice == std::vector<int>{0, 0, 0});
  }
  SECTION("span inclusion diagram has no solution") {
    FinCategory span = corpus::span();
    REQUIRE_FALSE(solve(span, span_diagram(span)).has_value());
  }
  SECTION("parallel-pair constant-action diagram has no solution") {
    FinCategory pp = corpus::parallel_pair();
    REQUIRE_FALSE(solve(pp, parallel_diagram(pp)).has_value());
  }
}

TEST_CASE("enumerate_solutions") {
  SECTION("constant two-element diagram on a connected base has two solutions") {
    FinCategory chain = corpus::chain3();
    RawDiagram raw;
    raw.sets = {{"1", {"0", "1"}}, {"2", {"0", "1"}}, {"3", {"0", "1"}}};
    std::map<std::string, std::string> ident = {{"0", "0"}, {"1", "1"}};
    raw.maps = {{"f", ident}, {"g", ident}, {"gf", ident}};
    auto sols = enumerate_solutions(chain, validate_diagram(chain, raw));
    REQUIRE(sols.size() == 2);
    REQUIRE(sols[0].choice == std::vector<int>{0, 0, 0});
    REQUIRE(sols[1].choice == std::vector<int>{1, 1, 1});
  }
  SECTION("unsolvable span gives the empty collection") {
    FinCategory span = corpus::span();
    REQUIRE(enumerate_solutions(span, span_diagram(span)).empty());
  }
  SECTION("discrete base multiplies carrier sizes") {
    FinCategory two = corpus::build_category({"x", "y"}, {}, {});
    RawDiagram raw;
    raw.sets = {{"x", {"0", "1"}}, {"y", {"0", "1", "2"}}};
    auto sols = enumerate_solutions(two, validate_diagram(two, raw));
    REQUIRE(sols.size() == 6);
  }
  SECTION("cap truncates in lexicographic order") {
    FinCategory two = corpus::build_category({"x", "y"}, {}, {});
    RawDiagram raw;
    raw.sets = {{"x", {"0", "1"}}, {"y", {"0", "1", "2"}}};
    auto sols = enumerate_solutions(two, validate_diagram(two, raw), 3);
    REQUIRE(sols.size() == 3);
    REQUIRE(sols[2].choice == std::vector<int>{0, 2});
  }
}

TEST_CASE("solve_restricted") {
  FinCategory pp = corpus::parallel_pair();
  SetDiagram diag = parallel_diagram(pp);
  SECTION("empty M picks first carrier elements") {
    auto sol = solve_restricted(pp, diag, {});
    REQUIRE(sol.has_value());
    REQUIRE(sol->choice == std::vector<int>{0, 0});
  }
  SECTION("one arrow of the pair is satisfiable") {
    auto sol = solve_restricted(pp, diag, {*pp.arrow_index("f0")});
    REQUIRE(sol.has_value());
    REQUIRE(satisfies_arrow(pp, diag, *sol, *pp.arrow_index("f0")));
  }
  SECTION("all arrows agrees with solve") {
    std::vector<ArrId> all(pp.arrow_count());
    std::iota(all.begin(), all.end(), 0);
    REQUIRE_FALSE(solve_restricted(pp, diag, all).has_value());
  }
  SECTION("unknown arrow is rejected") {
    REQUIRE_THROWS_AS(solve_restricted(pp, diag, {99}), Error);
  }
}

TEST_CASE("minimal_unsat_core") {
  SECTION("parallel pair core is both non-identity arrows") {
    FinCategory pp = corpus::parallel_pair();
    SetDiagram diag = parallel_diagram(pp);
    auto core = minimal_unsat_core(pp, diag);
    REQUIRE(core.has_value());
    REQUIRE(core->size() == 2);
    REQUIRE(std::find(core->begin(), core->end(), *pp.arrow_index("f0")) != core->end());
    REQUIRE(std::find(core->begin(), core->end(), *pp.arrow_index("f1")) != core->end());
    // Removing either arrow restores solvability.
    for (ArrId drop : *core) {
      std::vector<ArrId> rest;
      for (ArrId a : *core)
        if (a != drop) rest.push_back(a);
      REQUIRE(solve_restricted(pp, diag, rest).has_value());
    }
  }
  SECTION("span core is the two inclusions") {
    FinCategory span = corpus::span();
    auto core = minimal_unsat_core(span, span_diagram(span));
    REQUIRE(core.has_value());
    std::vector<std::string> names;
    for (ArrId a : *core) names.push_back(span.arrow_name(a));
    std::sort(names.begin(), names.end());
    REQUIRE(names == std::vector<std::string>{"l", "r"});
  }
  SECTION("solvable diagrams have no core") {
    FinCategory pt = corpus::point();
    RawDiagram raw;
    raw.sets = {{"*", {"x"}}};
    REQUIRE_FALSE(minimal_unsat_core(pt, validate_diagram(pt, raw)).has_value());
  }
}

TEST_CASE("solver agrees with the brute-force oracle") {
  // Exhaustive comparison on every diagram with carriers ≤ 2 over small
  // bases, sampled comparison with carriers ≤ 3.
  for (const auto& entry : corpus::harness_corpus()) {
    if (entry.cat.arrow_count() > 6) continue;
    enumerate_all_diagrams(entry.cat, 2, [&](const SetDiagram& diag) {
      auto mine = enumerate_solutions(entry.cat, diag);
      auto truth = oracle::brute_force_solutions(entry.cat, diag);
      REQUIRE(mine.size() == truth.size());
      for (std::size_t i = 0; i < mine.size(); ++i) REQUIRE(mine[i].choice == truth[i].choice);
      auto quick = solve(entry.cat, diag);
      REQUIRE(quick.has_value() == !truth.empty());
      if (quick) REQUIRE(is_solution(entry.cat, diag, *quick));
      return true;
    });
  }
  std::mt19937_64 rng(7);
  for (const auto& entry : corpus::harness_corpus()) {
    if (entry.cat.arrow_count() > 8 || entry.cat.object_count() > 4) continue;
    for (int i = 0; i < 25; ++i) {
      auto diag = sample_diagram(entry.cat, 3, rng);
      REQUIRE(diag.has_value());
      auto mine = enumerate_solutions(entry.cat, *diag);
      auto truth = oracle::brute_force_solutions(entry.cat, *diag);
      REQUIRE(mine.size() == truth.size());
    }
  }
}

TEST_CASE("limits decompose over connected components") {
  FinCategory cat = corpus::span_plus_point();
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    auto diag = sample_diagram(cat, 3, rng);
    REQUIRE(diag.has_value());
    std::size_t product = 1;
    for (const auto& block : connected_components(cat)) {
      FinCategory sub = full_subcategory(cat, block);
      RawDiagram raw;
      for (ObjId o : block) raw.sets[cat.object_name(o)] = diag->carrier[o];
      for (ArrId a = 0; a < static_cast<ArrId>(cat.arrow_count()); ++a) {
        if (std::find(block.begin(), block.end(), cat.source(a)) == block.end()) continue;
        std::map<std::string, std::string> m;
        for (int x = 0; x < static_cast<int>(diag->carrier[cat.target(a)].size()); ++x)
          m[diag->carrier[cat.target(a)][x]] = diag->carrier[cat.source(a)][diag->action[a][x]];
        raw.maps[cat.arrow_name(a)] = std::move(m);
      }
      product *= enumerate_solutions(sub, validate_diagram(sub, raw)).size();
    }
    REQUIRE(enumerate_solutions(cat, *diag).size() == product);
  }
}

TEST_CASE("restriction monotonicity on sampled diagrams") {
  std::mt19937_64 rng(13);
  FinCategory cat = corpus::commutative_square();
  for (int i = 0; i < 15; ++i) {
    auto diag = sample_diagram(cat, 3, rng);
    REQUIRE(diag.has_value());
    std::vector<ArrId> small, large;
    for (ArrId a = 0; a < static_cast<ArrId>(cat.arrow_count()); ++a) {
      if (rng() % 2) small.push_back(a);
      large.push_back(a);
    }
    auto all_small = oracle::brute_force_solutions(cat, *diag, &small);
    auto all_large = oracle::brute_force_solutions(cat, *diag, &large);
    // Every solution for the larger arrow set satisfies the smaller one.
    for (const auto& sol : all_large) REQUIRE(is_solution(cat, *diag, sol, &small));
    REQUIRE(all_large.size() <= all_small.size());
    auto restricted = solve_restricted(cat, *diag, small);
    REQUIRE(restricted.has_value() == !all_small.empty());
    if (restricted) REQUIRE(is_solution(cat, *diag, *restricted, &small));
  }
}
