#include <catch2/catch_amalgamated.hpp>

#include <konig/konig.hpp>

#include <numeric>
#include <random>

#include "support/corpus.hpp"
#include "support/oracle.hpp"

using namespace konig;

TEST_CASE("witness checks on small categories") {
  SECTION("one color makes any target with arrows a witness") {
    FinCategory chain = corpus::chain2();
    REQUIRE(is_ramsey_witness(chain, 0, 0, 1, 1).witness);
  }
  SECTION("color count must be positive") {
    FinCategory chain = corpus::chain2();
    REQUIRE_THROWS_AS(is_ramsey_witness(chain, 0, 0, 1, 0), Error);
    REQUIRE_THROWS_AS(find_witness(chain, 0, 0, 0), Error);
  }
  SECTION("pigeonhole: [3] witnesses ([1],[2]) with two colors, [2] does not") {
    FinCategory l3 = corpus::lorders_cat(3);
    ObjId o1 = *l3.object_index("[1]"), o2 = *l3.object_index("[2]"), o3 = *l3.object_index("[3]");
    REQUIRE(is_ramsey_witness(l3, o1, o2, o3, 2).witness);
    auto check = is_ramsey_witness(l3, o1, o2, o2, 2);
    REQUIRE_FALSE(check.witness);
    // Canonical certificate: the alternating coloring of the two points.
    REQUIRE(check.violating->assign == std::vector<int>{0, 1});
    REQUIRE(find_witness(l3, o1, o2, 2) == o3);
  }
}

TEST_CASE("whole-category Ramsey verdicts") {
  SECTION("chain: the terminal object witnesses everything") {
    auto report = is_ramsey(corpus::chain3(), 2);
    REQUIRE(report.ramsey);
  }
  SECTION("parallel pair fails on (a,b) with certificates for both candidates") {
    FinCategory pp = corpus::parallel_pair();
    auto report = is_ramsey(pp, 2);
    REQUIRE_FALSE(report.ramsey);
    ObjId oa = *pp.object_index("a"), ob = *pp.object_index("b");
    bool found = false;
    for (const auto& pair : report.pairs) {
      if (pair.a == oa && pair.b == ob) {
        REQUIRE_FALSE(pair.witness.has_value());
        REQUIRE(pair.failures.size() == pp.object_count());
        for (const auto& [candidate, chi] : pair.failures)
          REQUIRE_FALSE(oracle::has_copy_by_definition(pp, oa, ob, candidate, chi.assign));
        found = true;
      }
    }
    REQUIRE(found);
  }
  SECTION("absorbing monoid is Ramsey (the absorbing arrow forces constancy)") {
    REQUIRE(is_ramsey(corpus::absorbing_monoid(), 2).ramsey);
  }
  SECTION("two-element group is not Ramsey") {
    REQUIRE_FALSE(is_ramsey(corpus::z2_monoid(), 2).ramsey);
  }
  SECTION("empty hom pairs are vacuously witnessed") {
    REQUIRE(is_ramsey(corpus::chain2_plus_point(), 2).ramsey);
    REQUIRE(is_ramsey(corpus::cospan(), 2).ramsey);
  }
}

TEST_CASE("witness soundness against random colorings") {
  std::mt19937_64 rng(2024);
  FinCategory l4 = corpus::lorders_cat(4);
  ObjId o1 = *l4.object_index("[1]"), o2 = *l4.object_index("[2]"), o3 = *l4.object_index("[3]");
  REQUIRE(is_ramsey_witness(l4, o1, o2, o3, 2).witness);
  for (int i = 0; i < 1000; ++i) {
    auto chi = oracle::random_coloring(l4.hom(o1, o3).size(), 2, rng);
    REQUIRE(oracle::has_copy_by_definition(l4, o1, o2, o3, chi));
  }
}

TEST_CASE("two-color witnesses extend to more colors on the Ramsey corpus") {
  // The classical merge-two-colors induction, exercised rather than assumed.
  std::vector<FinCategory> cats = {corpus::chain3(), corpus::absorbing_monoid(), corpus::cospan(),
                                   corpus::commutative_square()};
  for (const auto& cat : cats) {
    REQUIRE(is_ramsey(cat, 2).ramsey);
    for (int colors = 1; colors <= 4; ++colors) REQUIRE(is_ramsey(cat, colors).ramsey);
  }
}

TEST_CASE("monochromatic_copy extracts a witness arrow and value") {
  SECTION("singleton carrier forces the value") {
    FinCategory chain = corpus::chain3();
    RawDiagram raw;
    raw.sets = {{"1", {"a1"}}, {"2", {"a2"}}, {"3", {"a3"}}};
    raw.maps = {{"f", {{"a2", "a1"}}}, {"g", {{"a3", "a2"}}}, {"gf", {{"a3", "a1"}}}};
    SetDiagram diag = validate_diagram(chain, raw);
    auto copy = monochromatic_copy(chain, diag, *chain.object_index("1"), *chain.object_index("2"),
                                   *chain.object_index("3"), 0);
    REQUIRE(copy.value == 0);
  }
  SECTION("point colorings on linear orders, pigeonhole instance") {
    auto k = linear_orders_class(3);
    auto sc = structures_category(k);
    SetDiagram diag = corpus::point_coloring_diagram(k, sc);
    ObjId o1 = *sc.cat.object_index("[1]"), o2 = *sc.cat.object_index("[2]"), o3 = *sc.cat.object_index("[3]");
    // Any 2-coloring of three points: the returned pair is monochromatic.
    for (int x = 0; x < static_cast<int>(diag.carrier[o3].size()); ++x) {
      auto copy = monochromatic_copy(sc.cat, diag, o1, o2, o3, x);
      int through = diag.apply(copy.g, x);
      const auto& hom12 = sc.cat.hom(o1, o2);
      for (ArrId f : hom12) REQUIRE(diag.apply(f, through) == *copy.value);
    }
  }
  SECTION("no witness arrow raises NotAWitness") {
    FinCategory pp = corpus::parallel_pair();
    RawDiagram raw;
    raw.sets = {{"a", {"0", "1"}}, {"b", {"p", "q"}}};
    raw.maps = {{"f0", {{"p", "0"}, {"q", "0"}}}, {"f1", {{"p", "1"}, {"q", "0"}}}};
    SetDiagram diag = validate_diagram(pp, raw);
    ObjId oa = *pp.object_index("a"), ob = *pp.object_index("b");
    // Element p colors hom(a,b) non-constantly and only id_b is available.
    REQUIRE_THROWS_AS(monochromatic_copy(pp, diag, oa, ob, ob, 0), Error);
  }
}

TEST_CASE("iterated M-solution") {
  SECTION("empty M returns defaults") {
    FinCategory chain = corpus::chain3();
    RawDiagram raw;
    raw.sets = {{"1", {"x", "y"}}, {"2", {"x"}}, {"3", {"x"}}};
    raw.maps = {{"f", {{"x", "x"}}}, {"g", {{"x", "x"}}}, {"gf", {{"x", "x"}}}};
    SetDiagram diag = validate_diagram(chain, raw);
    auto sol = iterated_m_solution(chain, diag, {});
    REQUIRE(sol.choice == std::vector<int>{0, 0, 0});
  }
  SECTION("constant diagram, any M on a chain") {
    FinCategory chain = corpus::chain3();
    RawDiagram raw;
    std::map<std::string, std::string> ident = {{"0", "0"}, {"1", "1"}};
    raw.sets = {{"1", {"0", "1"}}, {"2", {"0", "1"}}, {"3", {"0", "1"}}};
    raw.maps = {{"f", ident}, {"g", ident}, {"gf", ident}};
    SetDiagram diag = validate_diagram(chain, raw);
    std::vector<ArrId> m = {*chain.arrow_index("f"), *chain.arrow_index("g")};
    auto sol = iterated_m_solution(chain, diag, m);
    REQUIRE(is_solution(chain, diag, sol, &m));
    REQUIRE(sol.choice[0] == sol.choice[1]);
    REQUIRE(sol.choice[1] == sol.choice[2]);
  }
  SECTION("point colorings over the linear orders ambient") {
    auto k = linear_orders_class(6);
    auto sc = structures_category(k);
    SetDiagram diag = corpus::point_coloring_diagram(k, sc);
    ObjId o1 = *sc.cat.object_index("[1]"), o2 = *sc.cat.object_index("[2]");
    std::vector<ArrId> m = sc.cat.hom(o1, o2); // both embeddings [1]→[2]
    REQUIRE(m.size() == 2);
    auto sol = iterated_m_solution(sc.cat, diag, m);
    REQUIRE(is_solution(sc.cat, diag, sol, &m));
    // The coloring chosen under [2] is monochromatic and matches x_[1].
    const auto& chi2 = diag.carrier[o2][sol.choice[o2]];
    REQUIRE(chi2[1] == chi2[2]); // labels are "c<d1><d2>"
    auto restricted = solve_restricted(sc.cat, diag, m);
    REQUIRE(restricted.has_value());
  }
  SECTION("witness chain failure surfaces as NoWitness") {
    FinCategory pp = corpus::parallel_pair();
    RawDiagram raw;
    raw.sets = {{"a", {"0", "1"}}, {"b", {"p", "q"}}};
    raw.maps = {{"f0", {{"p", "0"}, {"q", "0"}}}, {"f1", {{"p", "1"}, {"q", "0"}}}};
    SetDiagram diag = validate_diagram(pp, raw);
    std::vector<ArrId> m = {*pp.arrow_index("f0"), *pp.arrow_index("f1")};
    try {
      iterated_m_solution(pp, diag, m);
      FAIL("expected NoWitness");
    } catch (const Error& err) {
      REQUIRE(err.code() == Errc::NoWitness);
    }
  }
  SECTION("disconnected endpoints surface as NoCocone") {
    FinCategory cat = corpus::build_category({"x", "y"}, {{"ex", "x", "x"}, {"ey", "y", "y"}},
                                             {{"ex", "ex", "ex"}, {"ey", "ey", "ey"}});
    RawDiagram raw;
    raw.sets = {{"x", {"0"}}, {"y", {"0"}}};
    raw.maps = {{"ex", {{"0", "0"}}}, {"ey", {{"0", "0"}}}};
    SetDiagram diag = validate_diagram(cat, raw);
    std::vector<ArrId> m = {*cat.arrow_index("ex"), *cat.arrow_index("ey")};
    try {
      iterated_m_solution(cat, diag, m);
      FAIL("expected NoCocone");
    } catch (const Error& err) {
      REQUIRE(err.code() == Errc::NoCocone);
    }
  }
}

TEST_CASE("confluence counterexample diagram") {
  SECTION("span: {0} under A, {1} under B, {0,1} at D; unsolvable") {
    FinCategory span = corpus::span();
    ObjId a = *span.object_index("A"), b = *span.object_index("B"), d = *span.object_index("D");
    SetDiagram diag = confluence_counterexample_diagram(span, a, b);
    REQUIRE(diag.carrier[a] == std::vector<std::string>{"0"});
    REQUIRE(diag.carrier[b] == std::vector<std::string>{"1"});
    REQUIRE(diag.carrier[d] == std::vector<std::string>{"0", "1"});
    REQUIRE_FALSE(solve(span, diag).has_value());
  }
  SECTION("confluent pair is rejected") {
    FinCategory chain = corpus::chain3();
    REQUIRE_THROWS_AS(confluence_counterexample_diagram(chain, 0, 1), Error);
  }
  SECTION("two glued spans stay unsolvable") {
    FinCategory cat = corpus::build_category(
        {"A", "B", "D", "E"}, {{"la", "D", "A"}, {"lb", "D", "B"}, {"ra", "E", "A"}, {"rb", "E", "B"}}, {});
    SetDiagram diag = confluence_counterexample_diagram(cat, *cat.object_index("A"), *cat.object_index("B"));
    for (const auto& carrier : diag.carrier) REQUIRE_FALSE(carrier.empty());
    REQUIRE_FALSE(solve(cat, diag).has_value());
  }
}

TEST_CASE("bad coloring diagram") {
  SECTION("parallel pair: vacuous carrier at a, non-constant colorings at b; unsolvable") {
    FinCategory pp = corpus::parallel_pair();
    ObjId a = *pp.object_index("a"), b = *pp.object_index("b");
    SetDiagram diag = bad_coloring_diagram(pp, a, b, 2);
    REQUIRE(diag.carrier[a].size() == 2);
    REQUIRE(diag.carrier[b].size() == 2); // the two non-constant colorings of hom(a,b)
    REQUIRE_FALSE(solve(pp, diag).has_value());
  }
  SECTION("L≤5 carriers all nonempty and the diagram is unsolvable") {
    FinCategory l5 = corpus::lorders_cat(5);
    ObjId o2 = *l5.object_index("[2]"), o3 = *l5.object_index("[3]");
    REQUIRE_FALSE(find_witness(l5, o2, o3, 2).has_value());
    SetDiagram diag = bad_coloring_diagram(l5, o2, o3, 2);
    for (const auto& carrier : diag.carrier) REQUIRE_FALSE(carrier.empty());
    REQUIRE_FALSE(solve(l5, diag).has_value());
  }
  SECTION("carrier empties exactly at Ramsey witnesses") {
    FinCategory l3 = corpus::lorders_cat(3);
    ObjId o1 = *l3.object_index("[1]"), o2 = *l3.object_index("[2]");
    SetDiagram diag = bad_coloring_diagram(l3, o1, o2, 2);
    for (ObjId c = 0; c < static_cast<ObjId>(l3.object_count()); ++c)
      REQUIRE(diag.carrier[c].empty() == is_ramsey_witness(l3, o1, o2, c, 2).witness);
  }
  SECTION("invalid color count") {
    REQUIRE_THROWS_AS(bad_coloring_diagram(corpus::parallel_pair(), 0, 1, 0), Error);
  }
}

TEST_CASE("theorem harness equivalences per corpus member") {
  // Exercises both directions of the characterization in miniature; the
  // acceptance suite runs the full-size version.
  HarnessOptions opt;
  opt.samples = 30;
  for (const auto& entry : corpus::harness_corpus()) {
    auto report = run_theorem_harness(entry.cat, opt);
    INFO(entry.name);
    REQUIRE(report.consistent);
  }
}
