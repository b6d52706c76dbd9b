#include <catch2/catch_amalgamated.hpp>

#include <konig/konig.hpp>

#include <set>

#include "support/corpus.hpp"

using namespace konig;

TEST_CASE("functor validation") {
  FinCategory chain = corpus::chain3();
  SECTION("identity functor validates") {
    REQUIRE_NOTHROW(check_functor_laws(chain, chain, identity_functor(chain)));
  }
  SECTION("constant functor to the point validates") {
    FinCategory pt = corpus::point();
    RawFunctor raw;
    for (ObjId o = 0; o < 3; ++o) raw.objects[chain.object_name(o)] = "*";
    for (ArrId a = 0; a < static_cast<ArrId>(chain.arrow_count()); ++a)
      raw.arrows[chain.arrow_name(a)] = "id_*";
    REQUIRE_NOTHROW(validate_functor(chain, pt, raw));
  }
  SECTION("inconsistent composite image is rejected") {
    FinCategory monoid = corpus::absorbing_monoid();
    RawFunctor raw;
    raw.objects["1"] = "*";
    raw.objects["2"] = "*";
    raw.objects["3"] = "*";
    raw.arrows = {{"id_1", "id_*"}, {"id_2", "id_*"}, {"id_3", "id_*"},
                  {"f", "z"},       {"g", "z"},       {"gf", "id_*"}};
    try {
      validate_functor(chain, monoid, raw);
      FAIL("expected NotAFunctor");
    } catch (const Error& err) {
      REQUIRE(err.code() == Errc::NotAFunctor);
    }
  }
}

TEST_CASE("discrete fibration checks") {
  SECTION("order-forgetting projection is a discrete fibration") {
    Expansion pi = corpus::order_forget_expansion(3);
    REQUIRE(is_discrete_fibration(pi.total, pi.base, pi.proj).ok);
  }
  SECTION("collapsing a chain to the point is not") {
    FinCategory chain = corpus::chain2();
    FinCategory pt = corpus::point();
    RawFunctor raw;
    raw.objects = {{"1", "*"}, {"2", "*"}};
    raw.arrows = {{"id_1", "id_*"}, {"id_2", "id_*"}, {"f", "id_*"}};
    FunctorData collapse = validate_functor(chain, pt, raw);
    auto check = is_discrete_fibration(chain, pt, collapse);
    REQUIRE_FALSE(check.ok);
    REQUIRE(chain.object_name(check.object) == "2"); // id_2 and f both lift id over 2
    REQUIRE(check.lifts == 2);
  }
  SECTION("identity functor is a discrete fibration") {
    FinCategory square = corpus::commutative_square();
    REQUIRE(is_discrete_fibration(square, square, identity_functor(square)).ok);
  }
}

TEST_CASE("as_expansion") {
  SECTION("order-forgetting projection has factorial fibers") {
    Expansion pi = corpus::order_forget_expansion(2);
    REQUIRE(pi.fibers[*pi.base.object_index("[1]")].size() == 1);
    REQUIRE(pi.fibers[*pi.base.object_index("[2]")].size() == 2);
  }
  SECTION("identity expansion has singleton fibers") {
    Expansion pi = identity_expansion(corpus::chain3());
    for (const auto& fiber : pi.fibers) REQUIRE(fiber.size() == 1);
  }
  SECTION("proper full subcategory inclusion is not surjective") {
    FinCategory chain = corpus::chain3();
    FinCategory sub = full_subcategory(chain, {0, 1});
    RawFunctor raw;
    raw.objects = {{"1", "1"}, {"2", "2"}};
    raw.arrows = {{"id_1", "id_1"}, {"id_2", "id_2"}, {"f", "f"}};
    FunctorData inclusion = validate_functor(sub, chain, raw);
    try {
      as_expansion(sub, chain, inclusion);
      FAIL("expected NotSurjective");
    } catch (const Error& err) {
      REQUIRE(err.code() == Errc::NotSurjective);
    }
  }
}

TEST_CASE("expansion to diagram and back") {
  SECTION("identity expansion gives all-singleton carriers") {
    Expansion pi = identity_expansion(corpus::span());
    SetDiagram diag = expansion_to_diagram(pi);
    for (const auto& carrier : diag.carrier) REQUIRE(carrier.size() == 1);
  }
  SECTION("order expansion carriers count the orders") {
    Expansion pi = corpus::order_forget_expansion(2);
    SetDiagram diag = expansion_to_diagram(pi);
    REQUIRE(diag.carrier[*pi.base.object_index("[1]")].size() == 1);
    REQUIRE(diag.carrier[*pi.base.object_index("[2]")].size() == 2);
  }
  SECTION("doubled expansion gives constant-2 carriers with bijective actions") {
    Expansion pi = corpus::doubled_expansion(corpus::chain3());
    SetDiagram diag = expansion_to_diagram(pi);
    for (const auto& carrier : diag.carrier) REQUIRE(carrier.size() == 2);
    for (ArrId f = 0; f < static_cast<ArrId>(pi.base.arrow_count()); ++f) {
      std::set<int> image(diag.action[f].begin(), diag.action[f].end());
      REQUIRE(image.size() == 2);
    }
  }
}

TEST_CASE("diagram to expansion") {
  SECTION("all-singleton diagram gives the identity-shaped expansion") {
    FinCategory chain = corpus::chain3();
    RawDiagram raw;
    raw.sets = {{"1", {"x"}}, {"2", {"x"}}, {"3", {"x"}}};
    raw.maps = {{"f", {{"x", "x"}}}, {"g", {{"x", "x"}}}, {"gf", {{"x", "x"}}}};
    Expansion pi = diagram_to_expansion(chain, validate_diagram(chain, raw));
    REQUIRE(pi.total.object_count() == chain.object_count());
    REQUIRE(pi.total.arrow_count() == chain.arrow_count());
  }
  SECTION("span inclusion diagram yields an expansion with no section") {
    FinCategory span = corpus::span();
    RawDiagram raw;
    raw.sets = {{"A", {"0"}}, {"D", {"0", "1"}}, {"B", {"1"}}};
    raw.maps = {{"l", {{"0", "0"}}}, {"r", {{"1", "1"}}}};
    Expansion pi = diagram_to_expansion(span, validate_diagram(span, raw));
    REQUIRE(pi.total.object_count() == 4);
    REQUIRE_FALSE(section(pi).has_value());
    // A section is the same thing as a homomorphism out of the identity.
    REQUIRE_FALSE(find_expansion_hom(identity_expansion(span), pi).has_value());
  }
  SECTION("empty carrier is rejected") {
    FinCategory pt = corpus::point();
    RawDiagram raw;
    raw.sets = {{"*", {}}};
    SetDiagram diag = validate_diagram(pt, raw);
    REQUIRE_THROWS_AS(diagram_to_expansion(pt, diag), Error);
  }
}

TEST_CASE("Grothendieck correspondence round trips") {
  // diagram → expansion → diagram: equal up to the forced relabeling.
  auto roundtrip_diagram = [](const FinCategory& cat, const SetDiagram& diag) {
    SetDiagram back = expansion_to_diagram(diagram_to_expansion(cat, diag));
    REQUIRE(back.carrier.size() == diag.carrier.size());
    for (ObjId o = 0; o < static_cast<ObjId>(cat.object_count()); ++o)
      REQUIRE(back.carrier[o].size() == diag.carrier[o].size());
    for (ArrId f = 0; f < static_cast<ArrId>(cat.arrow_count()); ++f)
      REQUIRE(back.action[f] == diag.action[f]);
  };
  FinCategory chain = corpus::chain3();
  RawDiagram raw;
  raw.sets = {{"1", {"p", "q"}}, {"2", {"p", "q"}}, {"3", {"r"}}};
  raw.maps = {{"f", {{"p", "q"}, {"q", "p"}}}, {"g", {{"r", "p"}}}, {"gf", {{"r", "q"}}}};
  roundtrip_diagram(chain, validate_diagram(chain, raw));

  FinCategory span = corpus::span();
  RawDiagram sraw;
  sraw.sets = {{"A", {"0"}}, {"D", {"0", "1"}}, {"B", {"1"}}};
  sraw.maps = {{"l", {{"0", "0"}}}, {"r", {{"1", "1"}}}};
  roundtrip_diagram(span, validate_diagram(span, sraw));

  // expansion → diagram → expansion: isomorphic over the base.
  for (Expansion pi : {corpus::order_forget_expansion(2), corpus::doubled_expansion(corpus::chain2()),
                       identity_expansion(corpus::commutative_square())}) {
    Expansion back = diagram_to_expansion(pi.base, expansion_to_diagram(pi));
    REQUIRE(find_expansion_isomorphism(pi, back).has_value());
  }
}

TEST_CASE("expansion homomorphisms") {
  SECTION("identity target: the hom is found and equals the projection candidate") {
    Expansion pi = corpus::doubled_expansion(corpus::chain2());
    auto alpha = find_expansion_hom(pi, identity_expansion(pi.base));
    REQUIRE(alpha.has_value());
  }
  SECTION("doubled to folded: two homs, first in solution order returned") {
    Expansion doubled = corpus::doubled_expansion(corpus::point());
    Expansion folded = identity_expansion(corpus::point());
    auto homs = enumerate_expansion_homs(doubled, folded);
    REQUIRE(homs.size() == 1); // both objects must land on the unique fiber object
    Expansion self = doubled;
    REQUIRE(enumerate_expansion_homs(doubled, self).size() == 4);
  }
  SECTION("hom equality of projections is verified") {
    Expansion pi = corpus::order_forget_expansion(2);
    auto endos = enumerate_endomorphisms(pi);
    for (const auto& endo : endos) REQUIRE(compose_functors(endo, pi.proj) == pi.proj);
  }
}

TEST_CASE("sections") {
  SECTION("identity expansion has the identity section") {
    Expansion pi = identity_expansion(corpus::chain3());
    auto alpha = section(pi);
    REQUIRE(alpha.has_value());
    REQUIRE(*alpha == identity_functor(pi.base));
  }
  SECTION("doubled expansion has a copy-inclusion section") {
    Expansion pi = corpus::doubled_expansion(corpus::chain3());
    auto alpha = section(pi);
    REQUIRE(alpha.has_value());
    for (ObjId c = 0; c < static_cast<ObjId>(pi.base.object_count()); ++c)
      REQUIRE(pi.proj.obj_map[alpha->obj_map[c]] == c);
  }
  SECTION("orders over bare sets have no section (sets are not Ramsey)") {
    REQUIRE_FALSE(section(corpus::order_forget_expansion(3)).has_value());
  }
}

TEST_CASE("expansion property") {
  SECTION("orders over bare sets have EP with C' = C") {
    Expansion pi = corpus::order_forget_expansion(3);
    auto report = has_expansion_property(pi);
    REQUIRE(report.has_ep);
    for (ObjId c = 0; c < static_cast<ObjId>(pi.base.object_count()); ++c)
      REQUIRE(*report.witness[c] == c);
  }
  SECTION("doubled expansion fails EP on cross-copy pairs") {
    Expansion pi = corpus::doubled_expansion(corpus::chain2());
    auto report = has_expansion_property(pi);
    REQUIRE_FALSE(report.has_ep);
  }
  SECTION("identity expansion has EP") {
    REQUIRE(has_expansion_property(identity_expansion(corpus::span())).has_ep);
  }
}

TEST_CASE("endomorphism enumeration") {
  SECTION("identity expansion has exactly the identity") {
    auto endos = enumerate_endomorphisms(identity_expansion(corpus::chain3()));
    REQUIRE(endos.size() == 1);
  }
  SECTION("orders over bare sets: identity and order reversal") {
    Expansion pi = corpus::order_forget_expansion(3);
    auto endos = enumerate_endomorphisms(pi);
    REQUIRE(endos.size() == 2);
    int identities = 0, reversals = 0;
    for (const auto& endo : endos) {
      if (endo == identity_functor(pi.total)) ++identities;
      bool fixes_objects = true;
      for (ObjId e = 0; e < static_cast<ObjId>(pi.total.object_count()); ++e)
        if (endo.obj_map[e] != e) fixes_objects = false;
      if (!fixes_objects) ++reversals;
    }
    REQUIRE(identities == 1);
    REQUIRE(reversals == 1);
  }
  SECTION("doubled point expansion has four endomorphisms") {
    auto endos = enumerate_endomorphisms(corpus::doubled_expansion(corpus::point()));
    REQUIRE(endos.size() == 4);
  }
}

TEST_CASE("cores") {
  SECTION("identity expansion is its own core") {
    Expansion pi = identity_expansion(corpus::chain3());
    auto core = compute_core(pi);
    REQUIRE(core.core.total.object_count() == pi.total.object_count());
    REQUIRE(core.core_law_verified);
  }
  SECTION("doubled expansion cores to a single copy") {
    for (const FinCategory& base : {corpus::point(), corpus::chain2()}) {
      auto core = compute_core(corpus::doubled_expansion(base));
      REQUIRE(core.core_law_verified);
      for (const auto& fiber : core.core.fibers) REQUIRE(fiber.size() == 1);
    }
  }
  SECTION("orders over bare sets are their own core") {
    Expansion pi = corpus::order_forget_expansion(3);
    auto core = compute_core(pi);
    REQUIRE(core.core_law_verified);
    REQUIRE(core.core.total.object_count() == pi.total.object_count());
  }
  SECTION("idempotent and enumeration-order independent up to isomorphism") {
    for (Expansion pi : {corpus::doubled_expansion(corpus::chain2()), corpus::order_forget_expansion(2)}) {
      auto once = compute_core(pi);
      auto twice = compute_core(once.core);
      REQUIRE(twice.core.total.object_count() == once.core.total.object_count());
      std::set<std::string> names1, names2;
      for (ObjId o = 0; o < static_cast<ObjId>(once.core.total.object_count()); ++o)
        names1.insert(once.core.total.object_name(o));
      for (ObjId o = 0; o < static_cast<ObjId>(twice.core.total.object_count()); ++o)
        names2.insert(twice.core.total.object_name(o));
      REQUIRE(names1 == names2);
      auto reversed = compute_core(pi, EndoOrder::reverse);
      REQUIRE(find_expansion_isomorphism(once.core, reversed.core).has_value());
    }
  }
}

TEST_CASE("surjective homomorphisms corestrict to expansions") {
  // Endomorphisms with full image, checked as expansions on their image.
  for (Expansion pi : {corpus::doubled_expansion(corpus::point()), corpus::order_forget_expansion(2)}) {
    for (const auto& endo : enumerate_endomorphisms(pi)) {
      std::set<ObjId> objs(endo.obj_map.begin(), endo.obj_map.end());
      std::set<ArrId> arrs(endo.arr_map.begin(), endo.arr_map.end());
      REQUIRE_NOTHROW(restrict_expansion(pi, {objs.begin(), objs.end()}, {arrs.begin(), arrs.end()}));
    }
  }
}

TEST_CASE("homomorphisms into EP expansions are surjective") {
  Expansion orders = corpus::order_forget_expansion(3);
  REQUIRE(has_expansion_property(orders).has_ep);
  for (const auto& hom : enumerate_expansion_homs(orders, orders))
    REQUIRE(is_bijective_on_objects(hom, orders.total.object_count()));

  // Identity expansions have EP; projections onto them are the only homs
  // and are surjective.
  for (const FinCategory& base : {corpus::chain2(), corpus::span()}) {
    Expansion id = identity_expansion(base);
    REQUIRE(has_expansion_property(id).has_ep);
    Expansion doubled = corpus::doubled_expansion(base);
    for (const auto& hom : enumerate_expansion_homs(doubled, id)) {
      std::set<ObjId> image(hom.obj_map.begin(), hom.obj_map.end());
      REQUIRE(image.size() == id.total.object_count());
    }
  }

  // The doubled expansion fails EP and indeed admits non-surjective endos.
  Expansion doubled = corpus::doubled_expansion(corpus::point());
  REQUIRE_FALSE(has_expansion_property(doubled).has_ep);
  bool found_nonsurjective = false;
  for (const auto& endo : enumerate_endomorphisms(doubled)) {
    std::set<ObjId> image(endo.obj_map.begin(), endo.obj_map.end());
    if (image.size() < doubled.total.object_count()) found_nonsurjective = true;
  }
  REQUIRE(found_nonsurjective);
}
