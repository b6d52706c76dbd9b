#pragma once

#include <catch2/catch_amalgamated.hpp>

#include <konig/konig.hpp>

#include <vector>

namespace catcheck {

/// Asserts that the given object/arrow maps form an isomorphism a → b.
inline void check_category_iso(const konig::FinCategory& a, const konig::FinCategory& b,
                               const std::vector<konig::ObjId>& obj_map,
                               const std::vector<konig::ArrId>& arr_map) {
  using konig::ArrId;
  using konig::ObjId;
  REQUIRE(a.object_count() == b.object_count());
  REQUIRE(a.arrow_count() == b.arrow_count());
  std::vector<char> obj_hit(b.object_count(), 0), arr_hit(b.arrow_count(), 0);
  for (ObjId o = 0; o < static_cast<ObjId>(a.object_count()); ++o) {
    REQUIRE(obj_map[o] >= 0);
    REQUIRE_FALSE(obj_hit[obj_map[o]]);
    obj_hit[obj_map[o]] = 1;
  }
  for (ArrId f = 0; f < static_cast<ArrId>(a.arrow_count()); ++f) {
    REQUIRE(arr_map[f] != konig::kNoArrow);
    REQUIRE_FALSE(arr_hit[arr_map[f]]);
    arr_hit[arr_map[f]] = 1;
    REQUIRE(b.source(arr_map[f]) == obj_map[a.source(f)]);
    REQUIRE(b.target(arr_map[f]) == obj_map[a.target(f)]);
  }
  for (ObjId o = 0; o < static_cast<ObjId>(a.object_count()); ++o)
    REQUIRE(arr_map[a.identity(o)] == b.identity(obj_map[o]));
  for (ArrId g = 0; g < static_cast<ArrId>(a.arrow_count()); ++g)
    for (ArrId f = 0; f < static_cast<ArrId>(a.arrow_count()); ++f)
      if (a.composable(g, f)) REQUIRE(arr_map[a.compose(g, f)] == b.compose(arr_map[g], arr_map[f]));
}

/// The canonical isomorphism between a blowup and the category of elements
/// of its padded power functor; requires the empty structure in kt.
inline void check_blowup_matches_elts(const konig::TruncatedClass& ks, const konig::TruncatedClass& kt) {
  using namespace konig;
  BlowupResult bl = blowup(ks, kt);
  StructuresCategory fsc = structures_category(kt);
  CatValuedFunctor s = blowup_catvalued(ks, kt, bl.base, fsc);
  EltsResult elts = grothendieck_elts(s);

  const int n_obj = static_cast<int>(fsc.cat.object_count());
  const int n_arr = static_cast<int>(fsc.cat.arrow_count());
  std::map<std::pair<ObjId, ObjId>, ObjId> elts_obj;
  for (ObjId o = 0; o < static_cast<ObjId>(elts.total.object_count()); ++o)
    elts_obj[elts.object_pair[o]] = o;
  std::map<std::tuple<ArrId, ArrId, ObjId>, ArrId> elts_arr;
  for (ArrId a = 0; a < static_cast<ArrId>(elts.total.arrow_count()); ++a)
    elts_arr[elts.arrow_data[a]] = a;

  std::optional<std::size_t> empty_idx;
  for (std::size_t i = 0; i < kt.members.size(); ++i)
    if (kt.members[i].domain.empty()) empty_idx = i;
  REQUIRE(empty_idx.has_value());

  std::vector<ObjId> obj_map(bl.cat.object_count());
  for (ObjId o = 0; o < static_cast<ObjId>(bl.cat.object_count()); ++o) {
    std::vector<int> digits(bl.object_fibers[o].begin(), bl.object_fibers[o].end());
    obj_map[o] = elts_obj.at({static_cast<ObjId>(bl.object_base[o]), mixed_radix_encode(digits, n_obj)});
  }
  std::vector<ArrId> arr_map(bl.cat.arrow_count());
  for (ArrId a = 0; a < static_cast<ArrId>(bl.cat.arrow_count()); ++a) {
    ObjId o1 = bl.cat.source(a), o2 = bl.cat.target(a);
    std::size_t c1 = bl.object_base[o1], c2 = bl.object_base[o2];
    ArrId base_arrow =
        *bl.base.find_arrow(static_cast<ObjId>(c1), static_cast<ObjId>(c2), bl.arrow_f[a]);
    std::vector<int> comp(ks.members[c2].domain.size());
    for (std::size_t p2 = 0; p2 < comp.size(); ++p2) {
      int src_pos = -1;
      for (std::size_t p = 0; p < bl.arrow_f[a].size(); ++p)
        if (bl.arrow_f[a][p] == static_cast<int>(p2)) src_pos = static_cast<int>(p);
      ObjId fib_tgt = static_cast<ObjId>(bl.object_fibers[o2][p2]);
      if (src_pos >= 0) {
        ObjId fib_src = static_cast<ObjId>(bl.object_fibers[o1][src_pos]);
        comp[p2] = *fsc.find_arrow(fib_src, fib_tgt, bl.arrow_gs[a][src_pos]);
      } else {
        comp[p2] = *fsc.find_arrow(static_cast<ObjId>(*empty_idx), fib_tgt, {});
      }
    }
    std::vector<int> src_digits(bl.object_fibers[o1].begin(), bl.object_fibers[o1].end());
    arr_map[a] = elts_arr.at({base_arrow, static_cast<ArrId>(mixed_radix_encode(comp, n_arr)),
                              static_cast<ObjId>(mixed_radix_encode(src_digits, n_obj))});
  }
  check_category_iso(bl.cat, elts.total, obj_map, arr_map);
}

} // namespace catcheck
