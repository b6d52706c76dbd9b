#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "konig/error.hpp"

namespace konig {

using ObjId = int;
using ArrId = int;

inline constexpr ArrId kNoArrow = -1;

struct RawArrow {
  std::string id;
  std::string src;
  std::string tgt;
};

/// g_then_f convention: entry (g, f, result) states g∘f = result for
/// composable f: A→B, g: B→C.
struct RawCompose {
  std::string g;
  std::string f;
  std::string result;
};

struct RawCategory {
  std::vector<std::string> objects;
  std::vector<RawArrow> arrows;
  std::map<std::string, std::string> identities; // object -> arrow id
  std::vector<RawCompose> compose;
};

/// A finite category with a total composition table. Immutable after
/// validation; all orderings are declaration order.
class FinCategory {
 public:
  friend FinCategory validate_category(const RawCategory& raw);

  std::size_t object_count() const { return objects_.size(); }
  std::size_t arrow_count() const { return arrows_.size(); }

  const std::string& object_name(ObjId o) const { return objects_[o]; }
  const std::string& arrow_name(ArrId a) const { return arrows_[a].id; }

  std::optional<ObjId> object_index(std::string_view name) const {
    auto it = obj_index_.find(std::string(name));
    if (it == obj_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<ArrId> arrow_index(std::string_view name) const {
    auto it = arr_index_.find(std::string(name));
    if (it == arr_index_.end()) return std::nullopt;
    return it->second;
  }

  ObjId source(ArrId a) const { return arrows_[a].src; }
  ObjId target(ArrId a) const { return arrows_[a].tgt; }
  ArrId identity(ObjId o) const { return identity_[o]; }
  bool is_identity(ArrId a) const { return identity_[arrows_[a].src] == a && arrows_[a].src == arrows_[a].tgt; }

  bool composable(ArrId g, ArrId f) const { return arrows_[f].tgt == arrows_[g].src; }

  /// g∘f for composable f: A→B, g: B→C.
  ArrId compose(ArrId g, ArrId f) const {
    return table_[static_cast<std::size_t>(g) * arrows_.size() + f];
  }

  /// Arrows A→B in declaration order.
  const std::vector<ArrId>& hom(ObjId a, ObjId b) const {
    return hom_[static_cast<std::size_t>(a) * objects_.size() + b];
  }

  RawCategory to_raw() const {
    RawCategory raw;
    raw.objects = objects_;
    for (const auto& a : arrows_) raw.arrows.push_back({a.id, objects_[a.src], objects_[a.tgt]});
    for (ObjId o = 0; o < static_cast<ObjId>(objects_.size()); ++o)
      raw.identities[objects_[o]] = arrows_[identity_[o]].id;
    for (ArrId g = 0; g < static_cast<ArrId>(arrows_.size()); ++g)
      for (ArrId f = 0; f < static_cast<ArrId>(arrows_.size()); ++f)
        if (composable(g, f)) raw.compose.push_back({arrows_[g].id, arrows_[f].id, arrows_[compose(g, f)].id});
    return raw;
  }

 private:
  struct Arrow {
    std::string id;
    ObjId src;
    ObjId tgt;
  };

  std::vector<std::string> objects_;
  std::vector<Arrow> arrows_;
  std::vector<ArrId> identity_;
  std::vector<ArrId> table_; // arrows² dense, kNoArrow where not composable
  std::vector<std::vector<ArrId>> hom_;
  std::unordered_map<std::string, ObjId> obj_index_;
  std::unordered_map<std::string, ArrId> arr_index_;
};

inline ObjId require_object(const FinCategory& cat, std::string_view name) {
  auto o = cat.object_index(name);
  if (!o) fail(Errc::UnknownObject, "no object named '" + std::string(name) + "'");
  return *o;
}

inline ArrId require_arrow(const FinCategory& cat, std::string_view name) {
  auto a = cat.arrow_index(name);
  if (!a) fail(Errc::UnknownArrow, "no arrow named '" + std::string(name) + "'");
  return *a;
}

/// Checks all category axioms on the raw description: declared references,
/// identities with unit laws, closure and endpoint typing of the
/// composition table, and associativity over every composable triple.
inline FinCategory validate_category(const RawCategory& raw) {
  FinCategory cat;
  cat.objects_ = raw.objects;
  for (ObjId o = 0; o < static_cast<ObjId>(raw.objects.size()); ++o) {
    if (!cat.obj_index_.emplace(raw.objects[o], o).second)
      fail(Errc::UnknownReference, "duplicate object id '" + raw.objects[o] + "'");
  }
  for (const auto& a : raw.arrows) {
    auto s = cat.obj_index_.find(a.src);
    auto t = cat.obj_index_.find(a.tgt);
    if (s == cat.obj_index_.end())
      fail(Errc::UnknownReference, "arrow '" + a.id + "' has undeclared source '" + a.src + "'");
    if (t == cat.obj_index_.end())
      fail(Errc::UnknownReference, "arrow '" + a.id + "' has undeclared target '" + a.tgt + "'");
    ArrId idx = static_cast<ArrId>(cat.arrows_.size());
    if (!cat.arr_index_.emplace(a.id, idx).second)
      fail(Errc::UnknownReference, "duplicate arrow id '" + a.id + "'");
    cat.arrows_.push_back({a.id, s->second, t->second});
  }

  const std::size_t n = cat.arrows_.size();
  cat.identity_.assign(cat.objects_.size(), kNoArrow);
  for (const auto& [obj, arr] : raw.identities) {
    auto o = cat.obj_index_.find(obj);
    if (o == cat.obj_index_.end())
      fail(Errc::UnknownReference, "identity declared for undeclared object '" + obj + "'");
    auto a = cat.arr_index_.find(arr);
    if (a == cat.arr_index_.end())
      fail(Errc::UnknownReference, "identity of '" + obj + "' references undeclared arrow '" + arr + "'");
    cat.identity_[o->second] = a->second;
  }
  for (ObjId o = 0; o < static_cast<ObjId>(cat.objects_.size()); ++o) {
    ArrId id = cat.identity_[o];
    if (id == kNoArrow) fail(Errc::MissingIdentity, "object '" + cat.objects_[o] + "' has no identity arrow");
    if (cat.arrows_[id].src != o || cat.arrows_[id].tgt != o)
      fail(Errc::MissingIdentity,
           "identity '" + cat.arrows_[id].id + "' of '" + cat.objects_[o] + "' is not an endo-arrow of it");
  }

  cat.table_.assign(n * n, kNoArrow);
  for (const auto& c : raw.compose) {
    auto g = cat.arr_index_.find(c.g);
    auto f = cat.arr_index_.find(c.f);
    auto r = cat.arr_index_.find(c.result);
    if (g == cat.arr_index_.end() || f == cat.arr_index_.end() || r == cat.arr_index_.end())
      fail(Errc::UnknownReference, "composition entry (" + c.g + "," + c.f + "," + c.result + ") references undeclared arrows");
    if (!cat.composable(g->second, f->second))
      fail(Errc::CompositionNotClosed,
           "entry for non-composable pair g='" + c.g + "', f='" + c.f + "'");
    cat.table_[static_cast<std::size_t>(g->second) * n + f->second] = r->second;
  }

  // Closure and endpoint typing.
  for (ArrId g = 0; g < static_cast<ArrId>(n); ++g) {
    for (ArrId f = 0; f < static_cast<ArrId>(n); ++f) {
      if (!cat.composable(g, f)) continue;
      ArrId r = cat.table_[static_cast<std::size_t>(g) * n + f];
      if (r == kNoArrow)
        fail(Errc::CompositionNotClosed,
             "no entry for composable pair f='" + cat.arrows_[f].id + "', g='" + cat.arrows_[g].id + "'");
      if (cat.arrows_[r].src != cat.arrows_[f].src || cat.arrows_[r].tgt != cat.arrows_[g].tgt)
        fail(Errc::CompositionNotClosed,
             "composite '" + cat.arrows_[r].id + "' of ('" + cat.arrows_[g].id + "','" + cat.arrows_[f].id +
                 "') has wrong endpoints");
    }
  }

  // Unit laws.
  for (ArrId f = 0; f < static_cast<ArrId>(n); ++f) {
    ArrId ids = cat.identity_[cat.arrows_[f].src];
    ArrId idt = cat.identity_[cat.arrows_[f].tgt];
    if (cat.compose(f, ids) != f)
      fail(Errc::UnitLawViolated, "'" + cat.arrows_[f].id + "'∘'" + cat.arrows_[ids].id + "' ≠ '" + cat.arrows_[f].id + "'");
    if (cat.compose(idt, f) != f)
      fail(Errc::UnitLawViolated, "'" + cat.arrows_[idt].id + "'∘'" + cat.arrows_[f].id + "' ≠ '" + cat.arrows_[f].id + "'");
  }

  // Associativity, every composable triple.
  for (ArrId f = 0; f < static_cast<ArrId>(n); ++f) {
    for (ArrId g = 0; g < static_cast<ArrId>(n); ++g) {
      if (!cat.composable(g, f)) continue;
      ArrId gf = cat.compose(g, f);
      for (ArrId h = 0; h < static_cast<ArrId>(n); ++h) {
        if (!cat.composable(h, g)) continue;
        if (cat.compose(cat.compose(h, g), f) != cat.compose(h, gf))
          fail(Errc::AssociativityViolated,
               "triple f='" + cat.arrows_[f].id + "', g='" + cat.arrows_[g].id + "', h='" + cat.arrows_[h].id + "'");
      }
    }
  }

  cat.hom_.assign(cat.objects_.size() * cat.objects_.size(), {});
  for (ArrId a = 0; a < static_cast<ArrId>(n); ++a)
    cat.hom_[static_cast<std::size_t>(cat.arrows_[a].src) * cat.objects_.size() + cat.arrows_[a].tgt].push_back(a);

  return cat;
}

/// Zigzag-connectivity partition, union-find over arrow endpoints.
/// Blocks are listed by least member, members in declaration order.
inline std::vector<std::vector<ObjId>> connected_components(const FinCategory& cat) {
  std::vector<ObjId> parent(cat.object_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](ObjId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (ArrId a = 0; a < static_cast<ArrId>(cat.arrow_count()); ++a) {
    ObjId r1 = find(cat.source(a));
    ObjId r2 = find(cat.target(a));
    if (r1 != r2) parent[std::max(r1, r2)] = std::min(r1, r2);
  }
  std::map<ObjId, std::vector<ObjId>> blocks;
  for (ObjId o = 0; o < static_cast<ObjId>(cat.object_count()); ++o) blocks[find(o)].push_back(o);
  std::vector<std::vector<ObjId>> out;
  for (auto& [root, members] : blocks) out.push_back(std::move(members));
  return out;
}

inline bool objects_connected(const FinCategory& cat, ObjId a, ObjId b) {
  for (const auto& block : connected_components(cat))
    if (std::find(block.begin(), block.end(), a) != block.end())
      return std::find(block.begin(), block.end(), b) != block.end();
  return false;
}

struct Cocone {
  ObjId apex;
  ArrId from_a;
  ArrId from_b;
};

struct ConfluenceReport {
  bool confluent = true;
  /// Cocone per connected unordered pair (a ≤ b), keyed by (a,b).
  std::map<std::pair<ObjId, ObjId>, Cocone> cocones;
  std::optional<std::pair<ObjId, ObjId>> counterexample;
};

/// Scans candidate apexes in declaration order; first hit is recorded.
/// Pairs in different components need no cocone.
inline ConfluenceReport is_confluent(const FinCategory& cat) {
  ConfluenceReport report;
  for (const auto& block : connected_components(cat)) {
    for (std::size_t i = 0; i < block.size(); ++i) {
      for (std::size_t j = i; j < block.size(); ++j) {
        ObjId a = block[i], b = block[j];
        bool found = false;
        for (ObjId c = 0; c < static_cast<ObjId>(cat.object_count()) && !found; ++c) {
          const auto& ha = cat.hom(a, c);
          const auto& hb = cat.hom(b, c);
          if (!ha.empty() && !hb.empty()) {
            report.cocones[{a, b}] = Cocone{c, ha.front(), hb.front()};
            found = true;
          }
        }
        if (!found) {
          report.confluent = false;
          report.counterexample = {a, b};
          return report;
        }
      }
    }
  }
  return report;
}

/// Sources and targets swapped, table transposed. Arrow/object names kept.
inline FinCategory opposite(const FinCategory& cat) {
  RawCategory raw;
  raw.objects.assign(cat.object_count(), {});
  for (ObjId o = 0; o < static_cast<ObjId>(cat.object_count()); ++o) raw.objects[o] = cat.object_name(o);
  for (ArrId a = 0; a < static_cast<ArrId>(cat.arrow_count()); ++a)
    raw.arrows.push_back({cat.arrow_name(a), cat.object_name(cat.target(a)), cat.object_name(cat.source(a))});
  for (ObjId o = 0; o < static_cast<ObjId>(cat.object_count()); ++o)
    raw.identities[cat.object_name(o)] = cat.arrow_name(cat.identity(o));
  // (g∘f)^op = f^op ∘ g^op
  for (ArrId g = 0; g < static_cast<ArrId>(cat.arrow_count()); ++g)
    for (ArrId f = 0; f < static_cast<ArrId>(cat.arrow_count()); ++f)
      if (cat.composable(g, f))
        raw.compose.push_back({cat.arrow_name(f), cat.arrow_name(g), cat.arrow_name(cat.compose(g, f))});
  return validate_category(raw);
}

/// Subcategory on a subset of objects and arrows; throws NotClosed when the
/// selection is not closed under identities or composition.
inline FinCategory subcategory(const FinCategory& cat, const std::vector<ObjId>& objs,
                               const std::vector<ArrId>& arrs) {
  std::vector<char> keep_obj(cat.object_count(), 0), keep_arr(cat.arrow_count(), 0);
  for (ObjId o : objs) keep_obj[o] = 1;
  for (ArrId a : arrs) keep_arr[a] = 1;
  for (ArrId a : arrs) {
    if (!keep_obj[cat.source(a)] || !keep_obj[cat.target(a)])
      fail(Errc::NotClosed, "arrow '" + cat.arrow_name(a) + "' has an endpoint outside the object subset");
  }
  for (ObjId o : objs)
    if (!keep_arr[cat.identity(o)])
      fail(Errc::NotClosed, "identity of '" + cat.object_name(o) + "' missing from the arrow subset");
  RawCategory raw;
  for (ObjId o = 0; o < static_cast<ObjId>(cat.object_count()); ++o)
    if (keep_obj[o]) raw.objects.push_back(cat.object_name(o));
  for (ArrId a = 0; a < static_cast<ArrId>(cat.arrow_count()); ++a) {
    if (!keep_arr[a]) continue;
    raw.arrows.push_back({cat.arrow_name(a), cat.object_name(cat.source(a)), cat.object_name(cat.target(a))});
  }
  for (ObjId o = 0; o < static_cast<ObjId>(cat.object_count()); ++o)
    if (keep_obj[o]) raw.identities[cat.object_name(o)] = cat.arrow_name(cat.identity(o));
  for (ArrId g = 0; g < static_cast<ArrId>(cat.arrow_count()); ++g) {
    if (!keep_arr[g]) continue;
    for (ArrId f = 0; f < static_cast<ArrId>(cat.arrow_count()); ++f) {
      if (!keep_arr[f] || !cat.composable(g, f)) continue;
      ArrId r = cat.compose(g, f);
      if (!keep_arr[r])
        fail(Errc::NotClosed, "composite of '" + cat.arrow_name(g) + "' and '" + cat.arrow_name(f) +
                                  "' falls outside the arrow subset");
      raw.compose.push_back({cat.arrow_name(g), cat.arrow_name(f), cat.arrow_name(r)});
    }
  }
  return validate_category(raw);
}

/// Full subcategory: all arrows of cat between the kept objects.
inline FinCategory full_subcategory(const FinCategory& cat, const std::vector<ObjId>& objs) {
  std::vector<char> keep(cat.object_count(), 0);
  for (ObjId o : objs) {
    if (o < 0 || o >= static_cast<ObjId>(cat.object_count())) fail(Errc::UnknownObject, "object index out of range");
    keep[o] = 1;
  }
  std::vector<ArrId> arrs;
  for (ArrId a = 0; a < static_cast<ArrId>(cat.arrow_count()); ++a)
    if (keep[cat.source(a)] && keep[cat.target(a)]) arrs.push_back(a);
  return subcategory(cat, objs, arrs);
}

} // namespace konig
