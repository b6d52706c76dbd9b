#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "konig/category.hpp"
#include "konig/error.hpp"
#include "konig/expansion.hpp"
#include "konig/functor.hpp"
#include "konig/transfer.hpp"

namespace konig {

struct Signature {
  std::vector<std::string> symbols;
  std::vector<int> arity;

  std::optional<int> symbol_index(const std::string& name) const {
    for (std::size_t i = 0; i < symbols.size(); ++i)
      if (symbols[i] == name) return static_cast<int>(i);
    return std::nullopt;
  }

  bool operator==(const Signature& other) const {
    return symbols == other.symbols && arity == other.arity;
  }
};

/// Finite relational structure: ordered domain of labels plus one sorted
/// tuple set per signature symbol (tuples hold domain positions).
struct RelStructure {
  std::vector<std::string> domain;
  Signature sig;
  std::vector<std::vector<std::vector<int>>> relations;

  bool operator==(const RelStructure& other) const {
    return domain == other.domain && sig == other.sig && relations == other.relations;
  }

  bool has_tuple(int symbol, const std::vector<int>& tuple) const {
    const auto& rel = relations[symbol];
    return std::binary_search(rel.begin(), rel.end(), tuple);
  }
};

inline RelStructure make_structure(Signature sig, std::vector<std::string> domain,
                                   std::vector<std::vector<std::vector<int>>> relations) {
  RelStructure s;
  s.domain = std::move(domain);
  s.sig = std::move(sig);
  s.relations = std::move(relations);
  if (s.relations.size() != s.sig.symbols.size())
    fail(Errc::SignatureMismatch, "one tuple set per signature symbol required");
  for (std::size_t r = 0; r < s.relations.size(); ++r) {
    for (const auto& t : s.relations[r]) {
      if (static_cast<int>(t.size()) != s.sig.arity[r])
        fail(Errc::BadInput, "tuple arity mismatch for symbol '" + s.sig.symbols[r] + "'");
      for (int v : t)
        if (v < 0 || v >= static_cast<int>(s.domain.size()))
          fail(Errc::BadInput, "tuple value outside the domain for symbol '" + s.sig.symbols[r] + "'");
    }
    std::sort(s.relations[r].begin(), s.relations[r].end());
    s.relations[r].erase(std::unique(s.relations[r].begin(), s.relations[r].end()), s.relations[r].end());
  }
  return s;
}

/// Deterministic text form: relations over domain positions. Unique per
/// structure for a fixed domain ordering.
inline std::string serialize_structure(const RelStructure& s) {
  std::string out;
  for (std::size_t r = 0; r < s.sig.symbols.size(); ++r) {
    if (r) out += "|";
    out += s.sig.symbols[r] + ":";
    for (std::size_t t = 0; t < s.relations[r].size(); ++t) {
      if (t) out += ";";
      for (std::size_t i = 0; i < s.relations[r][t].size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s.relations[r][t][i]);
      }
    }
  }
  return out;
}

inline bool is_embedding(const RelStructure& a, const RelStructure& b, const std::vector<int>& map) {
  if (map.size() != a.domain.size()) return false;
  std::vector<char> used(b.domain.size(), 0);
  for (int v : map) {
    if (v < 0 || v >= static_cast<int>(b.domain.size()) || used[v]) return false;
    used[v] = 1;
  }
  for (std::size_t r = 0; r < a.sig.symbols.size(); ++r) {
    int k = a.sig.arity[r];
    // Every tuple over the image must agree in both directions; tuples can
    // repeat entries, so scan all functions arity -> domain of a.
    std::vector<int> tuple(k, 0), image(k, 0);
    if (a.domain.empty() && k > 0) continue;
    bool done = k == 0;
    if (k == 0) {
      if (a.has_tuple(static_cast<int>(r), {}) != b.has_tuple(static_cast<int>(r), {})) return false;
      continue;
    }
    while (!done) {
      for (int i = 0; i < k; ++i) image[i] = map[tuple[i]];
      if (a.has_tuple(static_cast<int>(r), tuple) != b.has_tuple(static_cast<int>(r), image)) return false;
      int pos = k - 1;
      while (pos >= 0 && tuple[pos] == static_cast<int>(a.domain.size()) - 1) tuple[pos--] = 0;
      if (pos < 0)
        done = true;
      else
        ++tuple[pos];
    }
  }
  return true;
}

/// All embeddings A → B as position maps, lexicographic order.
inline std::vector<std::vector<int>> enumerate_embeddings(const RelStructure& a, const RelStructure& b) {
  if (!(a.sig == b.sig)) fail(Errc::SignatureMismatch, "embedding requires a common signature");
  std::vector<std::vector<int>> out;
  std::vector<int> map(a.domain.size(), -1);
  std::vector<char> used(b.domain.size(), 0);
  auto rec = [&](auto&& self, std::size_t pos) -> void {
    if (pos == a.domain.size()) {
      if (is_embedding(a, b, map)) out.push_back(map);
      return;
    }
    for (int v = 0; v < static_cast<int>(b.domain.size()); ++v) {
      if (used[v]) continue;
      map[pos] = v;
      used[v] = 1;
      self(self, pos + 1);
      used[v] = 0;
      map[pos] = -1;
    }
  };
  rec(rec, 0);
  return out;
}

inline bool isomorphic(const RelStructure& a, const RelStructure& b) {
  if (a.domain.size() != b.domain.size()) return false;
  return !enumerate_embeddings(a, b).empty();
}

/// Induced substructure on the given positions (kept in the given order),
/// with the original labels.
inline RelStructure induced_substructure(const RelStructure& s, const std::vector<int>& positions) {
  RelStructure out;
  out.sig = s.sig;
  std::vector<int> back(s.domain.size(), -1);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    out.domain.push_back(s.domain[positions[i]]);
    back[positions[i]] = static_cast<int>(i);
  }
  out.relations.resize(s.relations.size());
  for (std::size_t r = 0; r < s.relations.size(); ++r) {
    for (const auto& t : s.relations[r]) {
      std::vector<int> mapped(t.size());
      bool inside = true;
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (back[t[i]] < 0) {
          inside = false;
          break;
        }
        mapped[i] = back[t[i]];
      }
      if (inside) out.relations[r].push_back(std::move(mapped));
    }
    std::sort(out.relations[r].begin(), out.relations[r].end());
  }
  return out;
}

/// Transports s along a bijection of positions onto a new labeled domain:
/// position p of s becomes position map[p].
inline RelStructure transport_structure(const RelStructure& s, const std::vector<std::string>& new_domain,
                                        const std::vector<int>& map) {
  RelStructure out;
  out.sig = s.sig;
  out.domain = new_domain;
  out.relations.resize(s.relations.size());
  for (std::size_t r = 0; r < s.relations.size(); ++r) {
    for (const auto& t : s.relations[r]) {
      std::vector<int> mapped(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) mapped[i] = map[t[i]];
      out.relations[r].push_back(std::move(mapped));
    }
    std::sort(out.relations[r].begin(), out.relations[r].end());
  }
  return out;
}

struct TruncatedClass {
  Signature sig;
  std::vector<RelStructure> members;
  std::vector<std::string> names;
  int max_size = 0;
};

/// Explicit finite class: every nonempty induced substructure of a member
/// must be isomorphic to some member. Duplicated isomorphism types are
/// allowed (several labelings of the same structure may be listed).
inline TruncatedClass make_class(Signature sig, std::vector<RelStructure> members,
                                 std::vector<std::string> names = {}) {
  TruncatedClass k;
  k.sig = std::move(sig);
  k.members = std::move(members);
  if (names.empty())
    for (std::size_t i = 0; i < k.members.size(); ++i) names.push_back("s" + std::to_string(i));
  if (names.size() != k.members.size()) fail(Errc::BadInput, "one name per member required");
  k.names = std::move(names);
  for (const auto& m : k.members) {
    if (!(m.sig == k.sig)) fail(Errc::SignatureMismatch, "member signature differs from the class signature");
    k.max_size = std::max(k.max_size, static_cast<int>(m.domain.size()));
  }
  // Closure under induced substructures, up to isomorphism.
  for (std::size_t mi = 0; mi < k.members.size(); ++mi) {
    const auto& m = k.members[mi];
    const int n = static_cast<int>(m.domain.size());
    for (int mask = 1; mask < (1 << n); ++mask) {
      std::vector<int> positions;
      for (int i = 0; i < n; ++i)
        if (mask & (1 << i)) positions.push_back(i);
      RelStructure sub = induced_substructure(m, positions);
      bool found = false;
      for (const auto& other : k.members)
        if (isomorphic(sub, other)) {
          found = true;
          break;
        }
      if (!found)
        fail(Errc::NotClosed, "class is not closed under induced substructures (inside member '" +
                                  k.names[mi] + "')");
    }
  }
  return k;
}

/// All structures on the given labeled domain isomorphic to some member:
/// member transports along every bijection, deduplicated, member-then-
/// permutation order.
inline std::vector<RelStructure> labeled_copies(const TruncatedClass& k, const std::vector<std::string>& domain) {
  std::vector<RelStructure> out;
  std::set<std::string> seen;
  std::vector<int> perm(domain.size());
  for (const auto& m : k.members) {
    if (m.domain.size() != domain.size()) continue;
    std::iota(perm.begin(), perm.end(), 0);
    do {
      RelStructure t = transport_structure(m, domain, perm);
      if (seen.insert(serialize_structure(t)).second) out.push_back(std::move(t));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

struct StructuresCategory {
  FinCategory cat;
  std::vector<std::vector<int>> emb; // per arrow: the embedding as a position map
  std::map<std::tuple<ObjId, ObjId, std::vector<int>>, ArrId> index;

  std::optional<ArrId> find_arrow(ObjId src, ObjId tgt, const std::vector<int>& map) const {
    auto it = index.find({src, tgt, map});
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

/// The category with the class members as objects and all embeddings as
/// arrows; composition is function composition.
inline StructuresCategory structures_category(const TruncatedClass& k) {
  StructuresCategory sc;
  RawCategory raw;
  raw.objects = k.names;
  auto arr_name = [&](std::size_t a, std::size_t b, const std::vector<int>& map) {
    std::string name = k.names[a] + ">" + k.names[b] + ":";
    for (std::size_t i = 0; i < map.size(); ++i) {
      if (i) name += ",";
      name += std::to_string(map[i]);
    }
    return name;
  };
  for (std::size_t a = 0; a < k.members.size(); ++a) {
    for (std::size_t b = 0; b < k.members.size(); ++b) {
      for (const auto& map : enumerate_embeddings(k.members[a], k.members[b])) {
        ArrId id = static_cast<ArrId>(raw.arrows.size());
        raw.arrows.push_back({arr_name(a, b, map), k.names[a], k.names[b]});
        sc.emb.push_back(map);
        sc.index[{static_cast<ObjId>(a), static_cast<ObjId>(b), map}] = id;
        if (a == b) {
          bool is_id = true;
          for (std::size_t i = 0; i < map.size(); ++i)
            if (map[i] != static_cast<int>(i)) is_id = false;
          if (is_id) raw.identities[k.names[a]] = raw.arrows.back().id;
        }
      }
    }
  }
  for (const auto& [key1, f] : sc.index) {
    auto [a, b, fmap] = key1;
    for (const auto& [key2, g] : sc.index) {
      auto [b2, c, gmap] = key2;
      if (b2 != b) continue;
      std::vector<int> comp(fmap.size());
      for (std::size_t i = 0; i < fmap.size(); ++i) comp[i] = gmap[fmap[i]];
      raw.compose.push_back({raw.arrows[g].id, raw.arrows[f].id, raw.arrows[sc.index.at({a, c, comp})].id});
    }
  }
  sc.cat = validate_category(raw);
  return sc;
}

/// Forgets the relations outside sigma; same domain.
inline RelStructure reduct(const RelStructure& e, const Signature& sigma) {
  RelStructure out;
  out.domain = e.domain;
  out.sig = sigma;
  out.relations.resize(sigma.symbols.size());
  for (std::size_t r = 0; r < sigma.symbols.size(); ++r) {
    auto idx = e.sig.symbol_index(sigma.symbols[r]);
    if (!idx || e.sig.arity[*idx] != sigma.arity[r])
      fail(Errc::SignatureMismatch, "symbol '" + sigma.symbols[r] + "' is not part of the structure's signature");
    out.relations[r] = e.relations[*idx];
  }
  return out;
}

struct AmalgamationFailure {
  std::size_t a, b, c;          // member indices
  std::vector<int> f, g;        // embeddings A→B, A→C
};

struct AmalgamationReport {
  bool has_sap = true;
  std::optional<AmalgamationFailure> failure;
};

/// Strong amalgamation, checked exhaustively over member triples and
/// embedding pairs up to the bound. The amalgam domain is taken canonically
/// as B glued with C over A (no extra points), which is the general case up
/// to renaming.
inline AmalgamationReport has_strong_amalgamation(const TruncatedClass& k, int bound) {
  for (std::size_t a = 0; a < k.members.size(); ++a)
    for (std::size_t b = 0; b < k.members.size(); ++b)
      for (std::size_t c = 0; c < k.members.size(); ++c) {
        const int glued =
            static_cast<int>(k.members[b].domain.size() + k.members[c].domain.size() - k.members[a].domain.size());
        if (glued > bound || glued < 1) continue;
        for (const auto& f : enumerate_embeddings(k.members[a], k.members[b]))
          for (const auto& g : enumerate_embeddings(k.members[a], k.members[c])) {
            // h: B → D keeps positions, k maps C over the glued part.
            std::vector<std::string> domain(glued);
            for (int i = 0; i < glued; ++i) domain[i] = "d" + std::to_string(i);
            const std::size_t nb = k.members[b].domain.size();
            std::vector<int> h(nb);
            std::iota(h.begin(), h.end(), 0);
            std::vector<int> kk(k.members[c].domain.size(), -1);
            for (std::size_t i = 0; i < f.size(); ++i) kk[g[i]] = f[i];
            int fresh = static_cast<int>(nb);
            for (auto& v : kk)
              if (v < 0) v = fresh++;
            bool completed = false;
            for (const auto& cand : labeled_copies(k, domain)) {
              if (is_embedding(k.members[b], cand, h) && is_embedding(k.members[c], cand, kk)) {
                completed = true;
                break;
              }
            }
            if (!completed) {
              AmalgamationReport report;
              report.has_sap = false;
              report.failure = AmalgamationFailure{a, b, c, f, g};
              return report;
            }
          }
      }
  return AmalgamationReport{};
}

/// Builds a structure on D that makes every right inverse of the
/// surjection π: D↠C an embedding of C, by collapsing one duplicated point
/// at a time and closing with a strong amalgam. Requires the class to
/// amalgamate strongly up to |D|.
inline RelStructure superposition_structure(const TruncatedClass& k, const RelStructure& c,
                                            const std::vector<std::string>& d_domain,
                                            const std::vector<int>& pi) {
  if (pi.size() != d_domain.size()) fail(Errc::BadInput, "one image per domain point required");
  std::vector<char> hit(c.domain.size(), 0);
  for (int v : pi) {
    if (v < 0 || v >= static_cast<int>(c.domain.size())) fail(Errc::BadInput, "projection image out of range");
    hit[v] = 1;
  }
  for (char used : hit)
    if (!used) fail(Errc::NotSurjective, "the projection misses a point of the base structure");

  RelStructure result;
  if (d_domain.size() == c.domain.size()) {
    std::vector<int> inverse(c.domain.size());
    for (std::size_t i = 0; i < pi.size(); ++i) inverse[pi[i]] = static_cast<int>(i);
    result = transport_structure(c, d_domain, inverse);
  } else {
    // Lexicographically first collapsible pair d1 < d2.
    int d1 = -1, d2 = -1;
    for (std::size_t i = 0; i < pi.size() && d1 < 0; ++i)
      for (std::size_t j = i + 1; j < pi.size(); ++j)
        if (pi[i] == pi[j]) {
          d1 = static_cast<int>(i);
          d2 = static_cast<int>(j);
          break;
        }
    std::vector<std::string> d_prime;
    std::vector<int> q;
    for (std::size_t i = 0; i < d_domain.size(); ++i) {
      if (static_cast<int>(i) == d2) continue;
      d_prime.push_back(d_domain[i]);
      q.push_back(pi[i]);
    }
    RelStructure prev = superposition_structure(k, c, d_prime, q);
    // Sections of the collapse: keep d1, or exchange it for d2.
    auto old_pos = [&](int p) { return p < d2 ? p : p + 1; };
    std::vector<int> s(d_prime.size()), s2(d_prime.size());
    for (std::size_t p = 0; p < d_prime.size(); ++p) {
      s[p] = old_pos(static_cast<int>(p));
      s2[p] = old_pos(static_cast<int>(p)) == d1 ? d2 : old_pos(static_cast<int>(p));
    }
    std::optional<RelStructure> found;
    for (const auto& cand : labeled_copies(k, d_domain))
      if (is_embedding(prev, cand, s) && is_embedding(prev, cand, s2)) {
        found = cand;
        break;
      }
    if (!found)
      fail(Errc::NoAmalgam, "no structure on " + std::to_string(d_domain.size()) +
                                " points embeds both sections; strong amalgamation fails here");
    result = *found;
  }

  // Certificate: every right inverse of π embeds C.
  std::vector<std::vector<int>> preimages(c.domain.size());
  for (std::size_t i = 0; i < pi.size(); ++i) preimages[pi[i]].push_back(static_cast<int>(i));
  std::vector<std::size_t> pick(c.domain.size(), 0);
  while (true) {
    std::vector<int> section(c.domain.size());
    for (std::size_t p = 0; p < c.domain.size(); ++p) section[p] = preimages[p][pick[p]];
    if (!is_embedding(c, result, section))
      fail(Errc::NoAmalgam, "a right inverse of the projection fails to embed the base structure");
    std::size_t pos = 0;
    while (pos < pick.size() && pick[pos] + 1 == preimages[pos].size()) pick[pos++] = 0;
    if (pos == pick.size()) break;
    ++pick[pos];
  }
  return result;
}

/// All σ∪τ-structures on canonical domains up to the bound whose σ-reduct
/// lies in kσ and τ-reduct in kτ, as isomorphism representatives.
inline TruncatedClass free_superposition(const TruncatedClass& ks, const TruncatedClass& kt, int bound) {
  for (const auto& sym : ks.sig.symbols)
    if (kt.sig.symbol_index(sym)) fail(Errc::SignatureOverlap, "symbol '" + sym + "' occurs in both signatures");
  Signature joint;
  joint.symbols = ks.sig.symbols;
  joint.arity = ks.sig.arity;
  joint.symbols.insert(joint.symbols.end(), kt.sig.symbols.begin(), kt.sig.symbols.end());
  joint.arity.insert(joint.arity.end(), kt.sig.arity.begin(), kt.sig.arity.end());

  bool empty_member = false;
  for (const auto& m : ks.members)
    if (m.domain.empty())
      for (const auto& m2 : kt.members)
        if (m2.domain.empty()) empty_member = true;

  std::vector<RelStructure> members;
  for (int n = empty_member ? 0 : 1; n <= bound; ++n) {
    std::vector<std::string> domain(n);
    for (int i = 0; i < n; ++i) domain[i] = std::to_string(i + 1);
    for (const auto& left : labeled_copies(ks, domain)) {
      for (const auto& right : labeled_copies(kt, domain)) {
        RelStructure joined;
        joined.sig = joint;
        joined.domain = domain;
        joined.relations = left.relations;
        joined.relations.insert(joined.relations.end(), right.relations.begin(), right.relations.end());
        bool fresh = true;
        for (const auto& seen : members)
          if (isomorphic(joined, seen)) {
            fresh = false;
            break;
          }
        if (fresh) members.push_back(std::move(joined));
      }
    }
  }
  return make_class(joint, std::move(members));
}

struct BlowupResult {
  FinCategory cat;
  StructuresCategory base;
  FunctorData projection; // cat -> base.cat
  std::vector<std::size_t> object_base;            // base member index per object
  std::vector<std::vector<std::size_t>> object_fibers; // fiber member indices per object
  std::vector<std::vector<int>> arrow_f;               // base embedding per arrow
  std::vector<std::vector<std::vector<int>>> arrow_gs; // per-point fiber embeddings per arrow
};

/// Direct blowup: objects are base members with one fiber member attached
/// per point, arrows are embeddings with a pointwise fiber embedding over
/// the source points.
inline BlowupResult blowup(const TruncatedClass& ks, const TruncatedClass& kt, int max_base_size = -1) {
  BlowupResult out;
  out.base = structures_category(ks);
  if (max_base_size < 0) max_base_size = ks.max_size;

  RawCategory raw;
  RawFunctor raw_proj;
  std::map<std::pair<std::size_t, std::vector<std::size_t>>, ObjId> obj_index;
  for (std::size_t ci = 0; ci < ks.members.size(); ++ci) {
    if (static_cast<int>(ks.members[ci].domain.size()) > max_base_size) continue;
    const std::size_t points = ks.members[ci].domain.size();
    std::vector<std::size_t> tuple(points, 0);
    while (true) {
      std::string name = "(" + ks.names[ci] + "|";
      for (std::size_t p = 0; p < points; ++p) {
        if (p) name += ",";
        name += kt.names[tuple[p]];
      }
      name += ")";
      obj_index[{ci, tuple}] = static_cast<ObjId>(raw.objects.size());
      out.object_base.push_back(ci);
      out.object_fibers.push_back(tuple);
      raw.objects.push_back(name);
      raw_proj.objects[name] = ks.names[ci];
      std::size_t pos = 0;
      while (pos < points && tuple[pos] + 1 == kt.members.size()) tuple[pos++] = 0;
      if (pos == points) break;
      ++tuple[pos];
    }
  }

  struct ArrowKey {
    ObjId src, tgt;
    std::vector<int> f;
    std::vector<std::vector<int>> gs;
    bool operator<(const ArrowKey& other) const {
      return std::tie(src, tgt, f, gs) < std::tie(other.src, other.tgt, other.f, other.gs);
    }
  };
  std::map<ArrowKey, ArrId> arr_index;
  for (ObjId o1 = 0; o1 < static_cast<ObjId>(raw.objects.size()); ++o1) {
    const auto& c1 = ks.members[out.object_base[o1]];
    for (ObjId o2 = 0; o2 < static_cast<ObjId>(raw.objects.size()); ++o2) {
      const auto& c2 = ks.members[out.object_base[o2]];
      for (const auto& f : enumerate_embeddings(c1, c2)) {
        // Pointwise fiber choices.
        std::vector<std::vector<std::vector<int>>> options(c1.domain.size());
        bool possible = true;
        for (std::size_t p = 0; p < c1.domain.size() && possible; ++p) {
          options[p] = enumerate_embeddings(kt.members[out.object_fibers[o1][p]],
                                            kt.members[out.object_fibers[o2][f[p]]]);
          if (options[p].empty()) possible = false;
        }
        if (!possible) continue;
        std::vector<std::size_t> pick(c1.domain.size(), 0);
        while (true) {
          std::vector<std::vector<int>> gs(c1.domain.size());
          for (std::size_t p = 0; p < c1.domain.size(); ++p) gs[p] = options[p][pick[p]];
          ArrId id = static_cast<ArrId>(raw.arrows.size());
          std::string name = "e" + std::to_string(id);
          arr_index[{o1, o2, f, gs}] = id;
          out.arrow_f.push_back(f);
          out.arrow_gs.push_back(gs);
          raw.arrows.push_back({name, raw.objects[o1], raw.objects[o2]});
          raw_proj.arrows[name] =
              out.base.cat.arrow_name(*out.base.find_arrow(static_cast<ObjId>(out.object_base[o1]),
                                                           static_cast<ObjId>(out.object_base[o2]), f));
          std::size_t pos = 0;
          while (pos < pick.size() && pick[pos] + 1 == options[pos].size()) pick[pos++] = 0;
          if (pos == pick.size()) break;
          ++pick[pos];
        }
      }
    }
  }

  for (const auto& [key, id] : arr_index) {
    if (key.src != key.tgt) continue;
    bool is_id = true;
    for (std::size_t i = 0; i < key.f.size(); ++i)
      if (key.f[i] != static_cast<int>(i)) is_id = false;
    for (const auto& g : key.gs)
      for (std::size_t i = 0; i < g.size(); ++i)
        if (g[i] != static_cast<int>(i)) is_id = false;
    if (is_id) raw.identities[raw.objects[key.src]] = raw.arrows[id].id;
  }

  for (const auto& [k1, a1] : arr_index) {
    for (const auto& [k2, a2] : arr_index) {
      if (k2.src != k1.tgt) continue;
      // (f2,(g2))∘(f1,(g1)) = (f2∘f1, (g2_{f1(p)}∘g1_p))
      std::vector<int> f(k1.f.size());
      for (std::size_t i = 0; i < k1.f.size(); ++i) f[i] = k2.f[k1.f[i]];
      std::vector<std::vector<int>> gs(k1.gs.size());
      for (std::size_t p = 0; p < k1.gs.size(); ++p) {
        const auto& g2 = k2.gs[k1.f[p]];
        gs[p].resize(k1.gs[p].size());
        for (std::size_t i = 0; i < k1.gs[p].size(); ++i) gs[p][i] = g2[k1.gs[p][i]];
      }
      raw.compose.push_back(
          {raw.arrows[a2].id, raw.arrows[a1].id, raw.arrows[arr_index.at({k1.src, k2.tgt, f, gs})].id});
    }
  }

  out.cat = validate_category(raw);
  out.projection = validate_functor(out.cat, out.base.cat, raw_proj);
  return out;
}

/// k-fold power of a category. Object tuples are mixed-radix encoded with
/// the first component most significant; arrows likewise.
inline FinCategory power_category(const FinCategory& cat, int k) {
  RawCategory raw;
  const std::size_t n_obj = cat.object_count(), n_arr = cat.arrow_count();
  auto obj_tuple_name = [&](const std::vector<int>& t) {
    std::string name = "[";
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) name += ",";
      name += cat.object_name(t[i]);
    }
    return name + "]";
  };
  auto arr_tuple_name = [&](const std::vector<int>& t) {
    std::string name = "[";
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) name += ",";
      name += cat.arrow_name(t[i]);
    }
    return name + "]";
  };
  auto each_tuple = [&](std::size_t radix, std::size_t size, auto&& visit) {
    std::vector<int> t(size, 0);
    while (true) {
      visit(t);
      std::size_t pos = size;
      while (pos > 0 && t[pos - 1] + 1 == static_cast<int>(radix)) t[--pos] = 0;
      if (pos == 0) break;
      ++t[pos - 1];
    }
  };
  each_tuple(n_obj, k, [&](const std::vector<int>& t) { raw.objects.push_back(obj_tuple_name(t)); });
  each_tuple(n_arr, k, [&](const std::vector<int>& t) {
    std::string src = "[", tgt = "[";
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) {
        src += ",";
        tgt += ",";
      }
      src += cat.object_name(cat.source(t[i]));
      tgt += cat.object_name(cat.target(t[i]));
    }
    raw.arrows.push_back({arr_tuple_name(t), src + "]", tgt + "]"});
  });
  each_tuple(n_obj, k, [&](const std::vector<int>& t) {
    std::vector<int> ids(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) ids[i] = cat.identity(t[i]);
    raw.identities[obj_tuple_name(t)] = arr_tuple_name(ids);
  });
  each_tuple(n_arr, k, [&](const std::vector<int>& g) {
    each_tuple(n_arr, k, [&](const std::vector<int>& f) {
      std::vector<int> comp(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (!cat.composable(g[i], f[i])) return;
        comp[i] = cat.compose(g[i], f[i]);
      }
      raw.compose.push_back({arr_tuple_name(g), arr_tuple_name(f), arr_tuple_name(comp)});
    });
  });
  return validate_category(raw);
}

inline int mixed_radix_encode(const std::vector<int>& digits, int radix) {
  int value = 0;
  for (int d : digits) value = value * radix + d;
  return value;
}

/// The Cat-valued functor whose category of elements matches the blowup:
/// fibers are powers of the fiber-class category, transitions pad with the
/// empty structure (which must be a member of kt).
inline CatValuedFunctor blowup_catvalued(const TruncatedClass& ks, const TruncatedClass& kt,
                                         const StructuresCategory& base_sc, const StructuresCategory& fiber_sc) {
  std::optional<std::size_t> empty_member;
  for (std::size_t i = 0; i < kt.members.size(); ++i)
    if (kt.members[i].domain.empty()) empty_member = i;
  if (!empty_member) fail(Errc::BadInput, "the fiber class must contain the empty structure for padding");

  CatValuedFunctor s;
  s.base = base_sc.cat;
  s.fiber.resize(ks.members.size());
  s.transition.resize(base_sc.cat.arrow_count());
  for (std::size_t ci = 0; ci < ks.members.size(); ++ci)
    s.fiber[ci] = power_category(fiber_sc.cat, static_cast<int>(ks.members[ci].domain.size()));

  const int n_obj = static_cast<int>(fiber_sc.cat.object_count());
  const int n_arr = static_cast<int>(fiber_sc.cat.arrow_count());
  const ArrId empty_id = fiber_sc.cat.identity(static_cast<ObjId>(*empty_member));
  for (ArrId f = 0; f < static_cast<ArrId>(base_sc.cat.arrow_count()); ++f) {
    const auto& map = base_sc.emb[f];
    const std::size_t k_src = ks.members[base_sc.cat.source(f)].domain.size();
    const std::size_t k_tgt = ks.members[base_sc.cat.target(f)].domain.size();
    FunctorData t;
    t.obj_map.resize(s.fiber[base_sc.cat.source(f)].object_count());
    t.arr_map.resize(s.fiber[base_sc.cat.source(f)].arrow_count());
    std::vector<int> digits(k_src);
    for (std::size_t code = 0; code < t.obj_map.size(); ++code) {
      std::size_t rest = code;
      for (std::size_t i = k_src; i-- > 0;) {
        digits[i] = static_cast<int>(rest % n_obj);
        rest /= n_obj;
      }
      std::vector<int> padded(k_tgt, static_cast<int>(*empty_member));
      for (std::size_t i = 0; i < k_src; ++i) padded[map[i]] = digits[i];
      t.obj_map[code] = mixed_radix_encode(padded, n_obj);
    }
    std::vector<int> arr_digits(k_src);
    for (std::size_t code = 0; code < t.arr_map.size(); ++code) {
      std::size_t rest = code;
      for (std::size_t i = k_src; i-- > 0;) {
        arr_digits[i] = static_cast<int>(rest % n_arr);
        rest /= n_arr;
      }
      std::vector<int> padded(k_tgt, empty_id);
      for (std::size_t i = 0; i < k_src; ++i) padded[map[i]] = arr_digits[i];
      t.arr_map[code] = mixed_radix_encode(padded, n_arr);
    }
    s.transition[f] = std::move(t);
  }
  validate_catvalued(s);
  return s;
}

struct SuperpositionDiagram {
  FinCategory base;     // full subcategory of the product on the pairs within bound
  SetDiagram diagram;
  std::vector<std::vector<RelStructure>> carriers; // parallel to the diagram carriers
};

/// Carrier at (C,D): all superposed structures on C×D whose reducts lie in
/// the classes and for which every section of either projection is an
/// embedding of the corresponding factor; actions are induced substructures
/// along pairs of embeddings. The base is the product of the two structure
/// categories restricted to pairs with |C|·|D| ≤ max_product; the classes
/// must cover that size.
inline SuperpositionDiagram superposition_diagram(const TruncatedClass& ks, const TruncatedClass& kt,
                                                  int max_product) {
  if (max_product > ks.max_size || max_product > kt.max_size)
    fail(Errc::BoundTooSmall, "classes only contain structures up to " +
                                  std::to_string(std::min(ks.max_size, kt.max_size)) +
                                  " points, bound " + std::to_string(max_product) + " requested");
  StructuresCategory sc_s = structures_category(ks);
  StructuresCategory sc_t = structures_category(kt);
  FinCategory full = product(sc_s.cat, sc_t.cat);
  const std::size_t nt = sc_t.cat.object_count();
  std::vector<ObjId> kept;
  for (ObjId o = 0; o < static_cast<ObjId>(full.object_count()); ++o) {
    const std::size_t ci = o / nt, di = o % nt;
    if (static_cast<int>(ks.members[ci].domain.size() * kt.members[di].domain.size()) <= max_product)
      kept.push_back(o);
  }
  SuperpositionDiagram out;
  out.base = full_subcategory(full, kept);

  RawDiagram raw;
  out.carriers.resize(out.base.object_count());
  std::vector<std::pair<std::size_t, std::size_t>> pair_of(out.base.object_count());
  for (ObjId o = 0; o < static_cast<ObjId>(out.base.object_count()); ++o) {
    ObjId full_idx = *full.object_index(out.base.object_name(o));
    const std::size_t ci = full_idx / nt, di = full_idx % nt;
    pair_of[o] = {ci, di};
    const auto& cm = ks.members[ci];
    const auto& dm = kt.members[di];
    std::vector<std::string> domain;
    for (const auto& ce : cm.domain)
      for (const auto& de : dm.domain) domain.push_back("(" + ce + "," + de + ")");
    const std::size_t cols = dm.domain.size();
    std::vector<std::string> labels;
    for (const auto& left : labeled_copies(ks, domain)) {
      for (const auto& right : labeled_copies(kt, domain)) {
        // Both section conditions on the joined structure.
        bool good = true;
        if (!cm.domain.empty() && !dm.domain.empty()) {
          std::vector<std::size_t> pick(cm.domain.size(), 0);
          while (good) {
            std::vector<int> sec(cm.domain.size());
            for (std::size_t p = 0; p < cm.domain.size(); ++p)
              sec[p] = static_cast<int>(p * cols + pick[p]);
            if (!is_embedding(cm, left, sec)) good = false;
            std::size_t pos = 0;
            while (pos < pick.size() && pick[pos] + 1 == cols) pick[pos++] = 0;
            if (pos == pick.size()) break;
            ++pick[pos];
          }
          std::vector<std::size_t> pick2(dm.domain.size(), 0);
          while (good) {
            std::vector<int> sec(dm.domain.size());
            for (std::size_t p = 0; p < dm.domain.size(); ++p)
              sec[p] = static_cast<int>(pick2[p] * cols + p);
            if (!is_embedding(dm, right, sec)) good = false;
            std::size_t pos = 0;
            while (pos < pick2.size() && pick2[pos] + 1 == cm.domain.size()) pick2[pos++] = 0;
            if (pos == pick2.size()) break;
            ++pick2[pos];
          }
        }
        if (!good) continue;
        RelStructure joined;
        joined.sig = left.sig;
        joined.sig.symbols.insert(joined.sig.symbols.end(), right.sig.symbols.begin(), right.sig.symbols.end());
        joined.sig.arity.insert(joined.sig.arity.end(), right.sig.arity.begin(), right.sig.arity.end());
        joined.domain = domain;
        joined.relations = left.relations;
        joined.relations.insert(joined.relations.end(), right.relations.begin(), right.relations.end());
        labels.push_back(serialize_structure(joined));
        out.carriers[o].push_back(std::move(joined));
      }
    }
    raw.sets[out.base.object_name(o)] = std::move(labels);
  }

  for (ArrId arrow = 0; arrow < static_cast<ArrId>(out.base.arrow_count()); ++arrow) {
    // Decode into the two embeddings through the full product's layout.
    ArrId full_idx = *full.arrow_index(out.base.arrow_name(arrow));
    const std::size_t na = sc_t.cat.arrow_count();
    const ArrId fa = static_cast<ArrId>(full_idx / na), ga = static_cast<ArrId>(full_idx % na);
    const auto& f = sc_s.emb[fa];
    const auto& g = sc_t.emb[ga];
    ObjId src = out.base.source(arrow), tgt = out.base.target(arrow);
    const std::size_t cols_src = kt.members[pair_of[src].second].domain.size();
    const std::size_t cols_tgt = kt.members[pair_of[tgt].second].domain.size();
    // Pull back along f×g.
    std::vector<int> positions(ks.members[pair_of[src].first].domain.size() * cols_src);
    for (std::size_t cp = 0; cp < ks.members[pair_of[src].first].domain.size(); ++cp)
      for (std::size_t dp = 0; dp < cols_src; ++dp)
        positions[cp * cols_src + dp] = static_cast<int>(f[cp] * cols_tgt + g[dp]);
    std::map<std::string, std::string> action;
    for (const auto& big : out.carriers[tgt])
      action[serialize_structure(big)] = serialize_structure(induced_substructure(big, positions));
    raw.maps[out.base.arrow_name(arrow)] = std::move(action);
  }
  out.diagram = validate_diagram(out.base, raw);
  return out;
}

/// The concrete relational presentation of an abstract expansion over a
/// structures category: one new symbol per total object, interpreted by the
/// projected arrow maps.
inline std::vector<RelStructure> concretize_expansion(const Expansion& pi, const TruncatedClass& base_class) {
  Signature sig;
  sig.symbols = base_class.sig.symbols;
  sig.arity = base_class.sig.arity;
  for (ObjId e = 0; e < static_cast<ObjId>(pi.total.object_count()); ++e) {
    sig.symbols.push_back(pi.total.object_name(e));
    sig.arity.push_back(
        static_cast<int>(base_class.members[pi.proj.obj_map[e]].domain.size()));
  }
  StructuresCategory sc = structures_category(base_class);
  std::vector<RelStructure> out;
  for (ObjId e = 0; e < static_cast<ObjId>(pi.total.object_count()); ++e) {
    const auto& base_member = base_class.members[pi.proj.obj_map[e]];
    RelStructure s;
    s.sig = sig;
    s.domain = base_member.domain;
    s.relations = base_member.relations;
    s.relations.resize(sig.symbols.size());
    for (ObjId e2 = 0; e2 < static_cast<ObjId>(pi.total.object_count()); ++e2) {
      std::vector<std::vector<int>>& rel = s.relations[base_class.sig.symbols.size() + e2];
      for (ArrId gg : pi.total.hom(e2, e)) rel.push_back(sc.emb[pi.proj.arr_map[gg]]);
      std::sort(rel.begin(), rel.end());
      rel.erase(std::unique(rel.begin(), rel.end()), rel.end());
    }
    out.push_back(std::move(s));
  }
  return out;
}

// ---- Canonical class builders used across the test corpus and the CLI ----

inline Signature order_signature() { return Signature{{"<"}, {2}}; }
inline Signature edge_signature() { return Signature{{"E"}, {2}}; }

inline RelStructure empty_structure(const Signature& sig) {
  return make_structure(sig, {}, std::vector<std::vector<std::vector<int>>>(sig.symbols.size()));
}

/// Linear orders [1] … [n], one increasing representative per size.
inline TruncatedClass linear_orders_class(int n, bool include_empty = false) {
  Signature sig = order_signature();
  std::vector<RelStructure> members;
  std::vector<std::string> names;
  if (include_empty) {
    members.push_back(empty_structure(sig));
    names.push_back("[0]");
  }
  for (int k = 1; k <= n; ++k) {
    std::vector<std::string> domain(k);
    for (int i = 0; i < k; ++i) domain[i] = std::to_string(i + 1);
    std::vector<std::vector<int>> rel;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) rel.push_back({i, j});
    members.push_back(make_structure(sig, domain, {rel}));
    names.push_back("[" + std::to_string(k) + "]");
  }
  return make_class(sig, members, names);
}

/// Every linear order on {1..k} for k ≤ n (so fibers over bare sets are
/// complete); named by their ascending sequences.
inline TruncatedClass all_orders_class(int n) {
  Signature sig = order_signature();
  std::vector<RelStructure> members;
  std::vector<std::string> names;
  for (int k = 1; k <= n; ++k) {
    std::vector<std::string> domain(k);
    for (int i = 0; i < k; ++i) domain[i] = std::to_string(i + 1);
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      // perm[r] = position holding rank r; tuple (i,j) iff rank(i) < rank(j).
      std::vector<int> rank(k);
      for (int r = 0; r < k; ++r) rank[perm[r]] = r;
      std::vector<std::vector<int>> rel;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          if (i != j && rank[i] < rank[j]) rel.push_back({i, j});
      members.push_back(make_structure(sig, domain, {rel}));
      std::string name;
      for (int r = 0; r < k; ++r) {
        if (r) name += "<";
        name += domain[perm[r]];
      }
      names.push_back(name);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return make_class(sig, members, names);
}

/// Bare sets [1] … [n] (empty signature); the category of sets and
/// injections when fed to structures_category.
inline TruncatedClass sets_class(int n, bool include_empty = false) {
  Signature sig; // no symbols
  std::vector<RelStructure> members;
  std::vector<std::string> names;
  if (include_empty) {
    members.push_back(empty_structure(sig));
    names.push_back("[0]");
  }
  for (int k = 1; k <= n; ++k) {
    std::vector<std::string> domain(k);
    for (int i = 0; i < k; ++i) domain[i] = std::to_string(i + 1);
    members.push_back(make_structure(sig, domain, {}));
    names.push_back("[" + std::to_string(k) + "]");
  }
  return make_class(sig, members, names);
}

/// All graphs (symmetric irreflexive edge) on canonical domains up to n.
inline TruncatedClass graphs_class(int n) {
  Signature sig = edge_signature();
  std::vector<RelStructure> members;
  std::vector<std::string> names;
  for (int k = 1; k <= n; ++k) {
    std::vector<std::string> domain(k);
    for (int i = 0; i < k; ++i) domain[i] = std::to_string(i + 1);
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) slots.emplace_back(i, j);
    for (int mask = 0; mask < (1 << slots.size()); ++mask) {
      std::vector<std::vector<int>> rel;
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (mask & (1 << s)) {
          rel.push_back({slots[s].first, slots[s].second});
          rel.push_back({slots[s].second, slots[s].first});
        }
      members.push_back(make_structure(sig, domain, {rel}));
      names.push_back("g" + std::to_string(k) + "_" + std::to_string(mask));
    }
  }
  return make_class(sig, members, names);
}

/// All ordered graphs (graph plus linear order) on canonical domains up to n.
inline TruncatedClass ordered_graphs_class(int n) {
  Signature sig{{"E", "<"}, {2, 2}};
  std::vector<RelStructure> members;
  std::vector<std::string> names;
  TruncatedClass orders = all_orders_class(n);
  TruncatedClass graphs = graphs_class(n);
  int counter = 0;
  for (int k = 1; k <= n; ++k) {
    std::vector<std::string> domain(k);
    for (int i = 0; i < k; ++i) domain[i] = std::to_string(i + 1);
    for (const auto& g : labeled_copies(graphs, domain))
      for (const auto& o : labeled_copies(orders, domain)) {
        members.push_back(make_structure(sig, domain, {g.relations[0], o.relations[0]}));
        names.push_back("og" + std::to_string(counter++));
      }
  }
  return make_class(sig, members, names);
}

/// Matchings: graphs of maximum degree one, one representative per
/// isomorphism type up to n points. Fails strong amalgamation.
inline TruncatedClass matchings_class(int n) {
  Signature sig = edge_signature();
  std::vector<RelStructure> members;
  std::vector<std::string> names;
  for (int k = 1; k <= n; ++k) {
    std::vector<std::string> domain(k);
    for (int i = 0; i < k; ++i) domain[i] = std::to_string(i + 1);
    for (int edges = 0; 2 * edges <= k; ++edges) {
      std::vector<std::vector<int>> rel;
      for (int e = 0; e < edges; ++e) {
        rel.push_back({2 * e, 2 * e + 1});
        rel.push_back({2 * e + 1, 2 * e});
      }
      members.push_back(make_structure(sig, domain, {rel}));
      names.push_back("m" + std::to_string(k) + "_" + std::to_string(edges));
    }
  }
  return make_class(sig, members, names);
}

} // namespace konig
