#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "konig/category.hpp"
#include "konig/diagram.hpp"
#include "konig/error.hpp"
#include "konig/functor.hpp"
#include "konig/relstruct.hpp"
#include "konig/transfer.hpp"

namespace konig {

using nlohmann::json;

inline constexpr int kFormatVersion = 1;

inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string fnv1a_hex(std::string_view bytes) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a(bytes);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

namespace detail {

inline const json& need(const json& j, const char* key, const char* what) {
  auto it = j.find(key);
  if (it == j.end()) fail(Errc::BadInput, std::string(what) + " is missing the '" + key + "' field");
  return *it;
}

inline std::string need_string(const json& j, const char* what) {
  if (!j.is_string()) fail(Errc::BadInput, std::string(what) + " must be a string");
  return j.get<std::string>();
}

} // namespace detail

// ---- category ----

/// Parses the category payload. Identities absent from the description are
/// synthesized as id_<object>, and missing unit-law composition entries are
/// filled in for all declared identities.
inline RawCategory category_from_json(const json& payload) {
  RawCategory raw;
  for (const auto& o : detail::need(payload, "objects", "category payload"))
    raw.objects.push_back(detail::need_string(o, "object id"));
  for (const auto& a : detail::need(payload, "arrows", "category payload")) {
    raw.arrows.push_back({detail::need_string(detail::need(a, "id", "arrow"), "arrow id"),
                          detail::need_string(detail::need(a, "src", "arrow"), "arrow src"),
                          detail::need_string(detail::need(a, "tgt", "arrow"), "arrow tgt")});
  }
  std::set<std::string> arrow_ids;
  for (const auto& a : raw.arrows) arrow_ids.insert(a.id);
  if (payload.contains("identities")) {
    for (const auto& [obj, arr] : payload.at("identities").items())
      raw.identities[obj] = detail::need_string(arr, "identity arrow id");
  }
  for (const auto& obj : raw.objects) {
    if (raw.identities.count(obj)) continue;
    std::string id = "id_" + obj;
    raw.identities[obj] = id;
    if (!arrow_ids.count(id)) {
      raw.arrows.push_back({id, obj, obj});
      arrow_ids.insert(id);
    }
  }
  std::map<std::pair<std::string, std::string>, std::string> table;
  if (payload.contains("compose")) {
    for (const auto& entry : payload.at("compose")) {
      if (!entry.is_array() || entry.size() != 3)
        fail(Errc::BadInput, "compose entries must be [g, f, result] triples");
      std::string g = detail::need_string(entry[0], "compose g");
      std::string f = detail::need_string(entry[1], "compose f");
      std::string r = detail::need_string(entry[2], "compose result");
      auto [it, fresh] = table.emplace(std::make_pair(g, f), r);
      if (!fresh && it->second != r)
        fail(Errc::BadInput, "conflicting compose entries for (" + g + "," + f + ")");
    }
  }
  // Unit laws for declared identities, unless given explicitly.
  std::map<std::string, std::string> src_of, tgt_of;
  for (const auto& a : raw.arrows) {
    src_of[a.id] = a.src;
    tgt_of[a.id] = a.tgt;
  }
  for (const auto& a : raw.arrows) {
    auto s = raw.identities.find(a.src);
    auto t = raw.identities.find(a.tgt);
    if (s != raw.identities.end()) table.emplace(std::make_pair(a.id, s->second), a.id);
    if (t != raw.identities.end()) table.emplace(std::make_pair(t->second, a.id), a.id);
  }
  for (const auto& [pair, result] : table) raw.compose.push_back({pair.first, pair.second, result});
  return raw;
}

inline json category_to_json(const FinCategory& cat) {
  RawCategory raw = cat.to_raw();
  json payload;
  payload["objects"] = raw.objects;
  payload["arrows"] = json::array();
  for (const auto& a : raw.arrows) payload["arrows"].push_back({{"id", a.id}, {"src", a.src}, {"tgt", a.tgt}});
  payload["identities"] = json::object();
  for (const auto& [obj, arr] : raw.identities) payload["identities"][obj] = arr;
  payload["compose"] = json::array();
  for (const auto& c : raw.compose) payload["compose"].push_back({c.g, c.f, c.result});
  return payload;
}

// ---- diagram ----

inline RawDiagram diagram_raw_from_json(const json& payload) {
  RawDiagram raw;
  for (const auto& [obj, labels] : detail::need(payload, "sets", "diagram payload").items()) {
    std::vector<std::string> elems;
    for (const auto& label : labels) elems.push_back(detail::need_string(label, "carrier element"));
    raw.sets[obj] = std::move(elems);
  }
  if (payload.contains("maps")) {
    for (const auto& [arrow, mapping] : payload.at("maps").items()) {
      std::map<std::string, std::string> m;
      for (const auto& [from, to] : mapping.items()) m[from] = detail::need_string(to, "action value");
      raw.maps[arrow] = std::move(m);
    }
  }
  return raw;
}

inline json diagram_to_json(const FinCategory& cat, const SetDiagram& diag) {
  RawDiagram raw = to_raw(cat, diag);
  json payload;
  payload["category"] = category_to_json(cat);
  payload["sets"] = json::object();
  for (const auto& [obj, labels] : raw.sets) payload["sets"][obj] = labels;
  payload["maps"] = json::object();
  for (const auto& [arrow, m] : raw.maps) {
    json entry = json::object();
    for (const auto& [from, to] : m) entry[from] = to;
    payload["maps"][arrow] = entry;
  }
  return payload;
}

// ---- functor ----

inline RawFunctor functor_raw_from_json(const json& payload) {
  RawFunctor raw;
  for (const auto& [from, to] : detail::need(payload, "objects", "functor payload").items())
    raw.objects[from] = detail::need_string(to, "functor object image");
  for (const auto& [from, to] : detail::need(payload, "arrows", "functor payload").items())
    raw.arrows[from] = detail::need_string(to, "functor arrow image");
  return raw;
}

inline json functor_to_json(const FinCategory& src, const FinCategory& tgt, const FunctorData& f) {
  json payload;
  payload["source"] = category_to_json(src);
  payload["target"] = category_to_json(tgt);
  payload["objects"] = json::object();
  for (ObjId o = 0; o < static_cast<ObjId>(src.object_count()); ++o)
    payload["objects"][src.object_name(o)] = tgt.object_name(f.obj_map[o]);
  payload["arrows"] = json::object();
  for (ArrId a = 0; a < static_cast<ArrId>(src.arrow_count()); ++a)
    payload["arrows"][src.arrow_name(a)] = tgt.arrow_name(f.arr_map[a]);
  return payload;
}

// ---- structure classes ----

inline TruncatedClass structclass_from_json(const json& payload) {
  Signature sig;
  for (const auto& [symbol, arity] : detail::need(payload, "signature", "structure class payload").items()) {
    sig.symbols.push_back(symbol);
    if (!arity.is_number_integer()) fail(Errc::BadInput, "arity of '" + symbol + "' must be an integer");
    sig.arity.push_back(arity.get<int>());
  }
  std::vector<RelStructure> members;
  std::vector<std::string> names;
  for (const auto& entry : detail::need(payload, "structures", "structure class payload")) {
    std::vector<std::string> domain;
    for (const auto& e : detail::need(entry, "domain", "structure")) domain.push_back(detail::need_string(e, "domain element"));
    std::map<std::string, int> pos;
    for (std::size_t i = 0; i < domain.size(); ++i) pos[domain[i]] = static_cast<int>(i);
    std::vector<std::vector<std::vector<int>>> relations(sig.symbols.size());
    if (entry.contains("relations")) {
      for (const auto& [symbol, tuples] : entry.at("relations").items()) {
        auto idx = sig.symbol_index(symbol);
        if (!idx) fail(Errc::BadInput, "relation for undeclared symbol '" + symbol + "'");
        for (const auto& tuple : tuples) {
          std::vector<int> t;
          for (const auto& v : tuple) {
            std::string label = detail::need_string(v, "tuple entry");
            auto p = pos.find(label);
            if (p == pos.end()) fail(Errc::BadInput, "tuple entry '" + label + "' outside the domain");
            t.push_back(p->second);
          }
          relations[*idx].push_back(std::move(t));
        }
      }
    }
    members.push_back(make_structure(sig, domain, relations));
    if (entry.contains("name")) names.push_back(detail::need_string(entry.at("name"), "structure name"));
  }
  if (!names.empty() && names.size() != members.size())
    fail(Errc::BadInput, "either name every structure or none");
  return make_class(sig, members, names);
}

inline json structclass_to_json(const TruncatedClass& k) {
  json payload;
  payload["signature"] = json::object();
  for (std::size_t i = 0; i < k.sig.symbols.size(); ++i) payload["signature"][k.sig.symbols[i]] = k.sig.arity[i];
  payload["structures"] = json::array();
  for (std::size_t m = 0; m < k.members.size(); ++m) {
    json entry;
    entry["name"] = k.names[m];
    entry["domain"] = k.members[m].domain;
    entry["relations"] = json::object();
    for (std::size_t r = 0; r < k.sig.symbols.size(); ++r) {
      json tuples = json::array();
      for (const auto& t : k.members[m].relations[r]) {
        json tuple = json::array();
        for (int v : t) tuple.push_back(k.members[m].domain[v]);
        tuples.push_back(tuple);
      }
      entry["relations"][k.sig.symbols[r]] = tuples;
    }
    payload["structures"].push_back(entry);
  }
  return payload;
}

// ---- workspace files ----

struct WorkspaceFile {
  std::string kind;
  json payload;
  std::filesystem::path origin; // directory for resolving nested paths
};

inline json wrap_payload(const std::string& kind, json payload) {
  return json{{"format_version", kFormatVersion}, {"kind", kind}, {"payload", std::move(payload)}};
}

inline WorkspaceFile load_workspace_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::BadInput, "cannot open '" + path.string() + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& err) {
    fail(Errc::BadInput, "parse error in '" + path.string() + "': " + err.what());
  }
  const auto& version = detail::need(doc, "format_version", "workspace file");
  if (!version.is_number_integer() || version.get<int>() != kFormatVersion)
    fail(Errc::BadInput, "unsupported format_version in '" + path.string() + "'");
  WorkspaceFile file;
  file.kind = detail::need_string(detail::need(doc, "kind", "workspace file"), "kind");
  file.payload = detail::need(doc, "payload", "workspace file");
  file.origin = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  return file;
}

/// A category payload may be inline or a path to a category workspace file,
/// resolved relative to the referencing file.
inline FinCategory resolve_category(const json& ref, const std::filesystem::path& origin) {
  if (ref.is_string()) {
    std::filesystem::path p = ref.get<std::string>();
    if (p.is_relative()) p = origin / p;
    WorkspaceFile file = load_workspace_file(p);
    if (file.kind != "category") fail(Errc::BadInput, "'" + p.string() + "' is not a category file");
    return validate_category(category_from_json(file.payload));
  }
  return validate_category(category_from_json(ref));
}

inline CatValuedFunctor catvalued_from_json(const json& payload, const std::filesystem::path& origin) {
  CatValuedFunctor s;
  s.base = resolve_category(detail::need(payload, "base", "cat-valued payload"), origin);
  s.fiber.resize(s.base.object_count());
  std::vector<char> have_fiber(s.base.object_count(), 0);
  for (const auto& [obj, fib] : detail::need(payload, "fibers", "cat-valued payload").items()) {
    auto o = s.base.object_index(obj);
    if (!o) fail(Errc::UnknownReference, "fiber declared for unknown base object '" + obj + "'");
    s.fiber[*o] = resolve_category(fib, origin);
    have_fiber[*o] = 1;
  }
  for (ObjId o = 0; o < static_cast<ObjId>(s.base.object_count()); ++o)
    if (!have_fiber[o]) fail(Errc::BadInput, "no fiber for base object '" + s.base.object_name(o) + "'");
  s.transition.resize(s.base.arrow_count());
  std::vector<char> have_transition(s.base.arrow_count(), 0);
  if (payload.contains("transitions")) {
    for (const auto& [arr, fun] : payload.at("transitions").items()) {
      auto a = s.base.arrow_index(arr);
      if (!a) fail(Errc::UnknownReference, "transition declared for unknown base arrow '" + arr + "'");
      s.transition[*a] = validate_functor(s.fiber[s.base.source(*a)], s.fiber[s.base.target(*a)],
                                          functor_raw_from_json(fun));
      have_transition[*a] = 1;
    }
  }
  for (ArrId a = 0; a < static_cast<ArrId>(s.base.arrow_count()); ++a) {
    if (have_transition[a]) continue;
    if (!s.base.is_identity(a))
      fail(Errc::BadInput, "no transition for base arrow '" + s.base.arrow_name(a) + "'");
    s.transition[a] = identity_functor(s.fiber[s.base.source(a)]);
  }
  validate_catvalued(s);
  return s;
}

inline json catvalued_to_json(const CatValuedFunctor& s) {
  json payload;
  payload["base"] = category_to_json(s.base);
  payload["fibers"] = json::object();
  for (ObjId o = 0; o < static_cast<ObjId>(s.base.object_count()); ++o)
    payload["fibers"][s.base.object_name(o)] = category_to_json(s.fiber[o]);
  payload["transitions"] = json::object();
  for (ArrId a = 0; a < static_cast<ArrId>(s.base.arrow_count()); ++a) {
    const FinCategory& src = s.fiber[s.base.source(a)];
    const FinCategory& tgt = s.fiber[s.base.target(a)];
    json fun;
    fun["objects"] = json::object();
    for (ObjId o = 0; o < static_cast<ObjId>(src.object_count()); ++o)
      fun["objects"][src.object_name(o)] = tgt.object_name(s.transition[a].obj_map[o]);
    fun["arrows"] = json::object();
    for (ArrId f = 0; f < static_cast<ArrId>(src.arrow_count()); ++f)
      fun["arrows"][src.arrow_name(f)] = tgt.arrow_name(s.transition[a].arr_map[f]);
    payload["transitions"][s.base.arrow_name(a)] = fun;
  }
  return payload;
}

} // namespace konig
