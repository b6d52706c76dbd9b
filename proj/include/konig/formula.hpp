#pragma once

#include <string>
#include <vector>

#include "konig/error.hpp"
#include "konig/expansion.hpp"
#include "konig/relstruct.hpp"

namespace konig {

/// Quantifier-free formula tree with variables drawn from a fixed index
/// set {0..n-1}. Empty conjunction is true, empty disjunction false.
struct QFFormula {
  enum class Kind { atom, eq, neg, conj, disj };
  Kind kind = Kind::conj;
  int symbol = -1;               // atom: index into the signature
  std::vector<int> vars;         // atom arguments, or {x,y} for eq
  std::vector<QFFormula> children;

  static QFFormula atom(int symbol, std::vector<int> vars) {
    QFFormula f;
    f.kind = Kind::atom;
    f.symbol = symbol;
    f.vars = std::move(vars);
    return f;
  }
  static QFFormula eq(int x, int y) {
    QFFormula f;
    f.kind = Kind::eq;
    f.vars = {x, y};
    return f;
  }
  static QFFormula neg(QFFormula inner) {
    QFFormula f;
    f.kind = Kind::neg;
    f.children.push_back(std::move(inner));
    return f;
  }
  static QFFormula conj(std::vector<QFFormula> children) {
    QFFormula f;
    f.kind = Kind::conj;
    f.children = std::move(children);
    return f;
  }
  static QFFormula disj(std::vector<QFFormula> children) {
    QFFormula f;
    f.kind = Kind::disj;
    f.children = std::move(children);
    return f;
  }
};

/// Satisfaction of the formula in e under an assignment of domain positions
/// to the variables.
inline bool eval_formula(const QFFormula& phi, const RelStructure& e, const std::vector<int>& assignment) {
  switch (phi.kind) {
    case QFFormula::Kind::atom: {
      std::vector<int> tuple(phi.vars.size());
      for (std::size_t i = 0; i < phi.vars.size(); ++i) tuple[i] = assignment[phi.vars[i]];
      return e.has_tuple(phi.symbol, tuple);
    }
    case QFFormula::Kind::eq:
      return assignment[phi.vars[0]] == assignment[phi.vars[1]];
    case QFFormula::Kind::neg:
      return !eval_formula(phi.children[0], e, assignment);
    case QFFormula::Kind::conj:
      for (const auto& child : phi.children)
        if (!eval_formula(child, e, assignment)) return false;
      return true;
    case QFFormula::Kind::disj:
      for (const auto& child : phi.children)
        if (eval_formula(child, e, assignment)) return true;
      return false;
  }
  return false;
}

inline std::string formula_to_string(const QFFormula& phi, const Signature& sig) {
  auto var = [](int v) { return "x" + std::to_string(v); };
  switch (phi.kind) {
    case QFFormula::Kind::atom: {
      std::string out = sig.symbols[phi.symbol] + "(";
      for (std::size_t i = 0; i < phi.vars.size(); ++i) {
        if (i) out += ",";
        out += var(phi.vars[i]);
      }
      return out + ")";
    }
    case QFFormula::Kind::eq:
      return var(phi.vars[0]) + "=" + var(phi.vars[1]);
    case QFFormula::Kind::neg:
      return "!" + formula_to_string(phi.children[0], sig);
    case QFFormula::Kind::conj: {
      if (phi.children.empty()) return "true";
      std::string out = "(";
      for (std::size_t i = 0; i < phi.children.size(); ++i) {
        if (i) out += " & ";
        out += formula_to_string(phi.children[i], sig);
      }
      return out + ")";
    }
    case QFFormula::Kind::disj: {
      if (phi.children.empty()) return "false";
      std::string out = "(";
      for (std::size_t i = 0; i < phi.children.size(); ++i) {
        if (i) out += " | ";
        out += formula_to_string(phi.children[i], sig);
      }
      return out + ")";
    }
  }
  return "?";
}

/// The reduct projection between the two structure categories as a
/// validated expansion; requires every upper member's reduct to be a lower
/// member on the same domain.
inline Expansion reduct_expansion(const TruncatedClass& upper, const TruncatedClass& lower) {
  for (std::size_t r = 0; r < lower.sig.symbols.size(); ++r) {
    auto idx = upper.sig.symbol_index(lower.sig.symbols[r]);
    if (!idx || upper.sig.arity[*idx] != lower.sig.arity[r])
      fail(Errc::SignatureMismatch, "lower symbol '" + lower.sig.symbols[r] + "' missing from the upper signature");
  }
  StructuresCategory up = structures_category(upper);
  StructuresCategory low = structures_category(lower);
  RawFunctor raw;
  for (std::size_t e = 0; e < upper.members.size(); ++e) {
    RelStructure red = reduct(upper.members[e], lower.sig);
    std::optional<std::size_t> image;
    for (std::size_t c = 0; c < lower.members.size(); ++c)
      if (lower.members[c] == red) {
        image = c;
        break;
      }
    if (!image)
      fail(Errc::NotDomainPreserving,
           "reduct of member '" + upper.names[e] + "' is not a lower-class member on the same domain");
    raw.objects[upper.names[e]] = lower.names[*image];
  }
  for (ArrId a = 0; a < static_cast<ArrId>(up.cat.arrow_count()); ++a) {
    ObjId src = up.cat.source(a), tgt = up.cat.target(a);
    auto src_low = low.cat.object_index(raw.objects.at(up.cat.object_name(src)));
    auto tgt_low = low.cat.object_index(raw.objects.at(up.cat.object_name(tgt)));
    auto arrow = low.find_arrow(*src_low, *tgt_low, up.emb[a]);
    if (!arrow)
      fail(Errc::NotDomainPreserving, "embedding '" + up.cat.arrow_name(a) + "' has no reduct arrow");
    raw.arrows[up.cat.arrow_name(a)] = low.cat.arrow_name(*arrow);
  }
  FunctorData proj = validate_functor(up.cat, low.cat, raw);
  return as_expansion(up.cat, low.cat, proj);
}

struct ReductFormulas {
  Signature sigma; // lower signature
  std::vector<QFFormula> phi; // per lower symbol, variables = arity positions
};

/// Emits one quantifier-free formula per lower symbol that defines the
/// reduct relation inside every upper structure: a disjunction over upper
/// members and surjective tuples of the member-describing pattern formulas.
inline ReductFormulas define_reduct_formulas(const TruncatedClass& upper, const TruncatedClass& lower) {
  reduct_expansion(upper, lower); // validates the premises
  ReductFormulas out;
  out.sigma = lower.sig;
  for (std::size_t r = 0; r < lower.sig.symbols.size(); ++r) {
    const int arity = lower.sig.arity[r];
    std::vector<QFFormula> disjuncts;
    for (std::size_t mi = 0; mi < upper.members.size(); ++mi) {
      const RelStructure& e = upper.members[mi];
      if (static_cast<int>(e.domain.size()) > arity) continue; // surjective tuples need |E| ≤ arity
      RelStructure red = reduct(e, lower.sig);
      for (const auto& tuple : red.relations[r]) {
        // Surjectivity of ē onto the member's domain.
        std::vector<char> hit(e.domain.size(), 0);
        for (int v : tuple) hit[v] = 1;
        bool surjective = true;
        for (char h : hit)
          if (!h) surjective = false;
        if (!surjective) continue;
        // ι: domain position -> least variable index mapped onto it.
        std::vector<int> iota(e.domain.size(), -1);
        for (int i = arity - 1; i >= 0; --i) iota[tuple[i]] = i;
        std::vector<QFFormula> parts;
        // Equality pattern of ē over the variables.
        for (int i = 0; i < arity; ++i)
          for (int j = i + 1; j < arity; ++j)
            parts.push_back(tuple[i] == tuple[j] ? QFFormula::eq(i, j)
                                                 : QFFormula::neg(QFFormula::eq(i, j)));
        // Full atomic description of the member, variables via ι.
        for (std::size_t s = 0; s < upper.sig.symbols.size(); ++s) {
          const int k = upper.sig.arity[s];
          std::vector<int> t(k, 0);
          bool done = e.domain.empty() && k > 0;
          if (k == 0) continue;
          while (!done) {
            std::vector<int> vars(k);
            for (int i = 0; i < k; ++i) vars[i] = iota[t[i]];
            QFFormula atom = QFFormula::atom(static_cast<int>(s), vars);
            parts.push_back(e.has_tuple(static_cast<int>(s), t) ? atom : QFFormula::neg(atom));
            int pos = k - 1;
            while (pos >= 0 && t[pos] == static_cast<int>(e.domain.size()) - 1) t[pos--] = 0;
            if (pos < 0)
              done = true;
            else
              ++t[pos];
          }
        }
        disjuncts.push_back(QFFormula::conj(std::move(parts)));
      }
    }
    out.phi.push_back(QFFormula::disj(std::move(disjuncts)));
  }
  return out;
}

/// Exhaustive postcondition check: on every upper member and every tuple,
/// φ_R holds exactly on the reduct's relation.
inline bool verify_reduct_formulas(const TruncatedClass& upper, const TruncatedClass& lower,
                                   const ReductFormulas& formulas) {
  for (const auto& e : upper.members) {
    RelStructure red = reduct(e, lower.sig);
    for (std::size_t r = 0; r < lower.sig.symbols.size(); ++r) {
      const int arity = lower.sig.arity[r];
      std::vector<int> tuple(arity, 0);
      bool done = e.domain.empty() && arity > 0;
      if (arity == 0) continue;
      while (!done) {
        bool in_relation = red.has_tuple(static_cast<int>(r), tuple);
        if (in_relation != eval_formula(formulas.phi[r], e, tuple)) return false;
        int pos = arity - 1;
        while (pos >= 0 && tuple[pos] == static_cast<int>(e.domain.size()) - 1) tuple[pos--] = 0;
        if (pos < 0)
          done = true;
        else
          ++tuple[pos];
      }
    }
  }
  return true;
}

} // namespace konig
