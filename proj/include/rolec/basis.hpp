#ifndef ROLEC_BASIS_HPP
#define ROLEC_BASIS_HPP

#include <map>
#include <set>
#include <vector>

#include "rolec/deduction.hpp"
#include "rolec/rewrite.hpp"
#include "rolec/term.hpp"
#include "rolec/xor_algebra.hpp"

namespace rolec {

/// Conjunction of equations modulo E over strand/frame positions; the
/// representation coincides with a set of context pairs, only the display
/// differs (v_i instead of x_i).
using UnificationSystem = std::vector<ContextPair>;

namespace detail {

/// Orientation: structurally larger side first, ties broken by the term
/// order, so (proj1(dec(payload(x_8),x_6)), x_1) and (x_1, x_2) both come
/// out the way they read best.
inline ContextPair orient(Context a, Context b) {
  std::size_t sa = tree_size(a), sb = tree_size(b);
  if (sa < sb || (sa == sb && compare(b, a) < 0)) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

/// Every small way of deriving a value from the strand: projections,
/// stored recipes, public constants, compositions of known terms, and
/// one rule application over known terms. Equal values across distinct
/// derivations are exactly the observable equalities the basis needs.
inline std::map<Term, std::set<Context>> derivations(
    const KnowledgeBase& kb, const DeductionSystem& d) {
  std::map<Term, std::set<Context>> buckets;
  auto put = [&](const Term& value, Context c) {
    buckets[value].insert(std::move(c));
  };

  for (std::size_t i = 0; i < kb.source.size(); ++i)
    put(kb.source[i], Term::hole(static_cast<int>(i) + 1));
  for (const Term& n : kb.sat) put(n, kb.recipes.at(n));
  for (const auto& [name, sym] : d.sig.symbols)
    if (sym.is_public && sym.arity == 0)
      put(normalize(Term::fun(name), d), Term::fun(name));

  std::set<Term> universe;
  for (const Term& m : kb.source) collect_subterms(m, universe);
  for (const RewriteRule& r : d.rules)
    if (is_ground(r.rhs)) universe.insert(r.rhs);

  for (const Term& u : universe) {
    if (!u.is_fun()) continue;
    const Symbol* sym = d.sig.find(u.name);
    if (sym == nullptr || !sym->is_public) continue;
    bool all_known = true;
    for (const Term& a : u.args)
      if (!kb.contains(a)) {
        all_known = false;
        break;
      }
    if (!all_known) continue;
    std::vector<Term> parts;
    for (const Term& a : u.args) parts.push_back(kb.recipes.at(a));
    put(u, normalize(Term::fun(u.name, std::move(parts)), d));
  }

  for (const RewriteRule& r : d.rules) {
    for (const detail::Frontier& f : detail::rule_frontiers(r, d.sig)) {
      if (dag_size(f.skeleton) > kb.bound) continue;
      detail::for_each_filling(
          f, kb.sat,
          [&](const Substitution& sigma, const std::vector<const Term*>& ns) {
            Term value = normalize(apply_substitution(r.rhs, sigma), d);
            Context recipe =
                normalize(detail::plug(f.skeleton, ns, kb.recipes), d);
            put(value, std::move(recipe));
          });
    }
  }
  return buckets;
}

}  // namespace detail

/// Finite equality basis Eq(s): context pairs that generate every
/// observable equality of the strand. Computed by bucketing all bounded
/// derivations by their value and equating the members of each bucket.
/// Reflexive pairs are dropped; pairs are oriented and deduplicated.
inline std::vector<ContextPair> equality_basis(const PositiveStrand& s,
                                               const DeductionSystem& d,
                                               std::size_t bound = 0) {
  if (d.kind == TheoryKind::Xor) {
    std::vector<XorTerm> xs;
    xs.reserve(s.size());
    for (const Term& m : s) xs.push_back(to_xor(m));
    return xor_basis(xs);
  }
  KnowledgeBase kb = saturate(s, d, bound);
  std::set<ContextPair> pairs;
  for (const auto& [value, contexts] : detail::derivations(kb, d)) {
    for (auto it = contexts.begin(); it != contexts.end(); ++it) {
      auto jt = it;
      for (++jt; jt != contexts.end(); ++jt) {
        if (*it == *jt) continue;
        pairs.insert(detail::orient(*it, *jt));
      }
    }
  }
  return {pairs.begin(), pairs.end()};
}

/// The basis re-read as an E-unification system over frame variables
/// v_1..v_n (structurally the same pairs; positions are shared).
inline UnificationSystem unification_system_of(const PositiveStrand& s,
                                               const DeductionSystem& d,
                                               std::size_t bound = 0) {
  return equality_basis(s, d, bound);
}

/// True iff every basis pair also holds on the candidate strand; the
/// one-sided check of the refinement relation.
inline bool refines(const PositiveStrand& candidate,
                    const std::vector<ContextPair>& basis,
                    const DeductionSystem& d) {
  for (const ContextPair& p : basis) {
    int need = std::max(max_hole_index(p.left), max_hole_index(p.right));
    if (static_cast<std::size_t>(need) > candidate.size())
      throw std::out_of_range("basis pair needs " + std::to_string(need) +
                              " positions, candidate has " +
                              std::to_string(candidate.size()));
    if (!equal_mod(instantiate_context(p.left, candidate),
                   instantiate_context(p.right, candidate), d))
      return false;
  }
  return true;
}

inline std::string to_string(const ContextPair& p,
                             HoleStyle style = HoleStyle::Input) {
  return to_string(p.left, style) + " = " + to_string(p.right, style);
}

}  // namespace rolec

#endif  // ROLEC_BASIS_HPP
