#ifndef ROLEC_DEDUCTION_HPP
#define ROLEC_DEDUCTION_HPP

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "rolec/rewrite.hpp"
#include "rolec/term.hpp"

namespace rolec {

/// Saturated deducible-subterm set of a positive strand, with one recipe
/// per element. Recipes are contexts over the strand positions; applying
/// a recipe to the source strand yields its element modulo E.
struct KnowledgeBase {
  PositiveStrand source;        // normal forms of the strand messages
  std::vector<Term> sat;        // insertion order (drives determinism)
  std::map<Term, Context> recipes;
  std::size_t bound = 0;

  bool contains(const Term& t) const { return recipes.count(t) > 0; }
};

/// Default stand-in for the theory constant c_E: contexts as large as
/// the largest rule left-hand side can always fire.
inline std::size_t default_bound(const DeductionSystem& d) {
  std::size_t b = 1;
  for (const RewriteRule& r : d.rules) b = std::max(b, dag_size(r.lhs));
  return b;
}

namespace detail {

/// One way of matching a rule left-hand side against known terms: the
/// public top part becomes a recipe skeleton, the frontier subterms are
/// matched against saturation elements.
struct Frontier {
  Context skeleton;            // holes 1..k, left to right
  std::vector<Term> patterns;  // rule subterm expected at each hole
};

/// Enumerates frontiers of `lhs`: every way to cut the left-hand side
/// into a public skeleton over holes plus matched subterms. The trivial
/// whole-term cut is skipped; a normal form never matches a redex.
inline std::vector<Frontier> rule_frontiers(const RewriteRule& rule,
                                            const Signature& sig) {
  std::vector<Frontier> out;
  if (!rule.lhs.is_fun()) return out;
  const Symbol* root = sig.find(rule.lhs.name);
  if (root == nullptr || !root->is_public) return out;  // top not buildable

  // Walk children left to right; each subtree either becomes a hole or
  // stays in the skeleton (public function nodes only).
  struct State {
    std::vector<Term> patterns;
  };
  std::function<void(const Term&, State&, std::vector<Term>&)> expand_children;
  std::function<void(const Term&, State&, const std::function<void(Term)>&)>
      expand;
  expand = [&](const Term& node, State& st,
               const std::function<void(Term)>& k) {
    // Choice 1: cut here.
    {
      st.patterns.push_back(node);
      k(Term::hole(static_cast<int>(st.patterns.size())));
      st.patterns.pop_back();
    }
    // Choice 2: keep this node in the skeleton.
    if (!node.is_fun()) return;
    const Symbol* sym = sig.find(node.name);
    if (sym == nullptr || !sym->is_public) return;
    std::function<void(std::size_t, std::vector<Term>&)> rec =
        [&](std::size_t i, std::vector<Term>& acc) {
          if (i == node.args.size()) {
            k(Term::fun(node.name, acc));
            return;
          }
          expand(node.args[i], st, [&](Term child) {
            acc.push_back(std::move(child));
            rec(i + 1, acc);
            acc.pop_back();
          });
        };
    std::vector<Term> acc;
    rec(0, acc);
  };

  State st;
  std::function<void(std::size_t, std::vector<Term>&)> root_rec =
      [&](std::size_t i, std::vector<Term>& acc) {
        if (i == rule.lhs.args.size()) {
          out.push_back(Frontier{Term::fun(rule.lhs.name, acc), st.patterns});
          return;
        }
        expand(rule.lhs.args[i], st, [&](Term child) {
          acc.push_back(std::move(child));
          root_rec(i + 1, acc);
          acc.pop_back();
        });
      };
  std::vector<Term> acc;
  root_rec(0, acc);
  std::sort(out.begin(), out.end(), [](const Frontier& a, const Frontier& b) {
    std::size_t sa = tree_size(a.skeleton), sb = tree_size(b.skeleton);
    if (sa != sb) return sa < sb;
    return a.skeleton < b.skeleton;
  });
  return out;
}

/// Runs fn for every assignment of saturation elements to the frontier
/// slots that matches the patterns under one consistent substitution.
inline void for_each_filling(
    const Frontier& f, const std::vector<Term>& sat,
    const std::function<void(const Substitution&, const std::vector<const Term*>&)>&
        fn) {
  std::vector<const Term*> chosen(f.patterns.size(), nullptr);
  Substitution sigma;
  std::function<void(std::size_t, Substitution&)> rec = [&](std::size_t i,
                                                            Substitution& sg) {
    if (i == f.patterns.size()) {
      fn(sg, chosen);
      return;
    }
    for (const Term& n : sat) {
      Substitution next = sg;
      if (!match(f.patterns[i], n, next)) continue;
      chosen[i] = &n;
      rec(i + 1, next);
    }
  };
  rec(0, sigma);
}

inline Context plug(const Context& skeleton,
                    const std::vector<const Term*>& fillings,
                    const std::map<Term, Context>& recipes) {
  if (skeleton.is_hole())
    return recipes.at(*fillings[static_cast<std::size_t>(skeleton.index) - 1]);
  if (!skeleton.is_fun()) return skeleton;
  Context r = skeleton;
  for (Context& a : r.args) a = plug(a, fillings, recipes);
  return r;
}

}  // namespace detail

/// Fixpoint of the three saturation rules over normalized messages:
/// strand members with projection recipes, public compositions that are
/// subterms of the strand, and results of rule applications over known
/// terms. Terminates because everything added lives in the finite set
/// st(s) extended with the ground rule right-hand sides.
inline KnowledgeBase saturate(const PositiveStrand& s,
                              const DeductionSystem& d,
                              std::size_t bound = 0) {
  KnowledgeBase kb;
  kb.bound = bound == 0 ? default_bound(d) : bound;
  for (const Term& m : s) kb.source.push_back(normalize(m, d));

  std::set<Term> universe;
  for (const Term& m : kb.source) collect_subterms(m, universe);
  for (const RewriteRule& r : d.rules)
    if (is_ground(r.rhs)) universe.insert(r.rhs);

  auto add = [&](const Term& t, Context recipe) {
    if (kb.contains(t)) return false;
    kb.sat.push_back(t);
    kb.recipes.emplace(t, std::move(recipe));
    return true;
  };

  for (std::size_t i = 0; i < kb.source.size(); ++i)
    add(kb.source[i], Term::hole(static_cast<int>(i) + 1));

  struct RuleCut {
    detail::Frontier shape;
    Term rhs;
  };
  std::vector<RuleCut> cuts;
  for (const RewriteRule& r : d.rules)
    for (detail::Frontier& f : detail::rule_frontiers(r, d.sig)) {
      if (dag_size(f.skeleton) > kb.bound) continue;
      cuts.push_back({std::move(f), r.rhs});
    }

  bool changed = true;
  while (changed) {
    changed = false;
    // Compositions: f(N_1,...,N_k) already a subterm of the strand.
    for (const Term& u : universe) {
      if (!u.is_fun() || kb.contains(u)) continue;
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
      if (add(u, normalize(Term::fun(u.name, std::move(parts)), d)))
        changed = true;
    }
    // Rule applications over known terms. The element list is frozen per
    // pass; new elements take part in the next round.
    const std::vector<Term> frozen = kb.sat;
    for (const RuleCut& cut : cuts) {
      detail::for_each_filling(
          cut.shape, frozen,
          [&](const Substitution& sigma, const std::vector<const Term*>& ns) {
            Term value = normalize(apply_substitution(cut.rhs, sigma), d);
            if (!universe.count(value) || kb.contains(value)) return;
            Context recipe =
                normalize(detail::plug(cut.shape.skeleton, ns, kb.recipes), d);
            if (add(value, std::move(recipe))) changed = true;
          });
    }
  }
  return kb;
}

/// Stored recipe for the normal form of m, if m is in the saturated set.
inline std::optional<Context> recipe_of(const KnowledgeBase& kb, const Term& m,
                                        const DeductionSystem& d) {
  auto it = kb.recipes.find(normalize(m, d));
  if (it == kb.recipes.end()) return std::nullopt;
  return it->second;
}

namespace detail {

inline std::optional<Context> compose(const Term& t, const KnowledgeBase& kb,
                                      const DeductionSystem& d) {
  if (auto it = kb.recipes.find(t); it != kb.recipes.end()) return it->second;
  if (!t.is_fun()) return std::nullopt;
  const Symbol* sym = d.sig.find(t.name);
  if (sym == nullptr || !sym->is_public) return std::nullopt;
  std::vector<Term> parts;
  parts.reserve(t.args.size());
  for (const Term& a : t.args) {
    auto c = compose(a, kb, d);
    if (!c) return std::nullopt;
    parts.push_back(std::move(*c));
  }
  return Term::fun(t.name, std::move(parts));
}

}  // namespace detail

/// Reachability A_D: a context C with C.s =_E t, or nullopt. Looks the
/// normal form up in the saturated set, else builds it top-down through
/// public symbols.
inline std::optional<Context> reach(const PositiveStrand& s, const Term& t,
                                    const DeductionSystem& d,
                                    std::size_t bound = 0) {
  KnowledgeBase kb = saturate(s, d, bound);
  return detail::compose(normalize(t, d), kb, d);
}

/// Reuses an existing saturation (compilation calls this once per step).
inline std::optional<Context> reach(const KnowledgeBase& kb, const Term& t,
                                    const DeductionSystem& d) {
  return detail::compose(normalize(t, d), kb, d);
}

}  // namespace rolec

#endif  // ROLEC_DEDUCTION_HPP
