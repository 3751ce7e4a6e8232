#ifndef ROLEC_ORACLE_HPP
#define ROLEC_ORACLE_HPP

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "rolec/basis.hpp"
#include "rolec/rewrite.hpp"
#include "rolec/term.hpp"

namespace rolec {

/// Budget for brute-force context enumeration; ground truth at desk
/// scale only.
struct EnumerationBudget {
  std::size_t max_dag_size = 4;
  std::size_t max_count = 200000;
};

namespace detail {

/// Streams every context over the given number of holes and the public
/// part of the signature, smallest trees first, lexicographic within a
/// size. Bodies are deduplicated modulo normalization (only normal-form
/// representatives are produced) and pruned by DAG size. The visitor
/// returns false to stop.
inline void for_each_context(std::size_t holes, const EnumerationBudget& budget,
                             const DeductionSystem& d,
                             const std::function<bool(const Context&)>& visit) {
  std::vector<std::string> constants, functions;
  for (const auto& [name, sym] : d.sig.symbols) {
    if (!sym.is_public) continue;
    (sym.arity == 0 ? constants : functions).push_back(name);
  }
  std::vector<std::vector<Context>> by_size(1);  // by_size[n]: kept, tree size n
  std::size_t produced = 0;
  // Arguments come from kept (normal) levels, so a candidate is normal
  // iff no rule fires at its root.
  auto root_redex = [&](const Context& c) {
    for (const RewriteRule& r : d.rules) {
      Substitution sigma;
      if (match(r.lhs, c, sigma)) return true;
    }
    return false;
  };
  auto emit = [&](Context c) -> bool {
    if (root_redex(c)) return true;  // a smaller representative exists
    if (dag_size(c) > budget.max_dag_size) return true;
    bool go = visit(c);
    by_size.back().push_back(std::move(c));
    ++produced;
    return go && produced < budget.max_count;
  };

  constexpr std::size_t kTreeCap = 4096;
  for (std::size_t n = 1; n <= kTreeCap && produced < budget.max_count; ++n) {
    by_size.emplace_back();
    if (n == 1) {
      for (std::size_t h = 1; h <= holes; ++h)
        if (!emit(Term::hole(static_cast<int>(h)))) return;
      for (const std::string& c : constants)
        if (!emit(Term::fun(c))) return;
      continue;
    }
    for (const std::string& f : functions) {
      int arity = d.sig.find(f)->arity;
      std::vector<Context> args;
      std::function<bool(std::size_t, std::size_t)> build =
          [&](std::size_t slot, std::size_t left) -> bool {
        if (slot == static_cast<std::size_t>(arity)) {
          return left == 0 ? emit(Term::fun(f, args)) : true;
        }
        std::size_t remaining = static_cast<std::size_t>(arity) - slot - 1;
        for (std::size_t sz = 1; sz + remaining <= left; ++sz) {
          if (sz >= by_size.size()) break;
          for (const Context& c : by_size[sz]) {
            args.push_back(c);
            bool go = build(slot + 1, left - sz);
            args.pop_back();
            if (!go) return false;
          }
        }
        return true;
      };
      if (!build(0, n - 1)) return;
    }
  }
}

}  // namespace detail

/// All contexts within the budget, in enumeration order.
inline std::vector<Context> enumerate_contexts(std::size_t holes,
                                               const EnumerationBudget& budget,
                                               const DeductionSystem& d) {
  std::vector<Context> out;
  detail::for_each_context(holes, budget, d, [&](const Context& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

/// First enumerated context that evaluates to t on s, else nullopt.
inline std::optional<Context> brute_reach(const PositiveStrand& s,
                                          const Term& t,
                                          const EnumerationBudget& budget,
                                          const DeductionSystem& d) {
  std::optional<Context> found;
  Term target = normalize(t, d);
  detail::for_each_context(s.size(), budget, d, [&](const Context& c) {
    if (normalize(instantiate_context(c, s), d) == target) {
      found = c;
      return false;
    }
    return true;
  });
  return found;
}

/// All non-reflexive context pairs within the budget whose sides agree
/// on s, canonically oriented. Candidates are bucketed by the normal
/// form of their evaluation, so the pass stays near-linear.
inline std::vector<ContextPair> brute_pairs(const PositiveStrand& s,
                                            const EnumerationBudget& budget,
                                            const DeductionSystem& d) {
  std::map<Term, std::vector<Context>> buckets;
  detail::for_each_context(s.size(), budget, d, [&](const Context& c) {
    buckets[normalize(instantiate_context(c, s), d)].push_back(c);
    return true;
  });
  std::set<ContextPair> pairs;
  for (const auto& [value, contexts] : buckets) {
    for (std::size_t i = 0; i < contexts.size(); ++i)
      for (std::size_t j = i + 1; j < contexts.size(); ++j)
        pairs.insert(detail::orient(contexts[i], contexts[j]));
  }
  return {pairs.begin(), pairs.end()};
}

}  // namespace rolec

#endif  // ROLEC_ORACLE_HPP
