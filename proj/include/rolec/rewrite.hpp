#ifndef ROLEC_REWRITE_HPP
#define ROLEC_REWRITE_HPP

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rolec/parse.hpp"
#include "rolec/term.hpp"
#include "rolec/xor_algebra.hpp"

namespace rolec {

struct RewriteRule {
  Term lhs, rhs;
};

inline std::string to_string(const RewriteRule& r) {
  return to_string(r.lhs) + " -> " + to_string(r.rhs);
}

/// The equational-theory kind decides which equality and reachability
/// machinery applies. Convergent handles subterm-convergent rule sets by
/// rewriting; Xor is the AC theory {xor,0} handled by linear algebra.
enum class TheoryKind { Convergent, Xor };

/// The triple (E, F, F_p): equations as oriented convergent rules, a
/// signature, and its public subset (carried per symbol).
struct DeductionSystem {
  std::string name;
  Signature sig;
  std::vector<RewriteRule> rules;
  TheoryKind kind = TheoryKind::Convergent;
};

// ---------------------------------------------------------------------------
// Matching and syntactic unification (needed for critical pairs).

inline bool match(const Term& pattern, const Term& t, Substitution& sigma) {
  if (pattern.is_var()) {
    auto it = sigma.find(pattern.name);
    if (it != sigma.end()) return it->second == t;
    sigma[pattern.name] = t;
    return true;
  }
  if (pattern.kind != t.kind) return false;
  if (pattern.is_hole()) return pattern.index == t.index;
  if (pattern.name != t.name || pattern.args.size() != t.args.size())
    return false;
  for (std::size_t i = 0; i < pattern.args.size(); ++i)
    if (!match(pattern.args[i], t.args[i], sigma)) return false;
  return true;
}

namespace detail {

inline bool occurs(const std::string& v, const Term& t) {
  if (t.is_var()) return t.name == v;
  for (const Term& a : t.args)
    if (occurs(v, a)) return true;
  return false;
}

inline bool unify_step(Term a, Term b, Substitution& sigma) {
  a = apply_substitution(a, sigma);
  b = apply_substitution(b, sigma);
  if (a == b) return true;
  if (a.is_var()) {
    if (occurs(a.name, b)) return false;
    Substitution bind{{a.name, b}};
    for (auto& [v, t] : sigma) t = apply_substitution(t, bind);
    sigma[a.name] = b;
    return true;
  }
  if (b.is_var()) return unify_step(b, a, sigma);
  if (!a.is_fun() || !b.is_fun() || a.name != b.name ||
      a.args.size() != b.args.size())
    return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!unify_step(a.args[i], b.args[i], sigma)) return false;
  return true;
}

}  // namespace detail

inline std::optional<Substitution> unify(const Term& a, const Term& b) {
  Substitution sigma;
  if (!detail::unify_step(a, b, sigma)) return std::nullopt;
  return sigma;
}

// ---------------------------------------------------------------------------
// Normalization.

namespace detail {

constexpr std::size_t kRewriteStepLimit = 1u << 20;

struct RewriteBudget {
  std::size_t steps = 0;
  void tick() {
    if (++steps > kRewriteStepLimit)
      throw std::runtime_error("rewrite step limit exceeded (non-terminating rule set?)");
  }
};

inline Term normalize_convergent(const Term& t, const DeductionSystem& d,
                                 RewriteBudget& budget) {
  Term cur = t;
  if (cur.is_fun())
    for (Term& a : cur.args) a = normalize_convergent(a, d, budget);
  for (;;) {
    bool fired = false;
    for (const RewriteRule& r : d.rules) {
      Substitution sigma;
      if (match(r.lhs, cur, sigma)) {
        budget.tick();
        // Bound terms are normal, but the rule's right side may stack
        // them under fresh redexes; renormalize along that spine.
        cur = normalize_convergent(apply_substitution(r.rhs, sigma), d, budget);
        fired = true;
        break;
      }
    }
    if (!fired) return cur;
  }
}

}  // namespace detail

/// Unique normal form under innermost rewriting. Holes and rule variables
/// are treated as opaque atoms, so contexts normalize too.
inline Term normalize(const Term& t, const DeductionSystem& d) {
  if (d.kind == TheoryKind::Xor) return xor_normalize(t);
  detail::RewriteBudget budget;
  return detail::normalize_convergent(t, d, budget);
}

/// s =_E t, decided by comparing normal forms.
inline bool equal_mod(const Term& t, const Term& u, const DeductionSystem& d) {
  if (t == u) return true;
  return normalize(t, d) == normalize(u, d);
}

// ---------------------------------------------------------------------------
// Subterm-convergence validation.

struct ValidationEntry {
  bool ok = true;
  std::string subject;
  std::string detail;
};

struct ValidationReport {
  bool accepted = true;
  std::vector<ValidationEntry> entries;

  void add(bool ok, std::string subject, std::string detail_msg) {
    accepted = accepted && ok;
    entries.push_back({ok, std::move(subject), std::move(detail_msg)});
  }
  std::string to_string() const {
    std::ostringstream out;
    for (const ValidationEntry& e : entries)
      out << (e.ok ? "  ok   " : "  FAIL ") << e.subject << ": " << e.detail
          << "\n";
    out << (accepted ? "accepted" : "rejected") << "\n";
    return out.str();
  }
};

namespace detail {

inline bool is_proper_subterm(const Term& sub, const Term& super) {
  for (const Term& a : super.args) {
    if (a == sub || is_proper_subterm(sub, a)) return true;
  }
  return false;
}

inline void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) out.insert(t.name);
  for (const Term& a : t.args) collect_vars(a, out);
}

inline bool has_redex(const Term& t, const std::vector<RewriteRule>& rules) {
  for (const RewriteRule& r : rules) {
    Substitution sigma;
    if (match(r.lhs, t, sigma)) return true;
  }
  for (const Term& a : t.args)
    if (has_redex(a, rules)) return true;
  return false;
}

inline Term rename_vars(const Term& t, const std::string& suffix) {
  if (t.is_var()) return Term::var(t.name + suffix);
  Term r = t;
  for (Term& a : r.args) a = rename_vars(a, suffix);
  return r;
}

inline Term replace_at(const Term& t, const std::vector<int>& path,
                       std::size_t depth, const Term& repl) {
  if (depth == path.size()) return repl;
  Term r = t;
  r.args[static_cast<std::size_t>(path[depth])] =
      replace_at(t.args[static_cast<std::size_t>(path[depth])], path, depth + 1,
                 repl);
  return r;
}

inline void nonvar_positions(const Term& t, std::vector<int>& path,
                             std::vector<std::vector<int>>& out) {
  if (t.is_var()) return;
  out.push_back(path);
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    path.push_back(static_cast<int>(i));
    nonvar_positions(t.args[i], path, out);
    path.pop_back();
  }
}

inline const Term& subterm_at(const Term& t, const std::vector<int>& path) {
  const Term* cur = &t;
  for (int i : path) cur = &cur->args[static_cast<std::size_t>(i)];
  return *cur;
}

}  // namespace detail

/// Checks the Definition-of-subterm-theory admissibility of every rule
/// (right side a proper subterm of the left, or a ground normal form)
/// and joinability of all critical pairs. Failures are report entries,
/// never exceptions.
inline ValidationReport validate_subterm_convergent(const DeductionSystem& d) {
  ValidationReport report;
  if (d.kind == TheoryKind::Xor) {
    report.add(false, "theory " + d.name,
               "xor theory is not a subterm-convergent rule set");
    return report;
  }
  bool admissible = true;
  for (const RewriteRule& r : d.rules) {
    std::string subject = "rule " + to_string(r);
    if (r.lhs.is_var() || !r.lhs.is_fun()) {
      report.add(false, subject, "left side must be a non-variable term");
      admissible = false;
      continue;
    }
    std::set<std::string> lv, rv;
    detail::collect_vars(r.lhs, lv);
    detail::collect_vars(r.rhs, rv);
    bool vars_ok = std::includes(lv.begin(), lv.end(), rv.begin(), rv.end());
    if (!vars_ok) {
      report.add(false, subject, "right side introduces fresh variables");
      admissible = false;
      continue;
    }
    if (detail::is_proper_subterm(r.rhs, r.lhs)) {
      report.add(true, subject, "right side is a proper subterm");
    } else if (is_ground(r.rhs)) {
      if (detail::has_redex(r.rhs, d.rules)) {
        report.add(false, subject, "ground right side is not a normal form");
        admissible = false;
      } else {
        report.add(true, subject, "right side is a ground normal form");
      }
    } else {
      report.add(false, subject,
                 "right side is neither a proper subterm nor ground");
      admissible = false;
    }
  }
  if (!admissible) return report;  // rewriting may diverge; stop here

  // Critical pairs: overlap each rule into every non-variable position of
  // every rule (itself included, at non-root positions only).
  std::size_t checked = 0, unjoinable = 0;
  for (std::size_t i = 0; i < d.rules.size(); ++i) {
    Term li = detail::rename_vars(d.rules[i].lhs, "#1");
    Term ri = detail::rename_vars(d.rules[i].rhs, "#1");
    for (std::size_t j = 0; j < d.rules.size(); ++j) {
      const Term lj = detail::rename_vars(d.rules[j].lhs, "#2");
      const Term rj = detail::rename_vars(d.rules[j].rhs, "#2");
      std::vector<std::vector<int>> positions;
      std::vector<int> path;
      detail::nonvar_positions(lj, path, positions);
      for (const auto& pos : positions) {
        if (i == j && pos.empty()) continue;
        auto sigma = unify(li, detail::subterm_at(lj, pos));
        if (!sigma) continue;
        ++checked;
        Term peak_left = apply_substitution(rj, *sigma);
        Term peak_right = apply_substitution(
            detail::replace_at(lj, pos, 0, ri), *sigma);
        if (!equal_mod(peak_left, peak_right, d)) {
          ++unjoinable;
          report.add(false,
                     "critical pair of rules " + std::to_string(i + 1) +
                         " and " + std::to_string(j + 1),
                     to_string(peak_left) + " vs " + to_string(peak_right));
        }
      }
    }
  }
  report.add(unjoinable == 0, "critical pairs",
             std::to_string(checked) + " overlap(s) checked, " +
                 std::to_string(unjoinable) + " unjoinable");
  return report;
}

// ---------------------------------------------------------------------------
// Theory files and built-ins.
//
// Line-oriented format:
//   theory <name>
//   vars X Y ...
//   public f/2 c/0 ...
//   private inv/1 ...
//   rule <lhs> -> <rhs>
//   end

struct TheoryError : std::runtime_error {
  int line;
  TheoryError(const std::string& what, int line_no)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what),
        line(line_no) {}
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline void declare_from_spec(Signature& sig, const std::string& spec,
                              bool pub, int line_no) {
  auto slash = spec.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 >= spec.size())
    throw TheoryError("expected name/arity, got " + spec, line_no);
  std::string name = spec.substr(0, slash);
  int arity = 0;
  try {
    arity = std::stoi(spec.substr(slash + 1));
  } catch (const std::exception&) {
    throw TheoryError("bad arity in " + spec, line_no);
  }
  if (arity < 0) throw TheoryError("negative arity in " + spec, line_no);
  try {
    sig.declare(name, arity, pub);
  } catch (const std::invalid_argument& e) {
    throw TheoryError(e.what(), line_no);
  }
}

}  // namespace detail

inline DeductionSystem parse_theory(const std::string& text) {
  DeductionSystem d;
  std::set<std::string> vars;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool saw_theory = false, saw_end = false;
  std::vector<std::pair<std::string, int>> pending_rules;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::vector<std::string> toks = detail::split_ws(line);
    if (toks.empty()) continue;
    if (saw_end) throw TheoryError("content after end", line_no);
    const std::string& kw = toks[0];
    if (kw == "theory") {
      if (toks.size() != 2) throw TheoryError("theory expects a name", line_no);
      d.name = toks[1];
      saw_theory = true;
    } else if (kw == "vars") {
      vars.insert(toks.begin() + 1, toks.end());
    } else if (kw == "public" || kw == "private") {
      for (std::size_t i = 1; i < toks.size(); ++i)
        detail::declare_from_spec(d.sig, toks[i], kw == "public", line_no);
    } else if (kw == "rule") {
      std::string rest = line.substr(line.find("rule") + 4);
      pending_rules.emplace_back(rest, line_no);
    } else if (kw == "end") {
      saw_end = true;
    } else {
      throw TheoryError("unknown directive " + kw, line_no);
    }
  }
  if (!saw_theory) throw TheoryError("missing theory line", line_no);
  if (!saw_end) throw TheoryError("missing end line", line_no);
  for (const auto& [body, rule_line] : pending_rules) {
    auto arrow = body.find("->");
    if (arrow == std::string::npos)
      throw TheoryError("rule expects lhs -> rhs", rule_line);
    try {
      Term lhs = parse_pattern(body.substr(0, arrow), d.sig, vars);
      Term rhs = parse_pattern(body.substr(arrow + 2), d.sig, vars);
      d.rules.push_back({std::move(lhs), std::move(rhs)});
    } catch (const ParseError& e) {
      throw TheoryError(e.what(), rule_line);
    }
  }
  if (d.name == "xor") d.kind = TheoryKind::Xor;
  return d;
}

/// The narration encoding symbols of the role extractor; appended to any
/// convergent theory that does not already declare them.
inline void append_message_symbols(DeductionSystem& d) {
  if (d.kind != TheoryKind::Convergent) return;
  if (d.sig.declares("msg")) return;
  d.sig.declare("msg", 2, true);
  d.sig.declare("partner", 1, true);
  d.sig.declare("payload", 1, true);
  Term x = Term::var("X"), y = Term::var("Y");
  d.rules.push_back({Term::fun("partner", {Term::fun("msg", {x, y})}), x});
  d.rules.push_back({Term::fun("payload", {Term::fun("msg", {x, y})}), y});
}

/// Dolev-Yao public-key theory: pairing with projections, asymmetric
/// encryption with inverse-key decryption, the two testers, and the
/// msg/partner/payload encoding.
inline DeductionSystem builtin_dolev_yao() {
  DeductionSystem d;
  d.name = "dolev_yao";
  d.sig.declare("pair", 2, true);
  d.sig.declare("proj1", 1, true);
  d.sig.declare("proj2", 1, true);
  d.sig.declare("enc", 2, true);
  d.sig.declare("dec", 2, true);
  d.sig.declare("inv", 1, false);
  d.sig.declare("symtest", 2, true);
  d.sig.declare("pairtest", 1, true);
  d.sig.declare("true", 0, true);
  Term x = Term::var("X"), y = Term::var("Y");
  Term truec = Term::fun("true");
  d.rules.push_back({Term::fun("proj1", {Term::fun("pair", {x, y})}), x});
  d.rules.push_back({Term::fun("proj2", {Term::fun("pair", {x, y})}), y});
  d.rules.push_back(
      {Term::fun("dec", {Term::fun("enc", {x, y}), Term::fun("inv", {y})}), x});
  d.rules.push_back({Term::fun("symtest", {Term::fun("enc", {x, y}), y}), truec});
  d.rules.push_back({Term::fun("pairtest", {Term::fun("pair", {x, y})}), truec});
  append_message_symbols(d);
  return d;
}

/// Exclusive-or over free constants; reachability and bases are linear
/// algebra over GF(2), not rewriting.
inline DeductionSystem builtin_xor() {
  DeductionSystem d;
  d.name = "xor";
  d.kind = TheoryKind::Xor;
  d.sig.declare("xor", 2, true);
  d.sig.declare("0", 0, true);
  return d;
}

/// Named theory registry used by narration parsing and the CLI.
class TheoryStore {
 public:
  TheoryStore() {
    add(builtin_dolev_yao());
    add(builtin_xor());
  }
  void add(DeductionSystem d) { theories_[d.name] = std::move(d); }
  const DeductionSystem* find(const std::string& name) const {
    auto it = theories_.find(name);
    return it == theories_.end() ? nullptr : &it->second;
  }

 private:
  std::map<std::string, DeductionSystem> theories_;
};

}  // namespace rolec

#endif  // ROLEC_REWRITE_HPP
