#ifndef ROLEC_TERM_HPP
#define ROLEC_TERM_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rolec {

/// First-order terms over a signature plus free constants.
///
/// Four node kinds share one representation:
///   Fun   - declared function symbol applied to args (arity may be 0)
///   Const - free constant: any identifier not declared in the signature
///   Var   - named rule variable (only inside rewrite rules)
///   Hole  - indexed position variable x_i / v_i of a context or frame
enum class TermKind : unsigned char { Fun, Const, Var, Hole };

struct Term {
  TermKind kind = TermKind::Const;
  std::string name;        // Fun / Const / Var
  int index = 0;           // Hole: 1-based strand position
  std::vector<Term> args;  // Fun only

  static Term fun(std::string n, std::vector<Term> a = {}) {
    Term t;
    t.kind = TermKind::Fun;
    t.name = std::move(n);
    t.args = std::move(a);
    return t;
  }
  static Term constant(std::string n) {
    Term t;
    t.kind = TermKind::Const;
    t.name = std::move(n);
    return t;
  }
  static Term var(std::string n) {
    Term t;
    t.kind = TermKind::Var;
    t.name = std::move(n);
    return t;
  }
  static Term hole(int i) {
    Term t;
    t.kind = TermKind::Hole;
    t.index = i;
    return t;
  }

  bool is_fun() const { return kind == TermKind::Fun; }
  bool is_const() const { return kind == TermKind::Const; }
  bool is_var() const { return kind == TermKind::Var; }
  bool is_hole() const { return kind == TermKind::Hole; }
};

/// Total structural order; drives every canonical ordering in the project.
/// Holes < free constants < variables < function applications, then by
/// index/name, then argument-wise.
inline int compare(const Term& a, const Term& b) {
  auto rank = [](TermKind k) {
    switch (k) {
      case TermKind::Hole: return 0;
      case TermKind::Const: return 1;
      case TermKind::Var: return 2;
      case TermKind::Fun: return 3;
    }
    return 4;
  };
  if (rank(a.kind) != rank(b.kind)) return rank(a.kind) < rank(b.kind) ? -1 : 1;
  if (a.kind == TermKind::Hole) {
    if (a.index != b.index) return a.index < b.index ? -1 : 1;
    return 0;
  }
  if (int c = a.name.compare(b.name); c != 0) return c < 0 ? -1 : 1;
  if (a.args.size() != b.args.size())
    return a.args.size() < b.args.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (int c = compare(a.args[i], b.args[i]); c != 0) return c;
  return 0;
}

inline bool operator==(const Term& a, const Term& b) { return compare(a, b) == 0; }
inline bool operator!=(const Term& a, const Term& b) { return compare(a, b) != 0; }
inline bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

inline std::size_t tree_size(const Term& t) {
  std::size_t n = 1;
  for (const Term& a : t.args) n += tree_size(a);
  return n;
}

inline void collect_subterms(const Term& t, std::set<Term>& out) {
  out.insert(t);
  for (const Term& a : t.args) collect_subterms(a, out);
}

/// t and all recursive arguments, deduplicated structurally.
inline std::set<Term> subterms(const Term& t) {
  std::set<Term> out;
  collect_subterms(t, out);
  return out;
}

/// Number of vertices in the DAG representation = distinct subterms.
inline std::size_t dag_size(const Term& t) { return subterms(t).size(); }

inline bool is_ground(const Term& t) {
  if (t.is_var() || t.is_hole()) return false;
  return std::all_of(t.args.begin(), t.args.end(),
                     [](const Term& a) { return is_ground(a); });
}

inline int max_hole_index(const Term& t) {
  int m = t.is_hole() ? t.index : 0;
  for (const Term& a : t.args) m = std::max(m, max_hole_index(a));
  return m;
}

inline void collect_constants(const Term& t, std::set<std::string>& out) {
  if (t.is_const()) out.insert(t.name);
  for (const Term& a : t.args) collect_constants(a, out);
}

/// Idempotent mapping from named rule variables to terms.
using Substitution = std::map<std::string, Term>;

inline bool is_idempotent(const Substitution& s) {
  for (const auto& [v, t] : s) {
    std::set<Term> sub = subterms(t);
    for (const auto& [w, _] : s)
      if (sub.count(Term::var(w))) return false;
  }
  return true;
}

/// Replaces every bound variable; unbound variables stay in place.
inline Term apply_substitution(const Term& t, const Substitution& s) {
  if (t.is_var()) {
    auto it = s.find(t.name);
    return it != s.end() ? it->second : t;
  }
  if (!t.is_fun()) return t;
  Term r = t;
  for (Term& a : r.args) a = apply_substitution(a, s);
  return r;
}

/// Strand step: sent ("!") or received ("?") ground message.
struct Step {
  bool send = false;
  Term message;
};

inline bool operator==(const Step& a, const Step& b) {
  return a.send == b.send && a.message == b.message;
}

struct Strand {
  std::vector<Step> steps;

  bool positive() const {
    return std::all_of(steps.begin(), steps.end(),
                       [](const Step& s) { return s.send; });
  }
};

/// Strand whose polarities are all "!"; doubles as a knowledge frame,
/// so it is just the message sequence.
using PositiveStrand = std::vector<Term>;

inline PositiveStrand positive_messages(const Strand& s) {
  PositiveStrand out;
  out.reserve(s.steps.size());
  for (const Step& st : s.steps) out.push_back(st.message);
  return out;
}

/// A context is a term over public symbols and holes; the alias keeps
/// signatures readable where a term is meant as a recipe.
using Context = Term;

/// C[x_1,...,x_n] applied to a positive strand: hole x_i becomes the
/// i-th message. Purely syntactic; no rewriting happens here.
inline Term instantiate_context(const Context& c, const PositiveStrand& s) {
  if (c.is_hole()) {
    if (c.index < 1 || static_cast<std::size_t>(c.index) > s.size())
      throw std::out_of_range("context hole x_" + std::to_string(c.index) +
                              " exceeds strand length " +
                              std::to_string(s.size()));
    return s[static_cast<std::size_t>(c.index) - 1];
  }
  if (!c.is_fun()) return c;
  Term r = c;
  for (Term& a : r.args) a = instantiate_context(a, s);
  return r;
}

/// Oriented pair of contexts over the same strand positions; the
/// currency of equality bases and unification systems.
struct ContextPair {
  Context left, right;
};

inline bool operator==(const ContextPair& a, const ContextPair& b) {
  return a.left == b.left && a.right == b.right;
}
inline bool operator<(const ContextPair& a, const ContextPair& b) {
  if (int c = compare(a.left, b.left); c != 0) return c < 0;
  return compare(a.right, b.right) < 0;
}

struct Symbol {
  std::string name;
  int arity = 0;
  bool is_public = true;
};

struct Signature {
  std::map<std::string, Symbol> symbols;

  void declare(const std::string& name, int arity, bool pub) {
    auto it = symbols.find(name);
    if (it != symbols.end()) {
      if (it->second.arity != arity)
        throw std::invalid_argument("symbol " + name + " redeclared with arity " +
                                    std::to_string(arity));
      return;
    }
    symbols[name] = Symbol{name, arity, pub};
  }
  const Symbol* find(const std::string& name) const {
    auto it = symbols.find(name);
    return it == symbols.end() ? nullptr : &it->second;
  }
  bool declares(const std::string& name) const { return find(name) != nullptr; }
};

/// True iff every symbol is public and no free constant occurs; nullary
/// leaves must be public declared constants or holes/variables.
inline bool is_context(const Term& t, const Signature& sig) {
  switch (t.kind) {
    case TermKind::Hole:
    case TermKind::Var:
      return true;
    case TermKind::Const:
      return false;
    case TermKind::Fun: {
      const Symbol* sym = sig.find(t.name);
      if (sym == nullptr || !sym->is_public) return false;
      return std::all_of(t.args.begin(), t.args.end(),
                         [&](const Term& a) { return is_context(a, sig); });
    }
  }
  return false;
}

enum class HoleStyle { Input, Frame };  // print holes as x_i or v_i

inline void print_term(const Term& t, std::string& out, HoleStyle style) {
  switch (t.kind) {
    case TermKind::Hole:
      out += style == HoleStyle::Input ? "x_" : "v_";
      out += std::to_string(t.index);
      return;
    case TermKind::Const:
    case TermKind::Var:
      out += t.name;
      return;
    case TermKind::Fun:
      out += t.name;
      if (!t.args.empty()) {
        out += '(';
        for (std::size_t i = 0; i < t.args.size(); ++i) {
          if (i) out += ',';
          print_term(t.args[i], out, style);
        }
        out += ')';
      }
      return;
  }
}

inline std::string to_string(const Term& t, HoleStyle style = HoleStyle::Input) {
  std::string out;
  print_term(t, out, style);
  return out;
}

inline std::string to_string(const Strand& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    if (i) out += ", ";
    out += s.steps[i].send ? '!' : '?';
    out += to_string(s.steps[i].message);
  }
  out += ')';
  return out;
}

}  // namespace rolec

#endif  // ROLEC_TERM_HPP
