#ifndef ROLEC_XOR_ALGEBRA_HPP
#define ROLEC_XOR_ALGEBRA_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rolec/term.hpp"

namespace rolec {

/// Exclusive-or payloads over free constants: a term in the signature
/// {xor/2, 0/0}. The canonical form keeps exactly the atoms of odd
/// multiplicity, so equality modulo AC + unit + cancellation is set
/// equality.
struct XorTerm {
  std::set<std::string> atoms;
};

inline bool operator==(const XorTerm& a, const XorTerm& b) {
  return a.atoms == b.atoms;
}

struct XorError : std::runtime_error {
  explicit XorError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void xor_atoms(const Term& t, std::set<std::string>& acc) {
  if (t.is_fun() && t.name == "xor" && t.args.size() == 2) {
    xor_atoms(t.args[0], acc);
    xor_atoms(t.args[1], acc);
    return;
  }
  if (t.is_fun() && t.name == "0" && t.args.empty()) return;
  if (t.is_const()) {
    auto [it, inserted] = acc.insert(t.name);
    if (!inserted) acc.erase(it);  // x (+) x = 0
    return;
  }
  throw XorError("term " + to_string(t) +
                 " is not built from xor, 0 and free constants");
}

}  // namespace detail

/// Flattens an {xor,0,constant} term and cancels duplicate atoms.
inline XorTerm to_xor(const Term& t) {
  XorTerm x;
  detail::xor_atoms(t, x.atoms);
  return x;
}

/// Canonical term image: atoms in ascending name order, right-nested;
/// the empty combination is the public constant 0.
inline Term from_xor(const XorTerm& x) {
  if (x.atoms.empty()) return Term::fun("0");
  auto it = x.atoms.rbegin();
  Term t = Term::constant(*it);
  for (++it; it != x.atoms.rend(); ++it)
    t = Term::fun("xor", {Term::constant(*it), std::move(t)});
  return t;
}

inline XorTerm xor_canonicalize(const XorTerm& t) { return t; }

/// Term-level canonical form under E_xor.
inline Term xor_normalize(const Term& t) { return from_xor(to_xor(t)); }

inline bool xor_equal(const Term& a, const Term& b) {
  return to_xor(a) == to_xor(b);
}

namespace detail {

/// Atom indexing shared by reachability and the nullspace basis. Columns
/// are strand messages; each column is the GF(2) coordinate vector of its
/// atoms, packed into one 64-bit word per column slice.
struct XorMatrix {
  std::vector<std::string> atom_names;  // row index -> atom
  std::vector<std::uint64_t> columns;   // column -> row bitmask

  static XorMatrix build(const std::vector<XorTerm>& messages,
                         const XorTerm* extra) {
    std::set<std::string> atom_set;
    for (const XorTerm& m : messages)
      atom_set.insert(m.atoms.begin(), m.atoms.end());
    if (extra) atom_set.insert(extra->atoms.begin(), extra->atoms.end());
    XorMatrix m;
    m.atom_names.assign(atom_set.begin(), atom_set.end());
    if (m.atom_names.size() > 64)
      throw XorError("more than 64 distinct xor atoms in one problem");
    for (const XorTerm& msg : messages) m.columns.push_back(m.encode(msg));
    return m;
  }

  std::uint64_t encode(const XorTerm& t) const {
    std::uint64_t bits = 0;
    for (const std::string& a : t.atoms) {
      auto it = std::lower_bound(atom_names.begin(), atom_names.end(), a);
      bits |= std::uint64_t{1} << (it - atom_names.begin());
    }
    return bits;
  }
};

/// Builds the xor-combination context over the selected strand positions.
inline Context combination_context(const std::vector<int>& positions) {
  if (positions.empty()) return Term::fun("0");
  Context c = Term::hole(positions.back());
  for (auto it = positions.rbegin() + 1; it != positions.rend(); ++it)
    c = Term::fun("xor", {Term::hole(*it), std::move(c)});
  return c;
}

}  // namespace detail

/// Solves sum c_i.[[M_i]] = [[t]] over GF(2) by elimination. Returns the
/// xor of the selected positions, the bare 0 context for the empty
/// combination, or nullopt when t lies outside the span.
inline std::optional<Context> xor_reach(const std::vector<XorTerm>& strand,
                                        const XorTerm& target) {
  detail::XorMatrix m = detail::XorMatrix::build(strand, &target);
  std::size_t rows = m.atom_names.size();
  std::size_t cols = strand.size();
  // Augmented rows: one bit per column plus the target bit.
  std::vector<std::uint64_t> row_bits(rows, 0);
  std::uint64_t tgt = m.encode(target);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c)
      if (m.columns[c] >> r & 1) row_bits[r] |= std::uint64_t{1} << c;
    if (tgt >> r & 1) row_bits[r] |= std::uint64_t{1} << cols;
  }
  std::vector<int> pivot_col(rows, -1);
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && !(row_bits[p] >> c & 1)) ++p;
    if (p == rows) continue;
    std::swap(row_bits[rank], row_bits[p]);
    for (std::size_t r = 0; r < rows; ++r)
      if (r != rank && (row_bits[r] >> c & 1)) row_bits[r] ^= row_bits[rank];
    pivot_col[rank] = static_cast<int>(c);
    ++rank;
  }
  for (std::size_t r = rank; r < rows; ++r)
    if (row_bits[r] >> cols & 1) return std::nullopt;  // inconsistent
  std::vector<int> positions;
  for (std::size_t r = 0; r < rank; ++r)
    if (row_bits[r] >> cols & 1) positions.push_back(pivot_col[r] + 1);
  std::sort(positions.begin(), positions.end());
  return detail::combination_context(positions);
}

/// Nullspace basis of the message matrix: one pair (xor of the support,
/// 0) per basis vector. Over GF(2) the paper's split into two positive
/// linear forms degenerates to a combination equated with 0.
inline std::vector<ContextPair> xor_basis(const std::vector<XorTerm>& strand) {
  detail::XorMatrix m = detail::XorMatrix::build(strand, nullptr);
  std::size_t rows = m.atom_names.size();
  std::size_t cols = strand.size();
  std::vector<std::uint64_t> row_bits(rows, 0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (m.columns[c] >> r & 1) row_bits[r] |= std::uint64_t{1} << c;
  // Row echelon over the columns; free columns generate the nullspace.
  std::vector<int> pivot_row_of_col(cols, -1);
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && !(row_bits[p] >> c & 1)) ++p;
    if (p == rows) continue;
    std::swap(row_bits[rank], row_bits[p]);
    for (std::size_t r = 0; r < rows; ++r)
      if (r != rank && (row_bits[r] >> c & 1)) row_bits[r] ^= row_bits[rank];
    pivot_row_of_col[c] = static_cast<int>(rank);
    ++rank;
  }
  std::vector<ContextPair> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (pivot_row_of_col[free] != -1) continue;
    std::vector<int> positions{static_cast<int>(free) + 1};
    for (std::size_t c = 0; c < free; ++c) {
      int pr = pivot_row_of_col[c];
      if (pr != -1 && (row_bits[static_cast<std::size_t>(pr)] >> free & 1))
        positions.push_back(static_cast<int>(c) + 1);
    }
    std::sort(positions.begin(), positions.end());
    basis.push_back({detail::combination_context(positions), Term::fun("0")});
  }
  return basis;
}

}  // namespace rolec

#endif  // ROLEC_XOR_ALGEBRA_HPP
