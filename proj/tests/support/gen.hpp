#ifndef ROLEC_TESTS_GEN_HPP
#define ROLEC_TESTS_GEN_HPP

// Deterministic random generators shared by the property tests and the
// acceptance suite.

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rolec/narration.hpp"
#include "rolec/rewrite.hpp"
#include "rolec/term.hpp"
#include "rolec/xor_algebra.hpp"

namespace rolec::gen {

using Rng = std::mt19937;

inline std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline bool chance(Rng& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

/// Random ground Dolev-Yao term over the given atom names. Depth-bounded;
/// leans on pair/enc so that terms look like protocol payloads.
inline Term dy_term(Rng& rng, const std::vector<std::string>& atoms,
                    int depth) {
  if (depth <= 0 || chance(rng, 0.35))
    return Term::constant(atoms[pick(rng, atoms.size())]);
  switch (pick(rng, 4)) {
    case 0:
      return Term::fun("pair", {dy_term(rng, atoms, depth - 1),
                                dy_term(rng, atoms, depth - 1)});
    case 1:
      return Term::fun("enc", {dy_term(rng, atoms, depth - 1),
                               Term::constant(atoms[pick(rng, atoms.size())])});
    case 2:
      return Term::fun(
          "enc", {dy_term(rng, atoms, depth - 1),
                  Term::fun("inv", {Term::constant(atoms[pick(rng, atoms.size())])})});
    default:
      return Term::fun("pair", {Term::constant(atoms[pick(rng, atoms.size())]),
                                dy_term(rng, atoms, depth - 1)});
  }
}

/// Random positive strand of small Dolev-Yao terms, occasionally throwing
/// in an inv(k) so decryption becomes possible.
inline PositiveStrand dy_strand(Rng& rng, std::size_t max_len, int depth) {
  static const std::vector<std::string> atoms{"a", "b", "c", "k1", "k2", "n"};
  PositiveStrand s;
  std::size_t len = 1 + pick(rng, max_len);
  for (std::size_t i = 0; i < len; ++i) {
    if (chance(rng, 0.2))
      s.push_back(Term::fun("inv", {Term::constant(atoms[3 + pick(rng, 2)])}));
    else
      s.push_back(dy_term(rng, atoms, depth));
  }
  return s;
}

/// Random valid narration over the Dolev-Yao theory. Messages are built
/// from material the sender already holds (knowledge, own nonces, and
/// payloads it received whole), which keeps most roles executable; the
/// caller still filters with executability_check.
inline Narration dy_narration(Rng& rng, std::size_t max_agents,
                              std::size_t max_lines, int depth) {
  Narration n;
  n.name = "random";
  n.theory_name = "dolev_yao";
  std::size_t num_agents = 2 + pick(rng, max_agents - 1);
  std::vector<std::string> agents;
  for (std::size_t i = 0; i < num_agents; ++i)
    agents.push_back(std::string(1, static_cast<char>('A' + i)));

  std::vector<std::string> keys{"Ka", "Kb", "Kc", "Kd"};
  keys.resize(num_agents);
  for (std::size_t i = 0; i < num_agents; ++i) {
    std::vector<Term> knows;
    for (const std::string& a : agents) knows.push_back(Term::constant(a));
    for (const std::string& k : keys) knows.push_back(Term::constant(k));
    knows.push_back(Term::fun("inv", {Term::constant(keys[i])}));
    if (chance(rng, 0.3)) knows.push_back(Term::constant("s" + agents[i]));
    n.knowledge.emplace_back(agents[i], std::move(knows));
  }

  // Material each agent can place into payloads it sends.
  std::map<std::string, std::vector<std::string>> material;
  std::map<std::string, int> nonce_no;
  for (std::size_t i = 0; i < num_agents; ++i) {
    auto& m = material[agents[i]];
    m.insert(m.end(), agents.begin(), agents.end());
    m.insert(m.end(), keys.begin(), keys.end());
    for (const Term& t : *n.knowledge_of(agents[i]))
      if (t.is_const()) m.push_back(t.name);
  }

  std::size_t lines = 1 + pick(rng, max_lines);
  for (std::size_t li = 0; li < lines; ++li) {
    std::size_t si = pick(rng, num_agents);
    std::size_t ri = pick(rng, num_agents - 1);
    if (ri >= si) ++ri;
    const std::string& sender = agents[si];
    const std::string& receiver = agents[ri];
    std::vector<std::string> atoms = material[sender];
    if (chance(rng, 0.6)) {
      std::string nonce = "N" + sender + std::to_string(++nonce_no[sender]);
      atoms.push_back(nonce);
      material[sender].push_back(nonce);
    }
    Term payload = dy_term(rng, atoms, depth);
    NarrationLine ml;
    ml.line_no = static_cast<int>(li) + 1;
    ml.sender = sender;
    ml.receiver = receiver;
    ml.message = payload;
    n.lines.push_back(std::move(ml));
    // The receiver may reuse constants it could see in the clear.
    std::set<std::string> consts;
    collect_constants(payload, consts);
    for (const std::string& c : consts) material[receiver].push_back(c);
  }
  return n;
}

/// Random xor strand over at most `max_atoms` atoms.
inline std::vector<XorTerm> xor_strand(Rng& rng, std::size_t max_len,
                                       std::size_t max_atoms) {
  static const std::vector<std::string> names{"a", "b", "c", "d", "e", "f"};
  std::size_t len = 1 + pick(rng, max_len);
  std::size_t atoms = 1 + pick(rng, max_atoms);
  std::vector<XorTerm> s;
  for (std::size_t i = 0; i < len; ++i) {
    XorTerm t;
    for (std::size_t a = 0; a < atoms; ++a)
      if (chance(rng, 0.5)) t.atoms.insert(names[a]);
    s.push_back(std::move(t));
  }
  return s;
}

}  // namespace rolec::gen

#endif  // ROLEC_TESTS_GEN_HPP
