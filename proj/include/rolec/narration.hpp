#ifndef ROLEC_NARRATION_HPP
#define ROLEC_NARRATION_HPP

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "rolec/rewrite.hpp"
#include "rolec/term.hpp"

namespace rolec {

struct NarrationLine {
  int line_no = 0;
  std::string sender;
  std::string receiver;
  Term message;
};

/// Parsed protocol narration: message lines in protocol order plus the
/// per-agent initial knowledge, all ground against one theory.
struct Narration {
  std::string name;
  std::string theory_name;
  std::vector<NarrationLine> lines;
  // Declaration order matters: it fixes the reception order of knowledge
  // terms in extracted roles.
  std::vector<std::pair<std::string, std::vector<Term>>> knowledge;

  const std::vector<Term>* knowledge_of(const std::string& agent) const {
    for (const auto& [a, terms] : knowledge)
      if (a == agent) return &terms;
    return nullptr;
  }
  std::vector<std::string> agents() const {
    std::vector<std::string> out;
    out.reserve(knowledge.size());
    for (const auto& [a, _] : knowledge) out.push_back(a);
    return out;
  }
};

struct NarrationError : std::runtime_error {
  int line;
  NarrationError(const std::string& what, int line_no)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what),
        line(line_no) {}
};

struct Diagnostic {
  int line = 0;
  bool error = false;
  std::string message;
};

inline bool operator<(const Diagnostic& a, const Diagnostic& b) {
  if (a.line != b.line) return a.line < b.line;
  if (a.error != b.error) return a.error;
  return a.message < b.message;
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool valid_agent_name(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

}  // namespace detail

/// Grammar (one construct per line, `#` comments):
///   protocol <name>
///   theory <name>
///   <S> -> <R> : <term>
///   <A> knows <term>, <term>, ...     (an empty list is allowed)
///   end
inline Narration parse_narration(const std::string& text,
                                 const TheoryStore& theories) {
  Narration n;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool saw_protocol = false, saw_theory = false, saw_end = false;
  const DeductionSystem* theory = nullptr;
  auto require_theory = [&](int at) -> const DeductionSystem& {
    if (!theory) throw NarrationError("theory must be declared before terms", at);
    return *theory;
  };
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string line = detail::trim(raw);
    if (line.empty()) continue;
    if (saw_end) throw NarrationError("content after end", line_no);
    if (line.rfind("protocol ", 0) == 0) {
      n.name = detail::trim(line.substr(9));
      if (!detail::valid_agent_name(n.name))
        throw NarrationError("bad protocol name", line_no);
      saw_protocol = true;
      continue;
    }
    if (line.rfind("theory ", 0) == 0) {
      n.theory_name = detail::trim(line.substr(7));
      theory = theories.find(n.theory_name);
      if (!theory)
        throw NarrationError("unknown theory " + n.theory_name, line_no);
      saw_theory = true;
      continue;
    }
    if (line == "end") {
      saw_end = true;
      continue;
    }
    if (auto knows = line.find(" knows"); knows != std::string::npos &&
                                          (line.size() == knows + 6 ||
                                           line[knows + 6] == ' ')) {
      std::string agent = detail::trim(line.substr(0, knows));
      if (!detail::valid_agent_name(agent))
        throw NarrationError("bad agent name " + agent, line_no);
      if (n.knowledge_of(agent))
        throw NarrationError("duplicate knows line for " + agent, line_no);
      const DeductionSystem& d = require_theory(line_no);
      std::vector<Term> terms;
      std::string rest = detail::trim(line.substr(knows + 6));
      if (!rest.empty()) {
        // Split on commas at depth 0 only; knowledge terms may be compound.
        int depth = 0;
        std::string cur;
        auto flush = [&]() {
          std::string piece = detail::trim(cur);
          if (piece.empty())
            throw NarrationError("empty knowledge entry", line_no);
          try {
            Term t = parse_term(piece, d.sig, d.kind == TheoryKind::Xor);
            if (!is_ground(t))
              throw NarrationError("knowledge must be ground", line_no);
            terms.push_back(std::move(t));
          } catch (const ParseError& e) {
            throw NarrationError(e.what(), line_no);
          }
          cur.clear();
        };
        for (char c : rest) {
          if (c == '(') ++depth;
          if (c == ')') --depth;
          if (c == ',' && depth == 0) {
            flush();
          } else {
            cur += c;
          }
        }
        flush();
      }
      n.knowledge.emplace_back(agent, std::move(terms));
      continue;
    }
    if (auto arrow = line.find("->"); arrow != std::string::npos) {
      auto colon = line.find(':', arrow);
      if (colon == std::string::npos)
        throw NarrationError("message line expects S -> R : term", line_no);
      NarrationLine ml;
      ml.line_no = line_no;
      ml.sender = detail::trim(line.substr(0, arrow));
      ml.receiver = detail::trim(line.substr(arrow + 2, colon - arrow - 2));
      if (!detail::valid_agent_name(ml.sender) ||
          !detail::valid_agent_name(ml.receiver))
        throw NarrationError("bad agent name on message line", line_no);
      if (ml.sender == ml.receiver)
        throw NarrationError("self-communication: " + ml.sender + " -> " +
                                 ml.receiver,
                             line_no);
      const DeductionSystem& d = require_theory(line_no);
      try {
        ml.message = parse_term(line.substr(colon + 1), d.sig,
                                d.kind == TheoryKind::Xor);
      } catch (const ParseError& e) {
        throw NarrationError(e.what(), line_no);
      }
      if (!is_ground(ml.message))
        throw NarrationError("narration messages must be ground", line_no);
      n.lines.push_back(std::move(ml));
      continue;
    }
    throw NarrationError("unrecognized line: " + line, line_no);
  }
  if (!saw_protocol) throw NarrationError("missing protocol line", line_no);
  if (!saw_theory) throw NarrationError("missing theory line", line_no);
  if (!saw_end) throw NarrationError("missing end line", line_no);
  if (n.lines.empty()) throw NarrationError("no message lines", line_no);
  for (const NarrationLine& ml : n.lines) {
    for (const std::string& agent : {ml.sender, ml.receiver})
      if (!n.knowledge_of(agent))
        throw NarrationError("agent " + agent + " has no knows line",
                             ml.line_no);
  }
  return n;
}

namespace detail {

/// Nonces per the extraction algorithm: constants whose first occurrence
/// in the strand (?knowledge, projected lines) is inside a sent message.
/// Partner names from the msg(.,.) encoding count as seen but are never
/// inferred as nonces themselves; only payload constants are.
inline std::map<std::string, std::set<std::string>> narration_nonces(
    const Narration& n) {
  std::map<std::string, std::set<std::string>> nonces;
  for (const std::string& agent : n.agents()) {
    std::set<std::string> seen;
    const std::vector<Term>* knows = n.knowledge_of(agent);
    for (const Term& k : *knows) collect_constants(k, seen);
    std::set<std::string>& mine = nonces[agent];
    for (const NarrationLine& ml : n.lines) {
      if (ml.sender != agent && ml.receiver != agent) continue;
      seen.insert(ml.sender == agent ? ml.receiver : ml.sender);
      std::set<std::string> consts;
      collect_constants(ml.message, consts);
      if (ml.sender == agent)
        for (const std::string& c : consts)
          if (!seen.count(c)) mine.insert(c);
      seen.insert(consts.begin(), consts.end());
    }
  }
  return nonces;
}

}  // namespace detail

/// Post-parse diagnostics, sorted by line: shared-nonce (unique
/// origination) violations are errors; knowledge entries whose constants
/// never occur in the narration are warnings.
inline std::vector<Diagnostic> validate_narration(const Narration& n) {
  std::vector<Diagnostic> out;
  auto nonces = detail::narration_nonces(n);
  std::vector<std::string> agents = n.agents();
  for (std::size_t i = 0; i < agents.size(); ++i) {
    for (std::size_t j = i + 1; j < agents.size(); ++j) {
      std::vector<std::string> shared;
      std::set_intersection(nonces[agents[i]].begin(), nonces[agents[i]].end(),
                            nonces[agents[j]].begin(), nonces[agents[j]].end(),
                            std::back_inserter(shared));
      for (const std::string& c : shared) {
        int line = 0;
        for (const NarrationLine& ml : n.lines) {
          std::set<std::string> cs;
          collect_constants(ml.message, cs);
          if (cs.count(c)) {
            line = ml.line_no;
            break;
          }
        }
        out.push_back({line, true,
                       "shared nonce " + c + " between " + agents[i] + " and " +
                           agents[j]});
      }
    }
  }
  std::set<std::string> used;
  for (const NarrationLine& ml : n.lines) {
    collect_constants(ml.message, used);
    used.insert(ml.sender);
    used.insert(ml.receiver);
  }
  for (const auto& [agent, terms] : n.knowledge) {
    for (const Term& t : terms) {
      std::set<std::string> cs;
      collect_constants(t, cs);
      bool touches = std::any_of(cs.begin(), cs.end(), [&](const std::string& c) {
        return used.count(c) > 0;
      });
      if (!touches)
        out.push_back({0, false,
                       "knowledge entry " + to_string(t) + " of " + agent +
                           " is never used"});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.error; });
}

/// Renders a narration back to its concrete syntax (used by round-trip
/// tests and --format pretty).
inline std::string to_string(const Narration& n) {
  std::ostringstream out;
  out << "protocol " << n.name << "\n";
  out << "theory " << n.theory_name << "\n";
  for (const NarrationLine& ml : n.lines)
    out << ml.sender << " -> " << ml.receiver << " : " << to_string(ml.message)
        << "\n";
  for (const auto& [agent, terms] : n.knowledge) {
    out << agent << " knows";
    for (std::size_t i = 0; i < terms.size(); ++i)
      out << (i ? ", " : " ") << to_string(terms[i]);
    out << "\n";
  }
  out << "end\n";
  return out.str();
}

}  // namespace rolec

#endif  // ROLEC_NARRATION_HPP
