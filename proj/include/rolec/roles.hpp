#ifndef ROLEC_ROLES_HPP
#define ROLEC_ROLES_HPP

#include <string>
#include <vector>

#include "rolec/narration.hpp"
#include "rolec/rewrite.hpp"
#include "rolec/term.hpp"

namespace rolec {

/// Plain role: the projection of a narration onto one agent.
/// The strand starts with one reception per nonce, then one per
/// knowledge term, then the projected narration steps.
struct RoleSpec {
  std::string name;
  std::vector<std::string> params;  // constants of the knowledge terms
  std::vector<std::string> nonces;
  Strand strand;
  // Bookkeeping for the simulator: narration line behind each projected
  // step (0 for the nonce/knowledge prefix).
  std::vector<int> step_lines;

  std::size_t seed_steps() const { return nonces.size() + num_knowledge; }
  std::size_t num_knowledge = 0;
};

/// Projects the narration onto every agent, in knows-line order.
/// Requires a validated narration (no shared nonces); the check is
/// repeated here defensively.
inline std::vector<RoleSpec> extract_roles(const Narration& n,
                                           const DeductionSystem& d) {
  auto nonce_sets = detail::narration_nonces(n);
  {
    std::vector<std::string> agents = n.agents();
    for (std::size_t i = 0; i < agents.size(); ++i)
      for (std::size_t j = i + 1; j < agents.size(); ++j)
        for (const std::string& c : nonce_sets[agents[i]])
          if (nonce_sets[agents[j]].count(c))
            throw NarrationError("shared nonce " + c, 0);
  }
  const bool wrap = d.kind == TheoryKind::Convergent;
  std::vector<RoleSpec> roles;
  for (const auto& [agent, knowledge] : n.knowledge) {
    RoleSpec r;
    r.name = agent;
    r.num_knowledge = knowledge.size();
    std::set<std::string> param_set;
    for (const Term& k : knowledge) collect_constants(k, param_set);
    r.params.assign(param_set.begin(), param_set.end());

    // Nonce order: first occurrence inside the agent's sent payloads.
    std::set<std::string> remaining = nonce_sets[agent];
    for (const NarrationLine& ml : n.lines) {
      if (ml.sender != agent || remaining.empty()) continue;
      std::vector<std::string> ordered;
      struct Walk {
        static void run(const Term& t, std::set<std::string>& rem,
                        std::vector<std::string>& ord) {
          if (t.is_const() && rem.count(t.name)) {
            rem.erase(t.name);
            ord.push_back(t.name);
          }
          for (const Term& a : t.args) run(a, rem, ord);
        }
      };
      Walk::run(ml.message, remaining, ordered);
      r.nonces.insert(r.nonces.end(), ordered.begin(), ordered.end());
    }

    for (const std::string& nc : r.nonces) {
      r.strand.steps.push_back({false, Term::constant(nc)});
      r.step_lines.push_back(0);
    }
    for (const Term& k : knowledge) {
      r.strand.steps.push_back({false, k});
      r.step_lines.push_back(0);
    }
    for (const NarrationLine& ml : n.lines) {
      if (ml.sender == agent) {
        Term m = wrap ? Term::fun("msg", {Term::constant(ml.receiver),
                                          ml.message})
                      : ml.message;
        r.strand.steps.push_back({true, std::move(m)});
        r.step_lines.push_back(ml.line_no);
      } else if (ml.receiver == agent) {
        Term m = wrap ? Term::fun("msg", {Term::constant(ml.sender),
                                          ml.message})
                      : ml.message;
        r.strand.steps.push_back({false, std::move(m)});
        r.step_lines.push_back(ml.line_no);
      }
    }
    roles.push_back(std::move(r));
  }
  return roles;
}

/// The ?-steps of the role, polarity flipped: what the environment feeds
/// the role when the protocol runs as narrated.
inline PositiveStrand role_input(const RoleSpec& r) {
  PositiveStrand out;
  for (const Step& s : r.strand.steps)
    if (!s.send) out.push_back(s.message);
  return out;
}

/// Strand positions (1-based) of the ?-steps, aligned with role_input.
inline std::vector<int> input_positions(const RoleSpec& r) {
  std::vector<int> out;
  for (std::size_t i = 0; i < r.strand.steps.size(); ++i)
    if (!r.strand.steps[i].send) out.push_back(static_cast<int>(i) + 1);
  return out;
}

inline std::string to_string(const RoleSpec& r) {
  std::string out = r.name + "(";
  for (std::size_t i = 0; i < r.params.size(); ++i)
    out += (i ? "," : "") + r.params[i];
  out += "): nu ";
  for (std::size_t i = 0; i < r.nonces.size(); ++i)
    out += (i ? "," : "") + r.nonces[i];
  out += "." + to_string(r.strand);
  return out;
}

}  // namespace rolec

#endif  // ROLEC_ROLES_HPP
