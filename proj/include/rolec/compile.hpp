#ifndef ROLEC_COMPILE_HPP
#define ROLEC_COMPILE_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rolec/basis.hpp"
#include "rolec/deduction.hpp"
#include "rolec/roles.hpp"
#include "rolec/term.hpp"
#include "rolec/xor_algebra.hpp"

namespace rolec {

/// Compiled step of an active frame. Variables are strand positions:
/// step i binds v_i; a send recipe may mention v_1..v_{i-1}, a reception
/// check system v_1..v_i.
struct SendStep {
  int var = 0;
  Context recipe;
  Term ideal;         // metadata for diagnostics; semantics never reads it
  std::string alias;  // display name, e.g. v_msg1
};

struct ReceiveStep {
  int var = 0;
  UnificationSystem checks;
  Term ideal;
  std::string alias;
};

using FrameStep = std::variant<SendStep, ReceiveStep>;

struct ActiveFrame {
  std::string role;
  std::vector<FrameStep> steps;

  std::size_t receive_count() const {
    std::size_t n = 0;
    for (const FrameStep& s : steps)
      if (std::holds_alternative<ReceiveStep>(s)) ++n;
    return n;
  }
};

/// delta: each reception carries only the checks not emitted before
/// (the union over receptions is unchanged). full: every reception
/// carries the whole system of its prefix. none: no checks at all;
/// debug aid for the audit command.
enum class EmitMode { Delta, Full, None };

struct CompileOptions {
  std::size_t bound = 0;  // 0 = theory default
  EmitMode emit = EmitMode::Delta;
};

struct NotExecutable : std::runtime_error {
  int step;
  Term message;
  NotExecutable(const std::string& role, int step_index, Term m)
      : std::runtime_error("role " + role + ": message " + to_string(m) +
                           " at step " + std::to_string(step_index) +
                           " is not derivable from the preceding strand"),
        step(step_index),
        message(std::move(m)) {}
};

namespace detail {

inline std::optional<Context> reach_any(const PositiveStrand& s, const Term& t,
                                        const DeductionSystem& d,
                                        std::size_t bound) {
  if (d.kind == TheoryKind::Xor) {
    std::vector<XorTerm> xs;
    xs.reserve(s.size());
    for (const Term& m : s) xs.push_back(to_xor(m));
    return xor_reach(xs, to_xor(t));
  }
  return reach(s, t, d, bound);
}

inline std::string flat_name(const Term& t) {
  std::string out;
  for (char c : to_string(t))
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') out += c;
  return out;
}

}  // namespace detail

/// The compilation algorithm: send step i gets the reachability recipe
/// for M_i over the prefix, reception step i gets the unification system
/// of the prefix including M_i.
inline ActiveFrame compile_role(const RoleSpec& r, const DeductionSystem& d,
                                const CompileOptions& opts = {}) {
  ActiveFrame frame;
  frame.role = r.name;
  PositiveStrand prefix;
  std::set<ContextPair> emitted;
  int msg_no = 0, recv_no = 0;
  for (std::size_t i = 0; i < r.strand.steps.size(); ++i) {
    const Step& step = r.strand.steps[i];
    const int var = static_cast<int>(i) + 1;
    const bool seeded = i < r.seed_steps();
    if (step.send) {
      auto recipe = detail::reach_any(prefix, step.message, d, opts.bound);
      if (!recipe) throw NotExecutable(r.name, var, step.message);
      SendStep s;
      s.var = var;
      s.recipe = std::move(*recipe);
      s.ideal = step.message;
      s.alias = "v_msg" + std::to_string(++msg_no);
      frame.steps.emplace_back(std::move(s));
    } else {
      ReceiveStep rs;
      rs.var = var;
      rs.ideal = step.message;
      rs.alias = seeded ? "v_" + detail::flat_name(step.message)
                        : "v_r" + std::to_string(++recv_no);
      if (opts.emit != EmitMode::None) {
        PositiveStrand with = prefix;
        with.push_back(step.message);
        UnificationSystem sys = unification_system_of(with, d, opts.bound);
        if (opts.emit == EmitMode::Delta) {
          for (const ContextPair& p : sys)
            if (emitted.insert(p).second) rs.checks.push_back(p);
        } else {
          rs.checks = std::move(sys);
        }
      }
      frame.steps.emplace_back(std::move(rs));
    }
    prefix.push_back(step.message);
  }
  return frame;
}

struct Executability {
  bool executable = true;
  std::vector<Context> witnesses;  // one recipe per sent message
  int failed_step = 0;
  Term failed_message;
};

/// Decides executability: every sent message must be reachable from its
/// prefix. Witnesses are the send recipes.
inline Executability executability_check(const RoleSpec& r,
                                         const DeductionSystem& d,
                                         std::size_t bound = 0) {
  Executability out;
  PositiveStrand prefix;
  for (std::size_t i = 0; i < r.strand.steps.size(); ++i) {
    const Step& step = r.strand.steps[i];
    if (step.send) {
      auto recipe = detail::reach_any(prefix, step.message, d, bound);
      if (!recipe) {
        out.executable = false;
        out.failed_step = static_cast<int>(i) + 1;
        out.failed_message = step.message;
        return out;
      }
      out.witnesses.push_back(std::move(*recipe));
    }
    prefix.push_back(step.message);
  }
  return out;
}

}  // namespace rolec

#endif  // ROLEC_COMPILE_HPP
