#ifndef ROLEC_RUNTIME_HPP
#define ROLEC_RUNTIME_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rolec/compile.hpp"
#include "rolec/narration.hpp"
#include "rolec/roles.hpp"
#include "rolec/term.hpp"

namespace rolec {

/// Evaluation of an active frame on an input strand: receptions bind the
/// next input message, sends instantiate their recipe over the earlier
/// variables and normalize.
inline Strand evaluate(const ActiveFrame& f, const PositiveStrand& inputs,
                       const DeductionSystem& d) {
  if (inputs.size() != f.receive_count())
    throw std::invalid_argument("frame expects " +
                                std::to_string(f.receive_count()) +
                                " inputs, got " + std::to_string(inputs.size()));
  Strand out;
  PositiveStrand bindings;
  std::size_t next_input = 0;
  for (const FrameStep& step : f.steps) {
    if (const auto* recv = std::get_if<ReceiveStep>(&step)) {
      (void)recv;
      bindings.push_back(inputs[next_input++]);
      out.steps.push_back({false, bindings.back()});
    } else {
      const auto& send = std::get<SendStep>(step);
      Term m = normalize(instantiate_context(send.recipe, bindings), d);
      bindings.push_back(m);
      out.steps.push_back({true, std::move(m)});
    }
  }
  return out;
}

struct Acceptance {
  bool accepted = true;
  std::vector<ContextPair> failed;
};

/// Binds the inputs, computes the sends, and verifies every reception
/// check by ground equality modulo the theory.
inline Acceptance accepts(const ActiveFrame& f, const PositiveStrand& inputs,
                          const DeductionSystem& d) {
  if (inputs.size() != f.receive_count())
    throw std::invalid_argument("frame expects " +
                                std::to_string(f.receive_count()) +
                                " inputs, got " + std::to_string(inputs.size()));
  Acceptance out;
  PositiveStrand bindings;
  std::size_t next_input = 0;
  for (const FrameStep& step : f.steps) {
    if (const auto* recv = std::get_if<ReceiveStep>(&step)) {
      bindings.push_back(inputs[next_input++]);
      for (const ContextPair& eq : recv->checks) {
        if (!equal_mod(instantiate_context(eq.left, bindings),
                       instantiate_context(eq.right, bindings), d)) {
          out.accepted = false;
          out.failed.push_back(eq);
        }
      }
    } else {
      const auto& send = std::get<SendStep>(step);
      bindings.push_back(normalize(instantiate_context(send.recipe, bindings), d));
    }
  }
  return out;
}

/// Definition of implementation: the frame accepts the role's input and
/// evaluates on it to the role's strand, stepwise modulo the theory.
inline bool verify_implementation(const ActiveFrame& f, const RoleSpec& r,
                                  const DeductionSystem& d) {
  PositiveStrand in = role_input(r);
  if (in.size() != f.receive_count()) return false;
  if (!accepts(f, in, d).accepted) return false;
  Strand got = evaluate(f, in, d);
  if (got.steps.size() != r.strand.steps.size()) return false;
  for (std::size_t i = 0; i < got.steps.size(); ++i) {
    if (got.steps[i].send != r.strand.steps[i].send) return false;
    if (!equal_mod(got.steps[i].message, r.strand.steps[i].message, d))
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Honest simulation.

enum class EventKind { Seed, Send, Receive, Deadlock };

struct TranscriptEvent {
  EventKind kind = EventKind::Seed;
  std::string role;
  int step = 0;      // strand position within the role
  int line = 0;      // narration line for wire events
  bool send = false;
  Term term;
  bool accepted = true;
  std::vector<ContextPair> failed;
  std::string note;
};

struct Transcript {
  std::vector<TranscriptEvent> events;
  bool complete = true;
  int delivered = 0;

  bool all_accepted() const {
    for (const TranscriptEvent& e : events)
      if (!e.accepted) return false;
    return complete;
  }
};

struct SimulateOptions {
  int mutate_line = 0;  // 1-based narration line; 0 = honest run
  std::optional<Term> mutate_replacement;
};

namespace detail {

struct RoleState {
  const RoleSpec* spec = nullptr;
  const ActiveFrame* frame = nullptr;
  PositiveStrand bindings;
  std::size_t cursor = 0;  // next frame step
  bool alive = true;

  bool check_step(const DeductionSystem& d, TranscriptEvent& ev) {
    const auto& recv = std::get<ReceiveStep>(frame->steps[cursor]);
    for (const ContextPair& eq : recv.checks) {
      if (!equal_mod(instantiate_context(eq.left, bindings),
                     instantiate_context(eq.right, bindings), d)) {
        ev.accepted = false;
        ev.failed.push_back(eq);
      }
    }
    return ev.accepted;
  }
};

}  // namespace detail

/// Runs the narration honestly: each role's nonce and knowledge
/// receptions are seeded from the narration constants, then the lines
/// fire in order. The wire carries (from, to, payload); msg(.,.) is a
/// per-role view, so the sender's msg(receiver, M) is re-wrapped as
/// msg(sender, M) before delivery. A rejected reception stops its role;
/// later lines needing that role deadlock.
inline Transcript simulate(const Narration& n,
                           const std::map<std::string, ActiveFrame>& frames,
                           const DeductionSystem& d,
                           const SimulateOptions& opts = {}) {
  Transcript t;
  std::vector<RoleSpec> roles = extract_roles(n, d);
  std::map<std::string, detail::RoleState> states;
  for (const RoleSpec& r : roles) {
    auto it = frames.find(r.name);
    if (it == frames.end())
      throw std::invalid_argument("no frame for role " + r.name);
    states[r.name] = {&r, &it->second, {}, 0, true};
  }
  const bool wrap = d.kind == TheoryKind::Convergent;

  for (const RoleSpec& r : roles) {
    detail::RoleState& st = states[r.name];
    for (std::size_t i = 0; i < r.seed_steps(); ++i) {
      st.bindings.push_back(r.strand.steps[i].message);
      TranscriptEvent ev;
      ev.kind = EventKind::Seed;
      ev.role = r.name;
      ev.step = static_cast<int>(i) + 1;
      ev.term = st.bindings.back();
      st.check_step(d, ev);
      if (!ev.accepted) st.alive = false;
      ++st.cursor;
      t.events.push_back(std::move(ev));
      if (!st.alive) break;
    }
  }

  for (std::size_t li = 0; li < n.lines.size(); ++li) {
    const NarrationLine& line = n.lines[li];
    detail::RoleState& sender = states[line.sender];
    detail::RoleState& receiver = states[line.receiver];

    auto deadlock = [&](const std::string& role, const std::string& why) {
      TranscriptEvent ev;
      ev.kind = EventKind::Deadlock;
      ev.role = role;
      ev.line = line.line_no;
      ev.accepted = false;
      ev.note = why;
      t.events.push_back(std::move(ev));
      t.complete = false;
    };

    if (!sender.alive || sender.cursor >= sender.frame->steps.size() ||
        !std::holds_alternative<SendStep>(sender.frame->steps[sender.cursor])) {
      deadlock(line.sender, sender.alive ? "expected a send step"
                                         : "role stopped earlier");
      return t;
    }
    const auto& send = std::get<SendStep>(sender.frame->steps[sender.cursor]);
    Term produced = normalize(instantiate_context(send.recipe, sender.bindings), d);
    sender.bindings.push_back(produced);
    ++sender.cursor;
    {
      TranscriptEvent ev;
      ev.kind = EventKind::Send;
      ev.role = line.sender;
      ev.step = send.var;
      ev.line = line.line_no;
      ev.send = true;
      ev.term = produced;
      t.events.push_back(std::move(ev));
    }

    Term payload = produced;
    if (wrap) {
      if (!produced.is_fun() || produced.name != "msg" ||
          produced.args.size() != 2 ||
          produced.args[0] != Term::constant(line.receiver)) {
        deadlock(line.sender, "send does not address " + line.receiver);
        return t;
      }
      payload = produced.args[1];
    }
    if (opts.mutate_line == static_cast<int>(li) + 1 && opts.mutate_replacement)
      payload = *opts.mutate_replacement;

    if (!receiver.alive || receiver.cursor >= receiver.frame->steps.size() ||
        !std::holds_alternative<ReceiveStep>(
            receiver.frame->steps[receiver.cursor])) {
      deadlock(line.receiver, receiver.alive ? "expected a receive step"
                                             : "role stopped earlier");
      return t;
    }
    Term delivered =
        wrap ? Term::fun("msg", {Term::constant(line.sender), payload})
             : payload;
    receiver.bindings.push_back(delivered);
    TranscriptEvent ev;
    ev.kind = EventKind::Receive;
    ev.role = line.receiver;
    ev.step = std::get<ReceiveStep>(receiver.frame->steps[receiver.cursor]).var;
    ev.line = line.line_no;
    ev.term = delivered;
    receiver.check_step(d, ev);
    if (!ev.accepted) receiver.alive = false;
    ++receiver.cursor;
    ++t.delivered;
    t.events.push_back(std::move(ev));
  }
  return t;
}

}  // namespace rolec

#endif  // ROLEC_RUNTIME_HPP
