#ifndef ROLEC_DOCUMENT_HPP
#define ROLEC_DOCUMENT_HPP

#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rolec/compile.hpp"
#include "rolec/narration.hpp"
#include "rolec/roles.hpp"
#include "rolec/runtime.hpp"

namespace rolec {

using json = nlohmann::json;

// The "doc" output format is JSON with the default (sorted-key) object
// serialization, so a given input always produces the same bytes.

inline json to_json(const ContextPair& eq) {
  return json{{"lhs", to_string(eq.left, HoleStyle::Frame)},
              {"rhs", to_string(eq.right, HoleStyle::Frame)}};
}

inline json to_json(const RoleSpec& r, const ActiveFrame& f) {
  json strand = json::array();
  for (const Step& s : r.strand.steps)
    strand.push_back(json{{"polarity", s.send ? "!" : "?"},
                          {"message", to_string(s.message)}});
  json steps = json::array();
  for (const FrameStep& step : f.steps) {
    if (const auto* send = std::get_if<SendStep>(&step)) {
      steps.push_back(json{{"kind", "send"},
                           {"var", send->var},
                           {"alias", send->alias},
                           {"recipe", to_string(send->recipe, HoleStyle::Frame)},
                           {"ideal", to_string(send->ideal)}});
    } else {
      const auto& recv = std::get<ReceiveStep>(step);
      json checks = json::array();
      for (const ContextPair& eq : recv.checks) checks.push_back(to_json(eq));
      steps.push_back(json{{"kind", "receive"},
                           {"var", recv.var},
                           {"alias", recv.alias},
                           {"checks", checks},
                           {"ideal", to_string(recv.ideal)}});
    }
  }
  return json{{"name", r.name},
              {"params", r.params},
              {"nonces", r.nonces},
              {"knowledge_count", r.num_knowledge},
              {"strand", strand},
              {"frame", steps}};
}

inline json compilation_document(const Narration& n,
                                 const std::vector<RoleSpec>& roles,
                                 const std::vector<ActiveFrame>& frames,
                                 const CompileOptions& opts) {
  json doc;
  doc["protocol"] = n.name;
  doc["theory"] = n.theory_name;
  doc["bound"] = opts.bound;
  doc["emit"] = opts.emit == EmitMode::Delta  ? "delta"
                : opts.emit == EmitMode::Full ? "full"
                                              : "none";
  json rs = json::array();
  for (std::size_t i = 0; i < roles.size(); ++i)
    rs.push_back(to_json(roles[i], frames[i]));
  doc["roles"] = rs;
  return doc;
}

/// Rebuilds role specs and frames from a compilation document; used by
/// the round-trip guarantee (a reloaded document simulates identically).
inline std::pair<std::vector<RoleSpec>, std::vector<ActiveFrame>>
load_compilation_document(const json& doc, const DeductionSystem& d) {
  std::vector<RoleSpec> roles;
  std::vector<ActiveFrame> frames;
  const bool xor_infix = d.kind == TheoryKind::Xor;
  for (const json& jr : doc.at("roles")) {
    RoleSpec r;
    r.name = jr.at("name").get<std::string>();
    r.params = jr.at("params").get<std::vector<std::string>>();
    r.nonces = jr.at("nonces").get<std::vector<std::string>>();
    r.num_knowledge = jr.at("knowledge_count").get<std::size_t>();
    for (const json& js : jr.at("strand")) {
      Step s;
      s.send = js.at("polarity").get<std::string>() == "!";
      s.message = parse_term(js.at("message").get<std::string>(), d.sig, xor_infix);
      r.strand.steps.push_back(std::move(s));
    }
    ActiveFrame f;
    f.role = r.name;
    for (const json& js : jr.at("frame")) {
      if (js.at("kind").get<std::string>() == "send") {
        SendStep s;
        s.var = js.at("var").get<int>();
        s.alias = js.at("alias").get<std::string>();
        s.recipe = parse_recipe(js.at("recipe").get<std::string>(), d.sig, xor_infix);
        s.ideal = parse_term(js.at("ideal").get<std::string>(), d.sig, xor_infix);
        f.steps.emplace_back(std::move(s));
      } else {
        ReceiveStep s;
        s.var = js.at("var").get<int>();
        s.alias = js.at("alias").get<std::string>();
        s.ideal = parse_term(js.at("ideal").get<std::string>(), d.sig, xor_infix);
        for (const json& je : js.at("checks"))
          s.checks.push_back(
              {parse_recipe(je.at("lhs").get<std::string>(), d.sig, xor_infix),
               parse_recipe(je.at("rhs").get<std::string>(), d.sig, xor_infix)});
        f.steps.emplace_back(std::move(s));
      }
    }
    roles.push_back(std::move(r));
    frames.push_back(std::move(f));
  }
  return {std::move(roles), std::move(frames)};
}

inline json transcript_document(const Transcript& t) {
  json events = json::array();
  for (const TranscriptEvent& e : t.events) {
    json je;
    je["kind"] = e.kind == EventKind::Seed      ? "seed"
                 : e.kind == EventKind::Send    ? "send"
                 : e.kind == EventKind::Receive ? "receive"
                                                : "deadlock";
    je["role"] = e.role;
    je["step"] = e.step;
    je["line"] = e.line;
    je["accepted"] = e.accepted;
    if (e.kind != EventKind::Deadlock) je["term"] = to_string(e.term);
    if (!e.note.empty()) je["note"] = e.note;
    json failed = json::array();
    for (const ContextPair& eq : e.failed) failed.push_back(to_json(eq));
    je["failed"] = failed;
    events.push_back(std::move(je));
  }
  return json{{"events", events},
              {"complete", t.complete},
              {"delivered", t.delivered},
              {"accepted", t.all_accepted()}};
}

// ---------------------------------------------------------------------------
// --format pretty: the paper-style notation, for human reading.

namespace detail {

/// Replaces v_<i> by the step alias so recipes read like the paper's
/// contexts (v_B, v_Na, v_r, ...).
inline std::string pretty_term(const Term& t, const ActiveFrame& f) {
  std::map<int, std::string> alias;
  for (const FrameStep& step : f.steps) {
    if (const auto* s = std::get_if<SendStep>(&step)) alias[s->var] = s->alias;
    else alias[std::get<ReceiveStep>(step).var] = std::get<ReceiveStep>(step).alias;
  }
  std::string out;
  std::function<void(const Term&)> go = [&](const Term& u) {
    if (u.is_hole()) {
      auto it = alias.find(u.index);
      out += it != alias.end() ? it->second : "v_" + std::to_string(u.index);
      return;
    }
    if (!u.is_fun()) {
      out += u.name;
      return;
    }
    out += u.name;
    if (!u.args.empty()) {
      out += '(';
      for (std::size_t i = 0; i < u.args.size(); ++i) {
        if (i) out += ',';
        go(u.args[i]);
      }
      out += ')';
    }
  };
  go(t);
  return out;
}

}  // namespace detail

inline std::string pretty_frame(const RoleSpec& r, const ActiveFrame& f) {
  std::ostringstream out;
  out << "role " << r.name;
  if (!r.nonces.empty()) {
    out << "  ν";  // nu
    for (const std::string& nc : r.nonces) out << ' ' << nc;
  }
  out << "\n";
  for (const FrameStep& step : f.steps) {
    if (const auto* send = std::get_if<SendStep>(&step)) {
      out << "  ! " << send->alias << " ≟ "
          << detail::pretty_term(send->recipe, f) << "\n";
    } else {
      const auto& recv = std::get<ReceiveStep>(step);
      out << "  ? " << recv.alias;
      if (recv.checks.empty()) {
        out << " with ∅\n";
      } else {
        out << " with\n";
        for (const ContextPair& eq : recv.checks)
          out << "      " << detail::pretty_term(eq.left, f) << " ≟ "
              << detail::pretty_term(eq.right, f) << "\n";
      }
    }
  }
  return out.str();
}

inline std::string pretty_transcript(const Transcript& t) {
  std::ostringstream out;
  for (const TranscriptEvent& e : t.events) {
    switch (e.kind) {
      case EventKind::Seed:
        out << "seed    " << e.role << " ? " << to_string(e.term) << "\n";
        break;
      case EventKind::Send:
        out << "line " << e.line << "  " << e.role << " ! " << to_string(e.term)
            << "\n";
        break;
      case EventKind::Receive:
        out << "line " << e.line << "  " << e.role << " ? " << to_string(e.term)
            << (e.accepted ? "  [accepted]" : "  [REJECTED]") << "\n";
        for (const ContextPair& eq : e.failed)
          out << "        failed: " << to_string(eq.left, HoleStyle::Frame)
              << " ≟ " << to_string(eq.right, HoleStyle::Frame) << "\n";
        break;
      case EventKind::Deadlock:
        out << "line " << e.line << "  deadlock at " << e.role << ": " << e.note
            << "\n";
        break;
    }
  }
  out << (t.all_accepted() ? "run complete, all receptions accepted"
                           : "run failed")
      << " (" << t.delivered << " message(s) delivered)\n";
  return out.str();
}

}  // namespace rolec

#endif  // ROLEC_DOCUMENT_HPP
