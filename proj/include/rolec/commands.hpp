#ifndef ROLEC_COMMANDS_HPP
#define ROLEC_COMMANDS_HPP

#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rolec/document.hpp"
#include "rolec/oracle.hpp"
#include "rolec/runtime.hpp"

namespace rolec {

// Exit codes shared by every subcommand: 0 success, 1 semantic rejection
// (invalid theory/narration, non-executable role, rejected run, audit
// violation), 2 unreadable or unparsable input.

namespace detail {

inline std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace detail

inline int cmd_check(const std::string& theory_path, std::ostream& out,
                     std::ostream& err) {
  auto text = detail::read_file(theory_path);
  if (!text) {
    err << "cannot read " << theory_path << "\n";
    return 2;
  }
  DeductionSystem d;
  try {
    d = parse_theory(*text);
  } catch (const std::exception& e) {
    err << theory_path << ": " << e.what() << "\n";
    return 2;
  }
  ValidationReport report = validate_subterm_convergent(d);
  out << "theory " << d.name << "\n" << report.to_string();
  return report.accepted ? 0 : 1;
}

struct PipelineOptions {
  CompileOptions compile;
  std::vector<std::string> theory_paths;
  std::string format = "doc";  // doc | pretty
};

/// Everything a subcommand needs after the front half of the pipeline.
struct Pipeline {
  Narration narration;
  DeductionSystem theory;
  std::vector<RoleSpec> roles;
  std::vector<ActiveFrame> frames;
};

/// Parse + validate + extract + compile. Throws NarrationError /
/// TheoryError / ParseError for malformed input (exit 2 at the CLI) and
/// PipelineRejection for semantically invalid input (exit 1).
struct PipelineRejection : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Pipeline run_pipeline(const std::string& narration_path,
                             const PipelineOptions& opts) {
  auto text = detail::read_file(narration_path);
  if (!text) throw ParseError("cannot read " + narration_path, 0);
  TheoryStore store;
  for (const std::string& tp : opts.theory_paths) {
    auto ttext = detail::read_file(tp);
    if (!ttext) throw ParseError("cannot read " + tp, 0);
    DeductionSystem d = parse_theory(*ttext);
    if (d.kind == TheoryKind::Convergent) {
      ValidationReport report = validate_subterm_convergent(d);
      if (!report.accepted)
        throw PipelineRejection("theory " + d.name +
                                " is not subterm convergent:\n" +
                                report.to_string());
      append_message_symbols(d);
    }
    store.add(std::move(d));
  }
  Pipeline p;
  p.narration = parse_narration(*text, store);
  p.theory = *store.find(p.narration.theory_name);
  std::vector<Diagnostic> diags = validate_narration(p.narration);
  if (has_errors(diags)) {
    std::string msg = "invalid narration:";
    for (const Diagnostic& dg : diags)
      if (dg.error) msg += "\n  line " + std::to_string(dg.line) + ": " + dg.message;
    throw PipelineRejection(msg);
  }
  p.roles = extract_roles(p.narration, p.theory);
  for (const RoleSpec& r : p.roles)
    p.frames.push_back(compile_role(r, p.theory, opts.compile));
  return p;
}

inline int cmd_compile(const std::string& narration_path,
                       const PipelineOptions& opts, std::ostream& out,
                       std::ostream& err) {
  try {
    Pipeline p = run_pipeline(narration_path, opts);
    if (opts.format == "pretty") {
      for (std::size_t i = 0; i < p.roles.size(); ++i)
        out << pretty_frame(p.roles[i], p.frames[i]) << "\n";
    } else {
      out << compilation_document(p.narration, p.roles, p.frames, opts.compile)
                 .dump(2)
          << "\n";
    }
    return 0;
  } catch (const PipelineRejection& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const NotExecutable& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 2;
  }
}

struct SimulateCliOptions {
  PipelineOptions pipeline;
  int mutate_step = 0;
  std::string mutate_replace;
};

inline int cmd_simulate(const std::string& narration_path,
                        const SimulateCliOptions& opts, std::ostream& out,
                        std::ostream& err) {
  try {
    Pipeline p = run_pipeline(narration_path, opts.pipeline);
    SimulateOptions sim;
    if (opts.mutate_step > 0) {
      if (opts.mutate_step > static_cast<int>(p.narration.lines.size()))
        throw PipelineRejection("mutate step " +
                                std::to_string(opts.mutate_step) +
                                " exceeds the narration length");
      sim.mutate_line = opts.mutate_step;
      sim.mutate_replacement =
          parse_term(opts.mutate_replace, p.theory.sig,
                     p.theory.kind == TheoryKind::Xor);
    }
    std::map<std::string, ActiveFrame> frames;
    for (std::size_t i = 0; i < p.roles.size(); ++i)
      frames[p.roles[i].name] = p.frames[i];
    Transcript t = simulate(p.narration, frames, p.theory, sim);
    if (opts.pipeline.format == "pretty")
      out << pretty_transcript(t);
    else
      out << transcript_document(t).dump(2) << "\n";
    return t.all_accepted() ? 0 : 1;
  } catch (const PipelineRejection& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const NotExecutable& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 2;
  }
}

namespace detail {

/// Deterministic single-position mutants of an input strand, used to
/// probe a compiled frame against the brute-force oracle.
inline std::vector<PositiveStrand> audit_mutants(const PositiveStrand& input,
                                                 const DeductionSystem& d,
                                                 std::size_t count,
                                                 std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::vector<Term> pool;
  std::set<Term> pool_set;
  for (const Term& m : input)
    for (const Term& sub : subterms(m))
      if (pool_set.insert(sub).second) pool.push_back(sub);
  pool.push_back(Term::constant("zz_mutant"));
  std::vector<std::string> unary, binary;
  for (const auto& [name, sym] : d.sig.symbols) {
    if (!sym.is_public) continue;
    if (sym.arity == 1) unary.push_back(name);
    if (sym.arity == 2) binary.push_back(name);
  }
  auto pick = [&](const std::vector<Term>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };
  std::vector<PositiveStrand> out;
  for (std::size_t k = 0; k < count; ++k) {
    PositiveStrand mutant = input;
    std::size_t pos =
        std::uniform_int_distribution<std::size_t>(0, input.size() - 1)(rng);
    Term repl = pick(pool);
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
      case 0:
        break;  // plain replacement by a known subterm
      case 1:
        if (!unary.empty())
          repl = Term::fun(unary[std::uniform_int_distribution<std::size_t>(
                               0, unary.size() - 1)(rng)],
                           {repl});
        break;
      case 2:
        if (!binary.empty())
          repl = Term::fun(binary[std::uniform_int_distribution<std::size_t>(
                               0, binary.size() - 1)(rng)],
                           {repl, pick(pool)});
        break;
      default:
        repl = Term::constant("zz_mutant" + std::to_string(k));
        break;
    }
    mutant[pos] = normalize(repl, d);
    if (mutant[pos] == input[pos]) continue;
    out.push_back(std::move(mutant));
  }
  return out;
}

}  // namespace detail

/// Empirical prudence audit: no strand accepted by the compiled frame may
/// violate an oracle equality of the role's intended input. Every oracle
/// pair is first looked up in the frame's own check set (translated from
/// input indexing to strand positions), then random accepted mutants are
/// tested against the full oracle set.
inline int cmd_audit(const std::string& narration_path, std::size_t depth,
                     const PipelineOptions& opts, std::ostream& out,
                     std::ostream& err) {
  try {
    Pipeline p = run_pipeline(narration_path, opts);
    if (p.theory.kind == TheoryKind::Xor)
      throw PipelineRejection("audit supports rewrite theories only");
    bool violation = false;
    for (std::size_t ri = 0; ri < p.roles.size(); ++ri) {
      const RoleSpec& role = p.roles[ri];
      const ActiveFrame& frame = p.frames[ri];
      PositiveStrand input = role_input(role);
      EnumerationBudget budget{depth, 200000};
      std::vector<ContextPair> oracle = brute_pairs(input, budget, p.theory);

      // Input-index holes -> strand positions, for direct inclusion.
      std::vector<int> positions = input_positions(role);
      std::set<ContextPair> direct;
      for (const FrameStep& step : frame.steps)
        if (const auto* recv = std::get_if<ReceiveStep>(&step))
          direct.insert(recv->checks.begin(), recv->checks.end());
      std::function<Term(const Term&)> relocate = [&](const Term& t) -> Term {
        if (t.is_hole())
          return Term::hole(positions[static_cast<std::size_t>(t.index) - 1]);
        Term r = t;
        for (Term& a : r.args) a = relocate(a);
        return r;
      };
      std::size_t covered = 0;
      for (const ContextPair& pair : oracle) {
        ContextPair moved =
            detail::orient(relocate(pair.left), relocate(pair.right));
        if (direct.count(moved)) ++covered;
      }

      Acceptance base = accepts(frame, input, p.theory);
      if (!base.accepted) {
        err << "role " << role.name << ": frame rejects its own input\n";
        violation = true;
        continue;
      }
      std::size_t accepted_mutants = 0, rejected_mutants = 0;
      for (const PositiveStrand& mutant : detail::audit_mutants(
               input, p.theory, 200, 0x5eedu + static_cast<std::uint32_t>(ri))) {
        if (!accepts(frame, mutant, p.theory).accepted) {
          ++rejected_mutants;
          continue;
        }
        ++accepted_mutants;
        for (const ContextPair& pair : oracle) {
          if (!equal_mod(instantiate_context(pair.left, mutant),
                         instantiate_context(pair.right, mutant), p.theory)) {
            err << "role " << role.name << ": accepted strand violates "
                << to_string(pair) << "\n";
            violation = true;
          }
        }
      }
      out << "role " << role.name << ": " << oracle.size()
          << " oracle pair(s), " << covered << " directly in the check set, "
          << accepted_mutants << " accepted / " << rejected_mutants
          << " rejected mutant(s)\n";
    }
    out << (violation ? "audit failed" : "audit ok") << "\n";
    return violation ? 1 : 0;
  } catch (const PipelineRejection& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const NotExecutable& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 2;
  }
}

}  // namespace rolec

#endif  // ROLEC_COMMANDS_HPP
