// rolec: compiles Alice&Bob protocol narrations into prudent per-role
// programs, and simulates / audits the result.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rolec/rolec.hpp"

namespace {

int parse_mutate(const std::vector<std::string>& kvs,
                 rolec::SimulateCliOptions& opts) {
  for (const std::string& kv : kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "--mutate expects step=<i> replace=<term>, got " << kv
                << "\n";
      return 2;
    }
    std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
    if (key == "step") {
      try {
        opts.mutate_step = std::stoi(value);
      } catch (const std::exception&) {
        std::cerr << "--mutate step expects a number, got " << value << "\n";
        return 2;
      }
    } else if (key == "replace") {
      opts.mutate_replace = value;
    } else {
      std::cerr << "--mutate accepts step= and replace=, got " << key << "\n";
      return 2;
    }
  }
  if (opts.mutate_step > 0 && opts.mutate_replace.empty()) {
    std::cerr << "--mutate needs replace=<term>\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compiler from protocol narrations to prudent role programs"};
  app.require_subcommand(1);

  std::string file;
  rolec::PipelineOptions pipeline;
  std::string emit = "delta";
  std::size_t depth = 3;
  std::vector<std::string> mutate_kvs;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("file", file, "input file")->required();
    cmd->add_option("--bound", pipeline.compile.bound,
                    "saturation/context size bound (0 = theory default)");
    cmd->add_option("--emit", emit, "reception checks: delta|full|none")
        ->check(CLI::IsMember({"delta", "full", "none"}));
    cmd->add_option("--format", pipeline.format, "output: doc|pretty")
        ->check(CLI::IsMember({"doc", "pretty"}));
    cmd->add_option("--theory", pipeline.theory_paths,
                    "load an extra .thy theory file (repeatable)");
  };

  CLI::App* check = app.add_subcommand("check", "validate a theory file");
  check->add_option("file", file, "theory file")->required();

  CLI::App* compile =
      app.add_subcommand("compile", "compile a narration to active frames");
  add_common(compile);

  CLI::App* simulate =
      app.add_subcommand("simulate", "compile and run the narration honestly");
  add_common(simulate);
  simulate->add_option("--mutate", mutate_kvs,
                       "tamper with a wire message: step=<line> replace=<term>")
      ->expected(-1);

  CLI::App* audit = app.add_subcommand(
      "audit", "compare compiled checks against the brute-force oracle");
  add_common(audit);
  audit->add_option("--depth", depth, "oracle context size bound");

  CLI11_PARSE(app, argc, argv);

  if (emit == "full") pipeline.compile.emit = rolec::EmitMode::Full;
  if (emit == "none") pipeline.compile.emit = rolec::EmitMode::None;

  if (check->parsed()) return rolec::cmd_check(file, std::cout, std::cerr);
  if (compile->parsed())
    return rolec::cmd_compile(file, pipeline, std::cout, std::cerr);
  if (simulate->parsed()) {
    rolec::SimulateCliOptions opts;
    opts.pipeline = pipeline;
    if (int rc = parse_mutate(mutate_kvs, opts); rc != 0) return rc;
    return rolec::cmd_simulate(file, opts, std::cout, std::cerr);
  }
  return rolec::cmd_audit(file, depth, pipeline, std::cout, std::cerr);
}
