#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cli/commands.hpp"

namespace {

const char* kCommands = "verify | integrate | brackets | scan | list-systems";

}  // namespace

int main(int argc, char** argv) {
  using namespace hjt::cli;
  CLI::App app{"Hamilton-Jacobi residual checks on registered mechanical systems", "hjt"};
  app.set_help_flag("-h,--help");
  std::string command;
  app.add_option("command", command, kCommands)->required()->check(
      CLI::IsMember({"verify", "integrate", "brackets", "scan", "list-systems"}));

  // every setting is kept as text so that config-file values and flags go through one parser
  const std::vector<std::pair<std::string, std::string>> flags{
      {"system", "registered system name"},
      {"candidate", "registered candidate (vector field or 1-form) or label for --candidate-file"},
      {"candidate-file", "component file with w1 = ... or a1 = ... lines"},
      {"params", "name=value,... for the system and the candidate"},
      {"grid", "axis:min:max:count,... (configuration space; phase space for brackets)"},
      {"tol", "pass tolerance (default 1e-8)"},
      {"mode", "generalized | standard | singular_isotropy"},
      {"diff", "dual | central"},
      {"format", "json | csv"},
      {"out", "write the report here instead of stdout"},
      {"dt", "integration step (default 1e-3)"},
      {"steps", "integration steps (default 1000)"},
      {"x0", "initial state, comma separated"},
      {"integrals", "first-integral labels, comma separated"},
      {"family", "complete-solution family for scan"},
      {"lambda-grid", "parameter grid for scan, axis:min:max:count,..."},
      {"seed", "velocity seed for leaf solves in scan"},
      {"samples", "random phase-space samples for brackets (default 100)"},
  };
  std::map<std::string, std::string> given;
  std::map<std::string, CLI::Option*> opts;
  for (const auto& [name, help] : flags) opts[name] = app.add_option("--" + name, given[name], help);
  bool require_involution = false;
  auto* inv = app.add_flag("--require-involution", require_involution, "exit 1 unless every bracket is within tol");
  std::string config_path;
  app.add_option("--config", config_path, "key = value file; [params] section sets parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    std::map<std::string, std::string> settings;
    hjt::Params params;
    if (!config_path.empty()) {
      auto cf = read_config(config_path);
      settings = cf.run;
      params = cf.params;
    }
    for (const auto& [name, opt] : opts)
      if (opt->count()) settings[name] = given[name];
    if (inv->count()) settings["require-involution"] = require_involution ? "true" : "false";
    RunConfig cfg = build_config(command, settings, params);
    Outcome out = run(cfg);
    if (cfg.out.empty()) {
      std::fwrite(out.text.data(), 1, out.text.size(), stdout);
    } else {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f) throw hjt::Error(hjt::ErrorKind::Usage, "cannot write " + cfg.out);
      f << out.text;
    }
    return out.code;
  } catch (const hjt::Error& e) {
    std::cerr << "hjt: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "hjt: " << e.what() << "\n";
    return kNumeric;
  }
}
