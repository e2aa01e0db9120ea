#pragma once

// Run configuration: flags and config-file keys share one spelling, so both
// land in a flat string map before being typed and validated.

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hjt/error.hpp"
#include "hjt/grid.hpp"
#include "hjt/report.hpp"

namespace hjt::cli {

enum ExitCode { kPass = 0, kFail = 1, kUsage = 2, kNumeric = 3 };

inline int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::Usage:
    case ErrorKind::SyntaxError:
    case ErrorKind::UnknownIdentifier:
    case ErrorKind::EmptyGrid: return kUsage;
    default: return kNumeric;
  }
}

struct RunConfig {
  std::string command;
  std::string system;
  std::string candidate;
  std::string candidate_file;
  std::string family;
  std::string mode = "generalized";
  std::string diff = "dual";
  std::string format = "json";
  std::string out;
  Params params;
  std::vector<std::string> integrals;
  std::optional<std::vector<Axis>> grid;
  std::optional<std::vector<Axis>> lambda_grid;
  std::optional<Vec> x0;
  std::optional<Vec> seed;
  double tol = 1e-8;
  double dt = 1e-3;
  std::size_t steps = 1000;
  std::size_t samples = 100;
  bool require_involution = false;
};

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

inline std::string trim(std::string s) {
  const char* ws = " \t\r\n";
  s.erase(0, s.find_first_not_of(ws));
  s.erase(s.find_last_not_of(ws) + 1);
  return s;
}

inline double parse_number(const std::string& text, const std::string& what) {
  std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size()) throw Error(ErrorKind::Usage, what + ": not a number: '" + text + "'");
  return v;
}

inline std::size_t parse_count(const std::string& text, const std::string& what) {
  double v = parse_number(text, what);
  if (v < 1 || v != std::floor(v) || v > 1e9) throw Error(ErrorKind::Usage, what + ": expected a positive integer");
  return static_cast<std::size_t>(v);
}

/// "name=value,name=value"
inline Params parse_params(const std::string& text) {
  Params out;
  for (const auto& item : split(text, ',')) {
    if (trim(item).empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Usage, "--params: expected name=value, got '" + item + "'");
    out[trim(item.substr(0, eq))] = parse_number(item.substr(eq + 1), "--params " + trim(item.substr(0, eq)));
  }
  return out;
}

/// "axis:min:max:count,..."; the axis label is informational.
inline std::vector<Axis> parse_grid(const std::string& text, const std::string& flag) {
  std::vector<Axis> out;
  for (const auto& item : split(text, ',')) {
    auto f = split(item, ':');
    if (f.size() != 4) throw Error(ErrorKind::Usage, flag + ": expected axis:min:max:count, got '" + item + "'");
    out.push_back(Axis{parse_number(f[1], flag), parse_number(f[2], flag), parse_count(f[3], flag + " count")});
  }
  if (out.empty()) throw Error(ErrorKind::Usage, flag + ": empty grid");
  return out;
}

inline Vec parse_vector(const std::string& text, const std::string& flag) {
  auto items = split(text, ',');
  Vec v(static_cast<Eigen::Index>(items.size()));
  for (std::size_t i = 0; i < items.size(); ++i) v[static_cast<Eigen::Index>(i)] = parse_number(items[i], flag);
  if (v.size() == 0) throw Error(ErrorKind::Usage, flag + ": empty vector");
  return v;
}

/// Flat `key = value` lines with `[section]` headers. Keys outside [params]
/// use the long flag names; entries of [params] become system parameters.
struct ConfigFile {
  std::map<std::string, std::string> run;
  Params params;
};

inline ConfigFile read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Usage, "cannot read config " + path);
  ConfigFile cf;
  std::string section, line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    line = trim(line.substr(0, line.find_first_of("#;")));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorKind::Usage, path + ":" + std::to_string(no) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Usage, path + ":" + std::to_string(no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (section == "params")
      cf.params[key] = parse_number(value, path + ":" + std::to_string(no));
    else
      cf.run[key] = value;
  }
  return cf;
}

inline bool parse_bool(const std::string& s, const std::string& what) {
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw Error(ErrorKind::Usage, what + ": expected a boolean");
}

/// Typed configuration from string settings (config file first, flags override).
inline RunConfig build_config(const std::string& command, const std::map<std::string, std::string>& kv,
                              const Params& params) {
  static const std::set<std::string> known{"system", "candidate", "candidate-file", "family", "mode", "diff",
                                           "format", "out", "params", "integrals", "grid", "lambda-grid", "x0",
                                           "seed", "tol", "dt", "steps", "samples", "require-involution"};
  RunConfig c;
  c.command = command;
  c.params = params;
  for (const auto& [k, v] : kv) {
    if (!known.count(k)) throw Error(ErrorKind::Usage, "unknown setting '" + k + "'");
    if (k == "system") c.system = v;
    else if (k == "candidate") c.candidate = v;
    else if (k == "candidate-file") c.candidate_file = v;
    else if (k == "family") c.family = v;
    else if (k == "mode") c.mode = v;
    else if (k == "diff") c.diff = v;
    else if (k == "format") c.format = v;
    else if (k == "out") c.out = v;
    else if (k == "params") {
      for (const auto& [pk, pv] : parse_params(v)) c.params[pk] = pv;
    } else if (k == "integrals") {
      for (const auto& s : split(v, ','))
        if (!trim(s).empty()) c.integrals.push_back(trim(s));
    } else if (k == "grid") c.grid = parse_grid(v, "--grid");
    else if (k == "lambda-grid") c.lambda_grid = parse_grid(v, "--lambda-grid");
    else if (k == "x0") c.x0 = parse_vector(v, "--x0");
    else if (k == "seed") c.seed = parse_vector(v, "--seed");
    else if (k == "tol") c.tol = parse_number(v, "--tol");
    else if (k == "dt") c.dt = parse_number(v, "--dt");
    else if (k == "steps") c.steps = parse_count(v, "--steps");
    else if (k == "samples") c.samples = parse_count(v, "--samples");
    else if (k == "require-involution") c.require_involution = parse_bool(v, "--require-involution");
  }
  if (!(c.tol > 0.0)) throw Error(ErrorKind::Usage, "--tol must be positive");
  if (!(c.dt > 0.0)) throw Error(ErrorKind::Usage, "--dt must be positive");
  if (c.diff != "dual" && c.diff != "central") throw Error(ErrorKind::Usage, "--diff must be dual or central");
  if (c.format != "json" && c.format != "csv") throw Error(ErrorKind::Usage, "--format must be json or csv");
  if (c.mode != "generalized" && c.mode != "standard" && c.mode != "singular_isotropy")
    throw Error(ErrorKind::Usage, "--mode must be generalized, standard or singular_isotropy");
  if (command != "list-systems" && c.system.empty()) throw Error(ErrorKind::Usage, "--system is required");
  return c;
}

}  // namespace hjt::cli
