#pragma once

// The five subcommands. Each returns an exit code and the report text; the
// caller decides where the text goes.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cli/config.hpp"
#include "hjt/expression.hpp"
#include "hjt/systems/registry.hpp"

namespace hjt::cli {

using json = nlohmann::json;

struct Outcome {
  int code = kPass;
  std::string text;
};

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class CsvWriter {
 public:
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << csv_field(cells[i]);
    }
    out_ << "\r\n";
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

inline json to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline DiffConfig diff_config(const RunConfig& c) {
  return c.diff == "central" ? DiffConfig::central() : DiffConfig{};
}

inline VerifyMode verify_mode(const RunConfig& c) {
  if (c.mode == "standard") return VerifyMode::standard;
  if (c.mode == "singular_isotropy") return VerifyMode::singular_isotropy;
  return VerifyMode::generalized;
}

/// Splits --params into the system's own parameters and the rest.
inline std::pair<Params, Params> split_params(const std::string& system, const Params& all) {
  Params defaults = system_defaults(system), own, rest;
  for (const auto& [k, v] : all) (defaults.count(k) ? own : rest)[k] = v;
  return {own, rest};
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Usage, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// A candidate from the registry or from a component file.
struct ResolvedCandidate {
  std::optional<CandidateVectorField> vector;
  std::optional<CandidateOneForm> oneform;
  std::string name;
};

inline ResolvedCandidate resolve_candidate(const SystemDescriptor& d, const RunConfig& c, const Params& extra) {
  ResolvedCandidate r;
  if (!c.candidate_file.empty()) {
    auto src = parse_candidate_source(read_file(c.candidate_file));
    for (const auto& [k, v] : extra)
      if (!src.params.count(k)) throw Error(ErrorKind::Usage, "parameter " + k + " is used by neither system nor candidate");
    Params p = d.params;
    for (const auto& [k, v] : extra) p[k] = v;
    r.name = c.candidate.empty() ? c.candidate_file : c.candidate;
    auto section = expression_section(src, p, r.name);
    Params used;
    for (const auto& k : src.params) used[k] = p.at(k);
    if (src.kind == SectionKind::vector) r.vector = CandidateVectorField{r.name, section, used};
    else r.oneform = CandidateOneForm{r.name, section, used};
    return r;
  }
  if (!extra.empty()) throw Error(ErrorKind::Usage, "system " + d.name + " has no parameter " + extra.begin()->first);
  if (c.candidate.empty()) throw Error(ErrorKind::Usage, "--candidate or --candidate-file is required");
  r.name = c.candidate;
  if (d.candidates.count(c.candidate)) r.vector = d.candidate(c.candidate);
  else if (d.oneforms.count(c.candidate)) r.oneform = d.oneform(c.candidate);
  else throw Error(ErrorKind::UnknownIdentifier, "system " + d.name + " has no candidate " + c.candidate);
  return r;
}

inline std::size_t config_dim(const SystemDescriptor& d) {
  if (d.lagrangian) return d.lagrangian->n;
  if (d.sode) return d.sode->n;
  if (d.hamiltonian) return d.hamiltonian->n;
  return 0;
}

inline std::vector<Axis> config_grid(const SystemDescriptor& d, const RunConfig& c, std::size_t n) {
  std::vector<Axis> g = c.grid ? *c.grid : d.grid;
  if (g.size() != n)
    throw Error(ErrorKind::Usage, "--grid has " + std::to_string(g.size()) + " axes, system needs " + std::to_string(n));
  return g;
}

inline std::string verify_text(const ResidualReport& rep, const RunConfig& c, const SystemDescriptor& d,
                               const std::string& name, const std::string& side, const Params& cparams) {
  if (c.format == "csv") {
    CsvWriter w;
    std::vector<std::string> head;
    const auto n = rep.samples.empty() ? 0 : rep.samples.front().point.size();
    for (Eigen::Index i = 0; i < n; ++i) head.push_back("q" + std::to_string(i + 1));
    std::vector<std::string> chans, vals;
    if (!rep.samples.empty()) {
      for (const auto& [k, v] : rep.samples.front().residuals) chans.push_back(k);
      for (const auto& [k, v] : rep.samples.front().values) vals.push_back(k);
    }
    head.insert(head.end(), chans.begin(), chans.end());
    head.insert(head.end(), vals.begin(), vals.end());
    w.row(head);
    for (const auto& s : rep.samples) {
      std::vector<std::string> row;
      for (Eigen::Index i = 0; i < s.point.size(); ++i) row.push_back(fmt17(s.point[i]));
      for (const auto& k : chans) row.push_back(fmt17(s.residuals.at(k)));
      for (const auto& k : vals) row.push_back(fmt17(s.values.at(k)));
      w.row(row);
    }
    return w.str();
  }
  json j;
  j["system"] = d.name;
  j["candidate"] = name;
  j["side"] = side;
  j["mode"] = rep.mode;
  j["tol"] = rep.tol;
  j["diff"] = c.diff;
  j["samples"] = rep.samples.size();
  j["params"] = json(d.params);
  j["candidate_params"] = json(cparams);
  json ch = json::object();
  for (const auto& [k, s] : rep.channels) ch[k] = {{"max", s.max}, {"argmax_point", to_json(s.argmax)}, {"gating", s.gating}};
  j["channels"] = ch;
  j["verdict"] = rep.pass ? "pass" : "fail";
  return dump(j);
}

inline Outcome run_verify(const RunConfig& c) {
  auto [own, extra] = split_params(c.system, c.params);
  SystemDescriptor d = make_system(c.system, own);
  ResolvedCandidate cand = resolve_candidate(d, c, extra);
  const DiffConfig cfg = diff_config(c);
  const VerifyMode mode = verify_mode(c);
  ResidualReport rep;
  std::string side;
  Params cparams;
  if (cand.vector) {
    const auto& x = *cand.vector;
    cparams = x.params;
    auto axes = config_grid(d, c, x.dim());
    if (d.lagrangian) {
      side = "lagrangian";
      rep = verify(*d.lagrangian, x, lattice(axes, candidate_domain(*d.lagrangian, x)), c.tol, mode, cfg);
    } else if (d.sode) {
      side = "sode";
      rep = verify(*d.sode, x, lattice(axes, candidate_domain(*d.sode, x)), c.tol, mode, cfg);
    } else {
      throw Error(ErrorKind::Usage, "system " + d.name + " has no tangent-bundle dynamics for a vector field");
    }
  } else {
    const auto& a = *cand.oneform;
    cparams = a.params;
    if (!d.hamiltonian) throw Error(ErrorKind::Usage, "system " + d.name + " has no Hamiltonian for a 1-form");
    side = "hamiltonian";
    auto axes = config_grid(d, c, a.dim());
    rep = verify_h(*d.hamiltonian, a, lattice(axes, candidate_domain(*d.hamiltonian, a)), c.tol, mode, cfg);
  }
  return {rep.pass ? kPass : kFail, verify_text(rep, c, d, cand.name, side, cparams)};
}

struct Lifted {
  VectorField base;
  VectorField flow;
  std::function<Vec(const Vec&)> lift;
};

/// integrate --candidate: base curve of X in Q against the dynamics from X(q0).
inline Outcome run_projection(const RunConfig& c, const SystemDescriptor& d, const ResolvedCandidate& cand) {
  Lifted l;
  std::size_t n = 0;
  if (cand.vector) {
    const auto x = *cand.vector;
    n = x.dim();
    l.base = section_vector_field(x.X);
    if (d.lagrangian) l.flow = lagrangian_vector_field(*d.lagrangian, diff_config(c));
    else if (d.sode) l.flow = sode_vector_field(*d.sode);
    else throw Error(ErrorKind::Usage, "system " + d.name + " has no tangent-bundle dynamics");
    l.lift = [x](const Vec& q) { return concat(q, x(q)); };
  } else {
    const auto a = *cand.oneform;
    n = a.dim();
    if (!d.hamiltonian) throw Error(ErrorKind::Usage, "system " + d.name + " has no Hamiltonian");
    HamiltonianSystem h = *d.hamiltonian;
    l.base = VectorField{n, [h, a](const Vec& q) { return associated_field(h, a, q); }, a.alpha.map.guard()};
    l.flow = hamiltonian_vector_field(h, diff_config(c));
    l.lift = [a](const Vec& q) { return concat(q, a(q)); };
  }
  Vec q0;
  if (c.x0) {
    if (static_cast<std::size_t>(c.x0->size()) != n)
      throw Error(ErrorKind::Usage, "--x0 must have " + std::to_string(n) + " components in projection mode");
    q0 = *c.x0;
  } else {
    auto pts = lattice(config_grid(d, c, n), [&](std::span<const double> q) { return l.base.contains(to_vec(q)); });
    if (pts.empty()) throw Error(ErrorKind::EmptyGrid, "no start point in the candidate's domain");
    q0 = pts.front();
  }
  auto base = integrate(l.base, q0, c.dt, c.steps);
  auto up = integrate(l.flow, l.lift(q0), c.dt, c.steps);
  const std::size_t m = std::min(base.states.size(), up.states.size());
  const bool aborted = base.aborted || up.aborted;
  std::vector<double> dist(m);
  double worst = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    dist[k] = max_abs(Vec(l.lift(base.states[k]) - up.states[k]));
    worst = std::max(worst, dist[k]);
  }
  std::string text;
  if (c.format == "csv") {
    CsvWriter w;
    std::vector<std::string> head{"t"};
    for (std::size_t i = 1; i <= n; ++i) head.push_back("q" + std::to_string(i));
    for (std::size_t i = 0; i < 2 * n; ++i) head.push_back("x" + std::to_string(i + 1));
    head.push_back("distance");
    w.row(head);
    for (std::size_t k = 0; k < m; ++k) {
      std::vector<std::string> row{fmt17(base.times[k])};
      for (Eigen::Index i = 0; i < base.states[k].size(); ++i) row.push_back(fmt17(base.states[k][i]));
      for (Eigen::Index i = 0; i < up.states[k].size(); ++i) row.push_back(fmt17(up.states[k][i]));
      row.push_back(fmt17(dist[k]));
      w.row(row);
    }
    std::vector<std::string> summary(head.size());
    summary.front() = aborted ? "max_distance_partial" : "max_distance";
    summary.back() = fmt17(worst);
    w.row(summary);
    text = w.str();
  } else {
    json j{{"system", d.name}, {"candidate", cand.name}, {"dt", c.dt}, {"steps", c.steps},
           {"q0", to_json(q0)}, {"max_distance", worst}, {"aborted", aborted}, {"samples", m}};
    if (aborted) j["message"] = base.message + up.message;
    text = dump(j);
  }
  return {aborted ? kNumeric : kPass, text};
}

inline Outcome run_integrate(const RunConfig& c) {
  auto [own, extra] = split_params(c.system, c.params);
  SystemDescriptor d = make_system(c.system, own);
  if (!c.candidate.empty() || !c.candidate_file.empty()) return run_projection(c, d, resolve_candidate(d, c, extra));
  if (!extra.empty()) throw Error(ErrorKind::Usage, "system " + d.name + " has no parameter " + extra.begin()->first);
  if (!d.flow) throw Error(ErrorKind::Usage, "system " + d.name + " has no registered flow");
  Vec x0 = c.x0 ? *c.x0 : d.x0;
  if (static_cast<std::size_t>(x0.size()) != d.flow->dim)
    throw Error(ErrorKind::Usage, "--x0 must have " + std::to_string(d.flow->dim) + " components");
  auto tr = integrate(*d.flow, x0, c.dt, c.steps, d.project);
  std::vector<double> drift;
  for (const auto& q : d.conserved) drift.push_back(max_drift(tr, q.f));
  std::string text;
  if (c.format == "csv") {
    CsvWriter w;
    std::vector<std::string> head{"t"};
    for (std::size_t i = 0; i < d.flow->dim; ++i) head.push_back("x" + std::to_string(i + 1));
    for (const auto& q : d.conserved) head.push_back(q.name);
    w.row(head);
    for (std::size_t k = 0; k < tr.states.size(); ++k) {
      std::vector<std::string> row{fmt17(tr.times[k])};
      for (Eigen::Index i = 0; i < tr.states[k].size(); ++i) row.push_back(fmt17(tr.states[k][i]));
      for (const auto& q : d.conserved) row.push_back(fmt17(q.f(tr.states[k])));
      w.row(row);
    }
    std::vector<std::string> summary{tr.aborted ? "max_drift_partial" : "max_drift"};
    summary.resize(1 + d.flow->dim);
    for (double v : drift) summary.push_back(fmt17(v));
    w.row(summary);
    text = w.str();
  } else {
    json md = json::object();
    for (std::size_t i = 0; i < drift.size(); ++i) md[d.conserved[i].name] = drift[i];
    json j{{"system", d.name},
           {"dt", c.dt},
           {"steps", c.steps},
           {"x0", to_json(x0)},
           {"final_time", tr.times.back()},
           {"final_state", to_json(tr.states.back())},
           {"max_drift", md},
           {"aborted", tr.aborted}};
    if (tr.aborted) {
      j["abort_step"] = tr.abort_step;
      j["message"] = tr.message;
    }
    text = dump(j);
  }
  return {tr.aborted ? kNumeric : kPass, text};
}

inline IntegralFamily select_integrals(const SystemDescriptor& d, const std::vector<std::string>& labels,
                                       std::vector<std::size_t>* indices = nullptr) {
  if (!d.integrals) throw Error(ErrorKind::Usage, "system " + d.name + " registers no first integrals");
  std::vector<std::size_t> idx;
  if (labels.empty()) {
    for (std::size_t i = 0; i < d.integrals->size(); ++i) idx.push_back(i);
  } else {
    for (const auto& l : labels) {
      auto it = std::find(d.integrals->labels.begin(), d.integrals->labels.end(), l);
      if (it == d.integrals->labels.end())
        throw Error(ErrorKind::UnknownIdentifier, "system " + d.name + " has no integral " + l);
      idx.push_back(static_cast<std::size_t>(it - d.integrals->labels.begin()));
    }
  }
  if (indices) *indices = idx;
  return d.integrals->subset(idx);
}

inline Outcome run_brackets(const RunConfig& c) {
  auto [own, extra] = split_params(c.system, c.params);
  if (!extra.empty()) throw Error(ErrorKind::Usage, "system " + c.system + " has no parameter " + extra.begin()->first);
  SystemDescriptor d = make_system(c.system, own);
  IntegralFamily fam = select_integrals(d, c.integrals);
  const DiffConfig cfg = diff_config(c);
  std::vector<Vec> pts;
  Mat table;
  auto sample = [&](const Guard& g) {
    if (c.grid) {
      if (c.grid->size() != d.phase_box.size())
        throw Error(ErrorKind::Usage, "--grid must span phase space (" + std::to_string(d.phase_box.size()) + " axes)");
      return lattice(*c.grid, g);
    }
    return random_points(d.phase_box, c.samples, 1, g);
  };
  if (d.lagrangian) {
    LagrangianSystem l = *d.lagrangian;
    pts = sample([l](std::span<const double> x) { return l.contains(to_vec(x)); });
    if (pts.empty()) throw Error(ErrorKind::EmptyGrid, "no guarded sample points");
    table = involution_matrix(fam, l, pts, cfg);
  } else if (d.sode) {
    SodeSystem s = *d.sode;
    pts = sample([s](std::span<const double> x) { return s.contains(to_vec(x)); });
    if (pts.empty()) throw Error(ErrorKind::EmptyGrid, "no guarded sample points");
    table = involution_matrix(fam, s, pts, cfg);
  } else {
    throw Error(ErrorKind::Usage, "system " + d.name + " has no symplectic structure to bracket with");
  }
  const bool involutive = table.maxCoeff() <= c.tol;
  std::string text;
  if (c.format == "csv") {
    CsvWriter w;
    std::vector<std::string> head{""};
    head.insert(head.end(), fam.labels.begin(), fam.labels.end());
    w.row(head);
    for (Eigen::Index i = 0; i < table.rows(); ++i) {
      std::vector<std::string> row{fam.labels[static_cast<std::size_t>(i)]};
      for (Eigen::Index j = 0; j < table.cols(); ++j) row.push_back(fmt17(table(i, j)));
      w.row(row);
    }
    text = w.str();
  } else {
    json rows = json::array();
    for (Eigen::Index i = 0; i < table.rows(); ++i) {
      json r = json::array();
      for (Eigen::Index j = 0; j < table.cols(); ++j) r.push_back(table(i, j));
      rows.push_back(r);
    }
    json j{{"system", d.name}, {"integrals", fam.labels}, {"table", rows},  {"tol", c.tol},
           {"samples", pts.size()}, {"involutive", involutive}, {"diff", c.diff}};
    text = dump(j);
  }
  return {c.require_involution && !involutive ? kFail : kPass, text};
}

inline std::pair<std::string, FamilySpec> select_family(const SystemDescriptor& d, const RunConfig& c) {
  if (d.families.empty()) throw Error(ErrorKind::Usage, "system " + d.name + " registers no complete-solution family");
  if (!c.family.empty()) {
    auto it = d.families.find(c.family);
    if (it == d.families.end()) throw Error(ErrorKind::UnknownIdentifier, "system " + d.name + " has no family " + c.family);
    return *it;
  }
  if (!c.integrals.empty()) {
    std::vector<std::size_t> idx;
    select_integrals(d, c.integrals, &idx);
    for (const auto& f : d.families)
      if (f.second.indices == idx) return f;
    throw Error(ErrorKind::Usage, "no registered family uses exactly those integrals");
  }
  if (d.families.size() > 1) throw Error(ErrorKind::Usage, "system " + d.name + " has several families; pass --family");
  return *d.families.begin();
}

inline Outcome run_scan(const RunConfig& c) {
  auto [own, extra] = split_params(c.system, c.params);
  if (!extra.empty()) throw Error(ErrorKind::Usage, "system " + c.system + " has no parameter " + extra.begin()->first);
  SystemDescriptor d = make_system(c.system, own);
  auto [fname, spec] = select_family(d, c);
  IntegralFamily fam = d.integrals->subset(spec.indices);
  std::vector<Axis> box = c.lambda_grid ? *c.lambda_grid : spec.param_box;
  if (box.size() != spec.param_names.size())
    throw Error(ErrorKind::Usage, "--lambda-grid needs " + std::to_string(spec.param_names.size()) + " axes");
  std::vector<Axis> work = c.grid ? *c.grid : spec.working_grid;
  if (work.size() != fam.n) throw Error(ErrorKind::Usage, "--grid needs " + std::to_string(fam.n) + " axes");
  SeedField seed = spec.seed;
  if (c.seed) {
    if (static_cast<std::size_t>(c.seed->size()) != fam.n) throw Error(ErrorKind::Usage, "--seed has the wrong length");
    Vec s = *c.seed;
    seed = [s](const Vec&) { return s; };
  }
  const DiffConfig cfg = diff_config(c);

  struct Cell {
    Vec params, lambda;
    bool generalized = false, standard = false;
    double gen_max = 0.0, std_max = 0.0;
    TransversalityReport trans;
    std::size_t anchors = 0, failures = 0;
    std::string status = "resolved";
  };
  std::vector<Cell> cells;
  for (const Vec& p : lattice(box)) {
    Cell cell;
    cell.params = p;
    cell.lambda = spec.to_lambda(p);
    try {
      auto built = build_complete_solution(fam, cell.lambda, seed, work, {}, fname);
      cell.anchors = built.anchors->q.size();
      cell.failures = built.anchors->failures;
      if (built.anchors->q.empty()) throw Error(ErrorKind::NewtonDiverged, "no point of the working grid lies on the leaf");
      const auto& grid = built.anchors->q;
      auto run = [&](VerifyMode m) {
        return d.lagrangian ? verify(*d.lagrangian, built.X, grid, c.tol, m, cfg)
                            : verify(*d.sode, built.X, grid, c.tol, m, cfg);
      };
      auto g = run(VerifyMode::generalized);
      auto s = run(VerifyMode::standard);
      cell.generalized = g.pass;
      cell.standard = s.pass;
      for (const auto& [k, ch] : g.channels)
        if (ch.gating) cell.gen_max = std::max(cell.gen_max, ch.max);
      for (const auto& [k, ch] : s.channels)
        if (ch.gating) cell.std_max = std::max(cell.std_max, ch.max);
      cell.trans = transversality_check(fam, {cell.lambda}, work, seed, cfg);
    } catch (const Error& e) {
      cell.status = std::string("unresolved: ") + e.what();
    }
    cells.push_back(std::move(cell));
  }
  bool all = std::all_of(cells.begin(), cells.end(), [](const Cell& x) { return x.status == "resolved"; });
  std::string text;
  if (c.format == "csv") {
    CsvWriter w;
    std::vector<std::string> head = spec.param_names;
    for (std::size_t i = 0; i < fam.n; ++i) head.push_back("lambda" + std::to_string(i + 1));
    for (const char* h : {"generalized", "standard", "generalized_max", "standard_max", "min_abs_det", "max_abs_det",
                          "anchors", "failures", "status"})
      head.push_back(h);
    w.row(head);
    for (const auto& x : cells) {
      std::vector<std::string> row;
      for (Eigen::Index i = 0; i < x.params.size(); ++i) row.push_back(fmt17(x.params[i]));
      for (Eigen::Index i = 0; i < x.lambda.size(); ++i) row.push_back(fmt17(x.lambda[i]));
      row.push_back(x.generalized ? "pass" : "fail");
      row.push_back(x.standard ? "pass" : "fail");
      row.push_back(fmt17(x.gen_max));
      row.push_back(fmt17(x.std_max));
      row.push_back(fmt17(x.trans.cells ? x.trans.min_abs_det : 0.0));
      row.push_back(fmt17(x.trans.max_abs_det));
      row.push_back(std::to_string(x.anchors));
      row.push_back(std::to_string(x.failures + x.trans.failures));
      row.push_back(x.status);
      w.row(row);
    }
    text = w.str();
  } else {
    json arr = json::array();
    for (const auto& x : cells) {
      json p = json::object();
      for (std::size_t i = 0; i < spec.param_names.size(); ++i) p[spec.param_names[i]] = x.params[static_cast<Eigen::Index>(i)];
      arr.push_back({{"params", p},
                     {"lambda", to_json(x.lambda)},
                     {"generalized", x.generalized ? "pass" : "fail"},
                     {"standard", x.standard ? "pass" : "fail"},
                     {"generalized_max", x.gen_max},
                     {"standard_max", x.std_max},
                     {"min_abs_det", x.trans.cells ? x.trans.min_abs_det : 0.0},
                     {"max_abs_det", x.trans.max_abs_det},
                     {"anchors", x.anchors},
                     {"failures", x.failures + x.trans.failures},
                     {"status", x.status}});
    }
    json j{{"system", d.name}, {"family", fname}, {"integrals", fam.labels}, {"tol", c.tol},
           {"cells", arr}, {"all_resolved", all}};
    text = dump(j);
  }
  return {all ? kPass : kFail, text};
}

inline Outcome run_list_systems(const RunConfig& c) {
  auto keys = [](const auto& m) {
    std::vector<std::string> out;
    for (const auto& [k, v] : m) out.push_back(k);
    return out;
  };
  if (c.format == "csv") {
    CsvWriter w;
    w.row({"name", "description", "candidates", "oneforms", "families"});
    auto join = [](const std::vector<std::string>& v) {
      std::string s;
      for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
      return s;
    };
    for (const auto& name : system_names()) {
      auto d = make_system(name);
      w.row({name, d.description, join(keys(d.candidates)), join(keys(d.oneforms)), join(keys(d.families))});
    }
    return {kPass, w.str()};
  }
  json arr = json::array();
  for (const auto& name : system_names()) {
    auto d = make_system(name);
    json s{{"name", name},
           {"description", d.description},
           {"params", json(d.params)},
           {"candidates", keys(d.candidates)},
           {"oneforms", keys(d.oneforms)},
           {"families", keys(d.families)},
           {"standard_solutions", std::vector<std::string>(d.standard_solutions.begin(), d.standard_solutions.end())}};
    if (d.integrals) s["integrals"] = d.integrals->labels;
    arr.push_back(s);
  }
  return {kPass, dump(json{{"systems", arr}})};
}

inline Outcome run(const RunConfig& c) {
  if (c.command == "verify") return run_verify(c);
  if (c.command == "integrate") return run_integrate(c);
  if (c.command == "brackets") return run_brackets(c);
  if (c.command == "scan") return run_scan(c);
  if (c.command == "list-systems") return run_list_systems(c);
  throw Error(ErrorKind::Usage, "unknown command " + c.command);
}

}  // namespace hjt::cli
