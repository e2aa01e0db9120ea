#pragma once

// Named worked systems with their candidates, integrals and flows. Every
// descriptor is built from a parameter map; unknown parameter names are
// rejected so that typos on the command line surface as usage errors.

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hjt/foliations.hpp"
#include "hjt/grid.hpp"
#include "hjt/hj_hamiltonian.hpp"
#include "hjt/hj_lagrangian.hpp"
#include "hjt/systems/geodetic.hpp"
#include "hjt/systems/monopole.hpp"
#include "hjt/systems/rigid_body.hpp"
#include "hjt/systems/su2.hpp"
#include "hjt/systems/time_dependent.hpp"

namespace hjt {

using CandidateFactory = std::function<CandidateVectorField(const Params&)>;
using OneFormFactory = std::function<CandidateOneForm(const Params&)>;

/// A complete-solution family: which integrals to invert and how the scan
/// parameters map to their level values.
struct FamilySpec {
  std::vector<std::size_t> indices;
  std::vector<std::string> param_names;
  std::function<Vec(const Vec&)> to_lambda;
  SeedField seed;
  std::vector<Axis> param_box;     // default scan box
  std::vector<Axis> working_grid;  // anchor lattice in Q
  std::string closed_form;         // registered candidate reproduced by the family, if any
};

struct GroupConstraint {
  std::string group;
  Projection project;
};

struct ConservedQuantity {
  std::string name;
  std::function<double(const Vec&)> f;
};

struct SystemDescriptor {
  std::string name;
  std::string description;
  Params params;
  std::optional<LagrangianSystem> lagrangian;
  std::optional<HamiltonianSystem> hamiltonian;
  std::optional<SodeSystem> sode;  // dynamics without a global Lagrangian
  std::optional<GroupConstraint> group;
  std::map<std::string, CandidateFactory> candidates;
  std::map<std::string, OneFormFactory> oneforms;
  std::set<std::string> standard_solutions;  // candidate or 1-form names expected to pass standard mode
  std::optional<IntegralFamily> integrals;
  std::map<std::string, FamilySpec> families;
  std::vector<Axis> grid;       // default configuration grid
  std::vector<Axis> phase_box;  // box for random phase-space samples
  std::optional<VectorField> flow;
  Vec x0;
  std::vector<ConservedQuantity> conserved;
  Projection project;
  std::map<std::string, std::string> metadata;

  CandidateVectorField candidate(const std::string& c) const {
    auto it = candidates.find(c);
    if (it == candidates.end()) throw Error(ErrorKind::UnknownIdentifier, "system " + name + " has no candidate " + c);
    return it->second(params);
  }

  CandidateOneForm oneform(const std::string& c) const {
    auto it = oneforms.find(c);
    if (it == oneforms.end()) throw Error(ErrorKind::UnknownIdentifier, "system " + name + " has no 1-form " + c);
    return it->second(params);
  }

  /// The scalar fields the system registers (L, H, integrals).
  std::vector<ScalarField> scalar_fields() const {
    std::vector<ScalarField> out;
    if (lagrangian) out.push_back(lagrangian->L);
    if (hamiltonian) out.push_back(hamiltonian->H);
    if (sode) out.push_back(sode->energy);
    if (integrals)
      for (const auto& f : integrals->integrals) out.push_back(f);
    return out;
  }
};

namespace detail {

inline Guard box_guard(std::vector<std::pair<std::size_t, double>> positive) {
  return [positive](std::span<const double> x) {
    for (auto [i, lo] : positive)
      if (!(x[i] > lo)) return false;
    return true;
  };
}

template <class F>
CandidateVectorField vector_candidate(std::string name, std::size_t n, F f, Guard g, Params p) {
  return {name, SectionField::make(n, SectionKind::vector, std::move(f), std::move(g), name), std::move(p)};
}

template <class F>
CandidateOneForm oneform_candidate(std::string name, std::size_t n, F f, Guard g, Params p) {
  return {name, SectionField::make(n, SectionKind::oneform, std::move(f), std::move(g), name), std::move(p)};
}

inline Params pick(const Params& p, std::initializer_list<const char*> keys) {
  Params out;
  for (const char* k : keys) out[k] = p.at(k);
  return out;
}

inline double sgn(double s) { return s < 0.0 ? -1.0 : 1.0; }

inline ScalarField quadratic_free(std::size_t n, const char* name) {
  return ScalarField(
      2 * n,
      [n](auto x) {
        using T = elem_t<decltype(x)>;
        T s(0.0);
        for (std::size_t i = 0; i < n; ++i) s += x[n + i] * x[n + i];
        return 0.5 * s;
      },
      {}, name);
}

inline ScalarField oscillator_field(std::size_t n, double sign, const char* name) {
  return ScalarField(
      2 * n,
      [n, sign](auto x) {
        using T = elem_t<decltype(x)>;
        T s(0.0);
        for (std::size_t i = 0; i < n; ++i) s += x[n + i] * x[n + i] + sign * x[i] * x[i];
        return 0.5 * s;
      },
      {}, name);
}

inline Guard off_origin2() {
  return [](std::span<const double> q) { return q[0] * q[0] + q[1] * q[1] > 1e-12; };
}

/// Radial unit field x/|x| and rotational field (-q2, q1)/|x| on R^2 \ {0}.
inline CandidateVectorField radial_field(const Params& p) {
  return vector_candidate(
      "Xradial", 2,
      [](auto q) {
        using T = elem_t<decltype(q)>;
        T r = sqrt(q[0] * q[0] + q[1] * q[1]);
        return std::vector<T>{q[0] / r, q[1] / r};
      },
      off_origin2(), pick(p, {}));
}

inline CandidateVectorField rotational_field(const Params& p) {
  return vector_candidate(
      "Xrot", 2,
      [](auto q) {
        using T = elem_t<decltype(q)>;
        T r = sqrt(q[0] * q[0] + q[1] * q[1]);
        return std::vector<T>{-q[1] / r, q[0] / r};
      },
      off_origin2(), pick(p, {}));
}

inline CandidateVectorField constant_field(const Params& p) {
  double c1 = p.at("c1"), c2 = p.at("c2");
  return vector_candidate(
      "Xconst", 2,
      [c1, c2](auto q) {
        using T = elem_t<decltype(q)>;
        return std::vector<T>{T(c1), T(c2)};
      },
      {}, pick(p, {"c1", "c2"}));
}

inline CandidateOneForm constant_oneform(const Params& p, const char* name) {
  double a1 = p.at("a1"), a2 = p.at("a2");
  return oneform_candidate(
      name, 2,
      [a1, a2](auto q) {
        using T = elem_t<decltype(q)>;
        return std::vector<T>{T(a1), T(a2)};
      },
      {}, pick(p, {"a1", "a2"}));
}

/// sqrt(2E - q^2) componentwise with branch signs; shared by L- and H-side candidates
/// (p = v for the unit-mass oscillator).
inline MapField energy_branch_map(std::size_t n, std::vector<double> two_e, std::vector<double> signs, std::string name) {
  return MapField(
      n, n,
      [n, two_e, signs](auto q) {
        using T = elem_t<decltype(q)>;
        std::vector<T> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = signs[i] * sqrt(two_e[i] - q[i] * q[i]);
        return out;
      },
      [n, two_e](std::span<const double> q) {
        for (std::size_t i = 0; i < n; ++i)
          if (!(two_e[i] - q[i] * q[i] > 1e-12)) return false;
        return true;
      },
      std::move(name));
}

inline IntegralFamily example2_integrals() {
  return {2,
          {ScalarField(4, [](auto x) { return x[2] * x[3] + x[0] * x[1]; }, {}, "f1"),
           ScalarField(4, [](auto x) { return x[2] * x[2] + x[0] * x[0]; }, {}, "f2"),
           ScalarField(4, [](auto x) { return x[3] * x[3] + x[1] * x[1]; }, {}, "f3"),
           ScalarField(4, [](auto x) { return x[0] * x[3] - x[1] * x[2]; }, {}, "f4")},
          {"f1", "f2", "f3", "f4"}};
}

inline SystemDescriptor free2d(const Params&) {
  SystemDescriptor d;
  d.description = "free particle in the plane, L = |v|^2 / 2";
  d.lagrangian = LagrangianSystem(2, quadratic_free(2, "L_free"));
  d.hamiltonian = HamiltonianSystem(2, quadratic_free(2, "H_free"));
  d.candidates["X1"] = [](const Params& p) {
    double k = p.at("k"), l = p.at("l");
    return vector_candidate(
        "X1", 2,
        [k, l](auto q) {
          using T = elem_t<decltype(q)>;
          return std::vector<T>{T(k), (k * q[1] - l) / q[0]};
        },
        [](std::span<const double> q) { return std::abs(q[0]) > 1e-9; }, pick(p, {"k", "l"}));
  };
  d.candidates["Xconst"] = constant_field;
  d.candidates["Xradial"] = radial_field;
  d.oneforms["alpha1"] = [](const Params& p) {
    double k1 = p.at("k1");
    return oneform_candidate(
        "alpha1", 2,
        [k1](auto q) {
          using T = elem_t<decltype(q)>;
          return std::vector<T>{T(0.0), k1 / q[0]};
        },
        [](std::span<const double> q) { return std::abs(q[0]) > 1e-9; }, pick(p, {"k1"}));
  };
  d.oneforms["dW_linear"] = [](const Params& p) { return constant_oneform(p, "dW_linear"); };
  d.standard_solutions = {"Xconst", "Xradial", "dW_linear"};
  d.integrals = IntegralFamily{2,
                               {ScalarField(4, [](auto x) { return x[2]; }, {}, "v1"),
                                ScalarField(4, [](auto x) { return x[3]; }, {}, "v2")},
                               {"v1", "v2"}};
  d.families["v1v2"] = {{0, 1},
                        {"c1", "c2"},
                        [](const Vec& c) { return c; },
                        [](const Vec&) { return to_vec({1.0, 1.0}); },
                        {Axis{-1, 1, 3}, Axis{-1, 1, 3}},
                        square_grid(2, 0.5, 2.0, 5),
                        "Xconst"};
  d.grid = square_grid(2, 0.5, 2.0, 15);
  d.phase_box = {Axis{0.5, 2, 2}, Axis{0.5, 2, 2}, Axis{-2, 2, 2}, Axis{-2, 2, 2}};
  d.flow = lagrangian_vector_field(*d.lagrangian);
  d.x0 = to_vec({0, 0, 1, 2});
  ScalarField e = energy_field(*d.lagrangian);
  d.conserved = {{"E", [e](const Vec& x) { return e(x); }}};
  return d;
}

inline SystemDescriptor ho2d(const Params&) {
  SystemDescriptor d;
  d.description = "isotropic oscillator in the plane, L = (|v|^2 - |q|^2) / 2";
  d.lagrangian = LagrangianSystem(2, oscillator_field(2, -1.0, "L_ho"));
  d.hamiltonian = HamiltonianSystem(2, oscillator_field(2, 1.0, "H_ho"));
  d.candidates["XE"] = [](const Params& p) {
    MapField m = energy_branch_map(2, {2 * p.at("E1"), 2 * p.at("E2")}, {sgn(p.at("s1")), sgn(p.at("s2"))}, "XE");
    return CandidateVectorField{"XE", SectionField(m, SectionKind::vector), pick(p, {"E1", "E2", "s1", "s2"})};
  };
  d.candidates["XCl"] = [](const Params& p) {
    double c = p.at("C"), l = p.at("l"), s = sgn(p.at("s"));
    auto disc = [c, l](double q1, double q2) { return l * l + 4 * q1 * q2 * (c - q1 * q2); };
    return vector_candidate(
        "XCl", 2,
        [c, l, s](auto q) {
          using T = elem_t<decltype(q)>;
          T v1 = (-l + s * sqrt(l * l + 4.0 * q[0] * q[1] * (c - q[0] * q[1]))) / (2.0 * q[1]);
          T v2 = (l + q[1] * v1) / q[0];
          return std::vector<T>{v1, v2};
        },
        [disc](std::span<const double> q) {
          return std::abs(q[0]) > 1e-9 && std::abs(q[1]) > 1e-9 && disc(q[0], q[1]) > 1e-12;
        },
        pick(p, {"C", "l", "s"}));
  };
  d.candidates["Xconst"] = constant_field;
  d.candidates["Xrot"] = rotational_field;
  d.oneforms["alphaE"] = [](const Params& p) {
    MapField m = energy_branch_map(2, {2 * p.at("E1"), 2 * p.at("E2")}, {sgn(p.at("s1")), sgn(p.at("s2"))}, "alphaE");
    return CandidateOneForm{"alphaE", SectionField(m, SectionKind::oneform), pick(p, {"E1", "E2", "s1", "s2"})};
  };
  d.oneforms["alpha_const"] = [](const Params& p) { return constant_oneform(p, "alpha_const"); };
  d.standard_solutions = {"XE", "alphaE"};
  d.integrals = example2_integrals();
  SeedField positive = [](const Vec&) { return to_vec({0.5, 0.5}); };
  d.families["f2f3"] = {{1, 2},
                        {"E1", "E2"},
                        [](const Vec& e) { return Vec(2.0 * e); },
                        positive,
                        {Axis{0.5, 2, 5}, Axis{0.5, 2, 5}},
                        square_grid(2, 0.2, 0.8, 7),
                        "XE"};
  d.families["f1f4"] = {{0, 3},
                        {"C", "l"},
                        [](const Vec& c) { return c; },
                        positive,
                        {Axis{0.8, 1.2, 3}, Axis{-0.1, 0.1, 3}},
                        square_grid(2, 0.2, 0.8, 7),
                        "XCl"};
  d.grid = square_grid(2, 0.2, 0.8, 20);
  d.phase_box = {Axis{-1, 1, 2}, Axis{-1, 1, 2}, Axis{-1, 1, 2}, Axis{-1, 1, 2}};
  d.flow = lagrangian_vector_field(*d.lagrangian);
  d.x0 = to_vec({1, 0, 0, 1});
  for (std::size_t i = 0; i < 4; ++i) {
    ScalarField f = d.integrals->integrals[i];
    d.conserved.push_back({d.integrals->labels[i], [f](const Vec& x) { return f(x); }});
  }
  return d;
}

inline SystemDescriptor ho2d_alt(const Params&) {
  SystemDescriptor d;
  d.description = "oscillator with the alternative Lagrangian L' = v1 v2 - q1 q2";
  d.lagrangian = LagrangianSystem(2, ScalarField(4, [](auto x) { return x[2] * x[3] - x[0] * x[1]; }, {}, "L_alt"));
  d.hamiltonian = HamiltonianSystem(2, ScalarField(4, [](auto x) { return x[2] * x[3] + x[0] * x[1]; }, {}, "H_alt"));
  d.candidates["XE"] = [](const Params& p) {
    MapField m = energy_branch_map(2, {2 * p.at("E1"), 2 * p.at("E2")}, {sgn(p.at("s1")), sgn(p.at("s2"))}, "XE");
    return CandidateVectorField{"XE", SectionField(m, SectionKind::vector), pick(p, {"E1", "E2", "s1", "s2"})};
  };
  d.candidates["Xconst"] = constant_field;
  d.oneforms["alpha_const"] = [](const Params& p) { return constant_oneform(p, "alpha_const"); };
  // p = (v2, v1): FL' o XE
  d.oneforms["alphaE_alt"] = [](const Params& p) {
    MapField xe = energy_branch_map(2, {2 * p.at("E1"), 2 * p.at("E2")}, {sgn(p.at("s1")), sgn(p.at("s2"))}, "XE");
    MapField m(
        2, 2,
        [xe](auto q) {
          auto v = xe.eval<elem_t<decltype(q)>>(q);
          return decltype(v){v[1], v[0]};
        },
        xe.guard(), "alphaE_alt");
    return CandidateOneForm{"alphaE_alt", SectionField(m, SectionKind::oneform), pick(p, {"E1", "E2", "s1", "s2"})};
  };
  d.integrals = example2_integrals();
  d.grid = square_grid(2, 0.2, 0.8, 20);
  d.phase_box = {Axis{-1, 1, 2}, Axis{-1, 1, 2}, Axis{-1, 1, 2}, Axis{-1, 1, 2}};
  d.flow = lagrangian_vector_field(*d.lagrangian);
  d.x0 = to_vec({1, 0, 0, 1});
  ScalarField e = energy_field(*d.lagrangian);
  d.conserved = {{"E", [e](const Vec& x) { return e(x); }}};
  return d;
}

inline SystemDescriptor ho1d(const Params&) {
  SystemDescriptor d;
  d.description = "one-dimensional oscillator, L = (v^2 - q^2) / 2";
  d.lagrangian = LagrangianSystem(1, oscillator_field(1, -1.0, "L_ho1"));
  d.hamiltonian = HamiltonianSystem(1, oscillator_field(1, 1.0, "H_ho1"));
  d.candidates["Xplus"] = [](const Params& p) {
    MapField m = energy_branch_map(1, {2 * p.at("E")}, {sgn(p.at("s"))}, "Xplus");
    return CandidateVectorField{"Xplus", SectionField(m, SectionKind::vector), pick(p, {"E", "s"})};
  };
  d.candidates["Xconst"] = [](const Params& p) {
    double c = p.at("c1");
    return vector_candidate(
        "Xconst", 1, [c](auto q) { return std::vector<elem_t<decltype(q)>>{c + 0.0 * q[0]}; }, {}, pick(p, {"c1"}));
  };
  d.oneforms["alphaE"] = [](const Params& p) {
    MapField m = energy_branch_map(1, {2 * p.at("E")}, {sgn(p.at("s"))}, "alphaE");
    return CandidateOneForm{"alphaE", SectionField(m, SectionKind::oneform), pick(p, {"E", "s"})};
  };
  d.oneforms["dW_half"] = [](const Params& p) {
    return oneform_candidate(
        "dW_half", 1, [](auto q) { return std::vector<elem_t<decltype(q)>>{q[0]}; }, {}, pick(p, {}));
  };
  d.standard_solutions = {"Xplus", "alphaE"};
  d.integrals = IntegralFamily{1, {oscillator_field(1, 1.0, "E")}, {"E"}};
  d.families["E"] = {{0},
                     {"E"},
                     [](const Vec& e) { return Vec(2.0 * e); },
                     [](const Vec&) { return to_vec({1.0}); },
                     {Axis{0.5, 2, 4}},
                     {Axis{-0.9, 0.9, 13}},
                     "Xplus"};
  d.grid = {Axis{-0.9, 0.9, 25}};
  d.phase_box = {Axis{-1, 1, 2}, Axis{-1, 1, 2}};
  d.flow = lagrangian_vector_field(*d.lagrangian);
  d.x0 = to_vec({1, 0});
  ScalarField e = energy_field(*d.lagrangian);
  d.conserved = {{"E", [e](const Vec& x) { return e(x); }}};
  return d;
}

inline void metric_candidates(SystemDescriptor& d) {
  d.candidates["Xunit"] = [](const Params& p) {
    return vector_candidate(
        "Xunit", 2,
        [](auto q) {
          using T = elem_t<decltype(q)>;
          return std::vector<T>{T(1.0) + 0.0 * q[0], T(0.0)};
        },
        {}, pick(p, {}));
  };
  d.candidates["Xradial"] = radial_field;
  d.candidates["Xrot"] = rotational_field;
  d.grid = {Axis{0.5, 1.5, 11}, Axis{-0.4, 0.4, 9}};
  d.phase_box = {Axis{0.5, 1.5, 2}, Axis{-0.4, 0.4, 2}, Axis{0.5, 1.5, 2}, Axis{-0.4, 0.4, 2}};
}

inline Metric registry_metric(const Params& p) {
  return conformal_metric(2, p.at("kappa"), p.at("lorentzian") != 0.0);
}

inline SystemDescriptor relativistic2d(const Params& p) {
  SystemDescriptor d;
  d.description = "relativistic particle L = sqrt(g(v, v)) for g = (1 + kappa |q|^2) eta";
  Metric m = registry_metric(p);
  d.lagrangian = relativistic_lagrangian(m);
  metric_candidates(d);
  if (p.at("kappa") == 0.0) d.standard_solutions = {"Xunit", "Xradial"};
  d.flow = lagrangian_vector_field(*d.lagrangian);
  d.x0 = to_vec({1, 0, 1, 0.2});
  d.metadata["signature"] = m.lorentzian ? "lorentzian" : "riemannian";
  return d;
}

inline SystemDescriptor geodesic2d(const Params& p) {
  SystemDescriptor d;
  d.description = "geodesic flow L = g(v, v) / 2 for g = (1 + kappa |q|^2) eta";
  Metric m = registry_metric(p);
  d.lagrangian = quadratic_lagrangian(m);
  const double kappa = p.at("kappa");
  const double s2 = m.lorentzian ? -1.0 : 1.0;
  d.hamiltonian = HamiltonianSystem(
      2, ScalarField(
             4,
             [kappa, s2](auto x) { return 0.5 * (x[2] * x[2] + s2 * x[3] * x[3]) / (1.0 + kappa * (x[0] * x[0] + x[1] * x[1])); },
             [kappa](std::span<const double> x) { return 1.0 + kappa * (x[0] * x[0] + x[1] * x[1]) > 0.0; }, "H_geodesic"));
  metric_candidates(d);
  d.oneforms["dr"] = [](const Params& p) {
    return CandidateOneForm{"dr",
                            grad_section(ScalarField(
                                2, [](auto q) { return sqrt(q[0] * q[0] + q[1] * q[1]); }, off_origin2(), "r")),
                            pick(p, {})};
  };
  d.oneforms["alpha_rot"] = [](const Params& p) {
    CandidateVectorField r = rotational_field(p);
    return CandidateOneForm{"alpha_rot", SectionField(r.X.map, SectionKind::oneform), pick(p, {})};
  };
  if (kappa == 0.0) {
    d.standard_solutions = {"Xunit", "Xradial"};
    if (!m.lorentzian) d.standard_solutions.insert("dr");
  }
  d.flow = lagrangian_vector_field(*d.lagrangian);
  d.x0 = to_vec({1, 0, 1, 0.2});
  ScalarField e = energy_field(*d.lagrangian);
  d.conserved = {{"E", [e](const Vec& x) { return e(x); }}};
  d.metadata["signature"] = m.lorentzian ? "lorentzian" : "riemannian";
  return d;
}

/// Reference state for the monopole leaf families; the +-0.1 box around x* keeps both
/// fiber Jacobians well away from degeneracy.
inline Vec monopole_reference() { return to_vec({-0.9, -0.4, -0.95, 0.15, 0.05, 0.5}); }

inline SystemDescriptor monopole(const Params& p) {
  const double n = p.at("n");
  SystemDescriptor d;
  d.description = "charged particle in a Dirac monopole field of strength n";
  d.sode = monopole_sode(n);
  d.integrals = IntegralFamily{3,
                               {monopole_energy(), monopole_helicity(n, 0), monopole_helicity(n, 1),
                                monopole_helicity(n, 2), monopole_helicity_squared(n)},
                               {"H", "l1", "l2", "l3", "l_sq"}};
  Vec ref = monopole_reference();
  std::vector<Axis> box;
  for (int i = 0; i < 3; ++i) box.push_back(Axis{ref[i] - 0.1, ref[i] + 0.1, 5});
  IntegralFamily fam = *d.integrals;
  SeedField seed = [ref](const Vec&) { return Vec(ref.tail(3)); };
  auto leaf_candidate = [fam, ref, seed, box](const char* name, std::vector<std::size_t> idx) {
    return [fam, ref, seed, box, name, idx](const Params& p) {
      auto sub = fam.subset(idx);
      Vec lambda = integral_values(sub, ref);
      auto built = build_complete_solution(sub, lambda, seed, box, {}, name);
      CandidateVectorField c = built.X;
      c.params = pick(p, {"n"});
      for (std::size_t i = 0; i < idx.size(); ++i)
        c.params["lambda" + std::to_string(i + 1)] = lambda[static_cast<Eigen::Index>(i)];
      return c;
    };
  };
  d.candidates["Yleaf"] = leaf_candidate("Yleaf", {0, 1, 2});
  d.candidates["Yradial"] = [](const Params& p) {
    double c = p.at("c1");
    return vector_candidate(
        "Yradial", 3,
        [c](auto x) {
          using T = elem_t<decltype(x)>;
          T r = sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
          return std::vector<T>{c * x[0] / r, c * x[1] / r, c * x[2] / r};
        },
        [](std::span<const double> x) { return detail::away_from_origin3(x); }, pick(p, {"n", "c1"}));
  };
  d.families["H_l1_l2"] = {{0, 1, 2}, {"H", "l1", "l2"}, [](const Vec& v) { return v; }, seed,
                           {}, box, "Yleaf"};
  d.families["H_lsq_l3"] = {{0, 4, 3}, {"H", "l_sq", "l3"}, [](const Vec& v) { return v; }, seed,
                            {}, box, ""};
  for (auto& [fname, spec] : d.families) {
    Vec l0 = integral_values(fam.subset(spec.indices), ref);
    for (Eigen::Index i = 0; i < l0.size(); ++i) spec.param_box.push_back(Axis{l0[i] - 0.01, l0[i] + 0.01, 2});
  }
  d.grid = box;
  for (int i = 0; i < 3; ++i) d.phase_box.push_back(Axis{ref[i] - 0.1, ref[i] + 0.1, 2});
  for (int i = 0; i < 3; ++i) d.phase_box.push_back(Axis{ref[3 + i] - 0.1, ref[3 + i] + 0.1, 2});
  d.flow = sode_vector_field(*d.sode);
  d.x0 = to_vec({1, 0, 0, 0, 1, 0});
  for (std::size_t i = 0; i < 4; ++i) {
    ScalarField f = d.integrals->integrals[i];
    d.conserved.push_back({d.integrals->labels[i], [f](const Vec& x) { return f(x); }});
  }
  return d;
}

inline SystemDescriptor su2_free(const Params& p) {
  SystemDescriptor d;
  d.description = "free motion on SU(2), L = Re Tr[(s^-1 s')^2] / 2 in coordinates y0..y3";
  d.lagrangian = su2_free_lagrangian();
  d.group = GroupConstraint{"SU(2)", [](const Vec& x) {
                              Vec out = x;
                              double r = x.head(4).norm();
                              out.head(4) /= r;
                              return out;
                            }};
  d.candidates["Xxi"] = [](const Params& p) {
    auto c = su2_left_invariant(su2_element(to_vec({p.at("xi1"), p.at("xi2"), p.at("xi3")})));
    c.params = pick(p, {"xi1", "xi2", "xi3"});
    return c;
  };
  d.grid = square_grid(4, 0.3, 0.7, 3);
  d.phase_box = {Axis{0.3, 0.7, 2}, Axis{0.3, 0.7, 2}, Axis{0.3, 0.7, 2}, Axis{0.3, 0.7, 2},
                 Axis{-1, 1, 2},   Axis{-1, 1, 2},   Axis{-1, 1, 2},   Axis{-1, 1, 2}};
  d.flow = lagrangian_vector_field(*d.lagrangian);
  d.x0 = concat(to_vec({1, 0, 0, 0}), su2_coords(su2_element(to_vec({p.at("xi1"), p.at("xi2"), p.at("xi3")}))));
  ScalarField e = energy_field(*d.lagrangian);
  d.conserved = {{"E", [e](const Vec& x) { return e(x); }}};
  return d;
}

inline SystemDescriptor rigid_body(const Params& p) {
  Vec inertia = to_vec({p.at("I1"), p.at("I2"), p.at("I3")});
  check_inertia(inertia);
  SystemDescriptor d;
  d.description = "free rigid body on SO(3) with principal moments I1, I2, I3";
  // L(R, R') = 1/2 Omega . I Omega with hat(Omega) the skew part of R^T R'
  d.lagrangian = LagrangianSystem(
      9, ScalarField(18, [inertia](auto x) {
        using T = elem_t<decltype(x)>;
        M3<T> r, dr;
        for (int i = 0; i < 9; ++i) {
          r[i] = x[static_cast<std::size_t>(i)];
          dr[i] = x[static_cast<std::size_t>(9 + i)];
        }
        auto w = vee(mul3(transpose3(r), dr));
        return 0.5 * (inertia[0] * w[0] * w[0] + inertia[1] * w[1] * w[1] + inertia[2] * w[2] * w[2]);
      }, {}, "L_rigid"));
  d.group = GroupConstraint{"SO(3)", rigid_body_project};
  d.flow = rigid_body_flow(inertia);
  d.project = rigid_body_project;
  d.x0 = to_vec({1, 0, 0, 0, 1, 0, 0, 0, 1, 1, 0.01, 0});
  d.conserved = {
      {"kinetic", [inertia](const Vec& x) { Vec o = x.tail(3); return 0.5 * o.dot(inertia.cwiseProduct(o)); }},
      {"m_sq", [inertia](const Vec& x) { return inertia.cwiseProduct(Vec(x.tail(3))).squaredNorm(); }},
      {"F1", [inertia](const Vec& x) { return rigid_body_momentum(inertia, x)[0]; }},
      {"F2", [inertia](const Vec& x) { return rigid_body_momentum(inertia, x)[1]; }},
      {"F3", [inertia](const Vec& x) { return rigid_body_momentum(inertia, x)[2]; }},
  };
  d.metadata["inertia"] = "diag(I1, I2, I3)";
  return d;
}

/// Forced oscillator L = v^2/2 - q^2/2 + q sin t, carried by its homogeneous extension.
inline ScalarField forced_oscillator_td() {
  return ScalarField(3, [](auto x) { return 0.5 * x[2] * x[2] - 0.5 * x[1] * x[1] + x[1] * sin(x[0]); }, {}, "L_td");
}

inline ScalarField forced_oscillator_h_td() {
  return ScalarField(3, [](auto x) { return 0.5 * x[2] * x[2] + 0.5 * x[1] * x[1] - x[1] * sin(x[0]); }, {}, "H_td");
}

inline SystemDescriptor td_forced(const Params&) {
  SystemDescriptor d;
  d.description = "forced oscillator on R x TQ through the homogeneous extension";
  d.lagrangian = homogeneous_extension(forced_oscillator_td());
  d.phase_box = {Axis{0, 1, 2}, Axis{-1, 1, 2}, Axis{0.5, 2, 2}, Axis{-1, 1, 2}};
  // (t, q, v) with t' = 1
  d.flow = VectorField{3,
                       [](const Vec& x) { return to_vec({1.0, x[2], -x[1] + std::sin(x[0])}); },
                       {}};
  d.x0 = to_vec({0, 1, 0});
  return d;
}

struct RegistryEntry {
  std::function<SystemDescriptor(const Params&)> make;
  Params defaults;
};

inline const std::map<std::string, RegistryEntry>& registry_entries() {
  static const std::map<std::string, RegistryEntry> entries{
      {"free2d", {free2d, {{"k", 1}, {"l", 0}, {"k1", 1}, {"c1", 1}, {"c2", 0}, {"a1", 1}, {"a2", 0.5}}}},
      {"ho2d",
       {ho2d,
        {{"E1", 1}, {"E2", 0.5}, {"s1", 1}, {"s2", 1}, {"C", 1}, {"l", 0}, {"s", 1}, {"c1", 1}, {"c2", 0},
         {"a1", 1}, {"a2", 0.5}}}},
      {"ho2d_alt",
       {ho2d_alt, {{"E1", 1}, {"E2", 0.5}, {"s1", 1}, {"s2", 1}, {"c1", 1}, {"c2", 0}, {"a1", 1}, {"a2", 0.5}}}},
      {"ho1d", {ho1d, {{"E", 1}, {"s", 1}, {"c1", 1}}}},
      {"relativistic2d", {relativistic2d, {{"kappa", 0}, {"lorentzian", 0}}}},
      {"geodesic2d", {geodesic2d, {{"kappa", 0}, {"lorentzian", 0}}}},
      {"monopole", {monopole, {{"n", 1}, {"c1", 1}}}},
      {"su2_free", {su2_free, {{"xi1", 0}, {"xi2", 0}, {"xi3", 1}}}},
      {"rigid_body", {rigid_body, {{"I1", 1}, {"I2", 2}, {"I3", 3}}}},
      {"td_forced", {td_forced, {}}},
  };
  return entries;
}

}  // namespace detail

inline std::vector<std::string> system_names() {
  std::vector<std::string> out;
  for (const auto& [name, e] : detail::registry_entries()) out.push_back(name);
  return out;
}

inline Params system_defaults(const std::string& name) {
  auto it = detail::registry_entries().find(name);
  if (it == detail::registry_entries().end()) throw Error(ErrorKind::UnknownIdentifier, "unknown system " + name);
  return it->second.defaults;
}

inline SystemDescriptor make_system(const std::string& name, const Params& overrides = {}) {
  auto it = detail::registry_entries().find(name);
  if (it == detail::registry_entries().end()) throw Error(ErrorKind::UnknownIdentifier, "unknown system " + name);
  Params p = it->second.defaults;
  for (const auto& [k, v] : overrides) {
    if (!p.count(k)) throw Error(ErrorKind::Usage, "system " + name + " has no parameter " + k);
    p[k] = v;
  }
  SystemDescriptor d = it->second.make(p);
  d.name = name;
  d.params = p;
  return d;
}

}  // namespace hjt
