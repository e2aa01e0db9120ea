#pragma once

// Generalized and standard Lagrangian Hamilton-Jacobi residuals for a
// candidate vector field X(q) = (q, w(q)) on configuration space.

#include <map>
#include <string>
#include <vector>

#include "hjt/calculus.hpp"
#include "hjt/dynamics.hpp"
#include "hjt/integrate.hpp"
#include "hjt/parallel.hpp"
#include "hjt/report.hpp"

namespace hjt {

struct CandidateVectorField {
  std::string name;
  SectionField X;
  Params params;

  Vec operator()(const Vec& q) const { return X(q); }
  std::size_t dim() const { return X.base_dim(); }
};

enum class VerifyMode { generalized, standard, singular_isotropy };

inline std::string to_string(VerifyMode m) {
  switch (m) {
    case VerifyMode::generalized: return "generalized";
    case VerifyMode::standard: return "standard";
    case VerifyMode::singular_isotropy: return "singular_isotropy";
  }
  return "?";
}

/// q such that X is defined at q and the lifted point lies in the domain of L.
inline Guard candidate_domain(const LagrangianSystem& sys, const CandidateVectorField& c) {
  return [sys, c](std::span<const double> q) {
    Vec qv = to_vec(q);
    if (!c.X.contains(qv)) return false;
    try {
      return sys.contains(concat(qv, c(qv)));
    } catch (const Error&) {
      return false;
    }
  };
}

struct SodeResidual {
  Vec value;  // component outside ker W (equal to `full` for regular L)
  Vec full;   // (dw/dq) w - a(q, w)
  bool singular = false;
};

inline SodeResidual sode_residual(const LagrangianSystem& sys, const CandidateVectorField& c, const Vec& q,
                                  const DiffConfig& cfg = {}) {
  Vec w = c(q);
  Mat jw = jacobian(c.X.map, q, cfg);
  auto sol = lagrangian_sode(sys, concat(q, w), cfg);
  SodeResidual r;
  r.full = jw * w - sol.a;
  r.singular = sol.singular;
  r.value = sol.singular ? Vec(range_projector(sol.kernel, q.size()) * r.full) : r.full;
  return r;
}

/// W (dw/dq) w + (d^2L/dv dq) w - dL/dq at v = w(q); needs no inverse of W.
inline Vec hj_oneform_residual(const LagrangianSystem& sys, const CandidateVectorField& c, const Vec& q,
                               const DiffConfig& cfg = {}) {
  const auto n = q.size();
  Vec w = c(q);
  Vec x = concat(q, w);
  Mat jw = jacobian(c.X.map, q, cfg);
  Mat wm = fiber_hessian(sys, x, cfg);
  Mat b = mixed_hessian(sys, x, cfg);
  Vec lq = grad(sys.L, x, cfg).head(n);
  return wm * (jw * w) + b * w - lq;
}

/// The same 1-form assembled from forms: -i_X (X* omega_L) + d(X* E_L).
inline Vec hj_oneform_residual_geometric(const LagrangianSystem& sys, const CandidateVectorField& c,
                                         const Vec& q, const DiffConfig& cfg = {}) {
  FormField omega = [&](const Vec& y) { return cartan_forms(sys, y, cfg).omega; };
  FormMatrix xo = pullback_twoform(graph_map(c.X), omega, q, cfg);
  Vec de = grad(along_graph(energy_field(sys), c.X), q, cfg);
  return de - interior_product(c(q), xo);
}

/// || oneform - W . sode || for regular L.
inline double hessian_relation_check(const LagrangianSystem& sys, const CandidateVectorField& c, const Vec& q,
                                     const DiffConfig& cfg = {}) {
  Vec x = concat(q, c(q));
  Mat wm = fiber_hessian(sys, x, cfg);
  if (rcond_estimate(wm) < kSingularRcond)
    throw Error(ErrorKind::SingularHessian, "fiber Hessian at " + detail::format_point(as_span(x)));
  Vec lhs = hj_oneform_residual(sys, c, q, cfg);
  Vec rhs = wm * sode_residual(sys, c, q, cfg).full;
  return max_abs(Vec(lhs - rhs));
}

struct StandardChecks {
  FormMatrix pullback_omega;  // X* omega_L
  Vec d_pullback_energy;      // d(E_L o X)
  double pullback_energy = 0.0;
};

inline StandardChecks standard_checks(const LagrangianSystem& sys, const CandidateVectorField& c, const Vec& q,
                                      const DiffConfig& cfg = {}) {
  FormField omega = [&](const Vec& y) { return cartan_forms(sys, y, cfg).omega; };
  ScalarField ex = along_graph(energy_field(sys), c.X);
  return {pullback_twoform(graph_map(c.X), omega, q, cfg), grad(ex, q, cfg), ex(q)};
}

/// d(X* theta_L), computed through the pullback 1-form rather than omega_L.
inline FormMatrix pullback_theta_differential(const LagrangianSystem& sys, const CandidateVectorField& c,
                                              const Vec& q, const DiffConfig& cfg = {}) {
  return exterior_derivative(pullback_oneform_field(graph_map(c.X), cartan_theta_field(sys)), q, cfg);
}

inline ResidualReport verify(const LagrangianSystem& sys, const CandidateVectorField& c,
                             const std::vector<Vec>& grid, double tol, VerifyMode mode,
                             const DiffConfig& cfg = {}) {
  if (grid.empty()) throw Error(ErrorKind::EmptyGrid, "verify: no samples");
  ResidualReport rep;
  rep.mode = to_string(mode);
  rep.tol = tol;
  rep.samples.resize(grid.size());
  std::vector<char> singular(grid.size(), 0);
  const bool want_standard = mode != VerifyMode::generalized;
  parallel_for(grid.size(), [&](std::size_t i) {
    const Vec& q = grid[i];
    SampleResult s;
    s.point = q;
    auto sr = sode_residual(sys, c, q, cfg);
    singular[i] = sr.singular;
    s.residuals["sode"] = max_abs(sr.value);
    s.residuals["oneform"] = max_abs(hj_oneform_residual(sys, c, q, cfg));
    if (want_standard) {
      auto st = standard_checks(sys, c, q, cfg);
      s.residuals["pullback_omega"] = st.pullback_omega.max_abs();
      s.residuals["d_pullback_energy"] = max_abs(st.d_pullback_energy);
      FormMatrix dtheta = pullback_theta_differential(sys, c, q, cfg);
      s.residuals["isotropy_consistency"] = (st.pullback_omega + dtheta).max_abs();
      s.values["energy"] = st.pullback_energy;
    }
    rep.samples[i] = std::move(s);
  });
  bool any_singular = std::find(singular.begin(), singular.end(), 1) != singular.end();
  std::map<std::string, bool> gating{{"oneform", true}, {"sode", !any_singular}};
  if (mode == VerifyMode::singular_isotropy) gating["sode"] = false;
  if (want_standard) {
    gating["pullback_omega"] = true;
    gating["d_pullback_energy"] = mode == VerifyMode::standard;
    gating["isotropy_consistency"] = false;
  }
  rep.summarize(gating);
  return rep;
}

/// Sup-distance between the lifted integral curve of X from q0 and the
/// Gamma_L curve from (q0, w(q0)).
inline double projection_distance(const LagrangianSystem& sys, const CandidateVectorField& c, const Vec& q0,
                                  double dt, std::size_t steps) {
  auto base = integrate(section_vector_field(c.X), q0, dt, steps);
  auto lifted = integrate(lagrangian_vector_field(sys), concat(q0, c(q0)), dt, steps);
  if (base.aborted || lifted.aborted)
    throw Error(ErrorKind::GuardViolation, "projection check left the domain: " + base.message + lifted.message);
  double worst = 0.0;
  for (std::size_t k = 0; k < base.states.size(); ++k) {
    Vec up = concat(base.states[k], c(base.states[k]));
    worst = std::max(worst, max_abs(Vec(up - lifted.states[k])));
  }
  return worst;
}

}  // namespace hjt
