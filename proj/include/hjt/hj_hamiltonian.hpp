#pragma once

// Hamiltonian Hamilton-Jacobi residuals for a candidate 1-form alpha = a_i dq^i,
// the classical scalar equation H(q, dW) = E, and the Legendre bridge X -> FL o X.

#include <map>
#include <string>
#include <vector>

#include "hjt/calculus.hpp"
#include "hjt/dynamics.hpp"
#include "hjt/hj_lagrangian.hpp"
#include "hjt/integrate.hpp"
#include "hjt/parallel.hpp"
#include "hjt/report.hpp"

namespace hjt {

struct CandidateOneForm {
  std::string name;
  SectionField alpha;
  Params params;

  Vec operator()(const Vec& q) const { return alpha(q); }
  std::size_t dim() const { return alpha.base_dim(); }
};

inline CandidateOneForm exact_oneform(const ScalarField& w, std::string name = "dW") {
  return {std::move(name), grad_section(w), {}};
}

inline Guard candidate_domain(const HamiltonianSystem& sys, const CandidateOneForm& c) {
  return [sys, c](std::span<const double> q) {
    Vec qv = to_vec(q);
    if (!c.alpha.contains(qv)) return false;
    try {
      return sys.contains(concat(qv, c(qv)));
    } catch (const Error&) {
      return false;
    }
  };
}

/// X^i(q) = dH/dp_i (q, a(q)).
inline Vec associated_field(const HamiltonianSystem& sys, const CandidateOneForm& c, const Vec& q,
                            const DiffConfig& cfg = {}) {
  return grad(sys.H, concat(q, c(q)), cfg).tail(q.size());
}

/// Components of i(X) d(alpha) + d(alpha* H).
inline Vec hamiltonian_residual(const HamiltonianSystem& sys, const CandidateOneForm& c, const Vec& q,
                                const DiffConfig& cfg = {}) {
  Vec x = associated_field(sys, c, q, cfg);
  FormMatrix da = exterior_derivative(c.alpha, q, cfg);
  Vec dh = grad(along_graph(sys.H, c.alpha), q, cfg);
  return interior_product(x, da) + dh;
}

/// Vertical part of T(alpha) X - Z_H o alpha: (da/dq) X + dH/dq.
inline Vec relatedness_residual(const HamiltonianSystem& sys, const CandidateOneForm& c, const Vec& q,
                                const DiffConfig& cfg = {}) {
  Vec z = concat(q, c(q));
  Vec zh = hamiltonian_field(sys, z, cfg);
  Vec x = zh.head(q.size());
  Vec tangent = directional_derivative(c.alpha.map, q, x, cfg);
  return tangent - zh.tail(q.size());
}

struct ClassicalHj {
  std::vector<double> values;  // H(q, dW(q)) per sample
  double spread = 0.0;         // max - min
  double energy = 0.0;         // mean value
};

inline ClassicalHj classical_hj_residual(const HamiltonianSystem& sys, const ScalarField& w,
                                         const std::vector<Vec>& grid, const DiffConfig& cfg = {}) {
  if (grid.empty()) throw Error(ErrorKind::EmptyGrid, "classical_hj_residual: no samples");
  ClassicalHj out;
  out.values.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    out.values[i] = sys.H(concat(grid[i], grad(w, grid[i], cfg)));
  });
  auto [lo, hi] = std::minmax_element(out.values.begin(), out.values.end());
  out.spread = *hi - *lo;
  double sum = 0.0;
  for (double v : out.values) sum += v;
  out.energy = sum / static_cast<double>(out.values.size());
  return out;
}

/// alpha = FL o X. When `check` is nonempty, W(q, w(q)) must be invertible there.
inline CandidateOneForm legendre_bridge(const LagrangianSystem& lsys, const CandidateVectorField& x,
                                        const std::vector<Vec>& check = {}) {
  for (const auto& q : check) {
    Vec z = concat(q, x(q));
    if (rcond_estimate(fiber_hessian(lsys, z)) < kSingularRcond)
      throw Error(ErrorKind::SingularHessian, "Legendre bridge at " + detail::format_point(as_span(z)));
  }
  const std::size_t n = lsys.n;
  ScalarField L = lsys.L;
  MapField w = x.X.map;
  MapField a(
      n, n,
      [n, L, w](auto q) {
        using T = elem_t<decltype(q)>;
        auto v = w.eval<T>(q);
        std::vector<T> z(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
          z[i] = q[i];
          z[n + i] = v[i];
        }
        return grad_t<T>(L, std::span<const T>(z), n, n);
      },
      w.guard(), "FL o " + x.name);
  return {"FL o " + x.name, SectionField(a, SectionKind::oneform), x.params};
}

inline ResidualReport verify_h(const HamiltonianSystem& sys, const CandidateOneForm& c,
                               const std::vector<Vec>& grid, double tol, VerifyMode mode,
                               const DiffConfig& cfg = {}) {
  if (grid.empty()) throw Error(ErrorKind::EmptyGrid, "verify_h: no samples");
  ResidualReport rep;
  rep.mode = to_string(mode);
  rep.tol = tol;
  rep.samples.resize(grid.size());
  const bool standard = mode != VerifyMode::generalized;
  ScalarField ha = along_graph(sys.H, c.alpha);
  parallel_for(grid.size(), [&](std::size_t i) {
    const Vec& q = grid[i];
    SampleResult s;
    s.point = q;
    s.residuals["hamiltonian_residual"] = max_abs(hamiltonian_residual(sys, c, q, cfg));
    s.residuals["relatedness"] = max_abs(relatedness_residual(sys, c, q, cfg));
    if (standard) s.residuals["closedness"] = exterior_derivative(c.alpha, q, cfg).max_abs();
    s.values["energy"] = ha(q);
    rep.samples[i] = std::move(s);
  });
  std::map<std::string, bool> gating{{"hamiltonian_residual", true}, {"relatedness", false}};
  if (standard) gating["closedness"] = true;
  rep.summarize(gating);
  if (standard) {
    std::vector<double> e;
    for (const auto& s : rep.samples) e.push_back(s.values.at("energy"));
    rep.add_global("constancy", stddev(e));
  }
  return rep;
}

/// Sup-distance between the Z_H curve from alpha(q0) and the lift of the
/// associated field's integral curve through alpha.
inline double projection_distance_h(const HamiltonianSystem& sys, const CandidateOneForm& c, const Vec& q0,
                                    double dt, std::size_t steps) {
  VectorField x{c.dim(), [&](const Vec& q) { return associated_field(sys, c, q); }, c.alpha.map.guard()};
  auto base = integrate(x, q0, dt, steps);
  auto lifted = integrate(hamiltonian_vector_field(sys), concat(q0, c(q0)), dt, steps);
  if (base.aborted || lifted.aborted)
    throw Error(ErrorKind::GuardViolation, "projection check left the domain: " + base.message + lifted.message);
  double worst = 0.0;
  for (std::size_t k = 0; k < base.states.size(); ++k)
    worst = std::max(worst, max_abs(Vec(concat(base.states[k], c(base.states[k])) - lifted.states[k])));
  return worst;
}

}  // namespace hjt
