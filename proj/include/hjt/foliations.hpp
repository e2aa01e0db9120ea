#pragma once

// Complete solutions from first integrals: fiber inversion f(q, v) = lambda,
// transversality of Phi(q, lambda) = (q, X_lambda(q)), and the Poisson
// bracket induced by omega_L.

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "hjt/calculus.hpp"
#include "hjt/dynamics.hpp"
#include "hjt/grid.hpp"
#include "hjt/hj_lagrangian.hpp"
#include "hjt/parallel.hpp"

namespace hjt {

struct IntegralFamily {
  std::size_t n = 0;  // configuration dimension = number of integrals used for inversion
  std::vector<ScalarField> integrals;  // each of arity 2n on (q, v)
  std::vector<std::string> labels;

  std::size_t size() const { return integrals.size(); }

  IntegralFamily subset(const std::vector<std::size_t>& idx) const {
    IntegralFamily out{n, {}, {}};
    for (auto i : idx) {
      out.integrals.push_back(integrals.at(i));
      out.labels.push_back(labels.at(i));
    }
    return out;
  }
};

struct LeafSolveConfig {
  double newton_tol = 1e-10;
  int max_iter = 50;
};

/// Relative degeneracy threshold for fiber Jacobians.
inline constexpr double kDegenerateRelative = 1e-8;

/// d f_i / d v^j at (q, v).
inline Mat fiber_jacobian(const IntegralFamily& fam, const Vec& x, const DiffConfig& cfg = {}) {
  const auto k = static_cast<Eigen::Index>(fam.size());
  Mat j(k, static_cast<Eigen::Index>(fam.n));
  for (Eigen::Index i = 0; i < k; ++i)
    j.row(i) = grad(fam.integrals[static_cast<std::size_t>(i)], x, cfg).tail(static_cast<Eigen::Index>(fam.n));
  return j;
}

inline bool is_degenerate(const Mat& j) {
  if (j.rows() != j.cols()) return true;
  double scale = 1.0;
  for (Eigen::Index i = 0; i < j.rows(); ++i) scale *= j.row(i).norm();
  double det = std::abs(j.determinant());
  return !(det > kDegenerateRelative * scale) || scale == 0.0;
}

inline double fiber_independence(const IntegralFamily& fam, const Vec& x, const DiffConfig& cfg = {}) {
  Mat j = fiber_jacobian(fam, x, cfg);
  if (j.rows() != j.cols())
    throw Error(ErrorKind::DimensionMismatch, "fiber_independence needs n integrals");
  return std::abs(j.determinant());
}

inline Vec integral_values(const IntegralFamily& fam, const Vec& x) {
  Vec f(static_cast<Eigen::Index>(fam.size()));
  for (std::size_t i = 0; i < fam.size(); ++i) f[static_cast<Eigen::Index>(i)] = fam.integrals[i](x);
  return f;
}

/// Newton on v -> f(q, v) - lambda.
inline Vec solve_leaf(const IntegralFamily& fam, const Vec& q, const Vec& lambda, const Vec& seed_v,
                      const LeafSolveConfig& cfg = {}) {
  if (fam.size() != fam.n || static_cast<std::size_t>(lambda.size()) != fam.n)
    throw Error(ErrorKind::DimensionMismatch, "solve_leaf needs n integrals and n values");
  Vec v = seed_v;
  for (int it = 0; it <= cfg.max_iter; ++it) {
    Vec x = concat(q, v);
    Vec r;
    Mat j;
    try {
      r = integral_values(fam, x) - lambda;
      j = fiber_jacobian(fam, x);
    } catch (const Error& e) {
      if (it == 0) throw;
      throw Error(ErrorKind::NewtonDiverged, std::string("iterate left the domain: ") + e.what());
    }
    if (max_abs(r) <= cfg.newton_tol) return v;
    if (it == cfg.max_iter) break;
    if (is_degenerate(j)) {
      if (it == 0)
        throw Error(ErrorKind::DegenerateFiberJacobian, "at seed " + detail::format_point(as_span(x)));
      throw Error(ErrorKind::NewtonDiverged, "fiber Jacobian degenerated at " + detail::format_point(as_span(x)));
    }
    v -= j.partialPivLu().solve(r);
    if (!v.allFinite()) break;
  }
  throw Error(ErrorKind::NewtonDiverged,
              "leaf solve at q = " + detail::format_point(as_span(q)) + ", lambda = " +
                  detail::format_point(as_span(lambda)));
}

namespace detail {

/// Lifts a primal leaf root to the dual type of (q, lambda).
template <class T>
std::vector<T> leaf_lift(const IntegralFamily& fam, std::span<const T> q, std::span<const T> lambda,
                         const Vec& v0) {
  const std::size_t n = fam.n;
  Mat j = fiber_jacobian(fam, concat(to_vec(primal_point(q)), v0));
  std::vector<double> root(v0.data(), v0.data() + n);
  auto residual = [&](const std::vector<T>& v) {
    std::vector<T> z(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = q[i];
      z[n + i] = v[i];
    }
    std::vector<T> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = fam.integrals[i].eval<T>(std::span<const T>(z)) - lambda[i];
    return r;
  };
  return chord_lift<T>(root, j, residual);
}

}  // namespace detail

/// Solved anchor points of one leaf, in lattice order; immutable once built.
struct LeafAnchors {
  std::vector<Vec> q;
  std::vector<Vec> v;
  std::size_t failures = 0;

  /// Nearest anchor velocity, or nullptr when none was solved.
  const Vec* nearest(const Vec& at) const {
    const Vec* best = nullptr;
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < q.size(); ++i) {
      double d = (q[i] - at).squaredNorm();
      if (d < dist) {
        dist = d;
        best = &v[i];
      }
    }
    return best;
  }
};

using SeedField = std::function<Vec(const Vec& q)>;

inline LeafAnchors solve_anchors(const IntegralFamily& fam, const Vec& lambda, const SeedField& seed,
                                 const std::vector<Axis>& working_grid, const LeafSolveConfig& cfg = {}) {
  LeafAnchors a;
  for (const Vec& q : lattice(working_grid)) {
    const Vec* near = a.nearest(q);
    Vec s = near ? *near : seed(q);
    try {
      Vec v = solve_leaf(fam, q, lambda, s, cfg);
      a.q.push_back(q);
      a.v.push_back(v);
    } catch (const Error&) {
      if (near) {
        try {
          Vec v = solve_leaf(fam, q, lambda, seed(q), cfg);
          a.q.push_back(q);
          a.v.push_back(v);
          continue;
        } catch (const Error&) {
        }
      }
      ++a.failures;
    }
  }
  return a;
}

struct BuiltSolution {
  CandidateVectorField X;
  std::shared_ptr<const LeafAnchors> anchors;
};

/// X_lambda(q) from the leaf f(q, v) = lambda, branch-continued over the working grid.
inline BuiltSolution build_complete_solution(const IntegralFamily& fam, const Vec& lambda, const SeedField& seed,
                                             const std::vector<Axis>& working_grid,
                                             const LeafSolveConfig& cfg = {}, std::string name = "X_lambda") {
  auto anchors = std::make_shared<const LeafAnchors>(solve_anchors(fam, lambda, seed, working_grid, cfg));
  const std::size_t n = fam.n;
  std::vector<Axis> box = working_grid;
  Guard in_box = [box](std::span<const double> q) {
    for (std::size_t i = 0; i < box.size(); ++i)
      if (q[i] < std::min(box[i].min, box[i].max) || q[i] > std::max(box[i].min, box[i].max)) return false;
    return true;
  };
  MapField x(
      n, n,
      [fam, lambda, seed, anchors, cfg, n](auto q) {
        using T = elem_t<decltype(q)>;
        Vec qp = to_vec(detail::primal_point(q));
        const Vec* near = anchors->nearest(qp);
        Vec v0 = solve_leaf(fam, qp, lambda, near ? *near : seed(qp), cfg);
        std::vector<T> lam(n);
        for (std::size_t i = 0; i < n; ++i) lam[i] = T(lambda[static_cast<Eigen::Index>(i)]);
        return detail::leaf_lift<T>(fam, q, std::span<const T>(lam), v0);
      },
      in_box, name);
  Params params;
  for (std::size_t i = 0; i < n; ++i) params["lambda" + std::to_string(i + 1)] = lambda[static_cast<Eigen::Index>(i)];
  return {{std::move(name), SectionField(x, SectionKind::vector), params}, anchors};
}

/// Phi(q, lambda) = (q, X_lambda(q)) near a solved point, as a map on R^{2n}.
inline MapField phi_map(const IntegralFamily& fam, const Vec& v_seed, const LeafSolveConfig& cfg = {}) {
  const std::size_t n = fam.n;
  return MapField(2 * n, 2 * n, [fam, v_seed, cfg, n](auto z) {
    using T = elem_t<decltype(z)>;
    auto zp = detail::primal_point(z);
    Vec qp = to_vec(std::span<const double>(zp).first(n));
    Vec lp = to_vec(std::span<const double>(zp).subspan(n));
    Vec v0 = solve_leaf(fam, qp, lp, v_seed, cfg);
    auto v = detail::leaf_lift<T>(fam, z.first(n), z.subspan(n), v0);
    std::vector<T> out(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = z[i];
      out[n + i] = v[i];
    }
    return out;
  });
}

/// det DPhi = 1 / det(df/dv), so a degenerating leaf shows up as max_abs_det
/// blowing up and min_inverse_det = min 1/|det DPhi| going to zero.
struct TransversalityReport {
  double min_abs_det = std::numeric_limits<double>::infinity();
  double max_abs_det = 0.0;
  double min_inverse_det = std::numeric_limits<double>::infinity();
  Vec argmin;  // (q, lambda)
  std::size_t cells = 0;
  std::size_t failures = 0;  // leaf solves that did not resolve
};

inline TransversalityReport transversality_check(const IntegralFamily& fam, const std::vector<Vec>& lambdas,
                                                 const std::vector<Axis>& q_grid, const SeedField& seed,
                                                 const DiffConfig& cfg = {},
                                                 const LeafSolveConfig& leaf = {}) {
  if (lambdas.empty()) throw Error(ErrorKind::EmptyGrid, "transversality_check: no parameters");
  std::vector<TransversalityReport> per(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t li) {
    auto anchors = solve_anchors(fam, lambdas[li], seed, q_grid, leaf);
    TransversalityReport& r = per[li];
    r.failures = anchors.failures;
    for (std::size_t k = 0; k < anchors.q.size(); ++k) {
      Vec z = concat(anchors.q[k], lambdas[li]);
      try {
        double d = std::abs(jacobian(phi_map(fam, anchors.v[k], leaf), z, cfg).determinant());
        ++r.cells;
        r.max_abs_det = std::max(r.max_abs_det, d);
        r.min_inverse_det = std::min(r.min_inverse_det, 1.0 / d);
        if (d < r.min_abs_det) {
          r.min_abs_det = d;
          r.argmin = z;
        }
      } catch (const Error&) {
        ++r.failures;
      }
    }
  });
  TransversalityReport out;
  for (const auto& r : per) {
    out.cells += r.cells;
    out.failures += r.failures;
    out.max_abs_det = std::max(out.max_abs_det, r.max_abs_det);
    out.min_inverse_det = std::min(out.min_inverse_det, r.min_inverse_det);
    if (r.min_abs_det < out.min_abs_det) {
      out.min_abs_det = r.min_abs_det;
      out.argmin = r.argmin;
    }
  }
  return out;
}

/// lambda with X_lambda(q) = v, by damped Newton on lambda starting at `lambda_seed`.
inline Vec phi_inverse(const IntegralFamily& fam, const Vec& q, const Vec& v, const Vec& lambda_seed,
                       const LeafSolveConfig& cfg = {}) {
  const auto n = static_cast<Eigen::Index>(fam.n);
  Vec lambda = lambda_seed;
  Vec vl = solve_leaf(fam, q, lambda, v, cfg);
  for (int it = 0; it < cfg.max_iter; ++it) {
    Vec r = vl - v;
    if (max_abs(r) <= cfg.newton_tol) return lambda;
    Mat d = jacobian(phi_map(fam, vl, cfg), concat(q, lambda));
    Vec step = lu_solve(Mat(d.block(n, n, n, n)), r).x;
    bool moved = false;
    for (double t = 1.0; t > 1e-6 && !moved; t *= 0.5) {
      try {
        Vec trial = lambda - t * step;
        Vec vt = solve_leaf(fam, q, trial, vl, cfg);
        if (t < 1.0 && max_abs(Vec(vt - v)) >= max_abs(r)) continue;
        lambda = trial;
        vl = vt;
        moved = true;
      } catch (const Error&) {
      }
    }
    if (!moved) break;
  }
  throw Error(ErrorKind::NewtonDiverged, "Phi inverse at " + detail::format_point(as_span(concat(q, v))));
}

namespace detail {

inline double bracket_with_omega(const Mat& om, const Vec& df, const Vec& dg, const Vec& x) {
  Eigen::PartialPivLU<Mat> lu(om);
  if (!(lu.rcond() >= kSingularRcond))
    throw Error(ErrorKind::SingularOmega, "omega at " + detail::format_point(as_span(x)));
  Mat p = -lu.inverse();
  double sum = 0.0;
  for (Eigen::Index a = 0; a < p.rows(); ++a)
    for (Eigen::Index b = a + 1; b < p.cols(); ++b) {
      double pab = 0.5 * (p(a, b) - p(b, a));
      sum += pab * (df[a] * dg[b] - df[b] * dg[a]);
    }
  return sum;
}

}  // namespace detail

/// {f, g} = df . P . dg with P = -omega_L^{-1}, so {q^i, v^j} = delta^ij for L = v^2/2 - V.
inline double poisson_bracket(const LagrangianSystem& sys, const ScalarField& f, const ScalarField& g,
                              const Vec& x, const DiffConfig& cfg = {}) {
  return detail::bracket_with_omega(cartan_forms(sys, x, cfg).omega.entries(), grad(f, x, cfg), grad(g, x, cfg), x);
}

/// Entry (i, j) = max over the grid of |{f_i, f_j}|.
template <class System>
Mat involution_matrix(const IntegralFamily& fam, const System& sys, const std::vector<Vec>& grid,
                      const DiffConfig& cfg = {}) {
  if (grid.empty()) throw Error(ErrorKind::EmptyGrid, "involution_matrix: no samples");
  const auto k = static_cast<Eigen::Index>(fam.size());
  std::vector<Mat> per(grid.size());
  parallel_for(grid.size(), [&](std::size_t s) {
    Mat m = Mat::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = i + 1; j < k; ++j) {
        double b = std::abs(poisson_bracket(sys, fam.integrals[static_cast<std::size_t>(i)],
                                            fam.integrals[static_cast<std::size_t>(j)], grid[s], cfg));
        m(i, j) = m(j, i) = b;
      }
    per[s] = m;
  });
  Mat out = Mat::Zero(k, k);
  for (const auto& m : per) out = out.cwiseMax(m);
  return out;
}

/// |df . Gamma_L| at x.
inline double first_integral_defect(const LagrangianSystem& sys, const ScalarField& f, const Vec& x,
                                    const DiffConfig& cfg = {}) {
  const auto n = static_cast<Eigen::Index>(sys.n);
  Vec gamma(2 * n);
  gamma << x.tail(n), lagrangian_sode(sys, x, cfg).a;
  return std::abs(grad(f, x, cfg).dot(gamma));
}

}  // namespace hjt
