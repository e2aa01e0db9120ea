#pragma once

// Lagrangian and Hamiltonian objects on TQ = R^n x R^n and T*Q = R^n x R^n:
// Cartan forms, energy, the Euler-Lagrange SODE, Z_H and the fiber derivatives.
// Points are stacked (q, v) or (q, p).

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hjt/calculus.hpp"
#include "hjt/field.hpp"
#include "hjt/linalg.hpp"

namespace hjt {

/// Picks one SODE representative out of the affine family a + ker W.
using SodeGauge = std::function<Vec(const Vec& x, const Vec& a_min_norm, const Mat& kernel)>;

struct LagrangianSystem {
  std::size_t n = 0;
  ScalarField L;  // arity 2n, guard = domain in TQ
  SodeGauge gauge;  // only consulted when W is singular

  LagrangianSystem() = default;
  LagrangianSystem(std::size_t dim, ScalarField lagrangian, SodeGauge g = {})
      : n(dim), L(std::move(lagrangian)), gauge(std::move(g)) {
    detail::check_arity(2 * n, L.arity(), "LagrangianSystem");
  }

  bool contains(const Vec& x) const { return L.contains(x); }
};

struct HamiltonianSystem {
  std::size_t n = 0;
  ScalarField H;  // arity 2n on (q, p)

  HamiltonianSystem() = default;
  HamiltonianSystem(std::size_t dim, ScalarField hamiltonian) : n(dim), H(std::move(hamiltonian)) {
    detail::check_arity(2 * n, H.arity(), "HamiltonianSystem");
  }

  bool contains(const Vec& x) const { return H.contains(x); }
};

namespace detail {

inline std::vector<std::size_t> index_range(std::size_t first, std::size_t count) {
  std::vector<std::size_t> idx(count);
  for (std::size_t i = 0; i < count; ++i) idx[i] = first + i;
  return idx;
}

inline void check_point(std::size_t n, const Vec& x, const char* what) {
  check_arity(2 * n, static_cast<std::size_t>(x.size()), what);
}

}  // namespace detail

inline Vec q_part(const Vec& x) { return x.head(x.size() / 2); }
inline Vec fiber_part(const Vec& x) { return x.tail(x.size() / 2); }

/// theta_L = (dL/dv) dq as a 1-form field on R^{2n}.
inline MapField cartan_theta_field(const LagrangianSystem& sys) {
  const std::size_t n = sys.n;
  ScalarField L = sys.L;
  return MapField(
      2 * n, 2 * n,
      [n, L](auto x) {
        using T = elem_t<decltype(x)>;
        auto lv = grad_t<T>(L, x, n, n);
        std::vector<T> out(2 * n, T(0.0));
        for (std::size_t i = 0; i < n; ++i) out[i] = lv[i];
        return out;
      },
      L.guard(), "theta_L");
}

/// E_L = v . dL/dv - L.
inline ScalarField energy_field(const LagrangianSystem& sys) {
  const std::size_t n = sys.n;
  ScalarField L = sys.L;
  return ScalarField(
      2 * n,
      [n, L](auto x) {
        using T = elem_t<decltype(x)>;
        if constexpr (!liftable_v<T>) {
          unsupported_order("E_L");
          return T{};
        } else {
          auto lv = grad_t<T>(L, x, n, n);
          T e = -L.eval<T>(x);
          for (std::size_t i = 0; i < n; ++i) e += x[n + i] * lv[i];
          return e;
        }
      },
      L.guard(), "E_L");
}

struct CartanForms {
  Vec theta;
  FormMatrix omega;
};

inline CartanForms cartan_forms(const LagrangianSystem& sys, const Vec& x, const DiffConfig& cfg = {}) {
  detail::check_point(sys.n, x, "cartan_forms");
  MapField theta = cartan_theta_field(sys);
  return {theta(x), -exterior_derivative(theta, x, cfg)};
}

inline double energy(const LagrangianSystem& sys, const Vec& x, const DiffConfig& = {}) {
  detail::check_point(sys.n, x, "energy");
  return energy_field(sys)(x);
}

/// Fiber Hessian W_ij = d^2 L / dv^i dv^j (symmetrized).
inline Mat fiber_hessian(const LagrangianSystem& sys, const Vec& x, const DiffConfig& cfg = {}) {
  auto v = detail::index_range(sys.n, sys.n);
  Mat w = second_partials(sys.L, x, v, v, cfg);
  return 0.5 * (w + w.transpose());
}

/// B_ij = d^2 L / dv^i dq^j.
inline Mat mixed_hessian(const LagrangianSystem& sys, const Vec& x, const DiffConfig& cfg = {}) {
  return second_partials(sys.L, x, detail::index_range(sys.n, sys.n), detail::index_range(0, sys.n), cfg);
}

inline bool is_regular(const LagrangianSystem& sys, const Vec& x, const DiffConfig& cfg = {}) {
  return rcond_estimate(fiber_hessian(sys, x, cfg)) >= kSingularRcond;
}

struct SodeSolution {
  Vec a;                     // acceleration
  bool singular = false;     // W not invertible; a is a consistent representative
  double consistency = 0.0;  // ||W a - rhs||_inf
  Mat kernel;                // basis of ker W (empty when regular)
};

/// Tolerance for accepting a singular Euler-Lagrange system as consistent.
inline constexpr double kSodeConsistencyTol = 1e-8;

/// Solves W a = dL/dq - B v.
inline SodeSolution lagrangian_sode(const LagrangianSystem& sys, const Vec& x, const DiffConfig& cfg = {}) {
  detail::check_point(sys.n, x, "lagrangian_sode");
  const auto n = static_cast<Eigen::Index>(sys.n);
  Mat w = fiber_hessian(sys, x, cfg);
  Mat b = mixed_hessian(sys, x, cfg);
  Vec lq = grad(sys.L, x, cfg).head(n);
  Vec rhs = lq - b * x.tail(n);
  SodeSolution out;
  if (rcond_estimate(w) >= kSingularRcond) {
    out.a = lu_solve(w, rhs).x;
    out.consistency = max_abs(Vec(w * out.a - rhs));
    return out;
  }
  auto mn = min_norm_solve(w, rhs);
  double scale = std::max(1.0, max_abs(rhs));
  if (!(mn.residual <= kSodeConsistencyTol * scale))
    throw Error(ErrorKind::InconsistentSingularSystem,
                "Euler-Lagrange residual " + std::to_string(mn.residual) + " at " +
                    detail::format_point(as_span(x)));
  out.singular = true;
  out.kernel = mn.kernel;
  out.a = sys.gauge ? sys.gauge(x, mn.x, mn.kernel) : mn.x;
  out.consistency = max_abs(Vec(w * out.a - rhs));
  return out;
}

/// Z_H = (dH/dp, -dH/dq).
inline Vec hamiltonian_field(const HamiltonianSystem& sys, const Vec& x, const DiffConfig& cfg = {}) {
  detail::check_point(sys.n, x, "hamiltonian_field");
  const auto n = static_cast<Eigen::Index>(sys.n);
  Vec g = grad(sys.H, x, cfg);
  Vec z(2 * n);
  z << g.tail(n), -g.head(n);
  return z;
}

/// FL(q, v) = (q, dL/dv).
inline Vec legendre(const LagrangianSystem& sys, const Vec& x, const DiffConfig& cfg = {}) {
  detail::check_point(sys.n, x, "legendre");
  const auto n = static_cast<Eigen::Index>(sys.n);
  Vec out(2 * n);
  out << x.head(n), grad(sys.L, x, cfg).tail(n);
  return out;
}

/// FH(q, p) = (q, dH/dp).
inline Vec fiber_derivative_h(const HamiltonianSystem& sys, const Vec& x, const DiffConfig& cfg = {}) {
  detail::check_point(sys.n, x, "fiber_derivative_h");
  const auto n = static_cast<Eigen::Index>(sys.n);
  Vec out(2 * n);
  out << x.head(n), grad(sys.H, x, cfg).tail(n);
  return out;
}

struct NewtonOptions {
  double tol = 1e-12;
  int max_iter = 50;
};

namespace detail {

/// Chord refinement of a converged primal root: each pass through the fixed
/// primal Jacobian fixes one more order of the dual parts of y, so depth + 1
/// passes make y exact to the nesting of T.
template <class T, class Residual>
std::vector<T> chord_lift(const std::vector<double>& root, const Mat& jac_primal, Residual&& residual) {
  std::vector<T> y(root.begin(), root.end());
  {
    Mat inv = lu_inverse(jac_primal);
    const std::size_t m = root.size();
    // one extra pass polishes the primal root itself
    for (int pass = 0; pass <= dual_depth_v<T> + 1; ++pass) {
      std::vector<T> r = residual(y);
      for (std::size_t i = 0; i < m; ++i) {
        T step(0.0);
        for (std::size_t j = 0; j < m; ++j)
          step += inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * r[j];
        y[i] -= step;
      }
    }
  }
  return y;
}

}  // namespace detail

/// H(q, p) = p . v* - L(q, v*) with dL/dv(q, v*) = p, solved by Newton from `seed`
/// (default: v = p). Available at double, D1 and D2.
inline HamiltonianSystem matched_hamiltonian(const LagrangianSystem& lsys,
                                             std::function<Vec(const Vec& q, const Vec& p)> seed = {},
                                             NewtonOptions opts = {}) {
  const std::size_t n = lsys.n;
  ScalarField L = lsys.L;
  auto solve_primal = [n, L, seed, opts](const Vec& q, const Vec& p) {
    Vec v = seed ? seed(q, p) : p;
    LagrangianSystem sys(n, L);
    auto vi = detail::index_range(n, n);
    for (int it = 0; it < opts.max_iter; ++it) {
      Vec x = concat(q, v);
      Vec r = grad(L, x).tail(static_cast<Eigen::Index>(n)) - p;
      Mat w = second_partials(L, x, vi, vi);
      if (max_abs(r) <= opts.tol * std::max(1.0, max_abs(p))) return std::make_pair(v, Mat(0.5 * (w + w.transpose())));
      if (rcond_estimate(w) < kSingularRcond)
        throw Error(ErrorKind::SingularHessian, "matched Hamiltonian at " + detail::format_point(as_span(x)));
      v -= lu_solve(0.5 * (w + w.transpose()), r).x;
      if (!v.allFinite()) break;
    }
    throw Error(ErrorKind::NewtonDiverged, "inverse Legendre map did not converge at p = " + detail::format_point(as_span(p)));
  };
  ScalarField h(
      2 * n,
      [n, L, solve_primal](auto x) {
        using T = elem_t<decltype(x)>;
        if constexpr (dual_depth_v<T> > 2) {
          unsupported_order("matched Hamiltonian");
          return T{};
        } else {
          Vec q(static_cast<Eigen::Index>(n)), p(static_cast<Eigen::Index>(n));
          for (std::size_t i = 0; i < n; ++i) {
            q[static_cast<Eigen::Index>(i)] = primal(x[i]);
            p[static_cast<Eigen::Index>(i)] = primal(x[n + i]);
          }
          auto [v0, w] = solve_primal(q, p);
          std::vector<double> root(v0.data(), v0.data() + n);
          auto residual = [&](const std::vector<T>& v) {
            std::vector<T> z(2 * n);
            for (std::size_t i = 0; i < n; ++i) {
              z[i] = x[i];
              z[n + i] = v[i];
            }
            auto lv = grad_t<T>(L, std::span<const T>(z), n, n);
            for (std::size_t i = 0; i < n; ++i) lv[i] -= x[n + i];
            return lv;
          };
          std::vector<T> v = detail::chord_lift<T>(root, w, residual);
          std::vector<T> z(2 * n);
          T hv(0.0);
          for (std::size_t i = 0; i < n; ++i) {
            z[i] = x[i];
            z[n + i] = v[i];
            hv += x[n + i] * v[i];
          }
          return hv - L.eval<T>(std::span<const T>(z));
        }
      },
      {}, "H");
  return HamiltonianSystem(n, h);
}

/// Graph of a configuration-space section: q -> (q, s(q)).
inline MapField graph_map(const SectionField& s) {
  const std::size_t n = s.base_dim();
  MapField m = s.map;
  return MapField(
      n, 2 * n,
      [n, m](auto q) {
        using T = elem_t<decltype(q)>;
        auto w = m.eval<T>(q);
        std::vector<T> out(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
          out[i] = q[i];
          out[n + i] = w[i];
        }
        return out;
      },
      m.guard(), "graph");
}

/// Composite q -> f(q, s(q)).
inline ScalarField along_graph(const ScalarField& f, const SectionField& s) {
  const std::size_t n = s.base_dim();
  MapField m = s.map;
  return ScalarField(
      n,
      [n, f, m](auto q) {
        using T = elem_t<decltype(q)>;
        if constexpr (dual_depth_v<T> > 2) {
          unsupported_order("composite along section");
          return T{};
        } else {
          auto w = m.eval<T>(q);
          std::vector<T> z(2 * n);
          for (std::size_t i = 0; i < n; ++i) {
            z[i] = q[i];
            z[n + i] = w[i];
          }
          return f.eval<T>(std::span<const T>(z));
        }
      },
      m.guard(), f.name() + " o graph");
}

}  // namespace hjt
