#pragma once

// Metric Lagrangians on R^n: the relativistic particle L = sqrt(g(v, v)) and the
// quadratic L = g(v, v) / 2, plus the geodetic criteria for candidate fields.

#include <cmath>
#include <string>
#include <vector>

#include "hjt/calculus.hpp"
#include "hjt/dynamics.hpp"
#include "hjt/hj_lagrangian.hpp"

namespace hjt {

struct Metric {
  std::size_t n = 0;
  MatrixField g;  // symmetric n x n
  bool lorentzian = false;
};

/// Conformally flat g = (1 + kappa |q|^2) eta with eta = diag(1, ..., 1) or diag(1, -1, ..., -1).
inline Metric conformal_metric(std::size_t n, double kappa, bool lorentzian) {
  return {n,
          MatrixField(
              n, n,
              [n, kappa, lorentzian](auto q) {
                using T = elem_t<decltype(q)>;
                T r2(0.0);
                for (std::size_t i = 0; i < n; ++i) r2 += q[i] * q[i];
                T conf = 1.0 + kappa * r2;
                std::vector<T> out(n * n, T(0.0));
                for (std::size_t i = 0; i < n; ++i) out[i * n + i] = (lorentzian && i > 0) ? -conf : conf;
                return out;
              },
              [kappa](std::span<const double> q) {
                double r2 = 0.0;
                for (double x : q) r2 += x * x;
                return 1.0 + kappa * r2 > 0.0;
              },
              "g"),
          lorentzian};
}

namespace detail {

template <class T>
T metric_quadratic(const std::vector<T>& g, std::span<const T> a, std::span<const T> b) {
  const std::size_t n = a.size();
  T s(0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s += g[i * n + j] * a[i] * b[j];
  return s;
}

/// g_ij at q flattened, as a MapField (R^n -> R^{n^2}).
inline MapField metric_components(const Metric& m) {
  MatrixField g = m.g;
  const std::size_t n = m.n;
  return MapField(n, n * n, [g](auto q) { return g.eval<elem_t<decltype(q)>>(q); }, g.guard(), "g");
}

}  // namespace detail

/// L = sqrt(g(v, v)); the guard keeps v time-like (g(v, v) > 0).
inline LagrangianSystem relativistic_lagrangian(const Metric& m);

/// L = g(v, v) / 2.
inline LagrangianSystem quadratic_lagrangian(const Metric& m) {
  const std::size_t n = m.n;
  MatrixField g = m.g;
  Guard base = g.guard();
  return {n, ScalarField(
                 2 * n,
                 [n, g](auto x) {
                   using T = elem_t<decltype(x)>;
                   auto gm = g.eval<T>(x.first(n));
                   return 0.5 * detail::metric_quadratic<T>(gm, x.subspan(n), x.subspan(n));
                 },
                 [n, base](std::span<const double> x) { return !base || base(x.first(n)); }, "L_geodesic")};
}

/// Gamma^k_ij at q, indexed [k](i, j).
inline std::vector<Mat> christoffel(const Metric& m, const Vec& q, const DiffConfig& cfg = {}) {
  const auto n = static_cast<Eigen::Index>(m.n);
  Mat dg = jacobian(detail::metric_components(m), q, cfg);  // row i*n+j, column k
  auto d = [&](Eigen::Index k, Eigen::Index i, Eigen::Index j) { return dg(i * n + j, k); };
  Mat ginv = lu_inverse(m.g(q));
  std::vector<Mat> gamma(static_cast<std::size_t>(n), Mat::Zero(n, n));
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        double s = 0.0;
        for (Eigen::Index l = 0; l < n; ++l) s += ginv(k, l) * (d(i, l, j) + d(j, l, i) - d(l, i, j));
        gamma[static_cast<std::size_t>(k)](i, j) = 0.5 * s;
      }
  return gamma;
}

inline Vec christoffel_contract(const std::vector<Mat>& gamma, const Vec& a, const Vec& b) {
  Vec out(static_cast<Eigen::Index>(gamma.size()));
  for (std::size_t k = 0; k < gamma.size(); ++k) out[static_cast<Eigen::Index>(k)] = a.dot(gamma[k] * b);
  return out;
}

/// Fixes the reparametrization freedom of sqrt(g(v, v)) by g(a + Gamma(v, v), v) = 0,
/// i.e. the affinely parametrized geodesic.
inline SodeGauge affine_gauge(const Metric& m) {
  return [m](const Vec& x, const Vec& a_min, const Mat& kernel) -> Vec {
    const auto n = static_cast<Eigen::Index>(m.n);
    if (kernel.cols() == 0) return a_min;
    Vec q = x.head(n), v = x.tail(n);
    Mat g = m.g(q);
    Vec k = kernel.col(0);
    double gkv = k.dot(g * v);
    if (std::abs(gkv) < 1e-14) return a_min;
    Vec geo = a_min + christoffel_contract(christoffel(m, q), v, v);
    return a_min - (geo.dot(g * v) / gkv) * k;
  };
}

inline LagrangianSystem relativistic_lagrangian(const Metric& m) {
  const std::size_t n = m.n;
  MatrixField g = m.g;
  Guard base = g.guard();
  return {n,
          ScalarField(
              2 * n,
              [n, g](auto x) {
                using T = elem_t<decltype(x)>;
                auto gm = g.eval<T>(x.first(n));
                return sqrt(detail::metric_quadratic<T>(gm, x.subspan(n), x.subspan(n)));
              },
              [n, g, base](std::span<const double> x) {
                if (base && !base(x.first(n))) return false;
                auto gm = g.eval<double>(x.first(n));
                return detail::metric_quadratic<double>(gm, x.subspan(n), x.subspan(n)) > 1e-12;
              },
              "L_relativistic"),
          affine_gauge(m)};
}

enum class GeodeticKind { relativistic, quadratic };

struct GeodeticCheck {
  Vec nabla;             // nabla_X X
  Vec nabla_residual;    // nabla_X X - lambda X (relativistic) or nabla_X X (quadratic)
  FormMatrix closedness; // d(X^/flat) or d(X flat)
  double lambda = 0.0;
};

inline GeodeticCheck geodetic_solution_check(const Metric& m, const CandidateVectorField& c, const Vec& q,
                                             GeodeticKind kind = GeodeticKind::relativistic,
                                             const DiffConfig& cfg = {}) {
  const std::size_t n = m.n;
  Vec x = c(q);
  Mat g = m.g(q);
  double gxx = x.dot(g * x);
  if (kind == GeodeticKind::relativistic && !(gxx > 0.0))
    throw Error(ErrorKind::NullVector, "g(X, X) = " + std::to_string(gxx) + " at " + detail::format_point(as_span(q)));
  GeodeticCheck out;
  out.nabla = jacobian(c.X.map, q, cfg) * x + christoffel_contract(christoffel(m, q, cfg), x, x);
  if (kind == GeodeticKind::relativistic) {
    out.lambda = out.nabla.dot(g * x) / gxx;
    out.nabla_residual = out.nabla - out.lambda * x;
  } else {
    out.nabla_residual = out.nabla;
  }
  MatrixField gf = m.g;
  MapField w = c.X.map;
  const bool normalize = kind == GeodeticKind::relativistic;
  MapField flat(
      n, n,
      [n, gf, w, normalize](auto y) {
        using T = elem_t<decltype(y)>;
        auto gm = gf.eval<T>(y);
        auto xv = w.eval<T>(y);
        std::vector<T> out(n, T(0.0));
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) out[i] += gm[i * n + j] * xv[j];
        if (normalize) {
          T norm = sqrt(detail::metric_quadratic<T>(gm, std::span<const T>(xv), std::span<const T>(xv)));
          for (auto& o : out) o = o / norm;
        }
        return out;
      },
      w.guard(), "X flat");
  out.closedness = exterior_derivative(flat, q, cfg);
  return out;
}

}  // namespace hjt
