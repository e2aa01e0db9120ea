#pragma once

// Time-dependent Lagrangians via the homogeneous extension on R x TQ and
// the time-dependent Hamilton-Jacobi equation S_t + H(t, q, S_q) = 0.

#include "hjt/calculus.hpp"
#include "hjt/dynamics.hpp"

namespace hjt {

/// L^(x0, x, w0, w) = w0 L(x0, x, w / w0) on w0 > 0; coordinates stacked
/// as (x0, x, w0, w) so the result is a LagrangianSystem of dimension n + 1.
inline LagrangianSystem homogeneous_extension(const ScalarField& l_td) {
  if (l_td.arity() % 2 != 1) throw Error(ErrorKind::DimensionMismatch, "time-dependent L needs arity 1 + 2n");
  const std::size_t n = (l_td.arity() - 1) / 2;
  Guard base = l_td.guard();
  return {n + 1, ScalarField(
                     2 * n + 2,
                     [n, l_td](auto z) {
                       using T = elem_t<decltype(z)>;
                       const T& w0 = z[n + 1];
                       std::vector<T> x(2 * n + 1);
                       for (std::size_t i = 0; i <= n; ++i) x[i] = z[i];
                       for (std::size_t i = 0; i < n; ++i) x[n + 1 + i] = z[n + 2 + i] / w0;
                       return w0 * l_td.eval<T>(std::span<const T>(x));
                     },
                     [n, base](std::span<const double> z) {
                       if (!(z[n + 1] > 0.0)) return false;
                       if (!base) return true;
                       std::vector<double> x(2 * n + 1);
                       for (std::size_t i = 0; i <= n; ++i) x[i] = z[i];
                       for (std::size_t i = 0; i < n; ++i) x[n + 1 + i] = z[n + 2 + i] / z[n + 1];
                       return base(x);
                     },
                     "L_hat")};
}

/// i(t, q, v) = (t, q, 1, v).
inline Vec time_embedding(const Vec& tqv) {
  const auto n = (tqv.size() - 1) / 2;
  Vec z(2 * n + 2);
  z << tqv.head(n + 1), 1.0, tqv.tail(n);
  return z;
}

/// p(x0, x, w0, w) = (x0, x, w / w0).
inline Vec time_projection(const Vec& z) {
  const auto n = (z.size() - 2) / 2;
  if (!(z[n + 1] > 0.0)) throw Error(ErrorKind::GuardViolation, "w0 must be positive");
  Vec out(2 * n + 1);
  out << z.head(n + 1), z.tail(n) / z[n + 1];
  return out;
}

/// S_t + H(t, q, S_q) at (t, q).
inline double td_hj_residual(const ScalarField& h_td, const ScalarField& s, const Vec& tq, const DiffConfig& cfg = {}) {
  const auto n = tq.size() - 1;
  if (h_td.arity() != static_cast<std::size_t>(2 * n + 1))
    throw Error(ErrorKind::DimensionMismatch, "H(t, q, p) arity does not match S(t, q)");
  Vec ds = grad(s, tq, cfg);
  Vec z(2 * n + 1);
  z << tq, ds.tail(n);
  return ds[0] + h_td(z);
}

}  // namespace hjt
