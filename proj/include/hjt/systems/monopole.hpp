#pragma once

// Charged particle in a Dirac monopole field on R^3 \ {0}: a second-order
// system with non-canonical symplectic form
//   omega = dx^i ^ dv^i + (n / 2r^3) eps_ijk x^i dx^j ^ dx^k,
// conserved H and helicity-corrected angular momentum, and the
// Kustaanheimo-Stiefel lift to R^4 where omega becomes a Cartan 2-form.

#include <cmath>
#include <string>
#include <vector>

#include "hjt/calculus.hpp"
#include "hjt/dynamics.hpp"
#include "hjt/foliations.hpp"
#include "hjt/hj_lagrangian.hpp"
#include "hjt/integrate.hpp"
#include "hjt/parallel.hpp"
#include "hjt/report.hpp"

namespace hjt {

/// Second-order dynamics v' = a(q, v) with i(Gamma) omega = dE, not necessarily Lagrangian.
struct SodeSystem {
  std::size_t n = 0;
  MapField acceleration;  // (q, v) -> a, arity 2n -> n
  MatrixField omega;      // 2n x 2n, FormMatrix convention
  ScalarField energy;     // arity 2n

  bool contains(const Vec& x) const { return energy.contains(x); }
};

inline VectorField sode_vector_field(const SodeSystem& sys) {
  return {2 * sys.n,
          [sys](const Vec& x) {
            Vec out(x.size());
            const auto n = static_cast<Eigen::Index>(sys.n);
            out << x.tail(n), sys.acceleration(x);
            return out;
          },
          sys.energy.guard()};
}

inline Guard candidate_domain(const SodeSystem& sys, const CandidateVectorField& c) {
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

inline Vec sode_residual(const SodeSystem& sys, const CandidateVectorField& c, const Vec& q,
                         const DiffConfig& cfg = {}) {
  Vec w = c(q);
  return jacobian(c.X.map, q, cfg) * w - sys.acceleration(concat(q, w));
}

/// d(Y* E) - i_Y (Y* omega).
inline Vec hj_oneform_residual(const SodeSystem& sys, const CandidateVectorField& c, const Vec& q,
                               const DiffConfig& cfg = {}) {
  FormMatrix yo = pullback_twoform(graph_map(c.X), sys.omega, q, cfg);
  return grad(along_graph(sys.energy, c.X), q, cfg) - interior_product(c(q), yo);
}

/// Bracket of the symplectic form carried by the system (same sign convention as for omega_L).
inline double poisson_bracket(const SodeSystem& sys, const ScalarField& f, const ScalarField& g, const Vec& x,
                              const DiffConfig& cfg = {}) {
  return detail::bracket_with_omega(sys.omega(x), grad(f, x, cfg), grad(g, x, cfg), x);
}

inline ResidualReport verify(const SodeSystem& sys, const CandidateVectorField& c, const std::vector<Vec>& grid,
                             double tol, VerifyMode mode, const DiffConfig& cfg = {}) {
  if (grid.empty()) throw Error(ErrorKind::EmptyGrid, "verify: no samples");
  ResidualReport rep;
  rep.mode = to_string(mode);
  rep.tol = tol;
  rep.samples.resize(grid.size());
  const bool want_standard = mode != VerifyMode::generalized;
  ScalarField ey = along_graph(sys.energy, c.X);
  parallel_for(grid.size(), [&](std::size_t i) {
    const Vec& q = grid[i];
    SampleResult s;
    s.point = q;
    s.residuals["sode"] = max_abs(sode_residual(sys, c, q, cfg));
    s.residuals["oneform"] = max_abs(hj_oneform_residual(sys, c, q, cfg));
    if (want_standard) {
      s.residuals["pullback_omega"] = pullback_twoform(graph_map(c.X), sys.omega, q, cfg).max_abs();
      s.residuals["d_pullback_energy"] = max_abs(grad(ey, q, cfg));
      s.values["energy"] = ey(q);
    }
    rep.samples[i] = std::move(s);
  });
  std::map<std::string, bool> gating{{"oneform", true}, {"sode", mode != VerifyMode::singular_isotropy}};
  if (want_standard) {
    gating["pullback_omega"] = true;
    gating["d_pullback_energy"] = mode == VerifyMode::standard;
  }
  rep.summarize(gating);
  return rep;
}

namespace detail {

inline bool away_from_origin3(std::span<const double> x) {
  return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] > 1e-12;
}

template <class T>
std::array<T, 3> cross3(std::span<const T> a, std::span<const T> b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace detail

/// (n / r^3) x cross v.
inline Vec monopole_acceleration(double n, const Vec& x, const Vec& v) {
  double r = x.head<3>().norm();
  if (!(r > 0.0)) throw Error(ErrorKind::GuardViolation, "monopole field at the origin");
  return (n / (r * r * r)) * Vec(x.head<3>().cross(v.head<3>()));
}

/// l = x cross v + n x / r, component i.
inline ScalarField monopole_helicity(double n, int i) {
  return ScalarField(
      6,
      [n, i](auto x) {
        using T = elem_t<decltype(x)>;
        T r = sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        auto c = detail::cross3<T>(x.first(3), x.subspan(3, 3));
        return c[static_cast<std::size_t>(i)] + n * x[static_cast<std::size_t>(i)] / r;
      },
      [](std::span<const double> x) { return detail::away_from_origin3(x); }, "l" + std::to_string(i + 1));
}

/// |l|^2.
inline ScalarField monopole_helicity_squared(double n) {
  std::array<ScalarField, 3> l{monopole_helicity(n, 0), monopole_helicity(n, 1), monopole_helicity(n, 2)};
  return ScalarField(
      6,
      [l](auto x) {
        using T = elem_t<decltype(x)>;
        T s(0.0);
        for (const auto& li : l) {
          T c = li.eval<T>(x);
          s += c * c;
        }
        return s;
      },
      [](std::span<const double> x) { return detail::away_from_origin3(x); }, "l_sq");
}

inline ScalarField monopole_energy() {
  return ScalarField(
      6, [](auto x) { return 0.5 * (x[3] * x[3] + x[4] * x[4] + x[5] * x[5]); },
      [](std::span<const double> x) { return detail::away_from_origin3(x); }, "H");
}

inline MatrixField monopole_omega(double n) {
  return MatrixField(
      6, 6,
      [n](auto x) {
        using T = elem_t<decltype(x)>;
        std::vector<T> e(36, T(0.0));
        for (std::size_t i = 0; i < 3; ++i) {
          e[i * 6 + 3 + i] = T(1.0);
          e[(3 + i) * 6 + i] = T(-1.0);
        }
        T r = sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        T c = n / (r * r * r);
        // coefficient of dx^j ^ dx^k (j < k) is c eps_ijk x^i
        T b01 = c * x[2], b02 = -c * x[1], b12 = c * x[0];
        e[0 * 6 + 1] = b01, e[1 * 6 + 0] = -b01;
        e[0 * 6 + 2] = b02, e[2 * 6 + 0] = -b02;
        e[1 * 6 + 2] = b12, e[2 * 6 + 1] = -b12;
        return e;
      },
      [](std::span<const double> x) { return detail::away_from_origin3(x); }, "omega_monopole");
}

inline SodeSystem monopole_sode(double n) {
  MapField acc(
      6, 3,
      [n](auto x) {
        using T = elem_t<decltype(x)>;
        T r = sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        auto c = detail::cross3<T>(x.first(3), x.subspan(3, 3));
        T f = n / (r * r * r);
        return std::vector<T>{f * c[0], f * c[1], f * c[2]};
      },
      [](std::span<const double> x) { return detail::away_from_origin3(x); }, "a_monopole");
  return {3, acc, monopole_omega(n), monopole_energy()};
}

/// x = pi(y), the Kustaanheimo-Stiefel map.
template <class T>
std::array<T, 3> ks_map_t(std::span<const T> y) {
  return {2.0 * (y[0] * y[1] + y[2] * y[3]), 2.0 * (y[0] * y[2] - y[1] * y[3]),
          y[0] * y[0] + y[3] * y[3] - y[1] * y[1] - y[2] * y[2]};
}

/// v = T pi(y) u.
template <class T>
std::array<T, 3> ks_velocity_t(std::span<const T> y, std::span<const T> u) {
  return {2.0 * (y[0] * u[1] + u[0] * y[1] + u[2] * y[3] + y[2] * u[3]),
          2.0 * (y[0] * u[2] + u[0] * y[2] - u[3] * y[1] - y[3] * u[1]),
          2.0 * (y[0] * u[0] + y[3] * u[3] - y[1] * u[1] - y[2] * u[2])};
}

inline void check_ks_point(const Vec& y) {
  if (!(y.norm() > 0.0)) throw Error(ErrorKind::ZeroPoint, "KS map at y = 0");
}

inline Vec ks_map(const Vec& y) {
  check_ks_point(y);
  auto x = ks_map_t<double>(as_span(y));
  return to_vec({x[0], x[1], x[2]});
}

/// (x, v) = T pi (y, u), stacked in R^6.
inline Vec ks_tangent(const Vec& y, const Vec& u) {
  check_ks_point(y);
  auto x = ks_map_t<double>(as_span(y));
  auto v = ks_velocity_t<double>(as_span(y), as_span(u));
  return to_vec({x[0], x[1], x[2], v[0], v[1], v[2]});
}

inline MapField ks_tangent_map() {
  return MapField(
      8, 6,
      [](auto z) {
        using T = elem_t<decltype(z)>;
        auto x = ks_map_t<T>(z.first(4));
        auto v = ks_velocity_t<T>(z.first(4), z.subspan(4));
        return std::vector<T>{x[0], x[1], x[2], v[0], v[1], v[2]};
      },
      [](std::span<const double> z) { return z[0] * z[0] + z[1] * z[1] + z[2] * z[2] + z[3] * z[3] > 1e-12; },
      "T pi");
}

/// L(y, u) = 1/2 |T pi(y) u|^2 - 2n (y0 u3 - u0 y3 + y1 u2 - y2 u1) / |y|^2.
inline LagrangianSystem monopole_ks_lagrangian(double n) {
  return {4, ScalarField(
                 8,
                 [n](auto z) {
                   using T = elem_t<decltype(z)>;
                   auto y = z.first(4), u = z.subspan(4);
                   auto v = ks_velocity_t<T>(y, u);
                   T r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3];
                   T kin = 0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
                   T mag = y[0] * u[3] - u[0] * y[3] + y[1] * u[2] - y[2] * u[1];
                   return kin - 2.0 * n * mag / r2;
                 },
                 [](std::span<const double> z) { return z[0] * z[0] + z[1] * z[1] + z[2] * z[2] + z[3] * z[3] > 1e-12; },
                 "L_KS")};
}

/// ||(T pi)* omega - omega_L||_max at (y, u).
inline double monopole_ks_lagrangian_check(double n, const Vec& y, const Vec& u, const DiffConfig& cfg = {}) {
  check_ks_point(y);
  Vec z = concat(y, u);
  FormMatrix up = pullback_twoform(ks_tangent_map(), monopole_omega(n), z, cfg);
  FormMatrix ol = cartan_forms(monopole_ks_lagrangian(n), z, cfg).omega;
  return (up - ol).max_abs();
}

}  // namespace hjt
