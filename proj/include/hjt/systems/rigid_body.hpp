#pragma once

// Free rigid body on SO(3): Euler equations, the reconstructed flow on
// (R, Omega), and the Hamilton-Jacobi check for the right-invariant
// 1-form alpha_g = <mu, dg g^-1>.

#include <array>
#include <cmath>

#include "hjt/calculus.hpp"
#include "hjt/integrate.hpp"

namespace hjt {

template <class T>
using M3 = std::array<T, 9>;

template <class T>
M3<T> hat(const T& a, const T& b, const T& c) {
  return {T(0.0), -c, b, c, T(0.0), -a, -b, a, T(0.0)};
}

template <class T>
std::array<T, 3> vee(const M3<T>& m) {
  return {0.5 * (m[7] - m[5]), 0.5 * (m[2] - m[6]), 0.5 * (m[3] - m[1])};
}

template <class T, class U>
auto mul3(const M3<T>& a, const M3<U>& b) {
  using R = decltype(a[0] * b[0]);
  M3<R> m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      R s = a[3 * i] * b[j];
      for (int k = 1; k < 3; ++k) s += a[3 * i + k] * b[3 * k + j];
      m[3 * i + j] = s;
    }
  return m;
}

template <class T>
M3<T> transpose3(const M3<T>& a) {
  return {a[0], a[3], a[6], a[1], a[4], a[7], a[2], a[5], a[8]};
}

/// exp of a 3x3 matrix by its Taylor series; used only near 0 in charts.
template <class T>
M3<T> exp3(const M3<T>& a) {
  M3<T> out{T(1.0), T(0.0), T(0.0), T(0.0), T(1.0), T(0.0), T(0.0), T(0.0), T(1.0)};
  M3<T> term = out;
  for (int k = 1; k <= 24; ++k) {
    term = mul3(term, a);
    for (auto& t : term) t = t / static_cast<double>(k);
    for (int i = 0; i < 9; ++i) out[i] += term[i];
  }
  return out;
}

inline M3<double> to_m3(const Mat& r) {
  M3<double> m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[3 * i + j] = r(i, j);
  return m;
}

inline Mat from_m3(const M3<double>& m) {
  Mat r(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = m[3 * i + j];
  return r;
}

inline void check_inertia(const Vec& inertia) {
  if (inertia.size() != 3) throw Error(ErrorKind::DimensionMismatch, "inertia needs 3 principal moments");
  for (int i = 0; i < 3; ++i)
    if (!(inertia[i] > 0.0)) throw Error(ErrorKind::SingularInertia, "principal moment " + std::to_string(inertia[i]));
}

inline double so3_membership_residual(const Mat& r) {
  return std::max(max_abs(Mat(r * r.transpose() - Mat::Identity(3, 3))), std::abs(r.determinant() - 1.0));
}

inline Vec so3_vee(const Mat& z) {
  if (max_abs(Mat(z + z.transpose())) > 1e-10) throw Error(ErrorKind::NotInAlgebra, "matrix is not antisymmetric");
  return to_vec({z(2, 1), z(0, 2), z(1, 0)});
}

/// Omega' = I^-1 (I Omega x Omega); componentwise (I2 - I3) O2 O3 / I1 and cyclic.
inline Vec euler_rhs(const Vec& inertia, const Vec& omega) {
  check_inertia(inertia);
  Vec m = inertia.cwiseProduct(omega);
  return Vec(m.head<3>().cross(omega.head<3>())).cwiseQuotient(inertia);
}

/// Ad_g xi = R xi R^T on so(3), returned in R^3.
template <class T>
std::array<T, 3> adjoint_action(const M3<T>& r, const std::array<double, 3>& xi) {
  M3<T> x = {T(0.0), T(-xi[2]), T(xi[1]), T(xi[2]), T(0.0), T(-xi[0]), T(-xi[1]), T(xi[0]), T(0.0)};
  return vee(mul3(mul3(r, x), transpose3(r)));
}

/// (Ad*_g mu)_j = <mu, Ad_g e_j>.
template <class T>
std::array<T, 3> coadjoint_action(const M3<T>& r, const Vec& mu) {
  std::array<T, 3> out;
  for (int j = 0; j < 3; ++j) {
    std::array<double, 3> e{0.0, 0.0, 0.0};
    e[j] = 1.0;
    auto a = adjoint_action(r, e);
    out[j] = mu[0] * a[0] + mu[1] * a[1] + mu[2] * a[2];
  }
  return out;
}

struct RigidBodyCheck {
  double i_x_dalpha = 0.0;    // (i(X) d alpha)(zeta g)
  double d_alpha_h = 0.0;     // d(alpha* H)(zeta g)
  double sum() const { return i_x_dalpha + d_alpha_h; }
};

inline RigidBodyCheck rigid_body_terms(const Vec& inertia, const Vec& mu, const Mat& g, const Vec& zeta,
                                       const DiffConfig& cfg = {}) {
  check_inertia(inertia);
  if (so3_membership_residual(g) > 1e-8) throw Error(ErrorKind::GuardViolation, "group element off SO(3)");
  const M3<double> r = to_m3(g);
  // right chart c -> exp(hat c) g; alpha_j(c) = <mu, vee(d_j phi phi^-1)>
  MapField alpha(3, 3, [r, mu](auto c) {
    using T = elem_t<decltype(c)>;
    using U = Dual<T>;
    std::vector<T> out(3);
    for (int j = 0; j < 3; ++j) {
      std::array<U, 3> cj{U(c[0]), U(c[1]), U(c[2])};
      cj[static_cast<std::size_t>(j)].d = T(1.0);
      auto phi = mul3(exp3(hat(cj[0], cj[1], cj[2])), r);
      M3<T> dphi, phiv;
      for (int k = 0; k < 9; ++k) {
        dphi[k] = phi[k].d;
        phiv[k] = phi[k].v;
      }
      auto w = vee(mul3(dphi, transpose3(phiv)));
      out[static_cast<std::size_t>(j)] = mu[0] * w[0] + mu[1] * w[1] + mu[2] * w[2];
    }
    return out;
  });
  FormMatrix da = exterior_derivative(alpha, Vec::Zero(3), cfg);
  // X(g) = g I^-1 Ad*_g mu, as a right-chart vector: vee(g hat(Omega) g^-1) = Ad_g Omega
  auto body = coadjoint_action(r, mu);
  std::array<double, 3> omega{body[0] / inertia[0], body[1] / inertia[1], body[2] / inertia[2]};
  auto eta = adjoint_action(r, omega);
  RigidBodyCheck out;
  out.i_x_dalpha = da(to_vec({eta[0], eta[1], eta[2]}), zeta);
  // H(alpha(exp(t zeta) g)) with H = 1/2 <Pi, I^-1 Pi>, Pi = Ad*_g mu
  auto h_along = [&](auto t) {
    using T = decltype(t);
    auto rt = mul3(exp3(hat(t * zeta[0], t * zeta[1], t * zeta[2])), r);
    auto pi = coadjoint_action(rt, mu);
    T h(0.0);
    for (int j = 0; j < 3; ++j) h += 0.5 * pi[static_cast<std::size_t>(j)] * pi[static_cast<std::size_t>(j)] / inertia[j];
    return h;
  };
  if (cfg.mode == DiffMode::dual) {
    out.d_alpha_h = h_along(D1(0.0, 1.0)).d;
  } else {
    out.d_alpha_h = detail::central_derivative([&](const Vec& t) { return h_along(t[0]); }, Vec::Zero(1), 0, cfg);
  }
  return out;
}

inline double rigid_body_solution_check(const Vec& inertia, const Vec& mu, const Mat& g, const Vec& zeta,
                                        const DiffConfig& cfg = {}) {
  return rigid_body_terms(inertia, mu, g, zeta, cfg).sum();
}

/// State (R row-major, Omega) in R^12: R' = R hat(Omega), Omega' = Euler.
inline VectorField rigid_body_flow(const Vec& inertia) {
  check_inertia(inertia);
  return {12,
          [inertia](const Vec& x) {
            M3<double> r;
            for (int i = 0; i < 9; ++i) r[i] = x[i];
            auto dr = mul3(r, hat(x[9], x[10], x[11]));
            Vec out(12);
            for (int i = 0; i < 9; ++i) out[i] = dr[i];
            out.tail<3>() = euler_rhs(inertia, Vec(x.tail<3>()));
            return out;
          },
          {}};
}

/// Re-projects R onto SO(3) after each step.
inline Vec rigid_body_project(const Vec& x) {
  Mat r(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = x[3 * i + j];
  Mat p = polar_project(r);
  Vec out = x;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[3 * i + j] = p(i, j);
  return out;
}

/// Spatial angular momentum F = R I Omega.
inline Vec rigid_body_momentum(const Vec& inertia, const Vec& x) {
  Mat r(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = x[3 * i + j];
  return r * inertia.cwiseProduct(Vec(x.tail<3>()));
}

}  // namespace hjt
