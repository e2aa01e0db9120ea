#pragma once

// SU(2) in the real coordinates y = (y0, y1, y2, y3):
//   s(y) = [[y0 + i y3, y2 + i y1], [-y2 + i y1, y0 - i y3]],
// free motion L = 1/2 Re Tr[(s^-1 s')^2] on R^4 \ {0}, and the
// left-invariant solution X(s) = s xi.

#include <complex>
#include <cmath>

#include <Eigen/Dense>

#include "hjt/calculus.hpp"
#include "hjt/dynamics.hpp"
#include "hjt/hj_lagrangian.hpp"

namespace hjt {

using Mat2c = Eigen::Matrix2cd;

/// Complex 2x2 matrix with components in a (possibly dual) real type.
template <class T>
struct C2 {
  T re[2][2];
  T im[2][2];

  static C2 from_coords(std::span<const T> y) {
    C2 m;
    m.re[0][0] = y[0], m.im[0][0] = y[3];
    m.re[0][1] = y[2], m.im[0][1] = y[1];
    m.re[1][0] = -y[2], m.im[1][0] = y[1];
    m.re[1][1] = y[0], m.im[1][1] = -y[3];
    return m;
  }

  std::vector<T> coords() const { return {re[0][0], im[0][1], re[0][1], im[0][0]}; }

  C2 adjoint() const {
    C2 m;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        m.re[i][j] = re[j][i];
        m.im[i][j] = -im[j][i];
      }
    return m;
  }

  C2 operator*(const C2& b) const {
    C2 m;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        m.re[i][j] = re[i][0] * b.re[0][j] - im[i][0] * b.im[0][j] + re[i][1] * b.re[1][j] - im[i][1] * b.im[1][j];
        m.im[i][j] = re[i][0] * b.im[0][j] + im[i][0] * b.re[0][j] + re[i][1] * b.im[1][j] + im[i][1] * b.re[1][j];
      }
    return m;
  }

  C2 operator*(const Mat2c& b) const {
    C2 m;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        m.re[i][j] = re[i][0] * b(0, j).real() - im[i][0] * b(0, j).imag() + re[i][1] * b(1, j).real() -
                     im[i][1] * b(1, j).imag();
        m.im[i][j] = re[i][0] * b(0, j).imag() + im[i][0] * b(0, j).real() + re[i][1] * b(1, j).imag() +
                     im[i][1] * b(1, j).real();
      }
    return m;
  }

  T real_trace() const { return re[0][0] + re[1][1]; }
};

/// t_a = -(i/2) sigma_a.
inline Mat2c su2_basis(int a) {
  using C = std::complex<double>;
  const C i(0.0, 1.0);
  Mat2c s;
  switch (a) {
    case 0: s << 0, 1, 1, 0; break;
    case 1: s << 0, -i, i, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return -0.5 * i * s;
}

inline Mat2c su2_element(const Vec& xi) {
  return xi[0] * su2_basis(0) + xi[1] * su2_basis(1) + xi[2] * su2_basis(2);
}

inline void check_su2_algebra(const Mat2c& xi, const char* what) {
  double r = std::max((xi + xi.adjoint()).cwiseAbs().maxCoeff(), std::abs(xi.trace()));
  if (r > 1e-10) throw Error(ErrorKind::NotInAlgebra, std::string(what) + " is not in su(2), residual " + std::to_string(r));
}

inline Mat2c su2_matrix(const Vec& y) {
  using C = std::complex<double>;
  Mat2c s;
  s << C(y[0], y[3]), C(y[2], y[1]), C(-y[2], y[1]), C(y[0], -y[3]);
  return s;
}

inline Vec su2_coords(const Mat2c& m) { return to_vec({m(0, 0).real(), m(0, 1).imag(), m(0, 1).real(), m(0, 0).imag()}); }

/// Nearest group element in these coordinates: y / |y|.
inline Vec su2_project(const Vec& y) {
  double r = y.norm();
  if (!(r > 0.0)) throw Error(ErrorKind::ZeroPoint, "SU(2) projection of the zero matrix");
  return y / r;
}

inline double su2_membership_residual(const Vec& y) {
  Mat2c s = su2_matrix(y);
  return std::max((s * s.adjoint() - Mat2c::Identity()).cwiseAbs().maxCoeff(), std::abs(s.determinant() - 1.0));
}

inline LagrangianSystem su2_free_lagrangian() {
  return {4, ScalarField(
                 8,
                 [](auto x) {
                   using T = elem_t<decltype(x)>;
                   auto s = C2<T>::from_coords(x.first(4));
                   auto ds = C2<T>::from_coords(x.subspan(4));
                   T r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
                   auto m = s.adjoint() * ds;
                   return 0.5 * (m * m).real_trace() / (r2 * r2);
                 },
                 [](std::span<const double> x) {
                   return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3] > 1e-12;
                 },
                 "L_su2")};
}

/// X(s) = s xi, as a vector field on the coordinate space R^4.
inline CandidateVectorField su2_left_invariant(const Mat2c& xi, std::string name = "Xxi") {
  check_su2_algebra(xi, "xi");
  return {name,
          SectionField::make(
              4, SectionKind::vector,
              [xi](auto y) {
                using T = elem_t<decltype(y)>;
                return (C2<T>::from_coords(y) * xi).coords();
              },
              [](std::span<const double> y) { return y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3] > 1e-12; },
              name),
          {}};
}

struct LieGroupCheck {
  double closed_form = 0.0;     // Tr(xi [zeta1, zeta2])
  double pullback_value = 0.0;  // (X* omega_L)(s zeta1, s zeta2), numerically
  double contraction = 0.0;     // (X* omega_L)(X, s zeta2)
};

inline LieGroupCheck lie_group_invariant_solution_check(const Mat2c& xi, const Mat2c& zeta1, const Mat2c& zeta2,
                                                        const Vec& g, const DiffConfig& cfg = {}) {
  check_su2_algebra(xi, "xi");
  check_su2_algebra(zeta1, "zeta1");
  check_su2_algebra(zeta2, "zeta2");
  if (su2_membership_residual(g) > 1e-8)
    throw Error(ErrorKind::GuardViolation, "group element off SU(2): " + detail::format_point(as_span(g)));
  LieGroupCheck out;
  out.closed_form = (xi * (zeta1 * zeta2 - zeta2 * zeta1)).trace().real();
  auto sys = su2_free_lagrangian();
  auto x = su2_left_invariant(xi);
  FormField omega = [&](const Vec& z) { return cartan_forms(sys, z, cfg).omega; };
  FormMatrix pb = pullback_twoform(graph_map(x.X), omega, g, cfg);
  Mat2c s = su2_matrix(g);
  Vec y1 = su2_coords(s * zeta1), y2 = su2_coords(s * zeta2);
  out.pullback_value = pb(y1, y2);
  out.contraction = pb(x(g), y2);
  return out;
}

}  // namespace hjt
