#pragma once

// Exterior-calculus kernel: gradients, Jacobians, Hessians, exterior
// derivatives, pullbacks and interior products at a point.
//
// Two-form convention: a FormMatrix E stands for sum_{a<b} E_ab dz^a ^ dz^b,
// so dq ^ dv has E[q][v] = 1. For a 1-form beta, (d beta)_ab = d_a beta_b - d_b beta_a.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "hjt/dual.hpp"
#include "hjt/error.hpp"
#include "hjt/field.hpp"
#include "hjt/linalg.hpp"

namespace hjt {

class FormMatrix {
 public:
  FormMatrix() = default;
  explicit FormMatrix(Eigen::Index dim) : e_(Mat::Zero(dim, dim)) {}

  /// Antisymmetrizes (raw - raw^T)/2; the lower triangle is the exact negation of the upper.
  static FormMatrix from_raw(const Mat& raw) {
    if (raw.rows() != raw.cols()) throw Error(ErrorKind::DimensionMismatch, "FormMatrix: not square");
    FormMatrix f(raw.rows());
    for (Eigen::Index i = 0; i < raw.rows(); ++i)
      for (Eigen::Index j = i + 1; j < raw.cols(); ++j) f.set(i, j, 0.5 * (raw(i, j) - raw(j, i)));
    return f;
  }

  Eigen::Index dim() const { return e_.rows(); }
  const Mat& entries() const { return e_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return e_(i, j); }

  void set(Eigen::Index i, Eigen::Index j, double value) {
    if (i == j) return;
    e_(i, j) = value;
    e_(j, i) = -value;
  }

  double max_abs() const { return hjt::max_abs(e_); }

  /// Y1^T E Y2, the form evaluated on a pair of vectors.
  double operator()(const Vec& y1, const Vec& y2) const { return y1.dot(e_ * y2); }

  FormMatrix operator-() const { return from_upper(-e_); }
  friend FormMatrix operator+(const FormMatrix& a, const FormMatrix& b) { return from_upper(a.e_ + b.e_); }
  friend FormMatrix operator-(const FormMatrix& a, const FormMatrix& b) { return from_upper(a.e_ - b.e_); }
  friend FormMatrix operator*(double s, const FormMatrix& a) { return from_upper(s * a.e_); }

 private:
  static FormMatrix from_upper(const Mat& m) {
    FormMatrix f(m.rows());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = i + 1; j < m.cols(); ++j) f.set(i, j, m(i, j));
    return f;
  }

  Mat e_;
};

using FormField = std::function<FormMatrix(const Vec&)>;

// ---------------------------------------------------------------------------
// Typed forward-mode helpers. Differentiating at T costs one evaluation at
// Dual<T> per direction, so these compose up to the nesting the fields support.

template <class T>
std::vector<Dual<T>> seed_direction(std::span<const T> x, std::size_t i) {
  std::vector<Dual<T>> xs(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) xs[k] = Dual<T>(x[k], T(k == i ? 1.0 : 0.0));
  return xs;
}

template <class T>
std::vector<Dual<T>> seed_vector(std::span<const T> x, std::span<const T> dir) {
  std::vector<Dual<T>> xs(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) xs[k] = Dual<T>(x[k], dir[k]);
  return xs;
}

/// Partial derivatives d f / d x_k for k in [first, first + count).
template <class T>
std::vector<T> grad_t(const ScalarField& f, std::span<const T> x, std::size_t first = 0,
                      std::size_t count = static_cast<std::size_t>(-1)) {
  count = std::min(count, x.size() - first);
  std::vector<T> g(count);
  for (std::size_t k = 0; k < count; ++k) {
    auto xs = seed_direction<T>(x, first + k);
    g[k] = f.eval<Dual<T>>(std::span<const Dual<T>>(xs)).d;
  }
  return g;
}

/// Directional derivative of a scalar field.
template <class T>
T directional_t(const ScalarField& f, std::span<const T> x, std::span<const T> dir) {
  auto xs = seed_vector<T>(x, dir);
  return f.eval<Dual<T>>(std::span<const Dual<T>>(xs)).d;
}

/// Jacobian-vector product of a map field.
template <class T>
std::vector<T> jvp_t(const MapField& f, std::span<const T> x, std::span<const T> dir) {
  auto xs = seed_vector<T>(x, dir);
  auto r = f.eval<Dual<T>>(std::span<const Dual<T>>(xs));
  std::vector<T> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = r[i].d;
  return out;
}

/// Row-major Jacobian: out[i * in + j] = d f_i / d x_j.
template <class T>
std::vector<T> jacobian_t(const MapField& f, std::span<const T> x) {
  const std::size_t m = f.out_dim(), n = x.size();
  std::vector<T> jac(m * n);
  for (std::size_t j = 0; j < n; ++j) {
    auto xs = seed_direction<T>(x, j);
    auto r = f.eval<Dual<T>>(std::span<const Dual<T>>(xs));
    for (std::size_t i = 0; i < m; ++i) jac[i * n + j] = r[i].d;
  }
  return jac;
}

/// The 1-form df as a section (components evaluated by forward mode).
inline SectionField grad_section(const ScalarField& f) {
  auto fn = [f](auto x) {
    using T = typename decltype(x)::element_type;
    return grad_t<std::remove_const_t<T>>(f, x);
  };
  return SectionField(MapField(f.arity(), f.arity(), fn, f.guard(), "d" + f.name()),
                      SectionKind::oneform);
}

/// phi* beta as a 1-form field on the source of phi (available at double and D1).
inline MapField pullback_oneform_field(const MapField& phi, const MapField& beta) {
  return MapField(
      phi.in_dim(), phi.in_dim(),
      [phi, beta](auto x) {
        using T = elem_t<decltype(x)>;
        const std::size_t n = x.size(), m = phi.out_dim();
        std::vector<T> out(n, T(0.0));
        if constexpr (!map_liftable_v<T>) {
          unsupported_order("pullback of a 1-form field");
        } else {
          auto y = phi.eval<T>(x);
          auto b = beta.eval<T>(std::span<const T>(y));
          auto jac = jacobian_t<T>(phi, x);
          for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < m; ++k) out[j] += b[k] * jac[k * n + j];
        }
        return out;
      },
      phi.guard(), "pullback");
}

// ---------------------------------------------------------------------------
// Point-level operators honoring DiffConfig.

namespace detail {

template <class F>
auto central_difference(F&& f, const Vec& x, Eigen::Index k, double h) {
  Vec xp = x, xm = x;
  xp[k] += h;
  xm[k] -= h;
  auto fp = f(xp);
  auto fm = f(xm);
  return decltype(fp)((fp - fm) / (2.0 * h));
}

template <class F>
auto central_derivative(F&& f, const Vec& x, Eigen::Index k, const DiffConfig& cfg) {
  auto d1 = central_difference(f, x, k, cfg.step);
  if (!cfg.richardson) return d1;
  auto d2 = central_difference(f, x, k, 0.5 * cfg.step);
  return decltype(d1)((4.0 * d2 - d1) / 3.0);
}

inline std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

}  // namespace detail

inline Vec grad(const ScalarField& f, const Vec& x, const DiffConfig& cfg = {}) {
  detail::check_arity(f.arity(), static_cast<std::size_t>(x.size()), "grad");
  if (cfg.mode == DiffMode::dual) return to_vec(grad_t<double>(f, as_span(x)));
  f(x);  // guard and finiteness at the base point itself
  Vec g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k)
    g[k] = detail::central_derivative([&](const Vec& y) { return f(y); }, x, k, cfg);
  return g;
}

inline Mat jacobian(const MapField& f, const Vec& x, const DiffConfig& cfg = {}) {
  detail::check_arity(f.in_dim(), static_cast<std::size_t>(x.size()), "jacobian");
  const auto m = static_cast<Eigen::Index>(f.out_dim());
  Mat jac(m, x.size());
  if (cfg.mode == DiffMode::dual) {
    auto r = jacobian_t<double>(f, as_span(x));
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < x.size(); ++j) jac(i, j) = r[static_cast<std::size_t>(i * x.size() + j)];
    return jac;
  }
  f(x);
  for (Eigen::Index j = 0; j < x.size(); ++j)
    jac.col(j) = detail::central_derivative([&](const Vec& y) { return f(y); }, x, j, cfg);
  return jac;
}

struct Hessian {
  Mat value;             // symmetrized (M + M^T)/2
  double raw_asymmetry;  // max |M - M^T| of the raw computation
};

/// Second partials d^2 f / dx_r dx_c for r in rows, c in cols (raw, not symmetrized).
inline Mat second_partials(const ScalarField& f, const Vec& x, std::span<const std::size_t> rows,
                           std::span<const std::size_t> cols, const DiffConfig& cfg = {}) {
  detail::check_arity(f.arity(), static_cast<std::size_t>(x.size()), "hessian");
  Mat out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  if (cfg.mode == DiffMode::dual) {
    std::vector<D2> xs(static_cast<std::size_t>(x.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < cols.size(); ++c) {
        for (std::size_t k = 0; k < xs.size(); ++k)
          xs[k] = D2(D1(x[static_cast<Eigen::Index>(k)], k == rows[r] ? 1.0 : 0.0),
                     D1(k == cols[c] ? 1.0 : 0.0, 0.0));
        out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            f.eval<D2>(std::span<const D2>(xs)).d.d;
      }
    }
    return out;
  }
  // Four-point stencil with the larger second-order step.
  const double h = cfg.second_step();
  f(x);
  auto stencil = [&](std::size_t i, std::size_t j, double s) {
    auto at = [&](double a, double b) {
      Vec y = x;
      y[static_cast<Eigen::Index>(i)] += a;
      y[static_cast<Eigen::Index>(j)] += b;
      return f(y);
    };
    return (at(s, s) - at(s, -s) - at(-s, s) + at(-s, -s)) / (4.0 * s * s);
  };
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) {
      double d = stencil(rows[r], cols[c], h);
      if (cfg.richardson) d = (4.0 * stencil(rows[r], cols[c], 0.5 * h) - d) / 3.0;
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = d;
    }
  return out;
}

inline Hessian hessian(const ScalarField& f, const Vec& x, const DiffConfig& cfg = {}) {
  auto idx = detail::iota_indices(static_cast<std::size_t>(x.size()));
  Mat raw = second_partials(f, x, idx, idx, cfg);
  double asym = raw.size() ? (raw - raw.transpose()).cwiseAbs().maxCoeff() : 0.0;
  return {0.5 * (raw + raw.transpose()), asym};
}

/// Exterior derivative of a 1-form given by its components on R^m.
inline FormMatrix exterior_derivative(const MapField& beta, const Vec& x, const DiffConfig& cfg = {}) {
  if (beta.in_dim() != beta.out_dim())
    throw Error(ErrorKind::DimensionMismatch, "exterior_derivative: 1-form must have m components");
  Mat j = jacobian(beta, x, cfg);  // j(i, k) = d_k beta_i
  return FormMatrix::from_raw(2.0 * j.transpose());
}

inline FormMatrix exterior_derivative(const SectionField& beta, const Vec& x, const DiffConfig& cfg = {}) {
  if (beta.kind != SectionKind::oneform)
    throw Error(ErrorKind::Unsupported, "exterior_derivative expects a 1-form section");
  return exterior_derivative(beta.map, x, cfg);
}

/// Max |(d Omega)_abc| over a<b<c for a matrix-valued 2-form field.
inline double twoform_closedness_defect(const MatrixField& omega, const Vec& x, const DiffConfig& cfg = {}) {
  const auto m = static_cast<Eigen::Index>(omega.rows());
  std::vector<Mat> partial(static_cast<std::size_t>(m));
  if (cfg.mode == DiffMode::dual) {
    for (Eigen::Index k = 0; k < m; ++k) {
      auto xs = seed_direction<double>(as_span(x), static_cast<std::size_t>(k));
      auto r = omega.eval<D1>(std::span<const D1>(xs));
      Mat d(m, m);
      for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b) d(a, b) = r[static_cast<std::size_t>(a * m + b)].d;
      partial[static_cast<std::size_t>(k)] = d;
    }
  } else {
    for (Eigen::Index k = 0; k < m; ++k)
      partial[static_cast<std::size_t>(k)] =
          detail::central_derivative([&](const Vec& y) { return Mat(omega(y)); }, x, k, cfg);
  }
  double worst = 0.0;
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = a + 1; b < m; ++b)
      for (Eigen::Index c = b + 1; c < m; ++c) {
        double v = partial[static_cast<std::size_t>(a)](b, c) + partial[static_cast<std::size_t>(b)](c, a) +
                   partial[static_cast<std::size_t>(c)](a, b);
        worst = std::max(worst, std::abs(v));
      }
  return worst;
}

/// (phi* beta)_j(x) = beta_k(phi(x)) d phi^k / d x^j.
inline Vec pullback_oneform(const MapField& phi, const MapField& beta, const Vec& x, const DiffConfig& cfg = {}) {
  Vec y = phi(x);
  Vec b = beta(y);
  if (b.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "pullback_oneform: 1-form dimension");
  return jacobian(phi, x, cfg).transpose() * b;
}

inline FormMatrix pullback_twoform(const MapField& phi, const FormField& omega, const Vec& x,
                                   const DiffConfig& cfg = {}) {
  Vec y = phi(x);
  FormMatrix w = omega(y);
  if (w.dim() != y.size()) throw Error(ErrorKind::DimensionMismatch, "pullback_twoform: 2-form dimension");
  Mat j = jacobian(phi, x, cfg);
  return FormMatrix::from_raw(j.transpose() * w.entries() * j);
}

inline FormMatrix pullback_twoform(const MapField& phi, const MatrixField& omega, const Vec& x,
                                   const DiffConfig& cfg = {}) {
  return pullback_twoform(phi, [&](const Vec& y) { return FormMatrix::from_raw(omega(y)); }, x, cfg);
}

/// Directional derivative of a map along `dir`.
inline Vec directional_derivative(const MapField& f, const Vec& x, const Vec& dir, const DiffConfig& cfg = {}) {
  detail::check_arity(f.in_dim(), static_cast<std::size_t>(dir.size()), "directional_derivative");
  if (cfg.mode == DiffMode::dual) {
    std::vector<double> xs(x.data(), x.data() + x.size()), ds(dir.data(), dir.data() + dir.size());
    return to_vec(jvp_t<double>(f, std::span<const double>(xs), std::span<const double>(ds)));
  }
  f(x);
  auto along = [&](double h) {
    Vec fp = f(Vec(x + h * dir)), fm = f(Vec(x - h * dir));
    return Vec((fp - fm) / (2.0 * h));
  };
  Vec d1 = along(cfg.step);
  if (!cfg.richardson) return d1;
  return (4.0 * along(0.5 * cfg.step) - d1) / 3.0;
}

/// (i_v Omega)_i = v^j Omega_ji.
inline Vec interior_product(const Vec& v, const FormMatrix& omega) {
  if (v.size() != omega.dim())
    throw Error(ErrorKind::DimensionMismatch, "interior_product: vector has dimension " +
                                                  std::to_string(v.size()) + ", form " +
                                                  std::to_string(omega.dim()));
  return omega.entries().transpose() * v;
}

}  // namespace hjt
