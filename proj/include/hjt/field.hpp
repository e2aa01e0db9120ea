#pragma once

// Type-erased smooth fields. Each field wraps one generic callable and
// instantiates it for double and for nested duals, so every downstream
// derivative is taken by forward mode unless a caller asks for central
// differences explicitly.

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hjt/dual.hpp"
#include "hjt/error.hpp"
#include "hjt/linalg.hpp"

namespace hjt {

using Guard = std::function<bool(std::span<const double>)>;

/// Scalar type of a span argument inside generic field lambdas.
template <class S>
using elem_t = std::remove_const_t<typename S::element_type>;

/// Map fields are instantiated up to D2, so composing one at Dual<T> needs T below D2.
template <class T>
inline constexpr bool map_liftable_v = dual_depth_v<T> < 2;

[[noreturn]] inline void unsupported_order(const std::string& what) {
  throw Error(ErrorKind::Unsupported, what + ": derivative order beyond the supported nesting");
}

enum class DiffMode { dual, central };

struct DiffConfig {
  DiffMode mode = DiffMode::dual;
  double step = 1e-6;  // central mode only
  bool richardson = false;

  /// Step for second differences in central mode (nested stencils).
  double second_step() const { return std::max(step, 100.0 * step); }

  static DiffConfig central(double h = 1e-6, bool richardson = false) {
    return {DiffMode::central, h, richardson};
  }
};

namespace detail {

inline std::string format_point(std::span<const double> x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ')';
  return os.str();
}

template <class T>
std::vector<double> primal_point(std::span<const T> x) {
  std::vector<double> p(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) p[i] = primal(x[i]);
  return p;
}

inline void check_arity(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got)
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": expected dimension " +
                                                  std::to_string(expected) + ", got " +
                                                  std::to_string(got));
}

template <class T>
void check_guard(const Guard& guard, std::span<const T> x, const std::string& name) {
  if (!guard) return;
  if constexpr (std::is_same_v<T, double>) {
    if (!guard(x)) throw Error(ErrorKind::GuardViolation, name + " at " + format_point(x));
  } else {
    auto p = primal_point(x);
    if (!guard(p)) throw Error(ErrorKind::GuardViolation, name + " at " + format_point(p));
  }
}

}  // namespace detail

inline Guard all_of(Guard a, Guard b) {
  if (!a) return b;
  if (!b) return a;
  return [a = std::move(a), b = std::move(b)](std::span<const double> x) { return a(x) && b(x); };
}

/// Smooth real function on an open subset of R^m.
class ScalarField {
 public:
  ScalarField() = default;

  template <class F>
  ScalarField(std::size_t arity, F f, Guard guard = {}, std::string name = "f")
      : impl_(std::make_shared<Model<F>>(std::move(f))),
        arity_(arity),
        guard_(std::move(guard)),
        name_(std::move(name)) {}

  std::size_t arity() const { return arity_; }
  const Guard& guard() const { return guard_; }
  const std::string& name() const { return name_; }
  bool valid() const { return static_cast<bool>(impl_); }

  bool contains(std::span<const double> x) const {
    return x.size() == arity_ && (!guard_ || guard_(x));
  }
  bool contains(const Vec& x) const { return contains(as_span(x)); }

  template <class T>
  T eval(std::span<const T> x) const {
    detail::check_arity(arity_, x.size(), name_.c_str());
    detail::check_guard(guard_, x, name_);
    T r = impl_->call(x);
    if (!std::isfinite(primal(r)))
      throw Error(ErrorKind::NonFinite, name_ + " at " + detail::format_point(detail::primal_point(x)));
    return r;
  }

  double operator()(std::span<const double> x) const { return eval<double>(x); }
  double operator()(const Vec& x) const { return eval<double>(as_span(x)); }

  ScalarField with_guard(Guard extra) const {
    ScalarField copy = *this;
    copy.guard_ = all_of(guard_, std::move(extra));
    return copy;
  }
  ScalarField renamed(std::string name) const {
    ScalarField copy = *this;
    copy.name_ = std::move(name);
    return copy;
  }

 private:
  struct Concept {
    virtual ~Concept() = default;
    virtual double call(std::span<const double>) const = 0;
    virtual D1 call(std::span<const D1>) const = 0;
    virtual D2 call(std::span<const D2>) const = 0;
    virtual D3 call(std::span<const D3>) const = 0;
  };
  template <class F>
  struct Model final : Concept {
    explicit Model(F fn) : f(std::move(fn)) {}
    double call(std::span<const double> x) const override { return static_cast<double>(f(x)); }
    D1 call(std::span<const D1> x) const override { return D1(f(x)); }
    D2 call(std::span<const D2> x) const override { return D2(f(x)); }
    D3 call(std::span<const D3> x) const override { return D3(f(x)); }
    F f;
  };

  std::shared_ptr<const Concept> impl_;
  std::size_t arity_ = 0;
  Guard guard_;
  std::string name_ = "f";
};

/// Smooth map R^n -> R^m. Duals up to second order.
class MapField {
 public:
  MapField() = default;

  template <class F>
  MapField(std::size_t in_dim, std::size_t out_dim, F f, Guard guard = {}, std::string name = "map")
      : impl_(std::make_shared<Model<F>>(std::move(f))),
        in_(in_dim),
        out_(out_dim),
        guard_(std::move(guard)),
        name_(std::move(name)) {}

  std::size_t in_dim() const { return in_; }
  std::size_t out_dim() const { return out_; }
  const Guard& guard() const { return guard_; }
  const std::string& name() const { return name_; }
  bool valid() const { return static_cast<bool>(impl_); }

  bool contains(std::span<const double> x) const {
    return x.size() == in_ && (!guard_ || guard_(x));
  }
  bool contains(const Vec& x) const { return contains(as_span(x)); }

  template <class T>
  std::vector<T> eval(std::span<const T> x) const {
    detail::check_arity(in_, x.size(), name_.c_str());
    detail::check_guard(guard_, x, name_);
    std::vector<T> r = impl_->call(x);
    detail::check_arity(out_, r.size(), (name_ + " output").c_str());
    for (const auto& c : r)
      if (!std::isfinite(primal(c)))
        throw Error(ErrorKind::NonFinite,
                    name_ + " at " + detail::format_point(detail::primal_point(x)));
    return r;
  }

  Vec operator()(const Vec& x) const {
    auto r = eval<double>(as_span(x));
    return to_vec(r);
  }

  MapField with_guard(Guard extra) const {
    MapField copy = *this;
    copy.guard_ = all_of(guard_, std::move(extra));
    return copy;
  }

 private:
  struct Concept {
    virtual ~Concept() = default;
    virtual std::vector<double> call(std::span<const double>) const = 0;
    virtual std::vector<D1> call(std::span<const D1>) const = 0;
    virtual std::vector<D2> call(std::span<const D2>) const = 0;
  };
  template <class F>
  struct Model final : Concept {
    explicit Model(F fn) : f(std::move(fn)) {}
    std::vector<double> call(std::span<const double> x) const override { return f(x); }
    std::vector<D1> call(std::span<const D1> x) const override { return f(x); }
    std::vector<D2> call(std::span<const D2> x) const override { return f(x); }
    F f;
  };

  std::shared_ptr<const Concept> impl_;
  std::size_t in_ = 0;
  std::size_t out_ = 0;
  Guard guard_;
  std::string name_ = "map";
};

enum class SectionKind { vector, oneform };

/// Vector field or 1-form on configuration space: q -> components in R^n.
struct SectionField {
  MapField map;
  SectionKind kind = SectionKind::vector;

  SectionField() = default;
  SectionField(MapField m, SectionKind k) : map(std::move(m)), kind(k) {
    detail::check_arity(map.in_dim(), map.out_dim(), "section");
  }

  template <class F>
  static SectionField make(std::size_t n, SectionKind kind, F f, Guard guard = {},
                           std::string name = "section") {
    return {MapField(n, n, std::move(f), std::move(guard), std::move(name)), kind};
  }

  std::size_t base_dim() const { return map.in_dim(); }
  bool contains(const Vec& q) const { return map.contains(q); }
  Vec operator()(const Vec& q) const { return map(q); }
  template <class T>
  std::vector<T> eval(std::span<const T> q) const { return map.eval<T>(q); }
};

/// Square-matrix-valued field (2-forms, metrics), row-major components, up to D3.
class MatrixField {
 public:
  MatrixField() = default;

  template <class F>
  MatrixField(std::size_t in_dim, std::size_t rows, F f, Guard guard = {},
              std::string name = "matrix field")
      : impl_(std::make_shared<Model<F>>(std::move(f))),
        in_(in_dim),
        rows_(rows),
        guard_(std::move(guard)),
        name_(std::move(name)) {}

  std::size_t in_dim() const { return in_; }
  std::size_t rows() const { return rows_; }
  const Guard& guard() const { return guard_; }

  template <class T>
  std::vector<T> eval(std::span<const T> x) const {
    detail::check_arity(in_, x.size(), name_.c_str());
    detail::check_guard(guard_, x, name_);
    auto r = impl_->call(x);
    detail::check_arity(rows_ * rows_, r.size(), (name_ + " output").c_str());
    return r;
  }

  Mat operator()(const Vec& x) const {
    auto r = eval<double>(as_span(x));
    Mat m(rows_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < rows_; ++j)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r[i * rows_ + j];
    if (!m.allFinite()) throw Error(ErrorKind::NonFinite, name_ + " at " + detail::format_point(as_span(x)));
    return m;
  }

 private:
  struct Concept {
    virtual ~Concept() = default;
    virtual std::vector<double> call(std::span<const double>) const = 0;
    virtual std::vector<D1> call(std::span<const D1>) const = 0;
    virtual std::vector<D2> call(std::span<const D2>) const = 0;
    virtual std::vector<D3> call(std::span<const D3>) const = 0;
  };
  template <class F>
  struct Model final : Concept {
    explicit Model(F fn) : f(std::move(fn)) {}
    std::vector<double> call(std::span<const double> x) const override { return f(x); }
    std::vector<D1> call(std::span<const D1> x) const override { return f(x); }
    std::vector<D2> call(std::span<const D2> x) const override { return f(x); }
    std::vector<D3> call(std::span<const D3> x) const override { return f(x); }
    F f;
  };

  std::shared_ptr<const Concept> impl_;
  std::size_t in_ = 0;
  std::size_t rows_ = 0;
  Guard guard_;
  std::string name_ = "matrix field";
};

}  // namespace hjt
