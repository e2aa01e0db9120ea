#pragma once

// Forward-mode dual numbers. Dual<T> carries a value and one directional
// derivative; nesting Dual<Dual<double>> gives mixed second derivatives.

#include <cmath>
#include <ostream>
#include <type_traits>

namespace hjt {

using std::abs;
using std::asin;
using std::atan;
using std::atan2;
using std::cos;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;

template <class T>
struct Dual {
  T v{};
  T d{};

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value), d(0.0) {}  // NOLINT: implicit lift of constants
  constexpr Dual(T value, T deriv) : v(value), d(deriv) {}
  constexpr Dual(const T& value) requires(!std::is_same_v<T, double>)  // NOLINT
      : v(value), d(0.0) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual& operator/=(const Dual& o) {
    T inv = T(1.0) / o.v;
    v *= inv;
    d = (d - v * o.d) * inv;
    return *this;
  }
};

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

template <class T> struct is_dual : std::false_type {};
template <class T> struct is_dual<Dual<T>> : std::true_type {};
template <class T> inline constexpr bool is_dual_v = is_dual<T>::value;

/// Nesting depth: 0 for double, 1 for D1, ...
template <class T> struct dual_depth : std::integral_constant<int, 0> {};
template <class T> struct dual_depth<Dual<T>> : std::integral_constant<int, 1 + dual_depth<T>::value> {};
template <class T> inline constexpr int dual_depth_v = dual_depth<T>::value;

/// Fields are instantiated up to D3; anything that needs one more derivative level
/// than its argument type is only available below that.
template <class T> inline constexpr bool liftable_v = dual_depth_v<T> < 3;

/// Innermost real value of a possibly nested dual.
inline double primal(double x) { return x; }
template <class T>
double primal(const Dual<T>& x) { return primal(x.v); }

inline bool all_zero(double x) { return x == 0.0; }
template <class T>
bool all_zero(const Dual<T>& x) { return all_zero(x.v) && all_zero(x.d); }

/// True when every derivative slot (at every nesting level) is zero.
inline bool is_constant(double) { return true; }
template <class T>
bool is_constant(const Dual<T>& x) {
  return is_constant(x.v) && all_zero(x.d);
}

template <class T> Dual<T> operator+(Dual<T> a, const Dual<T>& b) { return a += b; }
template <class T> Dual<T> operator-(Dual<T> a, const Dual<T>& b) { return a -= b; }
template <class T> Dual<T> operator*(Dual<T> a, const Dual<T>& b) { return a *= b; }
template <class T> Dual<T> operator/(Dual<T> a, const Dual<T>& b) { return a /= b; }
template <class T> Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }
template <class T> Dual<T> operator+(const Dual<T>& a) { return a; }

template <class T> Dual<T> operator+(Dual<T> a, double b) { a.v += T(b); return a; }
template <class T> Dual<T> operator+(double b, Dual<T> a) { a.v += T(b); return a; }
template <class T> Dual<T> operator-(Dual<T> a, double b) { a.v -= T(b); return a; }
template <class T> Dual<T> operator-(double b, const Dual<T>& a) { return {T(b) - a.v, -a.d}; }
template <class T> Dual<T> operator*(const Dual<T>& a, double b) { return {a.v * T(b), a.d * T(b)}; }
template <class T> Dual<T> operator*(double b, const Dual<T>& a) { return {a.v * T(b), a.d * T(b)}; }
template <class T> Dual<T> operator/(const Dual<T>& a, double b) { return {a.v / T(b), a.d / T(b)}; }
template <class T> Dual<T> operator/(double b, const Dual<T>& a) { return Dual<T>(b) / a; }

template <class T> bool operator<(const Dual<T>& a, const Dual<T>& b) { return primal(a) < primal(b); }
template <class T> bool operator>(const Dual<T>& a, const Dual<T>& b) { return primal(a) > primal(b); }
template <class T> bool operator<=(const Dual<T>& a, const Dual<T>& b) { return primal(a) <= primal(b); }
template <class T> bool operator>=(const Dual<T>& a, const Dual<T>& b) { return primal(a) >= primal(b); }
template <class T> bool operator<(const Dual<T>& a, double b) { return primal(a) < b; }
template <class T> bool operator>(const Dual<T>& a, double b) { return primal(a) > b; }
template <class T> bool operator<=(const Dual<T>& a, double b) { return primal(a) <= b; }
template <class T> bool operator>=(const Dual<T>& a, double b) { return primal(a) >= b; }
template <class T> bool operator<(double a, const Dual<T>& b) { return a < primal(b); }
template <class T> bool operator>(double a, const Dual<T>& b) { return a > primal(b); }

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  T s = sqrt(a.v);
  return {s, a.d / (T(2.0) * s)};
}
template <class T>
Dual<T> sin(const Dual<T>& a) { return {sin(a.v), a.d * cos(a.v)}; }
template <class T>
Dual<T> cos(const Dual<T>& a) { return {cos(a.v), -(a.d * sin(a.v))}; }
template <class T>
Dual<T> exp(const Dual<T>& a) {
  T e = exp(a.v);
  return {e, a.d * e};
}
template <class T>
Dual<T> log(const Dual<T>& a) { return {log(a.v), a.d / a.v}; }
template <class T>
Dual<T> abs(const Dual<T>& a) { return primal(a.v) < 0.0 ? -a : a; }
template <class T>
Dual<T> asin(const Dual<T>& a) { return {asin(a.v), a.d / sqrt(T(1.0) - a.v * a.v)}; }
template <class T>
Dual<T> atan(const Dual<T>& a) { return {atan(a.v), a.d / (T(1.0) + a.v * a.v)}; }
template <class T>
Dual<T> atan2(const Dual<T>& y, const Dual<T>& x) {
  T r2 = x.v * x.v + y.v * y.v;
  return {atan2(y.v, x.v), (x.v * y.d - y.v * x.d) / r2};
}

/// Integer power by repeated squaring; exact for polynomials of any sign.
template <class T>
T ipow(const T& base, long n) {
  if (n < 0) return T(1.0) / ipow(base, -n);
  T result(1.0);
  T b = base;
  while (n > 0) {
    if (n & 1) result = result * b;
    n >>= 1;
    if (n > 0) b = b * b;
  }
  return result;
}

/// General power. Integral constant exponents take the exact repeated-product path
/// so negative bases stay well defined.
template <class T>
T gpow(const T& base, const T& expo) {
  if (is_constant(expo)) {
    double e = primal(expo);
    if (std::nearbyint(e) == e && std::abs(e) < 1e6) return ipow(base, static_cast<long>(e));
    if constexpr (std::is_same_v<T, double>) {
      return std::pow(base, e);
    } else {
      // d/dx x^e = e x^(e-1) with a constant exponent
      auto inner = gpow(base.v, decltype(base.v)(e));
      auto dinner = gpow(base.v, decltype(base.v)(e - 1.0));
      return T(inner, base.d * dinner * e);
    }
  }
  return exp(expo * log(base));
}

template <class T>
std::ostream& operator<<(std::ostream& os, const Dual<T>& a) {
  return os << a.v << " + " << a.d << "e";
}

}  // namespace hjt
