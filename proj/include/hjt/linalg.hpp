#pragma once

// Small dense linear algebra. Everything downstream is m <= 16, so plain
// dynamic Eigen matrices are used throughout.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "hjt/error.hpp"

namespace hjt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Condition threshold: reciprocal condition estimates below this are singular.
inline constexpr double kSingularRcond = 1e-12;

inline std::span<const double> as_span(const Vec& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

inline Vec to_vec(std::span<const double> s) {
  Vec v(static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) v[static_cast<Eigen::Index>(i)] = s[i];
  return v;
}

inline Vec to_vec(std::initializer_list<double> s) {
  return to_vec(std::span<const double>(s.begin(), s.size()));
}

inline Vec concat(const Vec& a, const Vec& b) {
  Vec out(a.size() + b.size());
  out << a, b;
  return out;
}

inline double max_abs(const Vec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }
inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline bool all_finite(const Vec& v) { return v.allFinite(); }
inline bool all_finite(const Mat& m) { return m.allFinite(); }

/// LU with partial pivoting plus a reciprocal condition estimate.
struct LuResult {
  Vec x;
  double rcond = 0.0;
};

inline double rcond_estimate(const Mat& a) {
  if (a.rows() == 0) return 1.0;
  Eigen::PartialPivLU<Mat> lu(a);
  return lu.rcond();
}

/// Solves a x = b, throwing NumericallySingular when rcond < 1e-12.
inline LuResult lu_solve(const Mat& a, const Vec& b) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw Error(ErrorKind::DimensionMismatch, "lu_solve: shape mismatch");
  if (a.rows() == 0) return {Vec(0), 1.0};
  Eigen::PartialPivLU<Mat> lu(a);
  double rc = lu.rcond();
  if (!(rc >= kSingularRcond))
    throw Error(ErrorKind::NumericallySingular, "rcond estimate " + std::to_string(rc));
  return {lu.solve(b), rc};
}

inline Mat lu_inverse(const Mat& a) {
  Eigen::PartialPivLU<Mat> lu(a);
  double rc = lu.rcond();
  if (!(rc >= kSingularRcond))
    throw Error(ErrorKind::NumericallySingular, "rcond estimate " + std::to_string(rc));
  return lu.inverse();
}

/// Minimum-norm least-squares solution of a (possibly singular) system.
struct MinNormResult {
  Vec x;
  double residual = 0.0;  // ||a x - b||_inf
  Eigen::Index rank = 0;
  Mat kernel;  // orthonormal basis of ker a, one column per direction
};

inline MinNormResult min_norm_solve(const Mat& a, const Vec& b, double rank_tol = 1e-10) {
  MinNormResult out;
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  double smax = s.size() > 0 ? s[0] : 0.0;
  double cut = rank_tol * std::max(1.0, smax);
  Vec ub = svd.matrixU().transpose() * b;
  Vec y = Vec::Zero(a.cols());
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > cut) {
      y[i] = ub[i] / s[i];
      ++rank;
    }
  }
  out.x = svd.matrixV() * y;
  out.rank = rank;
  out.residual = max_abs(Vec(a * out.x - b));
  out.kernel = svd.matrixV().rightCols(a.cols() - rank);
  return out;
}

/// Orthogonal projector onto the complement of span(kernel).
inline Mat range_projector(const Mat& kernel, Eigen::Index n) {
  Mat p = Mat::Identity(n, n);
  if (kernel.cols() > 0) p -= kernel * kernel.transpose();
  return p;
}

/// Nearest orthogonal matrix (polar factor).
inline Mat polar_project(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace hjt
