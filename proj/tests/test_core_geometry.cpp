#include <gtest/gtest.h>

#include <random>

#include "hjt/calculus.hpp"

using namespace hjt;

namespace {

ScalarField norm2() {
  return ScalarField(2, [](auto x) { return sqrt(x[0] * x[0] + x[1] * x[1]); },
                     [](std::span<const double> x) { return x[0] != 0.0 || x[1] != 0.0; }, "norm");
}

}  // namespace

TEST(Grad, ProductRule) {
  ScalarField f(2, [](auto x) { return x[0] * x[1]; });
  Vec g = grad(f, to_vec({2, 3}));
  EXPECT_EQ(g[0], 3.0);
  EXPECT_EQ(g[1], 2.0);
}

TEST(Grad, HalfSquare) {
  ScalarField f(2, [](auto x) { return 0.5 * x[1] * x[1]; });
  Vec g = grad(f, to_vec({0, 1}));
  EXPECT_EQ(g[0], 0.0);
  EXPECT_EQ(g[1], 1.0);
}

TEST(Grad, Norm) {
  Vec g = grad(norm2(), to_vec({3, 4}));
  EXPECT_NEAR(g[0], 0.6, 1e-15);
  EXPECT_NEAR(g[1], 0.8, 1e-15);
  Vec c = grad(norm2(), to_vec({3, 4}), DiffConfig::central());
  EXPECT_NEAR(c[0], 0.6, 1e-9);
  EXPECT_NEAR(c[1], 0.8, 1e-9);
}

TEST(Grad, GuardViolation) {
  try {
    grad(norm2(), to_vec({0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GuardViolation);
  }
}

TEST(Grad, NonFinite) {
  ScalarField f(1, [](auto x) { return log(x[0]); });
  try {
    f(to_vec({-1.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonFinite);
  }
}

TEST(Hessian, KineticIsIdentity) {
  ScalarField f(4, [](auto x) { return 0.5 * (x[2] * x[2] + x[3] * x[3]); });
  auto h = hessian(f, to_vec({0.3, -2, 1, 5}));
  Mat expect = Mat::Zero(4, 4);
  expect(2, 2) = expect(3, 3) = 1.0;
  EXPECT_EQ(max_abs(Mat(h.value - expect)), 0.0);
  EXPECT_EQ(h.raw_asymmetry, 0.0);
}

TEST(Hessian, CrossTerm) {
  ScalarField f(2, [](auto x) { return x[0] * x[1]; });
  auto h = hessian(f, to_vec({0.7, 1.1}));
  EXPECT_EQ(h.value(0, 1), 1.0);
  EXPECT_EQ(h.value(1, 0), 1.0);
  EXPECT_EQ(h.value(0, 0), 0.0);
  auto c = hessian(f, to_vec({0.7, 1.1}), DiffConfig::central());
  EXPECT_NEAR(c.value(0, 1), 1.0, 1e-6);
  EXPECT_LE(c.raw_asymmetry, 1e-6);
}

TEST(Hessian, Constant) {
  ScalarField f(3, [](auto) { return 2.5; });
  EXPECT_EQ(max_abs(hessian(f, to_vec({1, 2, 3})).value), 0.0);
}

TEST(ExteriorDerivative, LinearForm) {
  auto beta = SectionField::make(2, SectionKind::oneform, [](auto x) {
    using T = std::remove_const_t<typename decltype(x)::element_type>;
    return std::vector<T>{x[1], T(0.0)};
  });
  auto d = exterior_derivative(beta, to_vec({0.4, -3}));
  EXPECT_EQ(d(0, 1), -1.0);
  EXPECT_EQ(d(1, 0), 1.0);
}

TEST(ExteriorDerivative, Rotation) {
  auto beta = SectionField::make(2, SectionKind::oneform, [](auto x) {
    using T = std::remove_const_t<typename decltype(x)::element_type>;
    return std::vector<T>{-x[1], x[0]};
  });
  EXPECT_EQ(exterior_derivative(beta, to_vec({1, 2}))(0, 1), 2.0);
}

TEST(ExteriorDerivative, ExactFormIsClosed) {
  ScalarField w(2, [](auto x) { return sin(x[0]) * x[1]; });
  auto d = exterior_derivative(grad_section(w), to_vec({0.3, 1.7}));
  EXPECT_LE(d.max_abs(), 1e-15);
}

TEST(ExteriorDerivative, RejectsVectorKind) {
  auto x = SectionField::make(1, SectionKind::vector, [](auto q) {
    using T = std::remove_const_t<typename decltype(q)::element_type>;
    return std::vector<T>{q[0]};
  });
  EXPECT_THROW(exterior_derivative(x, to_vec({1.0})), Error);
}

TEST(Pullback, IdentityKeepsOneForm) {
  MapField id(2, 2, [](auto x) {
    using T = std::remove_const_t<typename decltype(x)::element_type>;
    return std::vector<T>(x.begin(), x.end());
  });
  MapField beta(2, 2, [](auto x) {
    using T = std::remove_const_t<typename decltype(x)::element_type>;
    return std::vector<T>{x[0] * x[1], T(3.0)};
  });
  Vec p = pullback_oneform(id, beta, to_vec({2, 5}));
  EXPECT_EQ(p[0], 10.0);
  EXPECT_EQ(p[1], 3.0);
}

TEST(Pullback, ConstantGraphOfCartanForm) {
  // graph q -> (q, (1,0)) into TQ, theta_L = v dq for the free particle
  MapField graph(2, 4, [](auto q) {
    using T = std::remove_const_t<typename decltype(q)::element_type>;
    return std::vector<T>{q[0], q[1], T(1.0), T(0.0)};
  });
  MapField theta(4, 4, [](auto z) {
    using T = std::remove_const_t<typename decltype(z)::element_type>;
    return std::vector<T>{z[2], z[3], T(0.0), T(0.0)};
  });
  Vec p = pullback_oneform(graph, theta, to_vec({0.2, 0.9}));
  EXPECT_EQ(p[0], 1.0);
  EXPECT_EQ(p[1], 0.0);
}

TEST(Pullback, CanonicalFormThroughSection) {
  // alpha*theta = alpha for theta = p dq on T*R^2
  MapField alpha(2, 4, [](auto q) {
    using T = std::remove_const_t<typename decltype(q)::element_type>;
    return std::vector<T>{q[0], q[1], q[1] * q[1], sin(q[0])};
  });
  MapField theta(4, 4, [](auto z) {
    using T = std::remove_const_t<typename decltype(z)::element_type>;
    return std::vector<T>{z[2], z[3], T(0.0), T(0.0)};
  });
  Vec q = to_vec({0.4, -1.2});
  Vec p = pullback_oneform(alpha, theta, q);
  EXPECT_NEAR(p[0], q[1] * q[1], 1e-15);
  EXPECT_NEAR(p[1], std::sin(q[0]), 1e-15);
}

TEST(Pullback, TwoFormIdentity) {
  MapField id(3, 3, [](auto x) {
    using T = std::remove_const_t<typename decltype(x)::element_type>;
    return std::vector<T>(x.begin(), x.end());
  });
  FormMatrix w(3);
  w.set(0, 1, 2.0);
  w.set(1, 2, -0.5);
  auto p = pullback_twoform(id, [&](const Vec&) { return w; }, to_vec({1, 2, 3}));
  EXPECT_EQ(max_abs(Mat(p.entries() - w.entries())), 0.0);
}

TEST(Pullback, FreeParticleFamily) {
  // X = (k, (k q2 - l)/q1) with k = 1, l = 0: the graph pullback of dq^dv is
  // +(k q2 - l)/q1^2 dq1^dq2, so +1 at q = (1,1).
  const double k = 1.0, l = 0.0;
  MapField graph(2, 4, [=](auto q) {
    using T = std::remove_const_t<typename decltype(q)::element_type>;
    return std::vector<T>{q[0], q[1], T(k), (k * q[1] - l) / q[0]};
  });
  FormMatrix w(4);
  w.set(0, 2, 1.0);
  w.set(1, 3, 1.0);
  auto p = pullback_twoform(graph, [&](const Vec&) { return w; }, to_vec({1, 1}));
  EXPECT_NEAR(p(0, 1), 1.0, 1e-15);
  auto p2 = pullback_twoform(graph, [&](const Vec&) { return w; }, to_vec({2, 3}));
  EXPECT_NEAR(p2(0, 1), 3.0 / 4.0, 1e-15);
}

TEST(InteriorProduct, Examples) {
  FormMatrix w(2);
  w.set(0, 1, 3.0);
  Vec a = interior_product(to_vec({1, 0}), w);
  EXPECT_EQ(a[0], 0.0);
  EXPECT_EQ(a[1], 3.0);
  w.set(0, 1, 2.0);
  Vec b = interior_product(to_vec({1, 1}), w);
  EXPECT_EQ(b[0], -2.0);
  EXPECT_EQ(b[1], 2.0);
  EXPECT_EQ(max_abs(interior_product(to_vec({4, 5}), FormMatrix(2))), 0.0);
  EXPECT_THROW(interior_product(to_vec({1, 2, 3}), w), Error);
}

TEST(FormMatrix, AntisymmetryIsExact) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n;
  Mat raw(5, 5);
  for (Eigen::Index i = 0; i < 5; ++i)
    for (Eigen::Index j = 0; j < 5; ++j) raw(i, j) = n(rng);
  auto f = FormMatrix::from_raw(raw);
  for (Eigen::Index i = 0; i < 5; ++i) {
    EXPECT_EQ(f(i, i), 0.0);
    for (Eigen::Index j = 0; j < 5; ++j) EXPECT_EQ(f(i, j), -f(j, i));
  }
}

TEST(Properties, DdZeroBothModes) {
  ScalarField w(3, [](auto x) { return exp(x[0] * x[1]) * cos(x[2]) + x[0] * x[0] * x[2]; });
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  const DiffConfig central = DiffConfig::central();
  for (int s = 0; s < 50; ++s) {
    Vec x = to_vec({u(rng), u(rng), u(rng)});
    EXPECT_LE(exterior_derivative(grad_section(w), x).max_abs(), 1e-10);
    EXPECT_LE(exterior_derivative(grad_section(w), x, central).max_abs(), 10 * central.step);
  }
}

TEST(Properties, DualMatchesCentral) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.5, 2);
  ScalarField f(2, [](auto x) { return sqrt(x[0]) * atan2(x[1], x[0]) + gpow(x[1], decltype(x[0])(2.5)); });
  for (int s = 0; s < 100; ++s) {
    Vec x = to_vec({u(rng), u(rng)});
    Vec gd = grad(f, x);
    Vec gc = grad(f, x, DiffConfig::central());
    EXPECT_LE(max_abs(Vec(gd - gc)), 1e-5);
    Vec gr = grad(f, x, DiffConfig::central(1e-3, true));
    EXPECT_LE(max_abs(Vec(gd - gr)), 1e-8);
  }
}

TEST(Properties, TwoFormClosedness) {
  // d(x dy ^ dz) = dx^dy^dz  -> defect 1; a constant form is closed.
  MatrixField closed(3, 3, [](auto x) {
    using T = std::remove_const_t<typename decltype(x)::element_type>;
    std::vector<T> m(9, T(0.0));
    m[1] = T(1.0);
    m[3] = T(-1.0);
    return m;
  });
  MatrixField open(3, 3, [](auto x) {
    using T = std::remove_const_t<typename decltype(x)::element_type>;
    std::vector<T> m(9, T(0.0));
    m[5] = x[0];
    m[7] = -x[0];
    return m;
  });
  EXPECT_EQ(twoform_closedness_defect(closed, to_vec({1, 2, 3})), 0.0);
  EXPECT_NEAR(twoform_closedness_defect(open, to_vec({1, 2, 3})), 1.0, 1e-15);
  EXPECT_NEAR(twoform_closedness_defect(open, to_vec({1, 2, 3}), DiffConfig::central()), 1.0, 1e-8);
}
