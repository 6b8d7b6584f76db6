#include "dads/jet.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

namespace dads {
namespace {

TEST(JetLayoutTest, SizeIsBinomial) {
  // C(n + q, q) coefficients.
  EXPECT_EQ(JetLayout::Get(1, 0).size(), 1u);
  EXPECT_EQ(JetLayout::Get(2, 1).size(), 3u);
  EXPECT_EQ(JetLayout::Get(3, 2).size(), 10u);
  EXPECT_EQ(JetLayout::Get(4, 3).size(), 35u);
  EXPECT_EQ(JetLayout::Get(10, 3).size(), 286u);
}

TEST(JetLayoutTest, GradedLexicographicOrder) {
  const JetLayout& layout = JetLayout::Get(2, 2);
  ASSERT_EQ(layout.size(), 6u);
  EXPECT_EQ(layout.multi_index(0), (MultiIndex{0, 0}));
  EXPECT_EQ(layout.multi_index(1), (MultiIndex{1, 0}));
  EXPECT_EQ(layout.multi_index(2), (MultiIndex{0, 1}));
  EXPECT_EQ(layout.multi_index(3), (MultiIndex{2, 0}));
  EXPECT_EQ(layout.multi_index(4), (MultiIndex{1, 1}));
  EXPECT_EQ(layout.multi_index(5), (MultiIndex{0, 2}));
  EXPECT_EQ(layout.index_of({1, 1}), 4);
  EXPECT_EQ(layout.index_of({2, 1}), -1);
}

TEST(JetTest, LiftCoordinate) {
  Jet x = lift(3.0, 0, 2, 1);
  EXPECT_EQ(x.coeff({0, 0}), 3.0);
  EXPECT_EQ(x.coeff({1, 0}), 1.0);
  EXPECT_EQ(x.coeff({0, 1}), 0.0);

  Jet y = lift(0.0, 1, 2, 0);
  ASSERT_EQ(y.coeffs().size(), 1u);
  EXPECT_EQ(y.value(), 0.0);

  Jet w = lift(-0.5, 1, 3, 2);
  for (std::size_t i = 0; i < w.layout().size(); ++i) {
    if (w.layout().degree(i) == 2) {
      EXPECT_EQ(w.coeffs()[i], 0.0);
    }
  }
  EXPECT_THROW(lift(1.0, 2, 2, 1), std::invalid_argument);
  EXPECT_THROW(lift(1.0, -1, 2, 1), std::invalid_argument);
}

TEST(JetTest, MultiplySquare) {
  Jet x = lift(2.0, 0, 1, 2);
  Jet y = jet_mul(x, x);
  EXPECT_EQ(y.coeff({0}), 4.0);
  EXPECT_EQ(y.coeff({1}), 4.0);
  EXPECT_EQ(y.coeff({2}), 1.0);
}

TEST(JetTest, MultiplyByOneIsIdentity) {
  Jet a = lift(0.7, 1, 3, 3);
  a = exp(a) * lift(-1.2, 0, 3, 3);
  Jet one = Jet::Constant(1.0, 3, 3);
  Jet b = a * one;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    EXPECT_EQ(a.coeffs()[i], b.coeffs()[i]);
  }
}

TEST(JetTest, ProductRule) {
  Jet x = lift(1.0, 0, 2, 1);
  Jet y = lift(-0.5, 1, 2, 1);
  Jet p = x * y;
  EXPECT_EQ(p.coeff({0, 0}), -0.5);
  EXPECT_EQ(p.coeff({1, 0}), -0.5);
  EXPECT_EQ(p.coeff({0, 1}), 1.0);
}

TEST(JetTest, ShapeMismatchThrows) {
  Jet a = lift(1.0, 0, 2, 1);
  Jet b = lift(1.0, 0, 2, 2);
  Jet c = lift(1.0, 0, 3, 1);
  EXPECT_THROW(a * b, std::invalid_argument);
  EXPECT_THROW(a + c, std::invalid_argument);
}

TEST(JetTest, ReluPlus) {
  Jet neg = lift(-1.0, 0, 1, 2) * 3.0;
  Jet r = relu_plus(neg);
  for (double c : r.coeffs()) EXPECT_EQ(c, 0.0);

  Jet pos = lift(2.0, 0, 1, 2) * 3.0;
  Jet s = relu_plus(pos);
  for (std::size_t i = 0; i < pos.coeffs().size(); ++i) {
    EXPECT_EQ(s.coeffs()[i], pos.coeffs()[i]);
  }
  // Left limit at the kink.
  Jet zero = lift(0.0, 0, 1, 1);
  EXPECT_EQ(relu_plus(zero).partial(0), 0.0);
}

TEST(JetTest, ExpOfZeroIsOne) {
  Jet e = exp(Jet::Constant(0.0, 2, 3));
  EXPECT_EQ(e.value(), 1.0);
  for (std::size_t i = 1; i < e.coeffs().size(); ++i) {
    EXPECT_EQ(e.coeffs()[i], 0.0);
  }
}

TEST(JetTest, PowInt) {
  Jet p = pow_int(lift(1.0, 0, 1, 1), 4);
  EXPECT_EQ(p.value(), 1.0);
  EXPECT_EQ(p.partial(0), 4.0);

  // (x^-2)'' / 2 at x = 2 is 3 / 2^4.
  Jet q = pow_int(lift(2.0, 0, 1, 2), -2);
  EXPECT_NEAR(q.value(), 0.25, 1e-15);
  EXPECT_NEAR(q.coeff({1}), -0.25, 1e-15);
  EXPECT_NEAR(q.coeff({2}), 3.0 / 16.0, 1e-15);
  EXPECT_EQ(pow_int(-1.5, 3), -3.375);
  EXPECT_EQ(pow_int(2.0, -1), 0.5);
}

// Univariate Taylor coefficients of each primitive against closed forms.
TEST(JetTest, UnivariatePrimitivesMatchClosedForms) {
  const double v = 0.8;
  Jet x = lift(v, 0, 1, 4);
  struct Case {
    Jet jet;
    double d[5];
  };
  const double s = std::sin(v), c = std::cos(v), e = std::exp(v);
  const double r = std::sqrt(v);
  Case cases[] = {
      {exp(x), {e, e, e / 2, e / 6, e / 24}},
      {sin(x), {s, c, -s / 2, -c / 6, s / 24}},
      {cos(x), {c, -s, -c / 2, s / 6, c / 24}},
      {log(x),
       {std::log(v), 1 / v, -1 / (2 * v * v), 1 / (3 * v * v * v),
        -1 / (4 * v * v * v * v)}},
      {sqrt(x),
       {r, 0.5 / r, -0.125 / (r * v), 0.0625 / (r * v * v),
        -5.0 / 128.0 / (r * v * v * v)}},
      {inverse(x),
       {1 / v, -1 / (v * v), 1 / (v * v * v), -1 / (v * v * v * v),
        1 / (v * v * v * v * v)}},
  };
  for (const auto& cs : cases) {
    for (int k = 0; k <= 4; ++k) {
      EXPECT_NEAR(cs.jet.coeff({k}), cs.d[k], 1e-13 * (1 + std::abs(cs.d[k])));
    }
  }
}

TEST(JetTest, DivisionAndIdentities) {
  Jet x = lift(0.3, 0, 2, 3);
  Jet y = lift(-1.1, 1, 2, 3);
  Jet a = sin(x) * sin(x) + cos(x) * cos(x);
  EXPECT_NEAR(a.value(), 1.0, 1e-15);
  for (std::size_t i = 1; i < a.coeffs().size(); ++i) {
    EXPECT_NEAR(a.coeffs()[i], 0.0, 1e-14);
  }
  Jet b = (x * y) / y;
  for (std::size_t i = 0; i < b.coeffs().size(); ++i) {
    EXPECT_NEAR(b.coeffs()[i], x.coeffs()[i], 1e-14);
  }
  Jet c = log(exp(y));
  for (std::size_t i = 0; i < c.coeffs().size(); ++i) {
    EXPECT_NEAR(c.coeffs()[i], y.coeffs()[i], 1e-14);
  }
}

TEST(JetTest, DerivativeAndTruncation) {
  // f = x^2 y^3 at (1.5, -2), order 3.
  Jet x = lift(1.5, 0, 2, 3);
  Jet y = lift(-2.0, 1, 2, 3);
  Jet f = pow_int(x, 2) * pow_int(y, 3);
  Jet fx = f.Derivative(0);
  EXPECT_EQ(fx.order(), 2);
  // df/dx = 2 x y^3 = -24; d2f/dxdy = 6 x y^2 = 36.
  EXPECT_NEAR(fx.value(), -24.0, 1e-12);
  EXPECT_NEAR(fx.partial(1), 36.0, 1e-12);

  Jet t = f.Truncated(1);
  Jet direct = pow_int(x.Truncated(1), 2) * pow_int(y.Truncated(1), 3);
  ASSERT_EQ(t.coeffs().size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(t.coeffs()[i], direct.coeffs()[i]);
  }
}

TEST(JetTest, DegreeZeroMatchesScalarOperation) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double va = u(rng), vb = u(rng);
    Jet a = lift(va, 0, 3, 2);
    Jet b = lift(vb, 2, 3, 2);
    EXPECT_EQ((a + b).value(), va + vb);
    EXPECT_EQ((a - b).value(), va - vb);
    EXPECT_EQ((a * b).value(), va * vb);
    EXPECT_EQ((a / b).value(), va / vb);
    EXPECT_EQ(exp(a).value(), std::exp(va));
    EXPECT_EQ(log(a).value(), std::log(va));
    EXPECT_EQ(sqrt(a).value(), std::sqrt(va));
    EXPECT_EQ(relu_plus(a - b).value(), relu_plus(va - vb));
  }
}

}  // namespace
}  // namespace dads
