#include <random>

#include <gtest/gtest.h>

#include "curvedk/algebra.hpp"
#include "test_support.hpp"

using namespace curvedk;
using curvedk::testing::random_poly;

namespace {

Poly P(const PolyRing& ring, const char* text) { return Poly::parse(ring, text); }

// prod_k (t - roots[k]) expanded one factor at a time.
Poly expand_linear_factors(const PolyRing& ring, const std::vector<Scalar>& roots) {
  const Poly t = Poly::variable(ring, "t");
  Poly out(ring, 1);
  for (const auto& w : roots) out = out * (t - Poly(ring, w));
  return out;
}

} // namespace

TEST(ScalarField, SmallOrdersAreRational) {
  EXPECT_TRUE(cyclotomic_field(1).is_rational());
  EXPECT_TRUE(cyclotomic_field(2).is_rational());
  EXPECT_EQ(Scalar::zeta(cyclotomic_field(1)), Scalar(rationals(), 1));
  EXPECT_EQ(Scalar::zeta(cyclotomic_field(2)), Scalar(rationals(), -1));
  EXPECT_THROW(cyclotomic_field(0), Error);
}

TEST(ScalarField, OrderFourHasSquareRootOfMinusOne) {
  const ScalarField& k = cyclotomic_field(4);
  EXPECT_EQ(k.degree(), 2u);
  const Scalar z = Scalar::zeta(k);
  Scalar acc(k, 1);
  std::vector<Scalar> powers;
  for (int i = 0; i < 4; ++i) {
    powers.push_back(acc);
    acc = acc * z;
  }
  EXPECT_EQ(powers[2], Scalar(k, -1));
  EXPECT_EQ(acc, Scalar(k, 1));
  EXPECT_FALSE(powers[1].is_rational());
}

TEST(ScalarField, ZetaIsPrimitive) {
  for (unsigned r = 1; r <= 15; ++r) {
    const ScalarField& k = cyclotomic_field(r);
    const Scalar z = Scalar::zeta(k);
    EXPECT_TRUE(z.pow(r).is_one()) << r;
    for (unsigned j = 1; j < r; ++j) EXPECT_FALSE(z.pow(j).is_one()) << r << " " << j;
  }
}

TEST(ScalarField, InverseMultipliesBackToOne) {
  const ScalarField& k = cyclotomic_field(7);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> c(-5, 5);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Rational> coeffs;
    for (std::size_t i = 0; i < k.degree(); ++i) {
      Rational q(c(rng), 1 + (trial % 3));
      q.canonicalize();
      coeffs.push_back(q);
    }
    Scalar a(k, coeffs);
    if (a.is_zero()) continue;
    EXPECT_TRUE((a * a.inverse()).is_one());
  }
  EXPECT_THROW(Scalar(k, 0).inverse(), DivisionError);
}

TEST(RootsOfUnity, OrderTwoOverRationals) {
  auto roots = roots_of_unity(rationals(), 2);
  ASSERT_EQ(roots.size(), 2u);
  EXPECT_EQ(roots[0], Scalar(rationals(), 1));
  EXPECT_EQ(roots[1], Scalar(rationals(), -1));
}

TEST(RootsOfUnity, ProductOfLinearFactors) {
  for (unsigned r : {3u, 4u, 5u, 6u, 12u}) {
    const ScalarField& k = cyclotomic_field(r);
    const PolyRing& ring = PolyRing::get(k, {"t"});
    auto roots = roots_of_unity(k, r);
    ASSERT_EQ(roots.size(), r);
    Poly expected = Poly::variable(ring, "t").pow(r) - Poly(ring, 1);
    EXPECT_EQ(expand_linear_factors(ring, roots), expected) << r;
  }
}

TEST(RootsOfUnity, OrderFourListsZetaAndMinusZeta) {
  const ScalarField& k = cyclotomic_field(4);
  auto roots = roots_of_unity(k, 4);
  const Scalar z = Scalar::zeta(k);
  EXPECT_EQ(roots[1], z);
  EXPECT_EQ(roots[2], Scalar(k, -1));
  EXPECT_EQ(roots[3], -z);
}

TEST(RootsOfUnity, OddOrderFieldContainsDoubleOrder) {
  // Q(zeta_3) also contains the primitive 6th roots.
  const ScalarField& k = cyclotomic_field(3);
  const PolyRing& ring = PolyRing::get(k, {"t"});
  auto roots = roots_of_unity(k, 6);
  EXPECT_EQ(expand_linear_factors(ring, roots), Poly::variable(ring, "t").pow(6) - Poly(ring, 1));
  EXPECT_THROW(roots_of_unity(k, 4), ContextMismatch);
}

TEST(RootsOfUnity, PowerSumsAreOrthogonal) {
  for (unsigned r = 1; r <= 12; ++r) {
    const ScalarField& k = cyclotomic_field(r);
    auto roots = roots_of_unity(k, r);
    for (unsigned e = 0; e <= r; ++e) {
      Scalar sum(k, 0);
      for (const auto& w : roots) sum += w.pow(e);
      const long expected = (e % r == 0) ? static_cast<long>(r) : 0;
      EXPECT_EQ(sum, Scalar(k, expected)) << "r=" << r << " e=" << e;
    }
    for (const auto& w : roots) EXPECT_TRUE(w.pow(r).is_one());
  }
}

TEST(Poly, DifferenceOfSquares) {
  const PolyRing& ring = PolyRing::get(rationals(), {"x", "y"});
  EXPECT_EQ(P(ring, "x+y") * P(ring, "x-y"), P(ring, "x^2-y^2"));
}

TEST(Poly, SubstituteLambdaZeroKeepsConstantTerm) {
  const PolyRing& ring = PolyRing::get(rationals(), {"x", "lambda"});
  Poly d = P(ring, "x + 3 + (x^2 - 1)*lambda + lambda^2");
  EXPECT_EQ(d.substitute("lambda", Poly(ring)), P(ring, "x + 3"));
  EXPECT_EQ(d.coefficient_in(1, 1), P(ring, "x^2 - 1"));
}

TEST(Poly, Evaluate) {
  const PolyRing& ring = PolyRing::get(rationals(), {"x", "y"});
  std::vector<Scalar> pt{Scalar(rationals(), 2), Scalar(rationals(), 3)};
  EXPECT_EQ(P(ring, "x^2*y").evaluate(pt), Scalar(rationals(), 12));
}

TEST(Poly, ContextMismatchIsRejected) {
  const PolyRing& a = PolyRing::get(rationals(), {"x"});
  const PolyRing& b = PolyRing::get(rationals(), {"y"});
  EXPECT_THROW(P(a, "x") + P(b, "y"), ContextMismatch);
  EXPECT_THROW(P(a, "y"), ParseError);
}

TEST(Poly, GrlexOrderAndText) {
  const PolyRing& ring = PolyRing::get(rationals(), {"x", "y"});
  Poly p = P(ring, "1 - x + 3/2*x^2*y + y^3");
  EXPECT_EQ(p.to_string(), "3/2*x^2*y + y^3 - x + 1");
  EXPECT_EQ(Poly::parse(ring, p.to_string()), p);
  EXPECT_EQ(Poly(ring).to_string(), "0");
}

TEST(Poly, CyclotomicCoefficientsRoundTrip) {
  const PolyRing& ring = PolyRing::get(cyclotomic_field(5), {"x", "lambda"});
  Poly p = P(ring, "(zeta^3 - 2*zeta)*x*lambda + zeta^4*x - 1/3");
  Poly q = Poly::parse(ring, p.to_string());
  EXPECT_EQ(p, q);
  // zeta^4 = -1 - zeta - zeta^2 - zeta^3 in Q(zeta_5)
  EXPECT_EQ(P(ring, "zeta^4"), P(ring, "-1 - zeta - zeta^2 - zeta^3"));
}

TEST(Poly, RandomRoundTrip) {
  std::mt19937_64 rng(11);
  const PolyRing& ring = PolyRing::get(cyclotomic_field(3), {"a", "b", "lambda"});
  for (int i = 0; i < 50; ++i) {
    Poly p = random_poly(ring, rng, 4, 6).scaled(Scalar::zeta(ring.field()).pow(i % 3));
    EXPECT_EQ(Poly::parse(ring, p.to_string()), p) << p.to_string();
  }
}

TEST(Poly, RingAxiomsOnRandomTriples) {
  std::mt19937_64 rng(5);
  const PolyRing& ring = PolyRing::get(rationals(), {"x", "y", "z"});
  for (int i = 0; i < 100; ++i) {
    Poly a = random_poly(ring, rng, 3), b = random_poly(ring, rng, 3), c = random_poly(ring, rng, 3);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a + b - b, a);
  }
}

TEST(ExactDivide, Examples) {
  const PolyRing& ring = PolyRing::get(rationals(), {"x", "y", "lambda"});
  EXPECT_EQ(exact_divide(P(ring, "lambda^4 + 2*lambda^3"), P(ring, "lambda^3")), P(ring, "lambda + 2"));
  EXPECT_EQ(exact_divide(P(ring, "x*lambda^3"), P(ring, "lambda^2")), P(ring, "x*lambda"));
  Poly q = exact_divide(P(ring, "x^2 - y^2"), P(ring, "x + y"));
  EXPECT_EQ(q, P(ring, "x - y"));
  EXPECT_EQ(q * P(ring, "x + y"), P(ring, "x^2 - y^2"));
}

TEST(ExactDivide, NonExactReportsRemainder) {
  const PolyRing& ring = PolyRing::get(rationals(), {"x", "lambda"});
  try {
    exact_divide(P(ring, "lambda^3 + x*lambda"), P(ring, "lambda^2"));
    FAIL() << "expected DivisionError";
  } catch (const DivisionError& e) {
    EXPECT_NE(std::string(e.what()).find("x*lambda"), std::string::npos) << e.what();
  }
}

TEST(ExactDivide, RecoversRandomFactor) {
  std::mt19937_64 rng(17);
  const PolyRing& ring = PolyRing::get(rationals(), {"x", "y"});
  for (int i = 0; i < 100; ++i) {
    Poly q = random_poly(ring, rng, 3);
    Poly s = random_poly(ring, rng, 3);
    if (q.is_zero()) continue;
    EXPECT_EQ(exact_divide(q * s, q), s);
  }
}

TEST(DivModMonic, QuotientAndRemainder) {
  const PolyRing& ring = PolyRing::get(rationals(), {"x", "lambda"});
  Poly f = P(ring, "lambda^2 - x^2");
  Poly p = P(ring, "lambda^3 + x*lambda + 1");
  DivMod qr = divmod_monic(p, f, "lambda");
  EXPECT_EQ(qr.quotient * f + qr.remainder, p);
  EXPECT_LT(qr.remainder.degree_in(1), 2u);
}
