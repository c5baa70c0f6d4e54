#include <gtest/gtest.h>

#include "curvedk/generators.hpp"

using namespace curvedk;

namespace {

const PolyRing& lring() { return instance_ring(rationals(), true); }
const PolyRing& xring() { return instance_ring(rationals(), false); }

PolyMatrix M(const PolyRing& ring, std::size_t rows, std::size_t cols, std::vector<const char*> entries) {
  PolyMatrix m(ring, rows, cols);
  for (std::size_t k = 0; k < entries.size(); ++k) m(k / cols, k % cols) = Poly::parse(ring, entries[k]);
  return m;
}

void expect_all_pass(const std::vector<Verdict>& checks) {
  for (const auto& v : checks) EXPECT_TRUE(v.pass) << v.to_string();
}

} // namespace

// ---------------------------------------------------------------- lambda-complex

TEST(LambdaComplex, DocumentedFamilies) {
  for (unsigned r : {2u, 3u}) {
    LambdaFamily f = example_lambda_family(r);
    ASSERT_TRUE(lambda_family_check(f).pass);
    Lemma1Result res = lemma1_build(f);
    ASSERT_EQ(res.checks.size(), 4u);
    expect_all_pass(res.checks);
    EXPECT_EQ(res.W.module().rank(), 4 * r);
    CertificateReport rep = verify(res.cert);
    EXPECT_TRUE(rep.verdict.pass) << rep.verdict.to_string();
    // Claim: r copies of (V, d_0).
    ASSERT_EQ(res.cert.claim().size(), 1u);
    EXPECT_EQ(res.cert.claim().begin()->second, static_cast<std::int64_t>(r));
  }
}

TEST(LambdaComplex, DocumentedR3BlockMatchesFormula) {
  LambdaFamily f = example_lambda_family(3);
  const Poly lam = Poly::variable(lring(), "lambda");
  EXPECT_EQ(f.total().from_odd(), M(lring(), 2, 2, {"lambda^2", "-x*lambda", "0", "lambda^2"}));
  EXPECT_EQ(f.target_poly(), lam.pow(3));
}

TEST(LambdaComplex, EmptyModule) {
  SuperModule v(lring(), 0, 0);
  LambdaFamily f = make_lambda_family(v, {ParityMap::zero(v, v, Parity::odd), ParityMap::zero(v, v, Parity::odd)}, 2);
  Lemma1Result res = lemma1_build(f);
  expect_all_pass(res.checks);
  EXPECT_EQ(res.W.module().rank(), 0u);
}

TEST(LambdaComplex, InvalidFamilyRejected) {
  SuperModule v(lring(), 1, 1);
  // d(lambda) = [[0, lambda], [1, 0]]-style with square lambda, not lambda^2.
  ParityMap d(v, v, Parity::odd, M(lring(), 1, 1, {"lambda"}), M(lring(), 1, 1, {"1"}));
  EXPECT_THROW(lambda_family_from_total(d, 2), InvariantError);
}

TEST(LambdaComplex, RandomFamilies) {
  Rng rng(11);
  for (unsigned r : {2u, 3u, 5u})
    for (int k = 0; k < 4; ++k) {
      LambdaFamily f = random_lambda_family(rng, r, 4);
      Lemma1Result res = lemma1_build(f);
      expect_all_pass(res.checks);
      EXPECT_TRUE(verify(res.cert).verdict.pass);
    }
}

// ---------------------------------------------------------------- remark

TEST(RootDecomposition, LambdaSquaredMinusOne) {
  Rng rng(5);
  LambdaFamily f = random_remark_family(rng, {Poly(lring(), 1), Poly(lring(), -1)}, 1);
  std::vector<Poly> roots = rational_roots(f);
  ASSERT_EQ(roots.size(), 2u);
  RemarkResult res = remark_decompose(f);
  expect_all_pass(res.checks);
  ASSERT_EQ(res.complexes.size(), 2u);
  for (const auto& c : res.complexes) EXPECT_TRUE(c.is_complex());
  CertificateReport rep = verify(res.cert);
  EXPECT_TRUE(rep.verdict.pass) << rep.verdict.to_string();
}

TEST(RootDecomposition, RootsPlusMinusX) {
  Rng rng(6);
  const Poly x = Poly::variable(lring(), "x");
  LambdaFamily f = random_remark_family(rng, {x, -x}, 1);
  EXPECT_EQ(f.target_poly(), Poly::parse(lring(), "lambda^2 - x^2"));
  RemarkResult res = remark_decompose(f, std::vector<Poly>{x, -x});
  expect_all_pass(res.checks);
  EXPECT_TRUE(verify(res.cert).verdict.pass);
}

TEST(RootDecomposition, ThreeRoots) {
  Rng rng(7);
  LambdaFamily f = random_remark_family(rng, {Poly(lring(), 0), Poly(lring(), 2), Poly(lring(), -3)}, 2);
  RemarkResult res = remark_decompose(f);
  expect_all_pass(res.checks);
  EXPECT_TRUE(verify(res.cert).verdict.pass);
}

TEST(RootDecomposition, RepeatedRootRejected) {
  EXPECT_THROW(rational_roots(example_lambda_family(2)), InvariantError);
  EXPECT_THROW(remark_decompose(example_lambda_family(3)), InvariantError);
}

// ---------------------------------------------------------------- twisted differentials

TEST(TwistedDifferentials, KoszulR2ExplicitFormulas) {
  TwistFamily t = example_twist_family();
  Lemma2Result res = lemma2_build(t);
  expect_all_pass(res.checks);
  EXPECT_TRUE(verify(res.cert).verdict.pass);

  // Hand-assembled D and h on (x1, x'1, x2, x'2), each V or V[1].
  const PolyRing& R = xring();
  const Poly x = Poly::variable(R, "x"), y = Poly::variable(R, "y");
  const ParityMap& d = t.d;
  const ParityMap id = ParityMap::identity(t.V);
  BlockAssembler D(res.layout, res.layout, Parity::odd);
  D.add(0, 0, d);                                  // y1  = d x1 + f2 x'1
  D.add(0, 1, shift_source(id).scaled(y));
  D.add(1, 1, -shift(d));                          // y'1 = -d x'1 + f1 x1
  D.add(1, 0, shift_target(id).scaled(x));
  D.add(2, 2, d);                                  // y2  = d x2 + x'1 + f1 x'2
  D.add(2, 1, shift_source(id));
  D.add(2, 3, shift_source(id).scaled(x));
  D.add(3, 3, -shift(d));                          // y'2 = -d x'2 + f2 x2 - x1
  D.add(3, 2, shift_target(id).scaled(y));
  D.add(3, 0, -shift_target(id));
  EXPECT_TRUE(compare_maps("D", res.W.differential(), D.build()).pass);

  BlockAssembler H(res.layout, res.layout, Parity::odd);
  H.add(0, 3, -shift_source(id)); // y1 = -x'2
  H.add(1, 2, shift_target(id));  // y'1 = x2
  EXPECT_TRUE(compare_maps("h", res.h, H.build()).pass);
}

TEST(TwistedDifferentials, ZeroFactors) {
  const PolyRing& R = xring();
  SuperModule v(R, 1, 1);
  ParityMap d(v, v, Parity::odd, M(R, 1, 1, {"x"}), M(R, 1, 1, {"0"}));
  TwistFamily t = make_twist_family(d, {Poly(R), Poly(R)});
  Lemma2Result res = lemma2_build(t);
  expect_all_pass(res.checks);
  for (const auto& c : res.d_list) {
    // d_i = d (+) -d[1] when every factor vanishes.
    EXPECT_TRUE(extract_block(c.differential(), DirectSumLayout({v, shift(v)}), DirectSumLayout({v, shift(v)}), 0, 1)
                    .is_zero());
  }
  EXPECT_TRUE(verify(res.cert).verdict.pass);
}

TEST(TwistedDifferentials, ThreeFactorTensor) {
  const PolyRing& R = PolyRing::get(rationals(), {"x", "y", "z"});
  const Poly x = Poly::variable(R, "x"), y = Poly::variable(R, "y"), z = Poly::variable(R, "z");
  auto piece = [&](const char* a, const char* b) {
    SuperModule v(R, 1, 1, "k");
    return ParityMap(v, v, Parity::odd, M(R, 1, 1, {a}), M(R, 1, 1, {b}));
  };
  auto tsum = [](const ParityMap& a, const ParityMap& b) {
    return tensor(a, ParityMap::identity(b.source())) + tensor(ParityMap::identity(a.source()), b);
  };
  ParityMap d = tsum(tsum(piece("x", "-y*z"), piece("y", "0")), piece("0", "z"));
  ASSERT_EQ(curvature_check(d).curvature(), -(x * y * z));
  Lemma2Result res = lemma2_build(make_twist_family(d, {x, y, z}));
  expect_all_pass(res.checks);
  EXPECT_TRUE(verify(res.cert).verdict.pass);
}

TEST(TwistedDifferentials, InvalidFamilyRejected) {
  const PolyRing& R = xring();
  SuperModule v(R, 1, 1);
  ParityMap d(v, v, Parity::odd, M(R, 1, 1, {"x"}), M(R, 1, 1, {"y"}));
  EXPECT_THROW(make_twist_family(d, {Poly::variable(R, "x"), Poly::variable(R, "y")}), InvariantError);
}

TEST(TwistedDifferentials, RandomFamilies) {
  Rng rng(3);
  for (unsigned r : {2u, 3u, 4u})
    for (int k = 0; k < 4; ++k) {
      Lemma2Result res = lemma2_build(random_twist_family(rng, r, 4));
      expect_all_pass(res.checks);
      EXPECT_TRUE(verify(res.cert).verdict.pass);
    }
}

// ---------------------------------------------------------------- symmetric powers

TEST(SymPower, FirstPowerIsTheComplex) {
  const PolyRing& R = xring();
  TwoTerm c{2, 1, M(R, 1, 2, {"x", "y"})};
  SymPower s = sym_power(c, 1);
  EXPECT_EQ(s.complex.module().even_rank(), 2u);
  EXPECT_EQ(s.complex.module().odd_rank(), 1u);
  EXPECT_EQ(s.complex.differential().from_even(), M(R, 1, 2, {"x", "y"}));
  EXPECT_TRUE(s.complex.differential().from_odd().is_zero());
}

TEST(SymPower, SecondPowerOfALine) {
  const PolyRing& R = xring();
  TwoTerm c{1, 1, M(R, 1, 1, {"x"})};
  SymPower s = sym_power(c, 2);
  // Terms (S^2 C0 | C0 (x) C1): u^2 -> 2 x u (x) w.
  EXPECT_EQ(s.complex.module().even_rank(), 1u);
  EXPECT_EQ(s.complex.module().odd_rank(), 1u);
  EXPECT_EQ(s.complex.differential().from_even(), M(R, 1, 1, {"2*x"}));
  EXPECT_TRUE(s.complex.is_complex());
}

TEST(SymPower, HigherPowersSquareToZero) {
  const PolyRing& R = xring();
  TwoTerm c{2, 2, M(R, 2, 2, {"x", "y", "1", "x*y"})};
  for (unsigned r = 1; r <= 4; ++r) EXPECT_TRUE(sym_power(c, r).complex.is_complex());
}

TEST(SymPower, AugmentationKillsTheComplement) {
  const PolyRing& R = xring();
  // C0 = <u0> (+) <1>, C1 = <w0>, d(u0) = x w0, d(1) = w0.
  TwoTerm c{2, 1, M(R, 1, 2, {"x", "1"})};
  for (unsigned r = 1; r <= 3; ++r) {
    SymPower s = sym_power(c, r);
    ChainMap aug = sym_power_augmentation(s, c, r);
    const PolyMatrix full = aug.map.full();
    for (std::size_t col = 0; col < s.basis.size(); ++col) {
      const auto& [alpha, subset] = s.basis[col];
      const bool top = subset == 0 && alpha[0] == 0 && alpha[1] == r;
      EXPECT_EQ(full(0, col), Poly(R, top ? 1 : 0));
    }
  }
}

// ---------------------------------------------------------------- lambda section

TEST(LambdaSection, DocumentedInstance) {
  for (unsigned r : {2u, 3u, 5u}) {
    TauData t = example_tau_data(r);
    EXPECT_TRUE(tau_zero_composition(t).pass);
    LambdaSectionResult res = s_lambda_check(t);
    ASSERT_TRUE(res.verdict.pass) << res.verdict.to_string();
    EXPECT_EQ(res.square, Poly::variable(*t.ring, "lambda").pow(r));
    EXPECT_TRUE(res.square0.is_zero());
    ASSERT_TRUE(res.family.has_value());
    Lemma1Result l1 = lemma1_build(*res.family);
    expect_all_pass(l1.checks);
  }
}

TEST(LambdaSection, PerturbationResidual) {
  for (unsigned r : {2u, 3u, 4u}) {
    TauData t = example_tau_data(r);
    // nu(x * 1^{r-2}) = e*: nu((x + lambda)^{r-1}) gains (r-1) x lambda^{r-2} e*,
    // and pairing with dt(x + lambda 1) = lambda e leaves (r-1) x lambda^{r-1}.
    t.nu.emplace_back(std::vector<unsigned>{1, r - 2}, std::vector<Poly>{Poly(*t.ring, 1)});
    LambdaSectionResult res = s_lambda_check(t);
    EXPECT_FALSE(res.verdict.pass);
    const Poly x = Poly::variable(*t.ring, "x0");
    const Poly lam = Poly::variable(*t.ring, "lambda");
    EXPECT_EQ(res.square - lam.pow(r), (x * lam.pow(r - 1)).scaled(Scalar(rationals(), long(r - 1))));
  }
}

TEST(LambdaSection, RandomInstances) {
  Rng rng(17);
  for (unsigned r : {2u, 3u, 4u})
    for (int k = 0; k < 3; ++k) {
      TauData t = random_tau_data(rng, r, 2, 3);
      LambdaSectionResult res = s_lambda_check(t);
      ASSERT_TRUE(res.verdict.pass) << res.verdict.to_string();
      EXPECT_TRUE(lemma1_build(*res.family).pass());
    }
}

// ---------------------------------------------------------------- twisted sections

TEST(TwistedSection, DocumentedR2) {
  RamondData R = example_ramond_data();
  EXPECT_TRUE(ramond_check(R).pass);
  const SpinorModule ext(*R.ring, 1, true);
  for (long xi : {1L, -1L}) {
    OrthoSection s = s_xi_build(R, Scalar(rationals(), xi));
    EXPECT_TRUE(clifford_square(s, ext).is_zero());
  }
  TwistReduction red = s_xi_reduce(R);
  const Poly x = Poly::variable(*R.ring, "x");
  ASSERT_EQ(red.f_list.size(), 2u);
  EXPECT_EQ(red.f_list[0], -x);
  EXPECT_EQ(red.f_list[1], x.scaled(Scalar(rationals(), 3)));
  expect_all_pass(red.match_verdicts);
  CertificateReport rep = verify(red.cert);
  EXPECT_TRUE(rep.verdict.pass) << rep.verdict.to_string();
  EXPECT_TRUE(red.pass());
}

TEST(TwistedSection, UntwistedCofactor) {
  RamondData R = example_ramond_data();
  OrthoSection s = s_xi_build(R, Scalar(rationals(), 1));
  ASSERT_TRUE(s.line.has_value());
  EXPECT_EQ(s.line->first, R.e1 - R.e2);
  EXPECT_EQ(s.line->second, R.e1 + R.e2);
}

TEST(TwistedSection, CyclotomicCofactorByDivision) {
  const ScalarField& F = cyclotomic_field(3);
  const PolyRing& R = PolyRing::get(F, {"e1", "e2"});
  const Poly e1 = Poly::variable(R, "e1"), e2 = Poly::variable(R, "e2");
  for (const Scalar& xi : roots_of_unity(F, 3))
    EXPECT_EQ(cyclotomic_cofactor(e1, e2, xi, 3), exact_divide(e1.pow(3) - e2.pow(3), e1 - e2.scaled(xi)));
}

TEST(TwistedSection, VanishingSecondForm) {
  const PolyRing& R = xring();
  const Poly x = Poly::variable(R, "x");
  EXPECT_EQ(cyclotomic_cofactor(x, Poly(R), Scalar(rationals(), -1), 2), x);
}

TEST(TwistedSection, NonRootRejected) {
  EXPECT_THROW(s_xi_build(example_ramond_data(), Scalar(rationals(), 2)), InvariantError);
}

TEST(TwistedSection, RandomReductions) {
  Rng rng(23);
  for (unsigned r : {2u, 3u, 4u}) {
    TwistReduction red = s_xi_reduce(random_ramond_data(rng, r, 2));
    EXPECT_TRUE(red.pass());
    EXPECT_EQ(red.match_verdicts.size(), r);
  }
}

// ---------------------------------------------------------------- cone lifting

TEST(ConeLift, ZeroMapGivesPlainPair) {
  Rng rng(2);
  const PolyRing& R = xring();
  CurvedComplex A = random_complex(rng, R, 1);
  CurvedComplex B = random_complex(rng, R, 2);
  ChainMap g = make_chain_map(A, B, ParityMap::zero(A.module(), B.module(), Parity::even));
  ChainMap f = make_chain_map(B, B, ParityMap::identity(B.module()));
  ParityMap h = ParityMap::zero(A.module(), B.module(), Parity::odd);
  ChainMap lifted = cone_lift(g, f, h);
  EXPECT_TRUE(compare_maps("restriction", compose(lifted.map, cone_inclusion(g)), f.map).pass);
  EXPECT_TRUE(compose(lifted.map, ParityMap::identity(lifted.source.module())).full().submatrix(
                                                                                       {0}, {0}) == f.map.full().submatrix({0}, {0}));
}

TEST(ConeLift, RandomInstances) {
  Rng rng(29);
  for (int k = 0; k < 10; ++k) {
    ConeInstance c = random_cone_instance(rng, 3);
    ConeLiftChecks checks = cone_lift_checks(c.g, c.f, c.h1, c.h2);
    EXPECT_TRUE(checks.pass()) << checks.restriction.to_string() << checks.difference.to_string()
                               << checks.inverse.to_string();
  }
}

TEST(ConeLift, BadHomotopyRejected) {
  Rng rng(31);
  ConeInstance c = random_cone_instance(rng, 2);
  ParityMap bad = c.h1;
  bad.from_even()(0, 0) += Poly(c.h1.ring(), 1);
  EXPECT_THROW(cone_lift(c.g, c.f, bad), InvariantError);
}
