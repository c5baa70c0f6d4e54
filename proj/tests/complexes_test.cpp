#include <random>

#include <gtest/gtest.h>

#include "curvedk/complexes.hpp"

using namespace curvedk;

namespace {

const PolyRing& ring() { return PolyRing::get(rationals(), {"x", "y", "lambda"}); }
Poly P(const char* text) { return Poly::parse(ring(), text); }

PolyMatrix M(std::size_t rows, std::size_t cols, std::vector<const char*> entries) {
  PolyMatrix m(ring(), rows, cols);
  for (std::size_t k = 0; k < entries.size(); ++k) m(k / cols, k % cols) = P(entries[k]);
  return m;
}

ParityMap odd_map(const SuperModule& v, PolyMatrix a, PolyMatrix b) {
  return ParityMap(v, v, Parity::odd, std::move(a), std::move(b));
}

CurvedComplex koszul_x() {
  SuperModule v(ring(), 1, 1);
  return curvature_check(odd_map(v, M(1, 1, {"x"}), M(1, 1, {"0"})));
}

} // namespace

TEST(Curvature, ZeroDifferential) {
  SuperModule v(ring(), 2, 1);
  EXPECT_TRUE(curvature_check(ParityMap::zero(v, v, Parity::odd)).curvature().is_zero());
}

TEST(Curvature, KoszulFactorization) {
  SuperModule v(ring(), 1, 1);
  CurvedComplex c = curvature_check(odd_map(v, M(1, 1, {"x"}), M(1, 1, {"-y"})));
  EXPECT_EQ(c.curvature(), P("-x*y"));
}

TEST(Curvature, UpperTriangularLambdaFamily) {
  for (int r = 2; r <= 5; ++r) {
    SuperModule v(ring(), 2, 2);
    PolyMatrix a = M(2, 2, {"lambda", "x", "0", "lambda"});
    PolyMatrix b(ring(), 2, 2);
    const Poly lam = P("lambda");
    b(0, 0) = lam.pow(r - 1);
    b(0, 1) = -P("x") * lam.pow(r - 2);
    b(1, 1) = lam.pow(r - 1);
    CurvedComplex c = curvature_check(odd_map(v, a, b));
    EXPECT_EQ(c.curvature(), lam.pow(r)) << r;
  }
}

TEST(Curvature, NonScalarSquareRejected) {
  SuperModule v(ring(), 1, 1);
  SuperModule w(ring(), 2, 2);
  try {
    curvature_check(odd_map(w, M(2, 2, {"x", "0", "0", "1"}), M(2, 2, {"y", "0", "0", "1"})));
    FAIL();
  } catch (const InvariantError& e) {
    EXPECT_NE(std::string(e.what()).find("entry"), std::string::npos);
  }
  EXPECT_THROW(curvature_check(ParityMap::identity(v)), InvariantError);
}

TEST(Homotopy, TrivialAndPerturbed) {
  CurvedComplex c = koszul_x();
  ParityMap zero = ParityMap::zero(c.module(), c.module(), Parity::odd);
  ParityMap id = ParityMap::identity(c.module());
  EXPECT_TRUE(is_homotopy(c, c, zero, id, id).pass);

  // d = (1, 0) is contracted by h = (0, 1).
  SuperModule v(ring(), 1, 1);
  CurvedComplex u = curvature_check(odd_map(v, M(1, 1, {"1"}), M(1, 1, {"0"})));
  ParityMap h = odd_map(v, M(1, 1, {"0"}), M(1, 1, {"1"}));
  EXPECT_TRUE(is_null_homotopy(u, h).pass);
  ParityMap bad = h;
  bad.from_odd()(0, 0) += P("1");
  Verdict v2 = is_null_homotopy(u, bad);
  ASSERT_FALSE(v2.pass);
  ASSERT_TRUE(v2.entry.has_value());
  EXPECT_EQ(v2.entry->residual, P("1"));
}

TEST(ChainMaps, OddMapSign) {
  CurvedComplex c = koszul_x();
  // d itself is an odd chain map c -> c: d d = -(d d) holds since d^2 = 0.
  EXPECT_TRUE(is_chain_map(c.differential(), c, c).pass);
  EXPECT_TRUE(is_chain_map(ParityMap::identity(c.module()), c, c).pass);
  ParityMap f(c.module(), c.module(), Parity::even, M(1, 1, {"1"}), M(1, 1, {"0"}));
  EXPECT_FALSE(is_chain_map(f, c, c).pass);
}

TEST(Cone, OfIdentityIsContractible) {
  CurvedComplex c = koszul_x();
  ChainMap id = make_chain_map(c, c, ParityMap::identity(c.module()));
  CurvedComplex k = cone(id);
  DirectSumLayout lay = cone_layout(id);
  BlockAssembler h(lay, lay, Parity::odd);
  h.add(1, 0, shift_target(ParityMap::identity(c.module())));
  EXPECT_TRUE(is_null_homotopy(k, h.build()).pass);
}

TEST(Cone, OfZeroIsDirectSum) {
  SuperModule a(ring(), 1, 1, "a");
  CurvedComplex A = curvature_check(odd_map(a, M(1, 1, {"x"}), M(1, 1, {"-y"})));
  CurvedComplex B = curvature_check(direct_sum(A.differential(), A.differential()));
  ChainMap z = make_chain_map(A, B, ParityMap::zero(A.module(), B.module(), Parity::even));
  CurvedComplex k = cone(z);
  EXPECT_EQ(k.differential(), direct_sum(B.differential(), shift(A).differential()));
  EXPECT_EQ(k.curvature(), P("-x*y"));
}

TEST(Cone, InclusionAndProjection) {
  CurvedComplex c = koszul_x();
  ChainMap f = make_chain_map(c, c, ParityMap::identity(c.module()).scaled(P("y")));
  CurvedComplex k = cone(f);
  ParityMap i = cone_inclusion(f);
  ParityMap p = cone_projection(f);
  EXPECT_TRUE(is_chain_map(i, c, k).pass);
  EXPECT_TRUE(is_chain_map(p, k, shift(c)).pass);
  EXPECT_TRUE(compose(p, i).is_zero());
}

TEST(Filtration, TrivialFiltration) {
  CurvedComplex c = koszul_x();
  Filtration f{{{0, 1}}};
  EXPECT_TRUE(filtration_verify(c, f).pass);
  EXPECT_EQ(associated_graded(c, f, 1), c);
}

TEST(Filtration, NonInvariantStepLocated) {
  CurvedComplex c = koszul_x();
  // d sends e+ (index 0) to x e- (index 1)
  Filtration good{{{0, 1}, {1}}};
  EXPECT_TRUE(filtration_verify(c, good).pass);
  Filtration bad{{{0, 1}, {0}}};
  Verdict v = filtration_verify(c, bad);
  ASSERT_FALSE(v.pass);
  EXPECT_EQ(v.entry->row, 1u);
  EXPECT_EQ(v.entry->col, 0u);
  CurvedComplex g1 = associated_graded(c, good, 1);
  EXPECT_EQ(g1.module().even_rank(), 1u);
  EXPECT_EQ(g1.module().odd_rank(), 0u);
}

TEST(Exactness, ZeroComplexPassesVacuously) {
  SuperModule v(ring(), 0, 0);
  CurvedComplex c = curvature_check(ParityMap::zero(v, v, Parity::odd));
  EXPECT_TRUE(strict_exactness_sample(c, {}, 5, 1).verdict.pass);
}

TEST(Exactness, KoszulOffItsZeroLocus) {
  CurvedComplex c = koszul_x();
  ExactnessReport r = strict_exactness_sample(c, SupportLocus{{P("x")}}, 20, 7);
  EXPECT_TRUE(r.verdict.pass) << r.verdict.to_string();
  EXPECT_EQ(r.points.size(), 20u);
  for (const auto& pt : r.points) EXPECT_NE(pt.coordinates[0], 0);
}

TEST(Exactness, KoszulEverywhereFailsAtOrigin) {
  CurvedComplex c = koszul_x();
  ExactnessReport r = strict_exactness_sample(c, SupportLocus{{P("1")}}, 20, 7);
  EXPECT_FALSE(r.verdict.pass);
  EXPECT_FALSE(r.points.front().exact);
}

TEST(Exactness, UnreachableLocusThrows) {
  CurvedComplex c = koszul_x();
  EXPECT_THROW(strict_exactness_sample(c, SupportLocus{{P("0")}}, 3, 1), Error);
}

TEST(Exactness, RankAt) {
  PolyMatrix m = M(2, 2, {"x", "y", "x", "y"});
  EXPECT_EQ(rank_at(m, {Rational(1), Rational(2), Rational(0)}), 1u);
  EXPECT_EQ(rank_at(m, {Rational(0), Rational(0), Rational(0)}), 0u);
}
