#include <random>

#include <gtest/gtest.h>

#include "curvedk/clifford.hpp"
#include "test_support.hpp"

using namespace curvedk;
using curvedk::testing::random_poly;

namespace {

const PolyRing& ring() { return PolyRing::get(rationals(), {"x", "y", "z"}); }
Poly P(const char* text) { return Poly::parse(ring(), text); }

OrthoSection random_section(std::mt19937_64& rng, std::size_t n, bool line) {
  OrthoSection s;
  for (std::size_t k = 0; k < n; ++k) {
    s.vector_part.push_back(random_poly(ring(), rng, 3));
    s.covector_part.push_back(random_poly(ring(), rng, 3));
  }
  if (line) s.line = std::make_pair(random_poly(ring(), rng, 3), random_poly(ring(), rng, 3));
  return s;
}

} // namespace

TEST(Spinor, RanksAndOrder) {
  SpinorModule s(ring(), 3);
  EXPECT_EQ(s.module().even_rank(), 4u);
  EXPECT_EQ(s.module().odd_rank(), 4u);
  EXPECT_EQ(s.module().even_labels(),
            (std::vector<std::string>{"1", "e0*^e1*", "e0*^e2*", "e1*^e2*"}));
  EXPECT_EQ(s.module().odd_labels(),
            (std::vector<std::string>{"e0*", "e0*^e1*^e2*", "e1*", "e2*"}));
  SpinorModule t(ring(), 0);
  EXPECT_EQ(t.module().rank(), 1u);
}

TEST(Clifford, ZeroSection) {
  SpinorModule s(ring(), 2);
  OrthoSection z{{Poly(ring()), Poly(ring())}, {Poly(ring()), Poly(ring())}, std::nullopt};
  EXPECT_TRUE(clifford_action(z, s).is_zero());
  EXPECT_TRUE(clifford_square(z, s).is_zero());
}

TEST(Clifford, RankOneMatrix) {
  SpinorModule s(ring(), 1);
  OrthoSection sec{{P("x")}, {P("y")}, std::nullopt};
  ParityMap a = clifford_action(sec, s);
  PolyMatrix full = a.full();
  // basis (1 | e*): 1 -> y e*, e* -> x 1
  EXPECT_EQ(full(1, 0), P("y"));
  EXPECT_EQ(full(0, 1), P("x"));
  EXPECT_EQ(compose(a, a), ParityMap::identity(s.module()).scaled(P("x*y")));
  EXPECT_EQ(clifford_square(sec, s), P("x*y"));
}

TEST(Clifford, DisjointSupportsAreIsotropic) {
  SpinorModule s(ring(), 2);
  OrthoSection sec{{P("x"), Poly(ring())}, {Poly(ring()), P("y")}, std::nullopt};
  ParityMap a = clifford_action(sec, s);
  EXPECT_FALSE(a.is_zero());
  EXPECT_TRUE(compose(a, a).is_zero());
}

TEST(Clifford, RelationOnRandomSections) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = t % 5 + 1;
    SpinorModule s(ring(), n, t % 2);
    OrthoSection sec = random_section(rng, n, t % 2);
    ParityMap a = clifford_action(sec, s);
    EXPECT_EQ(compose(a, a), ParityMap::identity(s.module()).scaled(quadratic_form(sec, ring())));
  }
}

TEST(Clifford, BilinearityAndPolarization) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    SpinorModule s(ring(), 3);
    OrthoSection u = random_section(rng, 3, false), v = random_section(rng, 3, false);
    OrthoSection w = u;
    Poly mixed(ring());
    for (std::size_t k = 0; k < 3; ++k) {
      w.vector_part[k] += v.vector_part[k];
      w.covector_part[k] += v.covector_part[k];
      mixed += u.covector_part[k] * v.vector_part[k] + v.covector_part[k] * u.vector_part[k];
    }
    EXPECT_EQ(clifford_action(w, s), clifford_action(u, s) + clifford_action(v, s));
    // With q = <phi, c>, the polarization is the symmetrized pairing.
    EXPECT_EQ(quadratic_form(w, ring()) - quadratic_form(u, ring()) - quadratic_form(v, ring()), mixed);
  }
}

TEST(Clifford, WedgeAndContractionSquareToZero) {
  std::mt19937_64 rng(8);
  SpinorModule s(ring(), 4);
  OrthoSection sec = random_section(rng, 4, false);
  OrthoSection wedge = sec, contract = sec;
  for (auto& p : wedge.vector_part) p = Poly(ring());
  for (auto& p : contract.covector_part) p = Poly(ring());
  ParityMap w = clifford_action(wedge, s), c = clifford_action(contract, s);
  EXPECT_TRUE(compose(w, w).is_zero());
  EXPECT_TRUE(compose(c, c).is_zero());
}

TEST(SpinorSplit, RoundTripAndShape) {
  SpinorModule ext(ring(), 1, true);
  EXPECT_EQ(ext.module().even_rank(), 2u);
  SpinorSplit sp = spinor_split(ext);
  EXPECT_EQ(sp.layout.module().even_rank(), 2u);
  EXPECT_EQ(sp.layout.module().odd_rank(), 2u);
  EXPECT_EQ(compose(sp.backward, sp.forward), ParityMap::identity(sp.layout.module()));
  EXPECT_EQ(compose(sp.forward, sp.backward), ParityMap::identity(ext.module()));
}

TEST(SpinorSplit, TransportedActionIsBlockMatrix) {
  // Transport of (c, phi, (a, b)) is [[s0, a], [b, -s0]] on S (+) S[1].
  std::mt19937_64 rng(13);
  for (std::size_t n = 0; n <= 3; ++n) {
    SpinorModule ext(ring(), n, true);
    SpinorSplit sp = spinor_split(ext);
    OrthoSection sec = random_section(rng, n, true);
    OrthoSection s0{sec.vector_part, sec.covector_part, std::nullopt};
    ParityMap t = compose(sp.backward, compose(clifford_action(sec, ext), sp.forward));
    ParityMap a0 = clifford_action(s0, sp.base);
    ParityMap id = ParityMap::identity(sp.base.module());
    BlockAssembler want(sp.layout, sp.layout, Parity::odd);
    want.add(0, 0, a0);
    want.add(0, 1, shift_source(id).scaled(sec.line->first));
    want.add(1, 0, shift_target(id).scaled(sec.line->second));
    want.add(1, 1, -shift(a0));
    EXPECT_EQ(t, want.build()) << n;
  }
}
