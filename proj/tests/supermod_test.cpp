#include <random>

#include <gtest/gtest.h>

#include "curvedk/supermod.hpp"
#include "test_support.hpp"

using namespace curvedk;
using curvedk::testing::random_poly;

namespace {

const PolyRing& xy() { return PolyRing::get(rationals(), {"x", "y"}); }
Poly P(const char* text) { return Poly::parse(xy(), text); }

PolyMatrix M(std::size_t rows, std::size_t cols, std::vector<const char*> entries) {
  PolyMatrix m(xy(), rows, cols);
  for (std::size_t k = 0; k < entries.size(); ++k) m(k / cols, k % cols) = P(entries[k]);
  return m;
}

ParityMap random_map(const SuperModule& s, const SuperModule& t, Parity p, std::mt19937_64& rng) {
  PolyMatrix full(s.ring(), t.rank(), s.rank());
  for (std::size_t i = 0; i < t.rank(); ++i)
    for (std::size_t j = 0; j < s.rank(); ++j)
      if ((t.parity_of(i) + s.parity_of(j)) == p) full(i, j) = random_poly(s.ring(), rng, 2, 3);
  return ParityMap::from_full(s, t, p, full);
}

SuperModule random_module(std::mt19937_64& rng, const char* prefix) {
  std::uniform_int_distribution<int> r(0, 3);
  return SuperModule(xy(), r(rng), r(rng), prefix);
}

Parity random_parity(std::mt19937_64& rng) { return rng() % 2 ? Parity::odd : Parity::even; }

} // namespace

TEST(SuperModule, ShiftIsInvolution) {
  SuperModule m(xy(), 2, 3);
  EXPECT_EQ(shift(m).even_rank(), 3u);
  EXPECT_EQ(shift(shift(m)), m);
  EXPECT_EQ(dual(dual(m)), m);
}

TEST(SuperModule, DuplicateLabelsRejected) {
  EXPECT_THROW(SuperModule(xy(), {"a", "b"}, {"a"}), ShapeMismatch);
}

TEST(ParityMap, KoszulSquare) {
  SuperModule v(xy(), 1, 1);
  ParityMap d(v, v, Parity::odd, M(1, 1, {"x"}), M(1, 1, {"-y"}));
  ParityMap d2 = compose(d, d);
  EXPECT_EQ(d2.parity(), Parity::even);
  EXPECT_EQ(d2.from_even()(0, 0), P("-x*y"));
  EXPECT_EQ(d2.from_odd()(0, 0), P("-x*y"));
  EXPECT_EQ(compose(ParityMap::identity(v), d), d);
  EXPECT_EQ(compose(d, ParityMap::identity(v)), d);
}

TEST(ParityMap, FullMatrixRoundTrip) {
  SuperModule s(xy(), 2, 1), t(xy(), 1, 2);
  ParityMap f(s, t, Parity::odd, M(2, 2, {"x", "0", "1", "y"}), M(1, 1, {"x*y"}));
  PolyMatrix full = f.full();
  // odd: even source columns land in odd target rows
  EXPECT_EQ(full(1, 0), P("x"));
  EXPECT_EQ(full(2, 1), P("y"));
  EXPECT_EQ(full(0, 2), P("x*y"));
  EXPECT_EQ(ParityMap::from_full(s, t, Parity::odd, full), f);
  EXPECT_EQ(f.entry(2, 1), P("y"));
  EXPECT_TRUE(f.entry(0, 0).is_zero());
  PolyMatrix bad = full;
  bad(0, 0) = P("1");
  EXPECT_THROW(ParityMap::from_full(s, t, Parity::odd, bad), ShapeMismatch);
}

TEST(ParityMap, ComposeShapeMismatch) {
  SuperModule a(xy(), 1, 1), b(xy(), 2, 1);
  EXPECT_THROW(compose(ParityMap::identity(a), ParityMap::identity(b)), ShapeMismatch);
}

TEST(ParityMap, ComposeIsAssociative) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    SuperModule a = random_module(rng, "a"), b = random_module(rng, "b"), c = random_module(rng, "c"),
                d = random_module(rng, "d");
    ParityMap h = random_map(a, b, random_parity(rng), rng);
    ParityMap g = random_map(b, c, random_parity(rng), rng);
    ParityMap f = random_map(c, d, random_parity(rng), rng);
    EXPECT_EQ(compose(compose(f, g), h), compose(f, compose(g, h)));
    // compose agrees with full-matrix multiplication
    EXPECT_EQ(compose(f, g).full(), f.full() * g.full());
  }
}

TEST(ParityMap, ShiftAndDualInvolutions) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    SuperModule a = random_module(rng, "a"), b = random_module(rng, "b");
    ParityMap f = random_map(a, b, random_parity(rng), rng);
    EXPECT_EQ(shift(shift(f)), f);
    EXPECT_EQ(dual(dual(f)), f);
    EXPECT_EQ(shift(f).parity(), f.parity());
    EXPECT_EQ(shift_source(f).parity(), flip(f.parity()));
    EXPECT_EQ(dual(f).full(), f.full().transpose());
  }
}

TEST(ParityMap, ShiftedMapHasSameEntriesInSwappedOrder) {
  SuperModule s(xy(), 1, 2), t(xy(), 2, 1);
  ParityMap f(s, t, Parity::even, M(2, 1, {"x", "y"}), M(1, 2, {"1", "x*y"}));
  PolyMatrix a = f.full(), b = shift(f).full();
  // in the shifted module the old odd vectors come first
  auto perm = [](std::size_t even, std::size_t odd) {
    std::vector<std::size_t> p;
    for (std::size_t i = 0; i < odd; ++i) p.push_back(even + i);
    for (std::size_t i = 0; i < even; ++i) p.push_back(i);
    return p;
  };
  EXPECT_EQ(b, a.submatrix(perm(2, 1), perm(1, 2)));
}

TEST(ParityMap, TensorOddOddSupercommutes) {
  // f, g odd with one-dimensional source and target.
  SuperModule e(xy(), 1, 0, "e"), o(xy(), 0, 1, "o");
  SuperModule e2(xy(), 1, 0, "u"), o2(xy(), 0, 1, "w");
  ParityMap f(e, o, Parity::odd, M(1, 1, {"x"}), PolyMatrix(xy(), 0, 0));
  ParityMap g(e2, o2, Parity::odd, M(1, 1, {"y"}), PolyMatrix(xy(), 0, 0));
  ParityMap fg = tensor(f, g);
  EXPECT_EQ(fg.parity(), Parity::even);
  EXPECT_EQ(fg.from_even()(0, 0), P("x*y"));
  // (1 (x) g)(f (x) 1) = (-1)^{|g||f|} f (x) g: the sign is -1 here.
  ParityMap lhs = compose(tensor(ParityMap::identity(o), g), tensor(f, ParityMap::identity(e2)));
  ParityMap rhs = compose(tensor(f, ParityMap::identity(o2)), tensor(ParityMap::identity(e), g));
  EXPECT_EQ(rhs, fg);
  EXPECT_EQ(lhs, -fg);
}

TEST(ParityMap, TensorSignOnOddSourceVector) {
  SuperModule v(xy(), 1, 1), w(xy(), 1, 1);
  ParityMap id = ParityMap::identity(v);
  ParityMap g(w, w, Parity::odd, M(1, 1, {"x"}), M(1, 1, {"y"}));
  PolyMatrix full = tensor(id, g).full();
  // source basis: (v+ w+), (v- w-), (v+ w-), (v- w+)
  EXPECT_EQ(full(2, 0), P("x"));  // v+ w+ -> v+ w-
  EXPECT_EQ(full(3, 1), P("-y")); // v- w- -> -(v- w+)
  EXPECT_EQ(full(0, 2), P("y"));
  EXPECT_EQ(full(1, 3), P("-x"));
}

TEST(ParityMap, TensorCompositionSignRule) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 30; ++t) {
    SuperModule a = random_module(rng, "a"), b = random_module(rng, "b"), c = random_module(rng, "c");
    SuperModule p = random_module(rng, "p"), q = random_module(rng, "q"), r = random_module(rng, "r");
    ParityMap f2 = random_map(a, b, random_parity(rng), rng), f = random_map(b, c, random_parity(rng), rng);
    ParityMap g2 = random_map(p, q, random_parity(rng), rng), g = random_map(q, r, random_parity(rng), rng);
    ParityMap lhs = compose(tensor(f, g), tensor(f2, g2));
    ParityMap rhs = tensor(compose(f, f2), compose(g, g2));
    if (g.parity() == Parity::odd && f2.parity() == Parity::odd) rhs = -rhs;
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(ParityMap, DirectSumIsBlockDiagonal) {
  SuperModule a(xy(), 1, 1), b(xy(), 1, 1);
  ParityMap d(a, a, Parity::odd, M(1, 1, {"x"}), M(1, 1, {"-y"}));
  EXPECT_THROW(direct_sum(d, ParityMap::identity(b)), ShapeMismatch);
  ParityMap z = direct_sum(d, -d);
  EXPECT_EQ(compose(z, z), ParityMap::identity(z.source()).scaled(P("-x*y")));
  EXPECT_EQ(z.full()(2, 0), P("x"));
  EXPECT_EQ(z.full()(3, 1), P("-x"));
}

TEST(Layout, AssembleAndExtract) {
  SuperModule a(xy(), 1, 1, "a"), b(xy(), 2, 1, "b");
  DirectSumLayout lay({a, b});
  EXPECT_EQ(lay.module().even_rank(), 3u);
  EXPECT_EQ(lay.global_index(1, 0), 1u);
  EXPECT_EQ(lay.global_index(0, 1), 3u);
  EXPECT_EQ(lay.global_index(1, 2), 4u);
  ParityMap f(a, b, Parity::odd, M(1, 1, {"x"}), M(2, 1, {"y", "1"}));
  BlockAssembler asm_(lay, lay, Parity::odd);
  asm_.add(1, 0, f);
  ParityMap big = asm_.build();
  EXPECT_EQ(extract_block(big, lay, lay, 1, 0), f);
  EXPECT_TRUE(extract_block(big, lay, lay, 0, 1).is_zero());
}

TEST(ParityMap, FirstMismatchLocatesEntry) {
  SuperModule v(xy(), 1, 1);
  ParityMap d(v, v, Parity::odd, M(1, 1, {"x"}), M(1, 1, {"-y"}));
  ParityMap e = d;
  e.from_odd()(0, 0) += P("1");
  auto mm = first_mismatch(d, e);
  ASSERT_TRUE(mm.has_value());
  EXPECT_EQ(mm->row, 0u);
  EXPECT_EQ(mm->col, 1u);
  EXPECT_EQ(mm->residual, P("-1"));
  EXPECT_FALSE(first_mismatch(d, d).has_value());
}
