#include <algorithm>
#include <random>
#include <set>

#include "curvedk/complexes.hpp"

namespace curvedk {

std::string Verdict::to_string() const {
  std::string out = (pass ? "PASS " : "FAIL ") + check;
  if (!detail.empty()) out += ": " + detail;
  if (entry)
    out += " [entry (" + std::to_string(entry->row) + "," + std::to_string(entry->col) +
           ") residual " + entry->residual.to_string() + "]";
  return out;
}

Verdict compare_maps(const std::string& check, const ParityMap& lhs, const ParityMap& rhs) {
  if (!same_shape(lhs.source(), rhs.source()) || !same_shape(lhs.target(), rhs.target()))
    return Verdict::fail(check, "shape mismatch");
  if (lhs.parity() != rhs.parity() && !(lhs.is_zero() && rhs.is_zero())) {
    if (lhs.is_zero() || rhs.is_zero()) {
      const ParityMap& nz = lhs.is_zero() ? rhs : lhs;
      auto mm = first_mismatch(nz, ParityMap::zero(nz.source(), nz.target(), nz.parity()));
      return Verdict::fail(check, "maps differ", mm);
    }
    return Verdict::fail(check, "parity mismatch");
  }
  if (lhs.parity() != rhs.parity()) return Verdict::ok(check);
  if (auto mm = first_mismatch(lhs, rhs)) return Verdict::fail(check, "maps differ", mm);
  return Verdict::ok(check);
}

namespace {

void require_odd_endomorphism(const ParityMap& d) {
  if (d.parity() != Parity::odd) throw InvariantError("differential must be odd");
  if (!d.is_endomorphism()) throw InvariantError("differential must be an endomorphism");
}

} // namespace

CurvedComplex curvature_check(const ParityMap& d) {
  require_odd_endomorphism(d);
  if (d.source().rank() == 0) return CurvedComplex(d, Poly(d.ring()));
  const ParityMap sq = compose(d, d);
  const Poly c = sq.entry(0, 0);
  return curvature_check(d, c);
}

CurvedComplex curvature_check(const ParityMap& d, const Poly& expected) {
  require_odd_endomorphism(d);
  const ParityMap sq = compose(d, d);
  const ParityMap want = ParityMap::identity(d.source()).scaled(expected);
  if (auto mm = first_mismatch(sq, want)) {
    throw InvariantError("d^2 is not " + expected.to_string() + " * id: entry (" + std::to_string(mm->row) + "," +
                         std::to_string(mm->col) + ") of d^2 - c*id is " + mm->residual.to_string());
  }
  const PolyRing& ring = common_ring(d.ring(), expected.ring());
  return CurvedComplex(d.embed(ring), expected.embed(ring));
}

CurvedComplex shift(const CurvedComplex& c) { return curvature_check(-shift(c.differential()), c.curvature()); }

CurvedComplex direct_sum(const CurvedComplex& a, const CurvedComplex& b) {
  if (!(a.curvature() == b.curvature())) throw InvariantError("direct sum of complexes with different curvature");
  return curvature_check(direct_sum(a.differential(), b.differential()), a.curvature());
}

Verdict is_chain_map(const ParityMap& f, const CurvedComplex& source, const CurvedComplex& target) {
  if (!same_shape(f.source(), source.module()) || !same_shape(f.target(), target.module()))
    throw ShapeMismatch("is_chain_map: map does not go between the given complexes");
  ParityMap lhs = compose(f, source.differential());
  ParityMap rhs = compose(target.differential(), f);
  if (f.parity() == Parity::odd) rhs = -rhs;
  return compare_maps("chain map", lhs, rhs);
}

Verdict is_homotopy(const CurvedComplex& source, const CurvedComplex& target, const ParityMap& h,
                    const ParityMap& f, const ParityMap& g) {
  if (h.parity() != Parity::odd) return Verdict::fail("homotopy", "homotopy must be odd");
  if (!same_shape(h.source(), source.module()) || !same_shape(h.target(), target.module()))
    throw ShapeMismatch("is_homotopy: h does not go between the given complexes");
  ParityMap lhs = compose(target.differential(), h) + compose(h, source.differential());
  return compare_maps("homotopy", lhs, f - g);
}

Verdict is_null_homotopy(const CurvedComplex& c, const ParityMap& h) {
  const ParityMap id = ParityMap::identity(c.module());
  return is_homotopy(c, c, h, id, ParityMap::zero(c.module(), c.module(), Parity::even));
}

ChainMap make_chain_map(const CurvedComplex& source, const CurvedComplex& target, const ParityMap& map) {
  if (!(source.curvature() == target.curvature()))
    throw InvariantError("chain map between complexes of different curvature (" + source.curvature().to_string() +
                         " vs " + target.curvature().to_string() + ")");
  Verdict v = is_chain_map(map, source, target);
  if (!v) throw InvariantError(v.to_string());
  return ChainMap{source, target, map};
}

DirectSumLayout cone_layout(const ChainMap& f) {
  return DirectSumLayout({f.target.module(), shift(f.source.module())});
}

CurvedComplex cone(const ChainMap& f) {
  if (f.map.parity() != Parity::even) throw InvariantError("cone: chain map must be even");
  if (!(f.source.curvature() == f.target.curvature())) throw InvariantError("cone: curvature mismatch");
  DirectSumLayout lay = cone_layout(f);
  BlockAssembler d(lay, lay, Parity::odd);
  d.add(0, 0, f.target.differential());
  d.add(0, 1, shift_source(f.map));
  d.add(1, 1, -shift(f.source.differential()));
  return curvature_check(d.build(), f.target.curvature());
}

ParityMap cone_inclusion(const ChainMap& f) {
  DirectSumLayout lay = cone_layout(f);
  DirectSumLayout src({f.target.module()});
  BlockAssembler a(src, lay, Parity::even);
  a.add(0, 0, ParityMap::identity(f.target.module()));
  return a.build();
}

ParityMap cone_projection(const ChainMap& f) {
  DirectSumLayout lay = cone_layout(f);
  const SuperModule shifted = shift(f.source.module());
  DirectSumLayout tgt({shifted});
  BlockAssembler a(lay, tgt, Parity::even);
  a.add(0, 1, ParityMap::identity(shifted));
  return a.build();
}

Verdict filtration_verify(const CurvedComplex& c, const Filtration& f) {
  const std::size_t n = c.module().rank();
  const std::string check = "filtration";
  std::vector<std::set<std::size_t>> steps;
  for (std::size_t j = 0; j < f.steps.size(); ++j) {
    std::set<std::size_t> s(f.steps[j].begin(), f.steps[j].end());
    if (s.size() != f.steps[j].size()) return Verdict::fail(check, "step " + std::to_string(j + 1) + " repeats an index");
    if (!s.empty() && *s.rbegin() >= n)
      return Verdict::fail(check, "step " + std::to_string(j + 1) + " has index out of range");
    if (j == 0 && s.size() != n) return Verdict::fail(check, "first step must contain every basis vector");
    if (j > 0 && !std::includes(steps.back().begin(), steps.back().end(), s.begin(), s.end()))
      return Verdict::fail(check, "step " + std::to_string(j + 1) + " is not contained in the previous step");
    steps.push_back(std::move(s));
  }
  if (steps.empty() && n > 0) return Verdict::fail(check, "filtration has no steps");
  const PolyMatrix d = c.differential().full();
  for (std::size_t j = 0; j < steps.size(); ++j) {
    for (std::size_t col : steps[j]) {
      for (std::size_t row = 0; row < n; ++row) {
        if (steps[j].count(row) || d(row, col).is_zero()) continue;
        return Verdict::fail(check,
                             "d maps basis vector " + std::to_string(col) + " out of step " + std::to_string(j + 1),
                             EntryMismatch{row, col, d(row, col)});
      }
    }
  }
  return Verdict::ok(check);
}

std::vector<std::size_t> graded_indices(const CurvedComplex& c, const Filtration& f, std::size_t j) {
  if (j == 0 || j > f.steps.size()) throw ShapeMismatch("graded piece index out of range");
  std::set<std::size_t> here(f.steps[j - 1].begin(), f.steps[j - 1].end());
  if (j < f.steps.size())
    for (std::size_t i : f.steps[j]) here.erase(i);
  for (std::size_t i : here)
    if (i >= c.module().rank()) throw ShapeMismatch("filtration index out of range");
  return {here.begin(), here.end()};
}

CurvedComplex associated_graded(const CurvedComplex& c, const Filtration& f, std::size_t j) {
  const std::vector<std::size_t> idx = graded_indices(c, f, j);
  const SuperModule& m = c.module();
  std::vector<std::string> even, odd;
  for (std::size_t i : idx) {
    if (i < m.even_rank())
      even.push_back(m.even_labels()[i]);
    else
      odd.push_back(m.odd_labels()[i - m.even_rank()]);
  }
  SuperModule sub(m.ring(), std::move(even), std::move(odd));
  PolyMatrix block = c.differential().full().submatrix(idx, idx);
  return curvature_check(ParityMap::from_full(sub, sub, Parity::odd, block), c.curvature());
}

// ---------------------------------------------------------------- ranks

namespace {

constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kPrime);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a);
    a = mulmod(a, a);
    e >>= 1;
  }
  return r;
}

std::optional<std::uint64_t> reduce_mod_p(const Rational& q) {
  mpz_class num = q.get_num() % mpz_class(static_cast<unsigned long>(kPrime));
  if (num < 0) num += static_cast<unsigned long>(kPrime);
  mpz_class den = q.get_den() % mpz_class(static_cast<unsigned long>(kPrime));
  if (den == 0) return std::nullopt;
  return mulmod(num.get_ui(), powmod(den.get_ui(), kPrime - 2));
}

std::size_t rank_mod_p(std::vector<std::vector<std::uint64_t>> m, std::size_t cols) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t p = rank;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    const std::uint64_t inv = powmod(m[rank][c], kPrime - 2);
    for (std::size_t i = rank + 1; i < m.size(); ++i) {
      if (m[i][c] == 0) continue;
      const std::uint64_t f = mulmod(m[i][c], inv);
      for (std::size_t k = c; k < cols; ++k)
        if (m[rank][k]) m[i][k] = (m[i][k] + kPrime - mulmod(f, m[rank][k])) % kPrime;
    }
    ++rank;
  }
  return rank;
}

std::size_t rank_exact(std::vector<std::vector<Scalar>> m, std::size_t cols) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t p = rank;
    while (p < m.size() && m[p][c].is_zero()) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    const Scalar inv = m[rank][c].inverse();
    for (std::size_t i = rank + 1; i < m.size(); ++i) {
      if (m[i][c].is_zero()) continue;
      const Scalar f = m[i][c] * inv;
      for (std::size_t k = c; k < cols; ++k)
        if (!m[rank][k].is_zero()) m[i][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

std::vector<std::vector<Scalar>> evaluate_matrix(const PolyMatrix& m, const std::vector<Scalar>& point) {
  std::vector<std::vector<Scalar>> out(m.rows(), std::vector<Scalar>(m.cols(), Scalar(m.ring().field(), 0)));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) out[i][j] = m(i, j).evaluate(point);
  return out;
}

std::vector<Scalar> as_scalars(const PolyRing& ring, const std::vector<Rational>& point) {
  if (point.size() != ring.arity()) throw ShapeMismatch("evaluation point has wrong number of coordinates");
  std::vector<Scalar> out;
  for (const auto& q : point) out.emplace_back(ring.field(), q);
  return out;
}

// Rank modulo a large prime; never exceeds the rank over the field. nullopt
// when some entry is irrational or has a denominator divisible by the prime.
std::optional<std::size_t> rank_lower_bound(const std::vector<std::vector<Scalar>>& m, std::size_t cols) {
  std::vector<std::vector<std::uint64_t>> red(m.size(), std::vector<std::uint64_t>(cols, 0));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (m[i][j].is_zero()) continue;
      if (!m[i][j].is_rational()) return std::nullopt;
      auto r = reduce_mod_p(m[i][j].rational_part());
      if (!r) return std::nullopt;
      red[i][j] = *r;
    }
  }
  return rank_mod_p(std::move(red), cols);
}

} // namespace

std::size_t rank_at(const PolyMatrix& m, const std::vector<Rational>& point) {
  auto values = evaluate_matrix(m, as_scalars(m.ring(), point));
  return rank_exact(std::move(values), m.cols());
}

ExactnessReport strict_exactness_sample(const CurvedComplex& c, const SupportLocus& z, std::size_t trials,
                                        std::uint64_t seed, long height) {
  if (!c.is_complex()) throw InvariantError("strict exactness is only defined for curvature 0");
  const PolyRing& ring = c.ring();
  for (const auto& g : z.generators)
    if (g.ring().variables() != ring.variables())
      throw ContextMismatch("support locus generators live in a different ring");
  ExactnessReport report{Verdict::ok("strict exactness"), {}};
  const std::size_t n_even = c.module().even_rank();
  const std::size_t n_odd = c.module().odd_rank();
  const PolyMatrix& d_even = c.differential().from_even(); // V+ -> V-
  const PolyMatrix& d_odd = c.differential().from_odd();   // V- -> V+

  std::mt19937_64 rng(seed);
  const std::uint64_t width = static_cast<std::uint64_t>(2 * height + 1);
  const std::size_t max_attempts = 100 * std::max<std::size_t>(trials, 1) + 1;
  std::size_t attempts = 0;
  std::optional<std::pair<std::size_t, std::size_t>> reference;

  while (report.points.size() < trials) {
    if (attempts >= max_attempts)
      throw Error("could not find " + std::to_string(trials) + " sample points off the support locus after " +
                  std::to_string(attempts) + " attempts");
    std::vector<Rational> coords(ring.arity());
    if (attempts > 0)
      for (auto& x : coords) x = static_cast<long>(rng() % width) - height;
    ++attempts;
    const std::vector<Scalar> pt = as_scalars(ring, coords);
    bool off_z = true;
    for (const auto& g : z.generators) off_z = off_z && !g.embed(ring).evaluate(pt).is_zero();
    if (!off_z) continue;

    auto ve = evaluate_matrix(d_even, pt);
    auto vo = evaluate_matrix(d_odd, pt);
    // Over the field, rank(d+) + rank(d-) <= dim V- and <= dim V+ because d^2 = 0,
    // so lower bounds that already reach both dimensions are the exact ranks.
    std::size_t re = 0, ro = 0;
    auto le = rank_lower_bound(ve, n_even);
    auto lo = rank_lower_bound(vo, n_odd);
    if (le && lo && *le + *lo == n_odd && *le + *lo == n_even) {
      re = *le;
      ro = *lo;
    } else {
      re = rank_exact(std::move(ve), n_even);
      ro = rank_exact(std::move(vo), n_odd);
    }
    SamplePoint sp{coords, re, ro, re + ro == n_odd && re + ro == n_even};
    if (report.verdict.pass && !sp.exact) {
      std::string where;
      for (std::size_t i = 0; i < coords.size(); ++i)
        where += (i ? ", " : "") + ring.variables()[i] + "=" + coords[i].get_str();
      report.verdict = Verdict::fail("strict exactness", "not exact at (" + where + "): ranks " + std::to_string(re) +
                                                             "+" + std::to_string(ro) + " vs dims (" +
                                                             std::to_string(n_even) + "|" + std::to_string(n_odd) + ")");
    }
    if (!reference) reference = std::make_pair(re, ro);
    if (report.verdict.pass && *reference != std::make_pair(re, ro))
      report.verdict = Verdict::fail("strict exactness", "ranks of d vary between sample points");
    report.points.push_back(std::move(sp));
  }
  return report;
}

} // namespace curvedk
