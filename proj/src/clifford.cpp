#include <algorithm>
#include <bit>

#include "curvedk/clifford.hpp"

namespace curvedk {

namespace {

// Lexicographic comparison of the increasing index sequences of two subsets.
bool lex_less(std::uint32_t a, std::uint32_t b) {
  while (a && b) {
    const int ia = std::countr_zero(a), ib = std::countr_zero(b);
    if (ia != ib) return ia < ib;
    a &= a - 1;
    b &= b - 1;
  }
  return !a && b;
}

std::string subset_label(std::uint32_t s, std::size_t base_rank) {
  if (!s) return "1";
  std::string out;
  for (std::size_t k = 0; s >> k; ++k) {
    if (!((s >> k) & 1u)) continue;
    if (!out.empty()) out += "^";
    out += k == base_rank ? std::string("l*") : "e" + std::to_string(k) + "*";
  }
  return out;
}

// (-1)^{#{j in s : j < k}}
int sign_before(std::uint32_t s, std::size_t k) {
  return std::popcount(s & ((std::uint32_t{1} << k) - 1)) % 2 ? -1 : 1;
}

} // namespace

SpinorModule::SpinorModule(const PolyRing& ring, std::size_t base_rank, bool with_line)
    : base_rank_(base_rank), with_line_(with_line) {
  const std::size_t n = generators();
  if (n > 20) throw ShapeMismatch("spinor module too large");
  std::vector<std::uint32_t> even, odd;
  for (std::uint32_t s = 0; s < (std::uint32_t{1} << n); ++s) (std::popcount(s) % 2 ? odd : even).push_back(s);
  std::sort(even.begin(), even.end(), lex_less);
  std::sort(odd.begin(), odd.end(), lex_less);
  subsets_ = even;
  subsets_.insert(subsets_.end(), odd.begin(), odd.end());
  index_.assign(subsets_.size(), 0);
  for (std::size_t i = 0; i < subsets_.size(); ++i) index_[subsets_[i]] = i;
  std::vector<std::string> el, ol;
  for (auto s : even) el.push_back(subset_label(s, base_rank));
  for (auto s : odd) ol.push_back(subset_label(s, base_rank));
  module_ = SuperModule(ring, std::move(el), std::move(ol));
}

namespace {

void check_ranks(const OrthoSection& s, const SpinorModule& m) {
  if (s.vector_part.size() != m.base_rank() || s.covector_part.size() != m.base_rank())
    throw ShapeMismatch("section has " + std::to_string(s.vector_part.size()) + "/" +
                        std::to_string(s.covector_part.size()) + " coordinates, spinor base rank is " +
                        std::to_string(m.base_rank()));
  if (s.line.has_value() != m.with_line()) throw ShapeMismatch("section and spinor module disagree on the line summand");
}

} // namespace

ParityMap clifford_action(const OrthoSection& s, const SpinorModule& m) {
  check_ranks(s, m);
  const PolyRing& ring = m.module().ring();
  std::vector<Poly> wedge(s.covector_part.begin(), s.covector_part.end());
  std::vector<Poly> contract(s.vector_part.begin(), s.vector_part.end());
  if (s.line) {
    contract.push_back(s.line->first);
    wedge.push_back(s.line->second);
  }
  const std::size_t n = m.generators();
  PolyMatrix full(ring, m.module().rank(), m.module().rank());
  for (std::size_t col = 0; col < full.cols(); ++col) {
    const std::uint32_t set = m.subset(col);
    for (std::size_t k = 0; k < n; ++k) {
      const std::uint32_t bit = std::uint32_t{1} << k;
      const int sign = sign_before(set, k);
      if (set & bit) {
        if (contract[k].is_zero()) continue;
        Poly& e = full(m.index_of(set & ~bit), col);
        e += sign > 0 ? contract[k] : -contract[k];
      } else {
        if (wedge[k].is_zero()) continue;
        Poly& e = full(m.index_of(set | bit), col);
        e += sign > 0 ? wedge[k] : -wedge[k];
      }
    }
  }
  return ParityMap::from_full(m.module(), m.module(), Parity::odd, full.embed(ring));
}

Poly quadratic_form(const OrthoSection& s, const PolyRing& ring) {
  if (s.vector_part.size() != s.covector_part.size()) throw ShapeMismatch("section parts have different lengths");
  Poly q(ring);
  for (std::size_t k = 0; k < s.vector_part.size(); ++k) q += s.covector_part[k] * s.vector_part[k];
  if (s.line) q += s.line->first * s.line->second;
  return q;
}

Poly clifford_square(const OrthoSection& s, const SpinorModule& m) {
  const Poly q = quadratic_form(s, m.module().ring());
  const ParityMap a = clifford_action(s, m);
  const ParityMap want = ParityMap::identity(m.module()).scaled(q);
  if (auto mm = first_mismatch(compose(a, a), want))
    throw InvariantError("Clifford relation fails at entry (" + std::to_string(mm->row) + "," +
                         std::to_string(mm->col) + "): residual " + mm->residual.to_string());
  return q;
}

SpinorSplit spinor_split(const SpinorModule& extended) {
  if (!extended.with_line()) throw ShapeMismatch("spinor_split needs a module with a line generator");
  const PolyRing& ring = extended.module().ring();
  const std::size_t n = extended.base_rank();
  SpinorModule base(ring, n, false);
  DirectSumLayout layout({base.module(), shift(base.module())});
  const std::uint32_t l = std::uint32_t{1} << n;
  PolyMatrix fwd(ring, extended.module().rank(), layout.module().rank());
  PolyMatrix bwd(ring, layout.module().rank(), extended.module().rank());
  for (std::size_t i = 0; i < base.module().rank(); ++i) {
    const std::uint32_t s = base.subset(i);
    // x -> x
    const std::size_t g0 = layout.global_index(0, i);
    fwd(extended.index_of(s), g0) = Poly(ring, 1);
    bwd(g0, extended.index_of(s)) = Poly(ring, 1);
    // x' -> l* ^ x' = (-1)^{|s|} e*_{s + l}; shift(base) lists odd vectors first.
    const std::size_t local = i < base.module().even_rank() ? base.module().odd_rank() + i
                                                            : i - base.module().even_rank();
    const std::size_t g1 = layout.global_index(1, local);
    const long sign = std::popcount(s) % 2 ? -1 : 1;
    fwd(extended.index_of(s | l), g1) = Poly(ring, sign);
    bwd(g1, extended.index_of(s | l)) = Poly(ring, sign);
  }
  ParityMap forward = ParityMap::from_full(layout.module(), extended.module(), Parity::even, fwd);
  ParityMap backward = ParityMap::from_full(extended.module(), layout.module(), Parity::even, bwd);
  return SpinorSplit{std::move(base), std::move(layout), std::move(forward), std::move(backward)};
}

} // namespace curvedk
