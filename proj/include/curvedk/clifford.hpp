#pragma once

// Spinor modules (exterior algebras on a dual space) and the Clifford action
// of vector + covector sections on them.

#include <cstdint>
#include <optional>
#include <vector>

#include "curvedk/supermod.hpp"

namespace curvedk {

/// Exterior algebra on the dual basis e*_0, ..., e*_{n-1}, optionally with one
/// more generator l* (index n) for a trivialized line summand. Parity is the
/// exterior degree mod 2; within each parity, basis subsets are ordered
/// lexicographically as increasing index sequences.
class SpinorModule {
public:
  SpinorModule(const PolyRing& ring, std::size_t base_rank, bool with_line = false);

  std::size_t base_rank() const { return base_rank_; }
  bool with_line() const { return with_line_; }
  /// base_rank plus one if there is a line generator.
  std::size_t generators() const { return base_rank_ + (with_line_ ? 1 : 0); }
  const SuperModule& module() const { return module_; }
  /// Subset (bitmask over generators) of the i-th basis vector.
  std::uint32_t subset(std::size_t i) const { return subsets_[i]; }
  std::size_t index_of(std::uint32_t subset) const { return index_[subset]; }

private:
  std::size_t base_rank_;
  bool with_line_;
  std::vector<std::uint32_t> subsets_;
  std::vector<std::size_t> index_;
  SuperModule module_;
};

/// Section (c, phi) of C (+) C^dual, optionally extended by a pair
/// (l-coefficient, l*-coefficient) on a trivialized L (+) L^{-1}.
struct OrthoSection {
  std::vector<Poly> vector_part;
  std::vector<Poly> covector_part;
  std::optional<std::pair<Poly, Poly>> line;
};

/// Odd endomorphism: wedge by the covector part plus contraction by the
/// vector part.
ParityMap clifford_action(const OrthoSection& s, const SpinorModule& m);
/// <phi, c>, plus the product of the line coefficients when present.
Poly quadratic_form(const OrthoSection& s, const PolyRing& ring);
/// quadratic_form(s), after checking clifford_action(s)^2 = q(s) * id; throws
/// InvariantError otherwise.
Poly clifford_square(const OrthoSection& s, const SpinorModule& m);

/// Identification of the spinor module with a line generator with
/// S (+) S[1], where S is the spinor module without it: (x, x') -> x + l* ^ x'.
struct SpinorSplit {
  SpinorModule base;
  DirectSumLayout layout; // (S, S[1])
  ParityMap forward;      // S (+) S[1] -> extended
  ParityMap backward;     // extended -> S (+) S[1]
};
SpinorSplit spinor_split(const SpinorModule& extended);

} // namespace curvedk
