#pragma once

// Curved Z/2-graded complexes, chain maps, homotopies, cones and filtrations.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "curvedk/supermod.hpp"

namespace curvedk {

/// Outcome of an exact identity check. On failure `entry` locates the first
/// offending matrix entry (full-matrix coordinates) and its residual.
struct Verdict {
  bool pass = true;
  std::string check;
  std::string detail;
  std::optional<EntryMismatch> entry;

  static Verdict ok(std::string check) { return Verdict{true, std::move(check), {}, std::nullopt}; }
  static Verdict fail(std::string check, std::string detail, std::optional<EntryMismatch> entry = std::nullopt) {
    return Verdict{false, std::move(check), std::move(detail), std::move(entry)};
  }
  explicit operator bool() const { return pass; }
  std::string to_string() const;
};

/// Compares two maps entrywise; the verdict carries the first mismatch.
Verdict compare_maps(const std::string& check, const ParityMap& lhs, const ParityMap& rhs);

/// A module with an odd endomorphism d and a polynomial c with d^2 = c * id.
class CurvedComplex {
public:
  CurvedComplex() = default;

  const SuperModule& module() const { return d_.source(); }
  const ParityMap& differential() const { return d_; }
  const Poly& curvature() const { return c_; }
  const PolyRing& ring() const { return d_.ring(); }
  bool is_complex() const { return c_.is_zero(); }

  friend bool operator==(const CurvedComplex& a, const CurvedComplex& b) {
    return a.d_ == b.d_ && a.c_ == b.c_;
  }

private:
  CurvedComplex(ParityMap d, Poly c) : d_(std::move(d)), c_(std::move(c)) {}
  friend CurvedComplex curvature_check(const ParityMap& d);
  friend CurvedComplex curvature_check(const ParityMap& d, const Poly& expected);

  ParityMap d_;
  Poly c_;
};

/// Computes d^2 and records c when d^2 = c * id. Throws InvariantError naming
/// the offending entry when d is not odd, not an endomorphism or d^2 is not
/// scalar.
CurvedComplex curvature_check(const ParityMap& d);
/// As above, but requires d^2 = expected * id (meaningful also for rank 0).
CurvedComplex curvature_check(const ParityMap& d, const Poly& expected);

/// (M[1], -shift(d)).
CurvedComplex shift(const CurvedComplex& c);
CurvedComplex direct_sum(const CurvedComplex& a, const CurvedComplex& b);

/// f o d_source = (-1)^{|f|} d_target o f.
Verdict is_chain_map(const ParityMap& f, const CurvedComplex& source, const CurvedComplex& target);
/// d_target h + h d_source = f - g for an odd h.
Verdict is_homotopy(const CurvedComplex& source, const CurvedComplex& target, const ParityMap& h,
                    const ParityMap& f, const ParityMap& g);
/// d h + h d = id.
Verdict is_null_homotopy(const CurvedComplex& c, const ParityMap& h);

/// A verified chain map.
struct ChainMap {
  CurvedComplex source;
  CurvedComplex target;
  ParityMap map;
};

/// Builds a ChainMap; throws InvariantError when the intertwining fails or
/// the curvatures differ.
ChainMap make_chain_map(const CurvedComplex& source, const CurvedComplex& target, const ParityMap& map);

/// target (+) source[1] with differential [[d_t, f], [0, -d_s]].
CurvedComplex cone(const ChainMap& f);
/// Layout (target, source[1]) of cone(f).
DirectSumLayout cone_layout(const ChainMap& f);
/// Canonical inclusion target -> cone(f).
ParityMap cone_inclusion(const ChainMap& f);
/// Canonical projection cone(f) -> source[1].
ParityMap cone_projection(const ChainMap& f);

/// Decreasing basis-aligned filtration: steps[0] = F^1 must be every index,
/// steps[j-1] = F^j, and F^{steps.size()+1} = 0.
struct Filtration {
  std::vector<std::vector<std::size_t>> steps;
};

/// Checks nesting and d(F^j) inside F^j; reports the offending basis vector.
Verdict filtration_verify(const CurvedComplex& c, const Filtration& f);
/// Basis indices of F^j minus F^{j+1} (1-based j), in full-matrix order.
std::vector<std::size_t> graded_indices(const CurvedComplex& c, const Filtration& f, std::size_t j);
/// Complex induced on F^j / F^{j+1}.
CurvedComplex associated_graded(const CurvedComplex& c, const Filtration& f, std::size_t j);

/// Common zero set of the generators.
struct SupportLocus {
  std::vector<Poly> generators;
};

struct SamplePoint {
  std::vector<Rational> coordinates;
  std::size_t rank_even = 0; // rank of d on the even part
  std::size_t rank_odd = 0;  // rank of d on the odd part
  bool exact = false;
};

struct ExactnessReport {
  Verdict verdict;
  std::vector<SamplePoint> points;
};

/// Fiberwise exactness of a complex at sampled integer points where every
/// generator of Z is nonzero, plus constancy of ranks across the samples.
/// The origin is tried first, then seeded points from the box [-height,
/// height]^n. Throws Error if fewer than `trials` points off Z are found.
ExactnessReport strict_exactness_sample(const CurvedComplex& c, const SupportLocus& z, std::size_t trials,
                                        std::uint64_t seed, long height = 101);

/// Rank of a polynomial matrix evaluated at a rational point.
std::size_t rank_at(const PolyMatrix& m, const std::vector<Rational>& point);

} // namespace curvedk
