#pragma once

// Z/2-graded free modules and parity-homogeneous maps between them.
//
// Matrices act on column vectors and composition is left multiplication.
// The "full" matrix of a map uses the basis order (even..., odd...) on both
// sides; the two stored blocks are the only parity-allowed pieces of it.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "curvedk/algebra.hpp"

namespace curvedk {

/// Dense matrix of polynomials over one ring.
class PolyMatrix {
public:
  PolyMatrix() : PolyMatrix(PolyRing::get(rationals(), {}), 0, 0) {}
  PolyMatrix(const PolyRing& ring, std::size_t rows, std::size_t cols);

  static PolyMatrix identity(const PolyRing& ring, std::size_t n);

  const PolyRing& ring() const { return *ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Poly& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Poly& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool is_zero() const;
  PolyMatrix transpose() const;
  PolyMatrix scaled(const Poly& s) const;
  PolyMatrix embed(const PolyRing& target) const;

  PolyMatrix& operator+=(const PolyMatrix& rhs);
  PolyMatrix& operator-=(const PolyMatrix& rhs);
  friend PolyMatrix operator+(PolyMatrix a, const PolyMatrix& b) { return a += b; }
  friend PolyMatrix operator-(PolyMatrix a, const PolyMatrix& b) { return a -= b; }
  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
  PolyMatrix operator-() const;
  friend bool operator==(const PolyMatrix& a, const PolyMatrix& b);

  /// First (row, col) where the matrices differ, in row-major order.
  std::optional<std::pair<std::size_t, std::size_t>> first_difference(const PolyMatrix& other) const;

  /// Rows and columns picked out by index lists.
  PolyMatrix submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;

private:
  const PolyRing* ring_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Poly> data_;
};

enum class Parity { even = 0, odd = 1 };

inline Parity operator+(Parity a, Parity b) {
  return static_cast<Parity>(static_cast<int>(a) ^ static_cast<int>(b));
}
inline Parity flip(Parity p) { return p + Parity::odd; }
inline int sign_of(Parity p) { return p == Parity::even ? 1 : -1; }
std::string to_string(Parity p);
Parity parse_parity(const std::string& text);

/// A free Z/2-graded module V+ (+) V- with labelled basis vectors.
class SuperModule {
public:
  SuperModule() : SuperModule(PolyRing::get(rationals(), {}), 0, 0) {}
  /// Auto-labels basis vectors with `prefix` + index.
  SuperModule(const PolyRing& ring, std::size_t even_rank, std::size_t odd_rank, const std::string& prefix = "b");
  SuperModule(const PolyRing& ring, std::vector<std::string> even_labels, std::vector<std::string> odd_labels);

  const PolyRing& ring() const { return *ring_; }
  std::size_t even_rank() const { return even_.size(); }
  std::size_t odd_rank() const { return odd_.size(); }
  std::size_t rank() const { return even_.size() + odd_.size(); }
  std::size_t rank(Parity p) const { return p == Parity::even ? even_rank() : odd_rank(); }
  const std::vector<std::string>& even_labels() const { return even_; }
  const std::vector<std::string>& odd_labels() const { return odd_; }

  /// Parity of the i-th vector in the (even..., odd...) order.
  Parity parity_of(std::size_t i) const { return i < even_.size() ? Parity::even : Parity::odd; }

  SuperModule embed(const PolyRing& target) const;

  /// Rank equality; labels are descriptive only.
  friend bool same_shape(const SuperModule& a, const SuperModule& b) {
    return a.even_rank() == b.even_rank() && a.odd_rank() == b.odd_rank();
  }
  friend bool operator==(const SuperModule& a, const SuperModule& b) {
    return a.even_ == b.even_ && a.odd_ == b.odd_;
  }

private:
  const PolyRing* ring_;
  std::vector<std::string> even_;
  std::vector<std::string> odd_;
};

SuperModule shift(const SuperModule& m);
SuperModule dual(const SuperModule& m);
SuperModule direct_sum(const std::vector<SuperModule>& parts);
SuperModule tensor(const SuperModule& a, const SuperModule& b);

/// Parity-homogeneous map source -> target.
///
/// Even maps store (V+ -> W+, V- -> W-); odd maps store (V+ -> W-, V- -> W+).
class ParityMap {
public:
  ParityMap() = default;
  ParityMap(SuperModule source, SuperModule target, Parity parity, PolyMatrix from_even, PolyMatrix from_odd);

  static ParityMap zero(const SuperModule& source, const SuperModule& target, Parity parity);
  static ParityMap identity(const SuperModule& m);
  /// Builds from a full matrix; throws ShapeMismatch if an entry outside the
  /// parity-allowed blocks is nonzero.
  static ParityMap from_full(SuperModule source, SuperModule target, Parity parity, const PolyMatrix& full);

  const SuperModule& source() const { return source_; }
  const SuperModule& target() const { return target_; }
  Parity parity() const { return parity_; }
  const PolyRing& ring() const { return from_even_.ring(); }
  /// Block acting on the even part of the source.
  const PolyMatrix& from_even() const { return from_even_; }
  /// Block acting on the odd part of the source.
  const PolyMatrix& from_odd() const { return from_odd_; }
  PolyMatrix& from_even() { return from_even_; }
  PolyMatrix& from_odd() { return from_odd_; }

  /// Full matrix in (even..., odd...) order.
  PolyMatrix full() const;
  Poly entry(std::size_t row, std::size_t col) const;

  bool is_zero() const { return from_even_.is_zero() && from_odd_.is_zero(); }
  bool is_endomorphism() const { return same_shape(source_, target_); }

  ParityMap scaled(const Poly& s) const;
  ParityMap embed(const PolyRing& target) const;
  ParityMap& operator+=(const ParityMap& rhs);
  ParityMap& operator-=(const ParityMap& rhs);
  friend ParityMap operator+(ParityMap a, const ParityMap& b) { return a += b; }
  friend ParityMap operator-(ParityMap a, const ParityMap& b) { return a -= b; }
  ParityMap operator-() const;
  friend bool operator==(const ParityMap& a, const ParityMap& b);

private:
  SuperModule source_;
  SuperModule target_;
  Parity parity_ = Parity::even;
  PolyMatrix from_even_;
  PolyMatrix from_odd_;
};

/// f o g. Requires g.target() to have the shape of f.source().
ParityMap compose(const ParityMap& f, const ParityMap& g);
ParityMap direct_sum(const ParityMap& f, const ParityMap& g);
/// Same underlying linear map on shift(source) -> shift(target).
ParityMap shift(const ParityMap& f);
/// Same underlying map viewed as shift(source) -> target (parity flips).
ParityMap shift_source(const ParityMap& f);
/// Same underlying map viewed as source -> shift(target) (parity flips).
ParityMap shift_target(const ParityMap& f);
/// Transposed map dual(target) -> dual(source).
ParityMap dual(const ParityMap& f);
/// (f (x) g)(v (x) w) = (-1)^{|g||v|} f(v) (x) g(w).
ParityMap tensor(const ParityMap& f, const ParityMap& g);

/// Location of the first entry where two equally shaped maps differ.
struct EntryMismatch {
  std::size_t row;
  std::size_t col;
  Poly residual; // lhs - rhs at (row, col)
};
std::optional<EntryMismatch> first_mismatch(const ParityMap& lhs, const ParityMap& rhs);

/// Index bookkeeping for a direct sum of modules: maps (summand, local full
/// index) to the full index of the sum.
class DirectSumLayout {
public:
  explicit DirectSumLayout(std::vector<SuperModule> parts);

  const SuperModule& module() const { return sum_; }
  const std::vector<SuperModule>& parts() const { return parts_; }
  std::size_t global_index(std::size_t part, std::size_t local) const;
  /// All full indices of the sum belonging to one summand, in local order.
  std::vector<std::size_t> indices_of(std::size_t part) const;

private:
  std::vector<SuperModule> parts_;
  SuperModule sum_;
  std::vector<std::size_t> even_offset_;
  std::vector<std::size_t> odd_offset_;
};

/// Assembles a map between direct sums from blocks (target part, source part).
class BlockAssembler {
public:
  BlockAssembler(const DirectSumLayout& source, const DirectSumLayout& target, Parity parity);

  /// Adds `block` into position (target_part, source_part).
  void add(std::size_t target_part, std::size_t source_part, const ParityMap& block);
  ParityMap build() const;

private:
  const DirectSumLayout& source_;
  const DirectSumLayout& target_;
  Parity parity_;
  PolyMatrix full_;
};

/// Block (target_part, source_part) of a map between direct sums.
ParityMap extract_block(const ParityMap& f, const DirectSumLayout& source, const DirectSumLayout& target,
                        std::size_t target_part, std::size_t source_part);

} // namespace curvedk
