#include <set>

#include "curvedk/supermod.hpp"

namespace curvedk {

// ---------------------------------------------------------------- PolyMatrix

PolyMatrix::PolyMatrix(const PolyRing& ring, std::size_t rows, std::size_t cols)
    : ring_(&ring), rows_(rows), cols_(cols), data_(rows * cols, Poly(ring)) {}

PolyMatrix PolyMatrix::identity(const PolyRing& ring, std::size_t n) {
  PolyMatrix m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Poly(ring, 1);
  return m;
}

bool PolyMatrix::is_zero() const {
  for (const auto& p : data_)
    if (!p.is_zero()) return false;
  return true;
}

PolyMatrix PolyMatrix::transpose() const {
  PolyMatrix t(*ring_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

PolyMatrix PolyMatrix::scaled(const Poly& s) const {
  const PolyRing& ring = common_ring(*ring_, s.ring());
  PolyMatrix out(ring, rows_, cols_);
  if (s.is_zero()) return out;
  for (std::size_t k = 0; k < data_.size(); ++k)
    if (!data_[k].is_zero()) out.data_[k] = data_[k] * s;
  return out;
}

PolyMatrix PolyMatrix::embed(const PolyRing& target) const {
  if (&target == ring_) return *this;
  PolyMatrix out(target, rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k)
    if (!data_[k].is_zero()) out.data_[k] = data_[k].embed(target);
  return out;
}

PolyMatrix& PolyMatrix::operator+=(const PolyMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw ShapeMismatch("matrix sum: shape mismatch");
  ring_ = &common_ring(*ring_, *rhs.ring_);
  for (std::size_t k = 0; k < data_.size(); ++k)
    if (!rhs.data_[k].is_zero()) data_[k] += rhs.data_[k];
  return *this;
}

PolyMatrix& PolyMatrix::operator-=(const PolyMatrix& rhs) { return *this += -rhs; }

PolyMatrix PolyMatrix::operator-() const {
  PolyMatrix out = *this;
  for (auto& p : out.data_)
    if (!p.is_zero()) p = -p;
  return out;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols_ != b.rows_)
    throw ShapeMismatch("matrix product: " + std::to_string(a.rows_) + "x" + std::to_string(a.cols_) + " times " +
                        std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
  const PolyRing& ring = common_ring(*a.ring_, *b.ring_);
  PolyMatrix out(ring, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Poly& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const Poly& bkj = b(k, j);
        if (bkj.is_zero()) continue;
        out(i, j) += aik * bkj;
      }
    }
  }
  return out;
}

bool operator==(const PolyMatrix& a, const PolyMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && !a.first_difference(b);
}

std::optional<std::pair<std::size_t, std::size_t>> PolyMatrix::first_difference(const PolyMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeMismatch("matrix comparison: shape mismatch");
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (!((*this)(i, j) == other(i, j))) return std::make_pair(i, j);
  return std::nullopt;
}

PolyMatrix PolyMatrix::submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const {
  PolyMatrix out(*ring_, rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = (*this)(rows[i], cols[j]);
  return out;
}

// ---------------------------------------------------------------- SuperModule

std::string to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

Parity parse_parity(const std::string& text) {
  if (text == "even") return Parity::even;
  if (text == "odd") return Parity::odd;
  throw ParseError("parity must be 'even' or 'odd', got '" + text + "'");
}

namespace {

std::vector<std::string> numbered(const std::string& prefix, std::size_t n, std::size_t start = 0) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(start + i));
  return out;
}

} // namespace

SuperModule::SuperModule(const PolyRing& ring, std::size_t even_rank, std::size_t odd_rank, const std::string& prefix)
    : ring_(&ring), even_(numbered(prefix + "+", even_rank)), odd_(numbered(prefix + "-", odd_rank)) {}

SuperModule::SuperModule(const PolyRing& ring, std::vector<std::string> even_labels,
                         std::vector<std::string> odd_labels)
    : ring_(&ring), even_(std::move(even_labels)), odd_(std::move(odd_labels)) {
  std::set<std::string> seen;
  for (const auto* labels : {&even_, &odd_})
    for (const auto& l : *labels)
      if (!seen.insert(l).second) throw ShapeMismatch("duplicate basis label '" + l + "'");
}

SuperModule SuperModule::embed(const PolyRing& target) const {
  SuperModule out = *this;
  out.ring_ = &target;
  return out;
}

SuperModule shift(const SuperModule& m) { return SuperModule(m.ring(), m.odd_labels(), m.even_labels()); }

SuperModule dual(const SuperModule& m) {
  auto star = [](std::vector<std::string> labels) {
    for (auto& l : labels) {
      if (l.size() > 2 && l.compare(l.size() - 2, 2, "^*") == 0) {
        l.resize(l.size() - 2);
      } else {
        l += "^*";
      }
    }
    return labels;
  };
  return SuperModule(m.ring(), star(m.even_labels()), star(m.odd_labels()));
}

SuperModule direct_sum(const std::vector<SuperModule>& parts) {
  if (parts.empty()) return SuperModule();
  std::vector<std::string> even, odd;
  std::set<std::string> seen;
  bool collision = false;
  for (const auto& p : parts) {
    for (const auto* labels : {&p.even_labels(), &p.odd_labels()})
      for (const auto& l : *labels) collision |= !seen.insert(l).second;
  }
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const std::string prefix = collision ? std::to_string(k) + ":" : "";
    for (const auto& l : parts[k].even_labels()) even.push_back(prefix + l);
    for (const auto& l : parts[k].odd_labels()) odd.push_back(prefix + l);
  }
  return SuperModule(parts.front().ring(), std::move(even), std::move(odd));
}

namespace {

// Full index of (i, j) in tensor(a, b); order is
// even: (a+ x b+), (a- x b-); odd: (a+ x b-), (a- x b+).
std::size_t tensor_index(const SuperModule& a, const SuperModule& b, std::size_t i, std::size_t j) {
  const std::size_t ap = a.even_rank(), am = a.odd_rank(), bp = b.even_rank(), bm = b.odd_rank();
  const bool ie = i < ap, je = j < bp;
  const std::size_t li = ie ? i : i - ap, lj = je ? j : j - bp;
  const std::size_t even_total = ap * bp + am * bm;
  if (ie && je) return li * bp + lj;
  if (!ie && !je) return ap * bp + li * bm + lj;
  if (ie && !je) return even_total + li * bm + lj;
  return even_total + ap * bm + li * bp + lj;
}

} // namespace

SuperModule tensor(const SuperModule& a, const SuperModule& b) {
  std::vector<std::string> even, odd;
  auto cross = [](const std::vector<std::string>& x, const std::vector<std::string>& y, std::vector<std::string>& out) {
    for (const auto& s : x)
      for (const auto& t : y) out.push_back(s + "*" + t);
  };
  cross(a.even_labels(), b.even_labels(), even);
  cross(a.odd_labels(), b.odd_labels(), even);
  cross(a.even_labels(), b.odd_labels(), odd);
  cross(a.odd_labels(), b.even_labels(), odd);
  return SuperModule(a.ring(), std::move(even), std::move(odd));
}

// ---------------------------------------------------------------- ParityMap

namespace {

std::pair<std::size_t, std::size_t> block_rows(const SuperModule& target, Parity parity) {
  // Rows of (from_even, from_odd).
  return parity == Parity::even ? std::make_pair(target.even_rank(), target.odd_rank())
                                : std::make_pair(target.odd_rank(), target.even_rank());
}

} // namespace

ParityMap::ParityMap(SuperModule source, SuperModule target, Parity parity, PolyMatrix from_even,
                     PolyMatrix from_odd)
    : source_(std::move(source)), target_(std::move(target)), parity_(parity), from_even_(std::move(from_even)),
      from_odd_(std::move(from_odd)) {
  auto [r0, r1] = block_rows(target_, parity_);
  if (from_even_.rows() != r0 || from_even_.cols() != source_.even_rank() || from_odd_.rows() != r1 ||
      from_odd_.cols() != source_.odd_rank())
    throw ShapeMismatch("parity map blocks do not match module ranks");
  if (&from_even_.ring() != &from_odd_.ring()) {
    const PolyRing& ring = common_ring(from_even_.ring(), from_odd_.ring());
    from_even_ = from_even_.embed(ring);
    from_odd_ = from_odd_.embed(ring);
  }
}

ParityMap ParityMap::zero(const SuperModule& source, const SuperModule& target, Parity parity) {
  auto [r0, r1] = block_rows(target, parity);
  const PolyRing& ring = source.ring();
  return ParityMap(source, target, parity, PolyMatrix(ring, r0, source.even_rank()),
                   PolyMatrix(ring, r1, source.odd_rank()));
}

ParityMap ParityMap::identity(const SuperModule& m) {
  return ParityMap(m, m, Parity::even, PolyMatrix::identity(m.ring(), m.even_rank()),
                   PolyMatrix::identity(m.ring(), m.odd_rank()));
}

ParityMap ParityMap::from_full(SuperModule source, SuperModule target, Parity parity, const PolyMatrix& full) {
  if (full.rows() != target.rank() || full.cols() != source.rank())
    throw ShapeMismatch("from_full: matrix shape does not match modules");
  std::vector<std::size_t> te, to, se, so;
  for (std::size_t i = 0; i < target.rank(); ++i) (i < target.even_rank() ? te : to).push_back(i);
  for (std::size_t j = 0; j < source.rank(); ++j) (j < source.even_rank() ? se : so).push_back(j);
  const auto& rows_e = parity == Parity::even ? te : to;
  const auto& rows_o = parity == Parity::even ? to : te;
  for (std::size_t j = 0; j < source.rank(); ++j) {
    const auto& allowed = j < source.even_rank() ? rows_e : rows_o;
    const std::size_t lo = allowed.empty() ? 0 : allowed.front();
    const std::size_t hi = allowed.empty() ? 0 : allowed.back() + 1;
    for (std::size_t i = 0; i < target.rank(); ++i) {
      if (i >= lo && i < hi) continue;
      if (!full(i, j).is_zero())
        throw ShapeMismatch("from_full: entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                            full(i, j).to_string() + " violates " + to_string(parity) + " parity");
    }
  }
  PolyMatrix fe = full.submatrix(rows_e, se);
  PolyMatrix fo = full.submatrix(rows_o, so);
  return ParityMap(std::move(source), std::move(target), parity, std::move(fe), std::move(fo));
}

PolyMatrix ParityMap::full() const {
  PolyMatrix out(ring(), target_.rank(), source_.rank());
  const std::size_t tp = target_.even_rank();
  const std::size_t sp = source_.even_rank();
  const std::size_t off_e = parity_ == Parity::even ? 0 : tp;
  const std::size_t off_o = parity_ == Parity::even ? tp : 0;
  for (std::size_t i = 0; i < from_even_.rows(); ++i)
    for (std::size_t j = 0; j < from_even_.cols(); ++j) out(off_e + i, j) = from_even_(i, j);
  for (std::size_t i = 0; i < from_odd_.rows(); ++i)
    for (std::size_t j = 0; j < from_odd_.cols(); ++j) out(off_o + i, sp + j) = from_odd_(i, j);
  return out;
}

Poly ParityMap::entry(std::size_t row, std::size_t col) const {
  const std::size_t tp = target_.even_rank();
  const std::size_t sp = source_.even_rank();
  const bool col_even = col < sp;
  const bool row_even = row < tp;
  const bool allowed = (parity_ == Parity::even) == (col_even == row_even);
  if (!allowed) return Poly(ring());
  const std::size_t r = row_even ? row : row - tp;
  return col_even ? from_even_(r, col) : from_odd_(r, col - sp);
}

ParityMap ParityMap::scaled(const Poly& s) const {
  return ParityMap(source_, target_, parity_, from_even_.scaled(s), from_odd_.scaled(s));
}

ParityMap ParityMap::embed(const PolyRing& target) const {
  return ParityMap(source_.embed(target), target_.embed(target), parity_, from_even_.embed(target),
                   from_odd_.embed(target));
}

ParityMap& ParityMap::operator+=(const ParityMap& rhs) {
  if (parity_ != rhs.parity_ || !same_shape(source_, rhs.source_) || !same_shape(target_, rhs.target_))
    throw ShapeMismatch("map sum: parity or shape mismatch");
  from_even_ += rhs.from_even_;
  from_odd_ += rhs.from_odd_;
  return *this;
}

ParityMap& ParityMap::operator-=(const ParityMap& rhs) { return *this += -rhs; }

ParityMap ParityMap::operator-() const { return ParityMap(source_, target_, parity_, -from_even_, -from_odd_); }

bool operator==(const ParityMap& a, const ParityMap& b) {
  return a.parity_ == b.parity_ && same_shape(a.source_, b.source_) && same_shape(a.target_, b.target_) &&
         a.from_even_ == b.from_even_ && a.from_odd_ == b.from_odd_;
}

ParityMap compose(const ParityMap& f, const ParityMap& g) {
  if (!same_shape(g.target(), f.source()))
    throw ShapeMismatch("compose: target of g has ranks (" + std::to_string(g.target().even_rank()) + "|" +
                        std::to_string(g.target().odd_rank()) + ") but source of f has (" +
                        std::to_string(f.source().even_rank()) + "|" + std::to_string(f.source().odd_rank()) + ")");
  const bool g_even = g.parity() == Parity::even;
  PolyMatrix e = (g_even ? f.from_even() : f.from_odd()) * g.from_even();
  PolyMatrix o = (g_even ? f.from_odd() : f.from_even()) * g.from_odd();
  return ParityMap(g.source(), f.target(), f.parity() + g.parity(), std::move(e), std::move(o));
}

namespace {

PolyMatrix block_diag(const PolyMatrix& a, const PolyMatrix& b) {
  const PolyRing& ring = common_ring(a.ring(), b.ring());
  PolyMatrix out(ring, a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) out(a.rows() + i, a.cols() + j) = b(i, j);
  return out;
}

} // namespace

ParityMap direct_sum(const ParityMap& f, const ParityMap& g) {
  if (f.parity() != g.parity()) throw ShapeMismatch("direct_sum: maps of different parity");
  return ParityMap(direct_sum({f.source(), g.source()}), direct_sum({f.target(), g.target()}), f.parity(),
                   block_diag(f.from_even(), g.from_even()), block_diag(f.from_odd(), g.from_odd()));
}

ParityMap shift(const ParityMap& f) {
  return ParityMap(shift(f.source()), shift(f.target()), f.parity(), f.from_odd(), f.from_even());
}

ParityMap shift_source(const ParityMap& f) {
  return ParityMap(shift(f.source()), f.target(), flip(f.parity()), f.from_odd(), f.from_even());
}

ParityMap shift_target(const ParityMap& f) {
  return ParityMap(f.source(), shift(f.target()), flip(f.parity()), f.from_even(), f.from_odd());
}

ParityMap dual(const ParityMap& f) {
  if (f.parity() == Parity::even)
    return ParityMap(dual(f.target()), dual(f.source()), Parity::even, f.from_even().transpose(),
                     f.from_odd().transpose());
  return ParityMap(dual(f.target()), dual(f.source()), Parity::odd, f.from_odd().transpose(),
                   f.from_even().transpose());
}

ParityMap tensor(const ParityMap& f, const ParityMap& g) {
  const SuperModule src = tensor(f.source(), g.source());
  const SuperModule tgt = tensor(f.target(), g.target());
  const PolyRing& ring = common_ring(f.ring(), g.ring());
  PolyMatrix full(ring, tgt.rank(), src.rank());
  const PolyMatrix ff = f.full();
  const PolyMatrix gf = g.full();
  for (std::size_t i = 0; i < f.source().rank(); ++i) {
    const bool negate = g.parity() == Parity::odd && f.source().parity_of(i) == Parity::odd;
    for (std::size_t ti = 0; ti < f.target().rank(); ++ti) {
      const Poly& a = ff(ti, i);
      if (a.is_zero()) continue;
      for (std::size_t j = 0; j < g.source().rank(); ++j) {
        for (std::size_t tj = 0; tj < g.target().rank(); ++tj) {
          const Poly& b = gf(tj, j);
          if (b.is_zero()) continue;
          Poly v = a * b;
          full(tensor_index(f.target(), g.target(), ti, tj), tensor_index(f.source(), g.source(), i, j)) =
              negate ? -v : v;
        }
      }
    }
  }
  return ParityMap::from_full(src, tgt, f.parity() + g.parity(), full);
}

std::optional<EntryMismatch> first_mismatch(const ParityMap& lhs, const ParityMap& rhs) {
  if (!same_shape(lhs.source(), rhs.source()) || !same_shape(lhs.target(), rhs.target()))
    throw ShapeMismatch("first_mismatch: shape mismatch");
  const PolyMatrix a = lhs.full();
  const PolyMatrix b = rhs.full();
  if (auto at = a.first_difference(b)) return EntryMismatch{at->first, at->second, a(at->first, at->second) - b(at->first, at->second)};
  return std::nullopt;
}

// ---------------------------------------------------------------- layouts

DirectSumLayout::DirectSumLayout(std::vector<SuperModule> parts) : parts_(std::move(parts)), sum_(direct_sum(parts_)) {
  std::size_t total_even = 0;
  for (const auto& p : parts_) total_even += p.even_rank();
  std::size_t e = 0, o = total_even;
  for (const auto& p : parts_) {
    even_offset_.push_back(e);
    odd_offset_.push_back(o);
    e += p.even_rank();
    o += p.odd_rank();
  }
}

std::size_t DirectSumLayout::global_index(std::size_t part, std::size_t local) const {
  const SuperModule& p = parts_.at(part);
  if (local < p.even_rank()) return even_offset_[part] + local;
  return odd_offset_[part] + (local - p.even_rank());
}

std::vector<std::size_t> DirectSumLayout::indices_of(std::size_t part) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < parts_.at(part).rank(); ++i) out.push_back(global_index(part, i));
  return out;
}

BlockAssembler::BlockAssembler(const DirectSumLayout& source, const DirectSumLayout& target, Parity parity)
    : source_(source), target_(target), parity_(parity),
      full_(source.module().ring(), target.module().rank(), source.module().rank()) {}

void BlockAssembler::add(std::size_t target_part, std::size_t source_part, const ParityMap& block) {
  if (block.parity() != parity_) throw ShapeMismatch("block assembly: block has wrong parity");
  if (!same_shape(block.source(), source_.parts().at(source_part)) ||
      !same_shape(block.target(), target_.parts().at(target_part)))
    throw ShapeMismatch("block assembly: block shape does not match summands");
  const PolyMatrix f = block.full();
  for (std::size_t i = 0; i < f.rows(); ++i) {
    for (std::size_t j = 0; j < f.cols(); ++j) {
      if (f(i, j).is_zero()) continue;
      Poly& slot = full_(target_.global_index(target_part, i), source_.global_index(source_part, j));
      slot += f(i, j);
    }
  }
}

ParityMap BlockAssembler::build() const {
  return ParityMap::from_full(source_.module(), target_.module(), parity_, full_);
}

ParityMap extract_block(const ParityMap& f, const DirectSumLayout& source, const DirectSumLayout& target,
                        std::size_t target_part, std::size_t source_part) {
  const PolyMatrix full = f.full();
  return ParityMap::from_full(source.parts().at(source_part), target.parts().at(target_part), f.parity(),
                              full.submatrix(target.indices_of(target_part), source.indices_of(source_part)));
}

} // namespace curvedk
