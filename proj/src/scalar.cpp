#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "curvedk/algebra.hpp"

namespace curvedk {

namespace {

// Exact quotient of univariate rational polynomials (lowest coefficient first).
std::vector<Rational> divide_exact(std::vector<Rational> num, const std::vector<Rational>& den) {
  const std::size_t dn = den.size() - 1;
  std::vector<Rational> quot(num.size() - dn, 0);
  for (std::size_t k = num.size(); k-- > dn;) {
    Rational c = num[k] / den[dn];
    quot[k - dn] = c;
    for (std::size_t j = 0; j <= dn; ++j) num[k - dn + j] -= c * den[j];
  }
  return quot;
}

void reduce_in_place(std::vector<Rational>& c, const std::vector<Rational>& modulus) {
  const std::size_t n = modulus.size() - 1;
  for (std::size_t k = c.size(); k-- > n;) {
    if (sgn(c[k]) == 0) continue;
    Rational lead = c[k];
    for (std::size_t j = 0; j < n; ++j) c[k - n + j] -= lead * modulus[j];
    c[k] = 0;
  }
  c.resize(n, 0);
}

std::string rational_text(const Rational& q) { return q.get_str(); }

} // namespace

std::vector<Rational> cyclotomic_polynomial(unsigned r) {
  if (r == 0) throw Error("cyclotomic polynomial of order 0 is undefined");
  std::vector<Rational> num(r + 1, 0);
  num[0] = -1;
  num[r] = 1;
  for (unsigned d = 1; d < r; ++d) {
    if (r % d == 0) num = divide_exact(std::move(num), cyclotomic_polynomial(d));
  }
  return num;
}

ScalarField::ScalarField(unsigned order) : order_(order), modulus_(cyclotomic_polynomial(order)) {
  const std::size_t n = degree();
  residues_.reserve(2 * n);
  for (std::size_t k = 0; k < 2 * n; ++k) {
    std::vector<Rational> mono(k + 1, 0);
    mono[k] = 1;
    if (mono.size() < n) mono.resize(n, 0);
    reduce_in_place(mono, modulus_);
    residues_.push_back(std::move(mono));
  }
}

bool ScalarField::contains_roots_of_unity(unsigned k) const {
  if (k == 0) return false;
  if (k <= 2) return true;
  if (order_ % k == 0) return true;
  return order_ % 2 == 1 && (2 * order_) % k == 0;
}

std::string ScalarField::name() const {
  if (order_ == 1) return "Q";
  return "cyclotomic:" + std::to_string(order_);
}

const ScalarField& cyclotomic_field(unsigned r) {
  if (r == 0) throw Error("cyclotomic_field: order must be positive");
  static std::mutex mutex;
  static std::map<unsigned, std::unique_ptr<ScalarField>> registry;
  std::lock_guard lock(mutex);
  auto& slot = registry[r];
  if (!slot) slot.reset(new ScalarField(r));
  return *slot;
}

const ScalarField& parse_field(std::string_view name) {
  if (name == "Q" || name == "rationals") return rationals();
  constexpr std::string_view prefix = "cyclotomic:";
  if (name.substr(0, prefix.size()) == prefix) {
    std::string digits(name.substr(prefix.size()));
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("bad field name '" + std::string(name) + "'");
    unsigned long r = std::stoul(digits);
    if (r == 0 || r > 1000) throw ParseError("cyclotomic order out of range in '" + std::string(name) + "'");
    return cyclotomic_field(static_cast<unsigned>(r));
  }
  throw ParseError("unknown field '" + std::string(name) + "' (expected Q or cyclotomic:r)");
}

const ScalarField& common_field(const ScalarField& a, const ScalarField& b) {
  if (&a == &b) return a;
  if (b.is_rational()) return a.is_rational() && b.order() > a.order() ? b : a;
  if (a.is_rational()) return b;
  throw ContextMismatch("cannot combine scalars of " + a.name() + " and " + b.name());
}

Scalar::Scalar(const ScalarField& field, long value) : Scalar(field, Rational(value)) {}

Scalar::Scalar(const ScalarField& field, const Rational& value)
    : field_(&field), coeffs_(field.degree(), 0) {
  coeffs_[0] = value;
}

Scalar::Scalar(const ScalarField& field, std::vector<Rational> coefficients)
    : field_(&field), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() < field.degree()) coeffs_.resize(field.degree(), 0);
  reduce_in_place(coeffs_, field.modulus());
}

Scalar Scalar::zeta(const ScalarField& field) {
  std::vector<Rational> c{0, 1};
  return Scalar(field, std::move(c));
}

bool Scalar::is_zero() const {
  for (const auto& c : coeffs_)
    if (sgn(c) != 0) return false;
  return true;
}

bool Scalar::is_rational() const {
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    if (sgn(coeffs_[i]) != 0) return false;
  return true;
}

bool Scalar::is_one() const { return is_rational() && coeffs_[0] == 1; }

Scalar Scalar::in_field(const ScalarField& target) const {
  if (&target == field_) return *this;
  if (is_rational()) return Scalar(target, coeffs_[0]);
  throw ContextMismatch("scalar " + to_string() + " does not lie in " + target.name());
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
  const ScalarField& f = common_field(*field_, *rhs.field_);
  if (&f != field_) *this = in_field(f);
  if (&f == rhs.field_) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  } else {
    coeffs_[0] += rhs.coeffs_[0];
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) { return *this += -rhs; }

Scalar& Scalar::operator*=(const Scalar& rhs) {
  const ScalarField& f = common_field(*field_, *rhs.field_);
  if (rhs.is_rational()) {
    if (&f != field_) *this = in_field(f);
    for (auto& c : coeffs_) c *= rhs.coeffs_[0];
    return *this;
  }
  if (is_rational()) {
    Rational q = coeffs_[0];
    *this = rhs;
    for (auto& c : coeffs_) c *= q;
    return *this;
  }
  const std::size_t n = f.degree();
  std::vector<Rational> out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(coeffs_[i]) == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(rhs.coeffs_[j]) == 0) continue;
      Rational prod = coeffs_[i] * rhs.coeffs_[j];
      const auto& res = f.power_residue(i + j);
      for (std::size_t k = 0; k < n; ++k)
        if (sgn(res[k]) != 0) out[k] += prod * res[k];
    }
  }
  field_ = &f;
  coeffs_ = std::move(out);
  return *this;
}

Scalar Scalar::operator-() const {
  Scalar out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.is_rational() && b.is_rational()) return a.coeffs_[0] == b.coeffs_[0];
  return a.field_ == b.field_ && a.coeffs_ == b.coeffs_;
}

Scalar Scalar::pow(unsigned exponent) const {
  Scalar result(*field_, 1);
  Scalar base = *this;
  while (exponent) {
    if (exponent & 1u) result *= base;
    exponent >>= 1;
    if (exponent) base *= base;
  }
  return result;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw DivisionError("division by zero scalar");
  if (is_rational()) return Scalar(*field_, Rational(1) / coeffs_[0]);
  // Solve M x = e_0 where column j of M is this * zeta^j.
  const std::size_t n = field_->degree();
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1, 0));
  Scalar col = *this;
  const Scalar z = zeta(*field_);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) m[i][j] = col.coeffs_[i];
    col *= z;
  }
  m[0][n] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m[p][c]) == 0) ++p;
    if (p == n) throw DivisionError("singular multiplication matrix in cyclotomic inverse");
    std::swap(m[p], m[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || sgn(m[i][c]) == 0) continue;
      Rational f = m[i][c] / m[c][c];
      for (std::size_t k = c; k <= n; ++k) m[i][k] -= f * m[c][k];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = m[i][n] / m[i][i];
  return Scalar(*field_, std::move(x));
}

std::string Scalar::to_string() const {
  if (is_rational()) return rational_text(coeffs_[0]);
  std::ostringstream out;
  bool first = true;
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    const Rational& c = coeffs_[k];
    if (sgn(c) == 0) continue;
    Rational mag = abs(c);
    if (first) {
      if (sgn(c) < 0) out << "-";
    } else {
      out << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    if (k == 0) {
      out << rational_text(mag);
      continue;
    }
    if (mag != 1) out << rational_text(mag) << "*";
    out << kZeta;
    if (k > 1) out << "^" << k;
  }
  return "(" + out.str() + ")";
}

std::vector<Scalar> roots_of_unity(const ScalarField& field, unsigned r) {
  if (r == 0) throw Error("roots_of_unity: r must be positive");
  if (!field.contains_roots_of_unity(r))
    throw ContextMismatch(field.name() + " does not contain primitive " + std::to_string(r) +
                          "-th roots of unity");
  const unsigned m = field.order();
  Scalar w(field, 1);
  if (r == 2) {
    w = Scalar(field, -1);
  } else if (m % r == 0) {
    w = Scalar::zeta(field).pow(m / r);
  } else if (r > 1) {
    // m odd: -zeta^{(m+1)/2} is a primitive 2m-th root.
    Scalar omega = -Scalar::zeta(field).pow((m + 1) / 2);
    w = omega.pow(2 * m / r);
  }
  std::vector<Scalar> roots;
  roots.reserve(r);
  Scalar cur(field, 1);
  for (unsigned k = 0; k < r; ++k) {
    roots.push_back(cur);
    cur *= w;
  }
  return roots;
}

} // namespace curvedk
