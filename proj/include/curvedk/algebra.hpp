#pragma once

// Exact scalar and sparse multivariate polynomial arithmetic.
//
// Scalars live in Q or in a cyclotomic field Q[t]/(Phi_r). Fields and
// polynomial rings are interned: references returned by cyclotomic_field()
// and PolyRing::get() stay valid for the lifetime of the process, so values
// can hold plain pointers to them and be shared freely between threads.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "curvedk/error.hpp"

namespace curvedk {

using Rational = mpq_class;

/// Q(zeta_r), represented as Q[t]/(Phi_r). For r = 1, 2 this is Q itself.
class ScalarField {
public:
  ScalarField(const ScalarField&) = delete;
  ScalarField& operator=(const ScalarField&) = delete;

  /// The field contains the distinguished primitive order()-th root zeta.
  unsigned order() const { return order_; }
  /// deg Phi_r; coefficient vectors of scalars have this length.
  std::size_t degree() const { return modulus_.size() - 1; }
  bool is_rational() const { return degree() == 1; }
  /// Phi_r, lowest coefficient first (monic).
  const std::vector<Rational>& modulus() const { return modulus_; }
  /// Whether a primitive k-th root of unity lies in this field.
  bool contains_roots_of_unity(unsigned k) const;
  std::string name() const;

  /// t^k mod Phi_r for k < 2*degree().
  const std::vector<Rational>& power_residue(std::size_t k) const { return residues_[k]; }

private:
  explicit ScalarField(unsigned order);
  friend const ScalarField& cyclotomic_field(unsigned r);

  unsigned order_;
  std::vector<Rational> modulus_;
  std::vector<std::vector<Rational>> residues_;
};

/// Integer coefficients of the r-th cyclotomic polynomial, lowest first.
std::vector<Rational> cyclotomic_polynomial(unsigned r);

/// Interned field containing a primitive r-th root of unity. Throws for r = 0.
const ScalarField& cyclotomic_field(unsigned r);
inline const ScalarField& rationals() { return cyclotomic_field(1); }

/// Parses "Q" or "cyclotomic:r".
const ScalarField& parse_field(std::string_view name);

/// Exact element of a ScalarField.
///
/// Arithmetic between scalars of different fields is allowed when one of
/// them is rational (degree 1); the result lives in the larger field.
class Scalar {
public:
  Scalar() : Scalar(rationals(), 0) {}
  Scalar(const ScalarField& field, long value);
  Scalar(const ScalarField& field, const Rational& value);
  /// Coefficients on 1, zeta, zeta^2, ...; reduced modulo Phi_r.
  Scalar(const ScalarField& field, std::vector<Rational> coefficients);

  static Scalar zeta(const ScalarField& field);

  const ScalarField& field() const { return *field_; }
  const std::vector<Rational>& coefficients() const { return coeffs_; }

  bool is_zero() const;
  bool is_one() const;
  /// True when the value lies in Q.
  bool is_rational() const;
  const Rational& rational_part() const { return coeffs_[0]; }

  Scalar inverse() const;
  Scalar pow(unsigned exponent) const;
  Scalar in_field(const ScalarField& target) const;

  Scalar& operator+=(const Scalar& rhs);
  Scalar& operator-=(const Scalar& rhs);
  Scalar& operator*=(const Scalar& rhs);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }
  Scalar operator-() const;
  friend bool operator==(const Scalar& a, const Scalar& b);

  /// "3/2", "-1", or "(zeta^2 - 1/2*zeta + 3)" style text.
  std::string to_string() const;

private:
  const ScalarField* field_;
  std::vector<Rational> coeffs_;
};

/// Field in which a and b can be combined; throws ContextMismatch otherwise.
const ScalarField& common_field(const ScalarField& a, const ScalarField& b);

/// All r-th roots of unity in the field, as w^0, w^1, ..., w^{r-1} for a
/// primitive root w derived from zeta.
std::vector<Scalar> roots_of_unity(const ScalarField& field, unsigned r);

/// A coefficient field plus an ordered list of named indeterminates.
class PolyRing {
public:
  PolyRing(const PolyRing&) = delete;
  PolyRing& operator=(const PolyRing&) = delete;

  static const PolyRing& get(const ScalarField& field, std::vector<std::string> variables);

  const ScalarField& field() const { return *field_; }
  const std::vector<std::string>& variables() const { return vars_; }
  std::size_t arity() const { return vars_.size(); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  /// Same field, with any missing names appended in order.
  const PolyRing& with_variables(const std::vector<std::string>& extra) const;
  const PolyRing& with_field(const ScalarField& field) const;

private:
  PolyRing(const ScalarField* field, std::vector<std::string> vars)
      : field_(field), vars_(std::move(vars)) {}

  const ScalarField* field_;
  std::vector<std::string> vars_;
};

/// Reserved name of the formal parameter used by the lambda constructions.
inline constexpr std::string_view kLambda = "lambda";
/// Reserved name of the cyclotomic generator in polynomial text.
inline constexpr std::string_view kZeta = "zeta";

using Exponents = std::vector<std::uint32_t>;

struct Term {
  Exponents exponents;
  Scalar coefficient;
};

/// Graded lexicographic comparison: negative, zero or positive.
int compare_grlex(const Exponents& a, const Exponents& b);

/// Sparse polynomial; terms are kept in strictly descending grlex order with
/// no zero coefficients.
class Poly {
public:
  Poly() : Poly(PolyRing::get(rationals(), {})) {}
  explicit Poly(const PolyRing& ring) : ring_(&ring) {}
  Poly(const PolyRing& ring, long constant);
  Poly(const PolyRing& ring, const Scalar& constant);

  static Poly variable(const PolyRing& ring, std::string_view name);
  static Poly monomial(const PolyRing& ring, Exponents exponents, const Scalar& coefficient);
  /// Parses text produced by to_string() (and general +,-,*,/,^ expressions
  /// with division only by nonzero constants).
  static Poly parse(const PolyRing& ring, std::string_view text);

  const PolyRing& ring() const { return *ring_; }
  const std::vector<Term>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Scalar constant_term() const;
  int total_degree() const;
  unsigned degree_in(std::size_t var) const;
  /// Coefficient of var^k, as a polynomial not involving var.
  Poly coefficient_in(std::size_t var, unsigned k) const;
  const Term& leading_term() const { return terms_.front(); }

  Poly& operator+=(const Poly& rhs);
  Poly& operator-=(const Poly& rhs);
  Poly& operator*=(const Poly& rhs);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly operator-() const;
  Poly scaled(const Scalar& s) const;
  Poly pow(unsigned exponent) const;

  friend bool operator==(const Poly& a, const Poly& b);

  /// Replaces the named variable by a polynomial in the same ring.
  Poly substitute(std::string_view var, const Poly& value) const;
  /// Evaluates at a point with one scalar per ring variable.
  Scalar evaluate(std::span<const Scalar> point) const;
  /// Re-expresses the polynomial in another ring, matching variables by name.
  Poly embed(const PolyRing& target) const;

  std::string to_string() const;

private:
  static Poly from_unsorted(const PolyRing& ring, std::vector<Term> terms);

  const PolyRing* ring_;
  std::vector<Term> terms_;
};

inline Poly operator*(const Scalar& s, const Poly& p) { return p.scaled(s); }

/// Ring in which a and b can be combined (same variables, compatible fields).
const PolyRing& common_ring(const PolyRing& a, const PolyRing& b);

/// s with q*s == p. Throws DivisionError naming the first term that cannot
/// be cancelled when q does not divide p.
Poly exact_divide(const Poly& p, const Poly& q);

struct DivMod {
  Poly quotient;
  Poly remainder;
};

/// Division by a polynomial that is monic in `var` (coefficients may involve
/// the other variables). The remainder has var-degree below that of f.
DivMod divmod_monic(const Poly& p, const Poly& f, std::string_view var);

} // namespace curvedk
