#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "curvedk/algebra.hpp"

namespace curvedk {

const PolyRing& PolyRing::get(const ScalarField& field, std::vector<std::string> variables) {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].empty() || variables[i] == kZeta)
      throw ContextMismatch("invalid variable name '" + variables[i] + "'");
    for (std::size_t j = 0; j < i; ++j)
      if (variables[i] == variables[j])
        throw ContextMismatch("duplicate variable name '" + variables[i] + "'");
  }
  static std::mutex mutex;
  static std::map<std::pair<unsigned, std::vector<std::string>>, std::unique_ptr<PolyRing>> registry;
  std::lock_guard lock(mutex);
  auto& slot = registry[{field.order(), variables}];
  if (!slot) slot.reset(new PolyRing(&field, std::move(variables)));
  return *slot;
}

std::optional<std::size_t> PolyRing::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == name) return i;
  return std::nullopt;
}

const PolyRing& PolyRing::with_variables(const std::vector<std::string>& extra) const {
  std::vector<std::string> vars = vars_;
  for (const auto& v : extra)
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  if (vars.size() == vars_.size()) return *this;
  return get(*field_, std::move(vars));
}

const PolyRing& PolyRing::with_field(const ScalarField& field) const {
  if (&field == field_) return *this;
  return get(field, vars_);
}

const PolyRing& common_ring(const PolyRing& a, const PolyRing& b) {
  if (&a == &b) return a;
  if (a.variables() != b.variables())
    throw ContextMismatch("polynomial rings have different variables");
  const ScalarField& f = common_field(a.field(), b.field());
  return &f == &a.field() ? a : b;
}

int compare_grlex(const Exponents& a, const Exponents& b) {
  std::uint64_t da = 0, db = 0;
  for (auto e : a) da += e;
  for (auto e : b) db += e;
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

namespace {

bool grlex_greater(const Term& a, const Term& b) { return compare_grlex(a.exponents, b.exponents) > 0; }

} // namespace

Poly::Poly(const PolyRing& ring, long constant) : Poly(ring, Scalar(ring.field(), constant)) {}

Poly::Poly(const PolyRing& ring, const Scalar& constant) : ring_(&ring) {
  if (!constant.is_zero())
    terms_.push_back({Exponents(ring.arity(), 0), constant.in_field(ring.field())});
}

Poly Poly::variable(const PolyRing& ring, std::string_view name) {
  auto idx = ring.index_of(name);
  if (!idx) throw ContextMismatch("unknown variable '" + std::string(name) + "'");
  Exponents e(ring.arity(), 0);
  e[*idx] = 1;
  return monomial(ring, std::move(e), Scalar(ring.field(), 1));
}

Poly Poly::monomial(const PolyRing& ring, Exponents exponents, const Scalar& coefficient) {
  if (exponents.size() != ring.arity()) throw ContextMismatch("exponent vector arity mismatch");
  Poly p(ring);
  if (!coefficient.is_zero()) p.terms_.push_back({std::move(exponents), coefficient.in_field(ring.field())});
  return p;
}

Poly Poly::from_unsorted(const PolyRing& ring, std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), grlex_greater);
  Poly out(ring);
  for (auto& t : terms) {
    if (!out.terms_.empty() && out.terms_.back().exponents == t.exponents) {
      out.terms_.back().coefficient += t.coefficient;
      if (out.terms_.back().coefficient.is_zero()) out.terms_.pop_back();
    } else if (!t.coefficient.is_zero()) {
      out.terms_.push_back(std::move(t));
    }
  }
  return out;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && compare_grlex(terms_[0].exponents, Exponents(ring_->arity(), 0)) == 0);
}

Scalar Poly::constant_term() const {
  if (!terms_.empty()) {
    const Term& last = terms_.back();
    if (std::all_of(last.exponents.begin(), last.exponents.end(), [](auto e) { return e == 0; }))
      return last.coefficient;
  }
  return Scalar(ring_->field(), 0);
}

int Poly::total_degree() const {
  if (terms_.empty()) return -1;
  int d = 0;
  for (auto e : terms_.front().exponents) d += static_cast<int>(e);
  return d;
}

unsigned Poly::degree_in(std::size_t var) const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.exponents[var]);
  return d;
}

Poly Poly::coefficient_in(std::size_t var, unsigned k) const {
  Poly out(*ring_);
  for (const auto& t : terms_) {
    if (t.exponents[var] != k) continue;
    Term copy = t;
    copy.exponents[var] = 0;
    out.terms_.push_back(std::move(copy));
  }
  // Zeroing one coordinate can reorder terms.
  return from_unsorted(*ring_, std::move(out.terms_));
}

Poly& Poly::operator+=(const Poly& rhs) {
  const PolyRing& ring = common_ring(*ring_, *rhs.ring_);
  if (rhs.terms_.empty()) {
    ring_ = &ring;
    return *this;
  }
  std::vector<Term> merged;
  merged.reserve(terms_.size() + rhs.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < rhs.terms_.size()) {
    int c = i == terms_.size()       ? -1
            : j == rhs.terms_.size() ? 1
                                     : compare_grlex(terms_[i].exponents, rhs.terms_[j].exponents);
    if (c > 0) {
      merged.push_back(std::move(terms_[i++]));
    } else if (c < 0) {
      merged.push_back(rhs.terms_[j++]);
    } else {
      Term t = std::move(terms_[i++]);
      t.coefficient += rhs.terms_[j++].coefficient;
      if (!t.coefficient.is_zero()) merged.push_back(std::move(t));
    }
  }
  terms_ = std::move(merged);
  ring_ = &ring;
  return *this;
}

Poly& Poly::operator-=(const Poly& rhs) { return *this += -rhs; }

Poly operator*(const Poly& a, const Poly& b) {
  const PolyRing& ring = common_ring(*a.ring_, *b.ring_);
  if (a.terms_.empty() || b.terms_.empty()) return Poly(ring);
  if (b.is_constant()) {
    Poly out = a.scaled(b.terms_[0].coefficient);
    out.ring_ = &ring;
    return out;
  }
  if (a.is_constant()) {
    Poly out = b.scaled(a.terms_[0].coefficient);
    out.ring_ = &ring;
    return out;
  }
  std::vector<Term> prod;
  prod.reserve(a.terms_.size() * b.terms_.size());
  const std::size_t n = ring.arity();
  for (const auto& s : a.terms_) {
    for (const auto& t : b.terms_) {
      Exponents e(n);
      for (std::size_t k = 0; k < n; ++k) e[k] = s.exponents[k] + t.exponents[k];
      prod.push_back({std::move(e), s.coefficient * t.coefficient});
    }
  }
  return Poly::from_unsorted(ring, std::move(prod));
}

Poly& Poly::operator*=(const Poly& rhs) { return *this = *this * rhs; }

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& t : out.terms_) t.coefficient = -t.coefficient;
  return out;
}

Poly Poly::scaled(const Scalar& s) const {
  if (s.is_zero()) return Poly(ring_->with_field(common_field(ring_->field(), s.field())));
  Poly out = *this;
  out.ring_ = &ring_->with_field(common_field(ring_->field(), s.field()));
  for (auto& t : out.terms_) t.coefficient *= s;
  return out;
}

Poly Poly::pow(unsigned exponent) const {
  Poly result(*ring_, 1);
  Poly base = *this;
  while (exponent) {
    if (exponent & 1u) result *= base;
    exponent >>= 1;
    if (exponent) base *= base;
  }
  return result;
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.ring_->variables() != b.ring_->variables()) return false;
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].exponents != b.terms_[i].exponents) return false;
    if (!(a.terms_[i].coefficient == b.terms_[i].coefficient)) return false;
  }
  return true;
}

Poly Poly::substitute(std::string_view var, const Poly& value) const {
  auto idx = ring_->index_of(var);
  if (!idx) throw ContextMismatch("substitute: unknown variable '" + std::string(var) + "'");
  const PolyRing& ring = common_ring(*ring_, value.ring());
  unsigned top = degree_in(*idx);
  std::vector<Poly> powers{Poly(ring, 1)};
  for (unsigned k = 1; k <= top; ++k) powers.push_back(powers.back() * value);
  std::vector<Term> rest;
  Poly out(ring);
  for (const auto& t : terms_) {
    Term stripped = t;
    unsigned k = stripped.exponents[*idx];
    stripped.exponents[*idx] = 0;
    Poly mono = Poly::monomial(ring, stripped.exponents, stripped.coefficient);
    out += k == 0 ? mono : mono * powers[k];
  }
  return out;
}

Scalar Poly::evaluate(std::span<const Scalar> point) const {
  if (point.size() != ring_->arity())
    throw ContextMismatch("evaluate: expected " + std::to_string(ring_->arity()) + " coordinates");
  Scalar acc(ring_->field(), 0);
  for (const auto& t : terms_) {
    Scalar v = t.coefficient;
    for (std::size_t k = 0; k < point.size(); ++k)
      if (t.exponents[k]) v *= point[k].pow(t.exponents[k]);
    acc += v;
  }
  return acc;
}

Poly Poly::embed(const PolyRing& target) const {
  if (&target == ring_) return *this;
  std::vector<std::optional<std::size_t>> map(ring_->arity());
  for (std::size_t i = 0; i < ring_->arity(); ++i) map[i] = target.index_of(ring_->variables()[i]);
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Exponents e(target.arity(), 0);
    for (std::size_t i = 0; i < t.exponents.size(); ++i) {
      if (!t.exponents[i]) continue;
      if (!map[i])
        throw ContextMismatch("embed: variable '" + ring_->variables()[i] + "' missing from target ring");
      e[*map[i]] = t.exponents[i];
    }
    out.push_back({std::move(e), t.coefficient.in_field(target.field())});
  }
  return from_unsorted(target, std::move(out));
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& t : terms_) {
    std::string mono;
    for (std::size_t k = 0; k < t.exponents.size(); ++k) {
      if (!t.exponents[k]) continue;
      if (!mono.empty()) mono += "*";
      mono += ring_->variables()[k];
      if (t.exponents[k] > 1) mono += "^" + std::to_string(t.exponents[k]);
    }
    const Scalar& c = t.coefficient;
    bool negative = c.is_rational() && sgn(c.rational_part()) < 0;
    Scalar mag = negative ? -c : c;
    if (first) {
      if (negative) out << "-";
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;
    if (mono.empty()) {
      out << mag.to_string();
    } else if (mag.is_one()) {
      out << mono;
    } else {
      out << mag.to_string() << "*" << mono;
    }
  }
  return out.str();
}

Poly exact_divide(const Poly& p, const Poly& q) {
  if (q.is_zero()) throw DivisionError("exact_divide: division by zero polynomial");
  const PolyRing& ring = common_ring(p.ring(), q.ring());
  const Term& lead = q.leading_term();
  const Scalar lead_inv = lead.coefficient.inverse();
  Poly rem = p.embed(ring);
  Poly quot(ring);
  while (!rem.is_zero()) {
    const Term& t = rem.leading_term();
    Exponents e(ring.arity());
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (t.exponents[k] < lead.exponents[k]) {
        throw DivisionError("exact_divide: (" + q.to_string() + ") does not divide (" + p.to_string() +
                            "); offending remainder term " +
                            Poly::monomial(ring, t.exponents, t.coefficient).to_string());
      }
      e[k] = t.exponents[k] - lead.exponents[k];
    }
    Poly step = Poly::monomial(ring, std::move(e), t.coefficient * lead_inv);
    quot += step;
    rem -= step * q;
  }
  return quot;
}

DivMod divmod_monic(const Poly& p, const Poly& f, std::string_view var) {
  const PolyRing& ring = common_ring(p.ring(), f.ring());
  auto idx = ring.index_of(var);
  if (!idx) throw ContextMismatch("divmod_monic: unknown variable '" + std::string(var) + "'");
  const unsigned n = f.degree_in(*idx);
  if (f.is_zero() || !(f.coefficient_in(*idx, n) == Poly(ring, 1)))
    throw DivisionError("divmod_monic: (" + f.to_string() + ") is not monic in " + std::string(var));
  Poly rem = p.embed(ring);
  Poly quot(ring);
  const Poly x = Poly::variable(ring, var);
  while (!rem.is_zero()) {
    unsigned k = rem.degree_in(*idx);
    if (k < n) break;
    Poly step = rem.coefficient_in(*idx, k) * x.pow(k - n);
    quot += step;
    rem -= step * f;
  }
  return {std::move(quot), std::move(rem)};
}

// ---------------------------------------------------------------------------
// Parser: expr := term (('+'|'-') term)*, term := unary (('*'|'/') unary)*,
// unary := ('-'|'+') unary | power, power := atom ('^' integer)?,
// atom := number | identifier | '(' expr ')'.

namespace {

class Parser {
public:
  Parser(const PolyRing& ring, std::string_view text) : ring_(ring), text_(text) {}

  Poly run() {
    Poly p = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

private:
  [[noreturn]] void fail(const std::string& why) {
    throw ParseError("polynomial '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " + why);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Poly expr() {
    Poly acc = term();
    for (;;) {
      if (eat('+')) {
        acc += term();
      } else if (eat('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Poly term() {
    Poly acc = unary();
    for (;;) {
      if (eat('*')) {
        acc *= unary();
      } else if (eat('/')) {
        Poly den = unary();
        if (!den.is_constant() || den.is_zero()) fail("division by a non-constant or zero");
        acc = acc.scaled(den.constant_term().inverse());
      } else {
        return acc;
      }
    }
  }

  Poly unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Poly power() {
    Poly base = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      if (pos_ - start > 6) fail("exponent too large");
      return base.pow(static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start)))));
    }
    return base;
  }

  Poly atom() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Poly inner = expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      Rational q(std::string(text_.substr(start, pos_ - start)));
      return Poly(ring_, Scalar(ring_.field(), q));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string_view name = text_.substr(start, pos_ - start);
      if (name == kZeta) return Poly(ring_, Scalar::zeta(ring_.field()));
      if (!ring_.index_of(name)) fail("unknown variable '" + std::string(name) + "'");
      return Poly::variable(ring_, name);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  const PolyRing& ring_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

} // namespace

Poly Poly::parse(const PolyRing& ring, std::string_view text) { return Parser(ring, text).run(); }

} // namespace curvedk
