#include <algorithm>
#include <map>

#include "curvedk/generators.hpp"

namespace curvedk {

namespace {

std::size_t random_below(Rng& rng, std::size_t n) { return n ? static_cast<std::size_t>(rng() % n) : 0; }

bool coin(Rng& rng) { return rng() & 1u; }

long nonzero_int(Rng& rng, long bound) {
  long v = 0;
  while (v == 0) v = random_int(rng, bound);
  return v;
}

Poly constant(const PolyRing& ring, long c) { return Poly(ring, c); }

// Identity plus random strictly lower (or upper) entries.
PolyMatrix unitriangular(Rng& rng, const PolyRing& ring, std::size_t n, bool lower, unsigned vars, unsigned degree) {
  PolyMatrix m = PolyMatrix::identity(ring, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if ((lower ? i > j : i < j) && coin(rng)) m(i, j) = random_poly(ring, rng, vars, degree, 2);
  return m;
}

// (I + N)^-1 = sum_k (-N)^k for nilpotent N.
PolyMatrix unitriangular_inverse(const PolyMatrix& u) {
  const std::size_t n = u.rows();
  const PolyMatrix id = PolyMatrix::identity(u.ring(), n);
  const PolyMatrix neg = id - u;
  PolyMatrix out = id;
  PolyMatrix power = id;
  for (std::size_t k = 1; k < n; ++k) {
    power = power * neg;
    out += power;
  }
  return out;
}

struct Unimodular {
  PolyMatrix m;
  PolyMatrix inv;
};

Unimodular random_unimodular(Rng& rng, const PolyRing& ring, std::size_t n, unsigned vars, unsigned degree) {
  PolyMatrix l = unitriangular(rng, ring, n, true, vars, degree);
  PolyMatrix u = unitriangular(rng, ring, n, false, vars, degree);
  return {l * u, unitriangular_inverse(u) * unitriangular_inverse(l)};
}

PolyMatrix diagonal(const PolyRing& ring, const std::vector<Poly>& entries) {
  PolyMatrix m(ring, entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

// Odd map P diag(u) Q^-1 (+) Q diag(w) P^-1 on (n|n).
ParityMap conjugated_pair(Rng& rng, const PolyRing& ring, const std::vector<Poly>& u, const std::vector<Poly>& w,
                          unsigned vars) {
  const std::size_t n = u.size();
  const Unimodular p = random_unimodular(rng, ring, n, vars, 1);
  const Unimodular q = random_unimodular(rng, ring, n, vars, 1);
  SuperModule V(ring, n, n);
  return ParityMap(V, V, Parity::odd, p.m * diagonal(ring, u) * q.inv, q.m * diagonal(ring, w) * p.inv);
}

// d (x) 1 + 1 (x) e on the tensor product.
ParityMap tensor_differential(const ParityMap& d, const ParityMap& e) {
  return tensor(d, ParityMap::identity(e.source())) + tensor(ParityMap::identity(d.source()), e);
}

ParityMap koszul_piece(const PolyRing& ring, const Poly& a, const Poly& b) {
  SuperModule V(ring, 1, 1, "k");
  PolyMatrix ma(ring, 1, 1), mb(ring, 1, 1);
  ma(0, 0) = a;
  mb(0, 0) = b;
  return ParityMap(V, V, Parity::odd, ma, mb);
}

ParityMap random_map(Rng& rng, const SuperModule& src, const SuperModule& tgt, Parity parity, unsigned vars) {
  ParityMap m = ParityMap::zero(src, tgt, parity);
  for (auto* block : {&m.from_even(), &m.from_odd()})
    for (std::size_t i = 0; i < block->rows(); ++i)
      for (std::size_t j = 0; j < block->cols(); ++j) (*block)(i, j) = random_poly(src.ring(), rng, vars, 1, 2);
  return m;
}

Poly linear_form(Rng& rng, const std::vector<Poly>& vars) {
  Poly out(vars.front().ring());
  while (out.is_zero())
    for (const auto& v : vars) out += v.scaled(Scalar(v.ring().field(), random_int(rng, 3)));
  return out;
}

// Random homogeneous form of the given degree in the listed variables.
Poly homogeneous_form(Rng& rng, const std::vector<Poly>& vars, unsigned degree) {
  const PolyRing& ring = vars.front().ring();
  Poly out(ring);
  for (unsigned t = 0; t < 3; ++t) {
    Poly mono(ring, random_int(rng, 3));
    for (unsigned k = 0; k < degree; ++k) mono = mono * vars[random_below(rng, vars.size())];
    out += mono;
  }
  return out;
}

} // namespace

const PolyRing& instance_ring(const ScalarField& field, bool with_lambda) {
  if (with_lambda) return PolyRing::get(field, {"x", "y", std::string(kLambda)});
  return PolyRing::get(field, {"x", "y"});
}

long random_int(Rng& rng, long bound) {
  return static_cast<long>(rng() % static_cast<std::uint64_t>(2 * bound + 1)) - bound;
}

Poly random_poly(const PolyRing& ring, Rng& rng, unsigned vars, unsigned max_degree, unsigned max_terms) {
  Poly out(ring);
  const std::size_t terms = random_below(rng, max_terms + 1);
  for (std::size_t t = 0; t < terms; ++t) {
    Exponents e(ring.arity(), 0);
    const std::size_t deg = vars ? random_below(rng, max_degree + 1) : 0;
    for (std::size_t k = 0; k < deg; ++k) ++e[random_below(rng, vars)];
    const long c = random_int(rng, 3);
    if (c) out += Poly::monomial(ring, e, Scalar(ring.field(), c));
  }
  return out;
}

LambdaFamily random_lambda_family(Rng& rng, unsigned r, std::size_t max_rank, const ScalarField& field) {
  const PolyRing& ring = instance_ring(field, true);
  const std::size_t n = max_rank ? 1 + random_below(rng, max_rank) : 0;
  const Poly lam = Poly::variable(ring, kLambda);

  // Strictly increasing levels along nonzero entries make M^r = 0.
  std::vector<std::size_t> level(n);
  for (auto& l : level) l = random_below(rng, r);
  std::sort(level.begin(), level.end());
  PolyMatrix m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (level[i] < level[j] && coin(rng)) m(i, j) = random_poly(ring, rng, 2, 1, 2);
  const Unimodular u = random_unimodular(rng, ring, n, 0, 0);
  m = u.m * m * u.inv;

  const PolyMatrix id = PolyMatrix::identity(ring, n);
  PolyMatrix tail(ring, n, n);
  PolyMatrix power = id;
  for (unsigned k = 0; k < r; ++k) {
    tail += power.scaled(lam.pow(r - 1 - k));
    power = power * m;
  }
  const Unimodular p = random_unimodular(rng, ring, n, 2, 1);
  const Unimodular q = random_unimodular(rng, ring, n, 2, 1);
  SuperModule V(ring, n, n);
  ParityMap d(V, V, Parity::odd, p.m * (id.scaled(lam) - m) * q.inv, q.m * tail * p.inv);
  return lambda_family_from_total(d, r);
}

LambdaFamily example_lambda_family(unsigned r) {
  const PolyRing& ring = instance_ring(rationals(), true);
  const Poly lam = Poly::variable(ring, kLambda);
  const Poly x = Poly::variable(ring, "x");
  PolyMatrix a(ring, 2, 2), b(ring, 2, 2);
  a(0, 0) = lam;
  a(0, 1) = x;
  a(1, 1) = lam;
  b(0, 0) = lam.pow(r - 1);
  b(0, 1) = -(x * lam.pow(r - 2));
  b(1, 1) = lam.pow(r - 1);
  SuperModule V(ring, 2, 2);
  return lambda_family_from_total(ParityMap(V, V, Parity::odd, a, b), r);
}

LambdaFamily random_remark_family(Rng& rng, const std::vector<Poly>& roots, std::size_t extra_factors) {
  const std::size_t r = roots.size();
  if (r < 2) throw InvariantError("remark family needs at least two roots");
  const PolyRing& ring = instance_ring(rationals(), true);
  const Poly lam = Poly::variable(ring, kLambda);
  const std::size_t split = 1 + random_below(rng, r - 1);
  std::vector<std::size_t> order(r);
  for (std::size_t i = 0; i < r; ++i) order[i] = i;
  for (std::size_t i = r; i > 1; --i) std::swap(order[i - 1], order[random_below(rng, i)]);
  Poly a(ring, 1), b(ring, 1);
  for (std::size_t i = 0; i < r; ++i) {
    const Poly factor = lam - roots[order[i]].embed(ring);
    if (i < split)
      a = a * factor;
    else
      b = b * factor;
  }
  ParityMap d = koszul_piece(ring, a, b);
  for (std::size_t k = 0; k < extra_factors; ++k) {
    Poly p = random_poly(ring, rng, 2, 1, 2);
    d = coin(rng) ? tensor_differential(d, koszul_piece(ring, p, Poly(ring)))
                  : tensor_differential(d, koszul_piece(ring, Poly(ring), p));
  }
  const SuperModule& V = d.source();
  const Unimodular p0 = random_unimodular(rng, ring, V.even_rank(), 2, 1);
  const Unimodular p1 = random_unimodular(rng, ring, V.odd_rank(), 2, 1);
  const ParityMap P(V, V, Parity::even, p0.m, p1.m);
  const ParityMap Pinv(V, V, Parity::even, p0.inv, p1.inv);
  d = compose(P, compose(d, Pinv));
  Poly f(ring, 1);
  for (const auto& z : roots) f = f * (lam - z.embed(ring));
  std::vector<Poly> target;
  for (std::size_t k = 0; k <= r; ++k) target.push_back(f.coefficient_in(*ring.index_of(kLambda), k));
  return lambda_family_from_total(d, static_cast<unsigned>(r), target);
}

TwistFamily random_twist_family(Rng& rng, unsigned r, std::size_t max_rank, const ScalarField& field) {
  const PolyRing& ring = instance_ring(field, false);
  std::vector<Poly> f;
  for (unsigned i = 0; i < r; ++i) {
    Poly p(ring);
    while (p.is_zero()) p = random_poly(ring, rng, 2, 1, 2);
    f.push_back(p);
  }
  const bool tensored = max_rank >= 2 && coin(rng);
  const std::size_t cap = tensored ? max_rank / 2 : max_rank;
  const std::size_t n = cap ? 1 + random_below(rng, cap) : 0;
  std::vector<Poly> u, w;
  for (std::size_t k = 0; k < n; ++k) {
    Poly a(ring, -1), b(ring, 1);
    for (const auto& p : f) {
      if (coin(rng))
        a = a * p;
      else
        b = b * p;
    }
    u.push_back(a);
    w.push_back(b);
  }
  ParityMap d = conjugated_pair(rng, ring, u, w, 2);
  if (tensored) {
    Poly p = random_poly(ring, rng, 2, 1, 2);
    d = tensor_differential(d, coin(rng) ? koszul_piece(ring, p, Poly(ring)) : koszul_piece(ring, Poly(ring), p));
  }
  return make_twist_family(d, f);
}

TwistFamily example_twist_family() {
  const PolyRing& ring = instance_ring(rationals(), false);
  const Poly x = Poly::variable(ring, "x");
  const Poly y = Poly::variable(ring, "y");
  return make_twist_family(koszul_piece(ring, x, -y), {x, y});
}

TauData random_tau_data(Rng& rng, unsigned r, std::size_t coordinates, std::size_t rank1,
                        const ScalarField& field) {
  if (rank1 == 0) throw ShapeMismatch("tau data needs rank1 >= 1");
  std::vector<std::string> names;
  for (std::size_t a = 0; a < coordinates; ++a) names.push_back("x" + std::to_string(a));
  std::vector<std::string> vars = names;
  vars.emplace_back(kLambda);
  const PolyRing& ring = PolyRing::get(field, vars);
  const std::size_t n = coordinates;

  std::vector<long> phi(rank1);
  phi[0] = 1;
  for (std::size_t j = 1; j < rank1; ++j) phi[j] = random_int(rng, 2);
  PolyMatrix dt(ring, rank1, n + 1);
  for (std::size_t a = 0; a <= n; ++a) {
    std::vector<long> col(rank1);
    long dot = 0;
    for (std::size_t j = 0; j < rank1; ++j) {
      col[j] = random_int(rng, 3);
      dot += phi[j] * col[j];
    }
    col[0] += (a == n ? 1 : 0) - dot;
    for (std::size_t j = 0; j < rank1; ++j) dt(j, a) = constant(ring, col[j]);
  }

  TauData t{&ring, names, rank1, r, dt, {}};
  std::vector<unsigned> top(n + 1, 0);
  top[n] = r - 1;
  std::map<std::vector<unsigned>, std::vector<Poly>> nu;
  std::vector<Poly> phi_values;
  for (long c : phi) phi_values.push_back(constant(ring, c));
  nu[top] = phi_values;

  // p(v) * A dt(v) with A skew pairs to zero against dt(v).
  std::vector<Poly> v;
  for (const auto& s : vars) v.push_back(Poly::variable(ring, s));
  if (rank1 >= 2 && r >= 2) {
    const std::vector<Poly> dv = dt_apply(t, v);
    std::vector<Poly> extra(rank1, Poly(ring));
    for (std::size_t i = 0; i < rank1; ++i)
      for (std::size_t j = i + 1; j < rank1; ++j) {
        const long c = random_int(rng, 2);
        extra[i] += dv[j].scaled(Scalar(ring.field(), c));
        extra[j] -= dv[i].scaled(Scalar(ring.field(), c));
      }
    const Poly p = homogeneous_form(rng, v, r - 2);
    for (std::size_t j = 0; j < rank1; ++j) {
      const Poly value = p * extra[j];
      for (const auto& term : value.terms()) {
        std::vector<unsigned> alpha(term.exponents.begin(), term.exponents.end());
        Rational mult = 1;
        unsigned total = 0;
        for (unsigned e : alpha)
          for (unsigned k = 1; k <= e; ++k) mult *= Rational(++total) / Rational(k);
        auto& slot = nu[alpha];
        if (slot.empty()) slot.assign(rank1, Poly(ring));
        slot[j] += Poly(ring, term.coefficient * Scalar(ring.field(), Rational(1) / mult));
      }
    }
  }
  for (auto& [alpha, values] : nu) t.nu.emplace_back(alpha, values);
  return t;
}

TauData example_tau_data(unsigned r) {
  const PolyRing& ring = PolyRing::get(rationals(), {"x0", std::string(kLambda)});
  PolyMatrix dt(ring, 1, 2);
  dt(0, 1) = Poly(ring, 1);
  TauData t{&ring, {"x0"}, 1, r, dt, {}};
  t.nu.emplace_back(std::vector<unsigned>{0, r - 1}, std::vector<Poly>{Poly(ring, 1)});
  return t;
}

RamondData random_ramond_data(Rng& rng, unsigned r, std::size_t rank1, const ScalarField* field) {
  if (rank1 == 0) throw ShapeMismatch("ramond data needs rank1 >= 1");
  if (!field) field = r <= 2 ? &rationals() : &cyclotomic_field(r);
  if (!field->contains_roots_of_unity(r))
    throw InvariantError("field " + field->name() + " lacks primitive " + std::to_string(r) + "-th roots of unity");
  const PolyRing& ring = instance_ring(*field, false);
  const std::vector<Poly> coords{Poly::variable(ring, "x"), Poly::variable(ring, "y")};
  Poly e1 = linear_form(rng, coords);
  Poly e2 = linear_form(rng, coords);
  while (e1 == e2) e2 = linear_form(rng, coords);
  std::vector<Poly> d{e2 - e1}, nu{Poly(ring)};
  for (unsigned i = 0; i < r; ++i) nu[0] += e2.pow(i) * e1.pow(r - 1 - i);
  for (std::size_t j = 1; j < rank1; ++j) {
    d.push_back(linear_form(rng, coords));
    nu.push_back(Poly(ring));
  }
  for (std::size_t s = 0; s < 2 * rank1; ++s) {
    const std::size_t j = random_below(rng, rank1);
    const std::size_t k = random_below(rng, rank1);
    if (j == k) continue;
    const Poly p = homogeneous_form(rng, coords, r - 2);
    nu[j] += p * d[k];
    nu[k] -= p * d[j];
  }
  return RamondData{&ring, {"x", "y"}, r, d, nu, e1, e2};
}

RamondData example_ramond_data() {
  const PolyRing& ring = instance_ring(rationals(), false);
  const Poly x = Poly::variable(ring, "x");
  return RamondData{&ring, {"x", "y"}, 2, {x}, {x.scaled(Scalar(rationals(), 3))}, x, x.scaled(Scalar(rationals(), 2))};
}

CurvedComplex random_complex(Rng& rng, const PolyRing& ring, std::size_t n) {
  std::vector<Poly> u, w;
  for (std::size_t k = 0; k < n; ++k) {
    Poly p(ring);
    while (p.is_zero()) p = random_poly(ring, rng, 2, 1, 2);
    if (coin(rng)) {
      u.push_back(p);
      w.push_back(Poly(ring));
    } else {
      u.push_back(Poly(ring));
      w.push_back(p);
    }
  }
  return curvature_check(conjugated_pair(rng, ring, u, w, 2), Poly(ring));
}

ConeInstance random_cone_instance(Rng& rng, std::size_t max_rank, const ScalarField& field) {
  const PolyRing& ring = instance_ring(field, false);
  const CurvedComplex A = random_complex(rng, ring, 1 + random_below(rng, max_rank));
  const CurvedComplex C = random_complex(rng, ring, 1 + random_below(rng, max_rank));
  const ParityMap& dA = A.differential();
  const ParityMap& dC = C.differential();
  const ParityMap h0 = random_map(rng, A.module(), C.module(), Parity::odd, 2);
  const ParityMap m_odd = random_map(rng, A.module(), C.module(), Parity::odd, 2);
  const ParityMap m_even = random_map(rng, A.module(), C.module(), Parity::even, 2);
  const ParityMap phi = compose(dC, h0) + compose(h0, dA);
  const ParityMap gamma = compose(dC, m_odd) + compose(m_odd, dA);
  const ParityMap k = compose(dC, m_even) - compose(m_even, dA);
  const Poly t(ring, nonzero_int(rng, 3));

  const DirectSumLayout lb({A.module(), C.module()});
  const DirectSumLayout la({A.module()});
  const DirectSumLayout lc({C.module()});
  BlockAssembler db(lb, lb, Parity::odd);
  db.add(0, 0, dA);
  db.add(1, 1, dC);
  const CurvedComplex B = curvature_check(db.build(), Poly(ring));
  BlockAssembler g(la, lb, Parity::even);
  g.add(0, 0, ParityMap::identity(A.module()));
  g.add(1, 0, gamma);
  BlockAssembler f(lb, lc, Parity::even);
  f.add(0, 0, phi - gamma.scaled(t));
  f.add(0, 1, ParityMap::identity(C.module()).scaled(t));
  return ConeInstance{make_chain_map(A, B, g.build()), make_chain_map(B, C, f.build()), h0, h0 + k};
}

OrthoSection random_section(Rng& rng, const PolyRing& ring, std::size_t n, unsigned max_degree, bool with_line) {
  OrthoSection s;
  const unsigned vars = static_cast<unsigned>(std::min<std::size_t>(ring.arity(), 2));
  for (std::size_t i = 0; i < n; ++i) {
    s.vector_part.push_back(random_poly(ring, rng, vars, max_degree));
    s.covector_part.push_back(random_poly(ring, rng, vars, max_degree));
  }
  if (with_line) s.line = std::make_pair(random_poly(ring, rng, vars, max_degree), random_poly(ring, rng, vars, max_degree));
  return s;
}

} // namespace curvedk
