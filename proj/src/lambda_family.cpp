#include <algorithm>
#include <functional>
#include <map>

#include "curvedk/constructions.hpp"

namespace curvedk {

namespace {

std::size_t lambda_index(const PolyRing& ring) {
  auto idx = ring.index_of(kLambda);
  if (!idx) throw ContextMismatch("ring has no lambda variable");
  return *idx;
}

void require_lambda_free(const ParityMap& m, const std::string& what) {
  const std::size_t l = lambda_index(m.ring());
  for (const auto* block : {&m.from_even(), &m.from_odd()})
    for (std::size_t i = 0; i < block->rows(); ++i)
      for (std::size_t j = 0; j < block->cols(); ++j)
        if ((*block)(i, j).degree_in(l) > 0) throw InvariantError(what + " involves lambda");
}

ParityMap entrywise(const ParityMap& m, const std::function<Poly(const Poly&)>& fn) {
  auto apply = [&](const PolyMatrix& b) {
    PolyMatrix out(b.ring(), b.rows(), b.cols());
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (!b(i, j).is_zero()) out(i, j) = fn(b(i, j));
    return out;
  };
  return ParityMap(m.source(), m.target(), m.parity(), apply(m.from_even()), apply(m.from_odd()));
}

std::vector<std::size_t> blocks_from(const DirectSumLayout& lay, std::size_t first) {
  std::vector<std::size_t> out;
  for (std::size_t p = first; p < lay.parts().size(); ++p) {
    auto idx = lay.indices_of(p);
    out.insert(out.end(), idx.begin(), idx.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

CurvedComplex try_complex(const ParityMap& d, Verdict& verdict, const std::string& name) {
  try {
    CurvedComplex c = curvature_check(d, Poly(d.ring()));
    verdict = Verdict::ok(name);
    return c;
  } catch (const InvariantError& e) {
    verdict = Verdict::fail(name, e.what());
    return curvature_check(ParityMap::zero(d.source(), d.source(), Parity::odd));
  }
}

// Euclid over Q on coefficient vectors (lowest first).
std::vector<Rational> trim(std::vector<Rational> p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
  return p;
}

std::vector<Rational> poly_mod(std::vector<Rational> a, const std::vector<Rational>& b) {
  a = trim(std::move(a));
  while (a.size() >= b.size() && !a.empty()) {
    Rational c = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
    a = trim(std::move(a));
  }
  return a;
}

std::vector<Rational> poly_gcd(std::vector<Rational> a, std::vector<Rational> b) {
  a = trim(std::move(a));
  b = trim(std::move(b));
  while (!b.empty()) {
    auto r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::vector<mpz_class> divisors(mpz_class n) {
  if (n < 0) n = -n;
  std::vector<mpz_class> out;
  if (n > 1000000) throw InvariantError("root search: coefficient too large to factor");
  for (mpz_class d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

Rational evaluate_rational(const std::vector<Rational>& p, const Rational& x) {
  Rational acc = 0;
  for (std::size_t k = p.size(); k-- > 0;) acc = acc * x + p[k];
  return acc;
}

} // namespace

const PolyRing& LambdaFamily::lambda_ring() const { return V.ring().with_variables({std::string(kLambda)}); }

ParityMap LambdaFamily::total() const {
  const PolyRing& ring = lambda_ring();
  const Poly lam = Poly::variable(ring, kLambda);
  ParityMap out = ParityMap::zero(V.embed(ring), V.embed(ring), Parity::odd);
  for (std::size_t i = 0; i < coefficients.size(); ++i) out += coefficients[i].embed(ring).scaled(lam.pow(i));
  return out;
}

ParityMap LambdaFamily::at(const Poly& z) const {
  const PolyRing& ring = lambda_ring();
  ParityMap out = ParityMap::zero(V.embed(ring), V.embed(ring), Parity::odd);
  const Poly zz = z.embed(ring);
  Poly pw(ring, 1);
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    out += coefficients[i].embed(ring).scaled(pw);
    pw = pw * zz;
  }
  return out;
}

Poly LambdaFamily::target_poly() const {
  const PolyRing& ring = lambda_ring();
  const Poly lam = Poly::variable(ring, kLambda);
  Poly f(ring);
  for (std::size_t k = 0; k < target.size(); ++k) f += target[k].embed(ring) * lam.pow(k);
  return f;
}

LambdaFamily make_lambda_family(SuperModule V, std::vector<ParityMap> coefficients, unsigned r) {
  const PolyRing& ring = V.ring().with_variables({std::string(kLambda)});
  std::vector<Poly> target(r + 1, Poly(ring));
  target[r] = Poly(ring, 1);
  return make_lambda_family(std::move(V), std::move(coefficients), r, std::move(target));
}

LambdaFamily make_lambda_family(SuperModule V, std::vector<ParityMap> coefficients, unsigned r,
                                std::vector<Poly> target) {
  if (r < 1) throw InvariantError("lambda family needs r >= 1");
  if (coefficients.size() > r) throw InvariantError("lambda family has more than r coefficients");
  LambdaFamily f;
  const PolyRing& ring = V.ring().with_variables({std::string(kLambda)});
  f.V = V.embed(ring);
  f.r = r;
  for (auto& c : coefficients) {
    if (c.parity() != Parity::odd || !same_shape(c.source(), f.V) || !same_shape(c.target(), f.V))
      throw InvariantError("lambda family coefficients must be odd endomorphisms of V");
    ParityMap e = c.embed(ring);
    require_lambda_free(e, "a coefficient");
    f.coefficients.push_back(ParityMap(f.V, f.V, Parity::odd, e.from_even(), e.from_odd()));
  }
  while (f.coefficients.size() < r) f.coefficients.push_back(ParityMap::zero(f.V, f.V, Parity::odd));
  if (target.size() != r + 1) throw InvariantError("target polynomial must have degree r");
  const std::size_t l = lambda_index(ring);
  for (auto& t : target) {
    t = t.embed(ring);
    if (t.degree_in(l) > 0) throw InvariantError("target coefficients must not involve lambda");
  }
  if (!(target[r] == Poly(ring, 1))) throw InvariantError("target polynomial must be monic");
  f.target = std::move(target);
  Verdict v = lambda_family_check(f);
  if (!v) throw InvariantError(v.to_string());
  return f;
}

LambdaFamily lambda_family_from_total(const ParityMap& d_lambda, unsigned r, std::vector<Poly> target) {
  const std::size_t l = lambda_index(d_lambda.ring());
  unsigned deg = 0;
  for (const auto* block : {&d_lambda.from_even(), &d_lambda.from_odd()})
    for (std::size_t i = 0; i < block->rows(); ++i)
      for (std::size_t j = 0; j < block->cols(); ++j) deg = std::max(deg, (*block)(i, j).degree_in(l));
  if (deg >= r)
    throw InvariantError("lambda-degree " + std::to_string(deg) + " of the family exceeds r - 1 = " +
                         std::to_string(r - 1));
  std::vector<ParityMap> coeffs;
  for (unsigned k = 0; k < r; ++k)
    coeffs.push_back(entrywise(d_lambda, [&](const Poly& p) { return p.coefficient_in(l, k); }));
  if (target.empty()) return make_lambda_family(d_lambda.source(), std::move(coeffs), r);
  return make_lambda_family(d_lambda.source(), std::move(coeffs), r, std::move(target));
}

Verdict lambda_family_check(const LambdaFamily& f) {
  const std::size_t r = f.r;
  const std::size_t top = std::max<std::size_t>(2 * r - 2, r);
  const ParityMap id = ParityMap::identity(f.V);
  for (std::size_t k = 0; k <= top; ++k) {
    ParityMap sum = ParityMap::zero(f.V, f.V, Parity::even);
    for (std::size_t i = 0; i < r && i <= k; ++i)
      if (k - i < r) sum += compose(f.coefficients[i], f.coefficients[k - i]);
    const Poly want = k < f.target.size() ? f.target[k] : Poly(f.lambda_ring());
    if (auto mm = first_mismatch(sum, id.scaled(want)))
      return Verdict::fail("lambda family", "coefficient of lambda^" + std::to_string(k) + " in d(lambda)^2 - f", mm);
  }
  return Verdict::ok("lambda family");
}

bool Lemma1Result::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Verdict& v) { return v.pass; });
}

Lemma1Result lemma1_build(const LambdaFamily& F, const SupportLocus& z) {
  const PolyRing& ring = F.lambda_ring();
  const Poly lam = Poly::variable(ring, kLambda);
  if (!(F.target_poly() == lam.pow(F.r))) throw InvariantError("lemma1_build needs d(lambda)^2 = lambda^r");
  const std::size_t r = F.r;
  std::vector<SuperModule> parts;
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<std::string> ev, od;
    const std::string tag = i == 0 ? "" : (i == 1 ? "*lambda" : "*lambda^" + std::to_string(i));
    for (const auto& s : F.V.even_labels()) ev.push_back(s + tag);
    for (const auto& s : F.V.odd_labels()) od.push_back(s + tag);
    parts.emplace_back(ring, std::move(ev), std::move(od));
  }
  DirectSumLayout lay(parts);
  BlockAssembler dw(lay, lay, Parity::odd);
  BlockAssembler h(lay, lay, Parity::odd);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k <= i; ++k) dw.add(i, k, F.coefficients[i - k]);
  // Overflow of d(lambda) on the window, divided by lambda^r.
  for (std::size_t m = 0; m < r; ++m)
    for (std::size_t k = m + 1; k < r; ++k) h.add(m, k, F.coefficients[r + m - k]);

  Lemma1Result res;
  Verdict v_dw;
  res.W = try_complex(dw.build(), v_dw, "d_W^2 = 0");
  res.checks.push_back(v_dw);
  res.V0 = curvature_check(F.coefficients[0], Poly(ring));
  res.h = h.build();
  for (std::size_t j = 1; j <= r; ++j) res.filtration.steps.push_back(blocks_from(lay, j - 1));
  res.checks.push_back(filtration_verify(res.W, res.filtration));
  Verdict gr = Verdict::ok("graded pieces equal (V, d_0)");
  if (res.checks.back().pass) {
    for (std::size_t j = 1; j <= r; ++j) {
      res.graded.push_back(associated_graded(res.W, res.filtration, j));
      Verdict v = compare_maps("graded", res.graded.back().differential(), res.V0.differential());
      if (!v && gr.pass) gr = Verdict::fail(gr.check, "piece " + std::to_string(j) + " differs", v.entry);
    }
  } else {
    gr = Verdict::fail(gr.check, "filtration invalid");
  }
  res.checks.push_back(gr);
  res.checks.push_back(is_null_homotopy(res.W, res.h));

  KCertificate cert(z);
  const std::size_t w = cert.add_complex(res.W);
  const std::size_t v0 = cert.add_complex(res.V0);
  cert.add_claim(v0, static_cast<std::int64_t>(r));
  FiltrationMove fm{w, res.filtration, std::vector<std::size_t>(r, v0), {}, {}};
  for (std::size_t j = 0; j < res.graded.size(); ++j) {
    fm.forward.push_back(ParityMap::identity(res.graded[j].module()));
    fm.backward.push_back(ParityMap::identity(res.graded[j].module()));
  }
  cert.add_step(-1, std::move(fm));
  cert.add_step(1, HomotopyMove{w, res.h});
  res.cert = std::move(cert);
  return res;
}

// ---------------------------------------------------------------- general target

bool RemarkResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Verdict& v) { return v.pass; });
}

std::vector<Poly> rational_roots(const LambdaFamily& F) {
  const PolyRing& ring = F.lambda_ring();
  std::vector<Rational> f;
  for (const auto& t : F.target) {
    if (!t.is_constant() || !t.constant_term().is_rational())
      throw InvariantError("roots of a target with non-rational coefficients must be supplied");
    f.push_back(t.constant_term().rational_part());
  }
  std::vector<Rational> deriv;
  for (std::size_t k = 1; k < f.size(); ++k) deriv.push_back(f[k] * static_cast<long>(k));
  if (trim(poly_gcd(f, deriv)).size() > 1) throw InvariantError("target polynomial is not squarefree");

  std::vector<Poly> roots;
  std::vector<Rational> rest = f;
  while (!rest.empty() && sgn(rest.front()) == 0) {
    roots.emplace_back(ring, 0);
    rest.erase(rest.begin());
  }
  if (rest.size() > 1) {
    mpz_class lcm = 1;
    for (const auto& c : rest) lcm = lcm * c.get_den() / gcd(lcm, c.get_den());
    std::vector<mpz_class> ints;
    for (const auto& c : rest) ints.push_back(mpz_class(c * lcm));
    for (const auto& p : divisors(ints.front()))
      for (const auto& q : divisors(ints.back()))
        for (int s : {1, -1}) {
          Rational cand(p * s, q);
          cand.canonicalize();
          if (sgn(evaluate_rational(rest, cand)) != 0) continue;
          bool seen = false;
          for (const auto& z : roots) seen = seen || z == Poly(ring, Scalar(rationals(), cand));
          if (!seen) roots.emplace_back(ring, Scalar(rationals(), cand));
        }
  }
  if (roots.size() != F.r) throw InvariantError("target polynomial does not split over the rationals");
  return roots;
}

RemarkResult remark_decompose(const LambdaFamily& F, std::optional<std::vector<Poly>> given, const SupportLocus& z) {
  const PolyRing& ring = F.lambda_ring();
  const std::size_t l = lambda_index(ring);
  const Poly lam = Poly::variable(ring, kLambda);
  const Poly f = F.target_poly();
  const std::size_t r = F.r;

  std::vector<Poly> roots = given ? *given : rational_roots(F);
  if (roots.size() != r) throw InvariantError("need exactly r roots");
  for (auto& root : roots) {
    root = root.embed(ring);
    if (root.degree_in(l) > 0) throw InvariantError("roots must not involve lambda");
  }
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j)
      if (roots[i] == roots[j]) throw InvariantError("target polynomial is not squarefree (repeated root)");
  Poly prod(ring, 1);
  for (const auto& root : roots) prod = prod * (lam - root);
  if (!(prod == f)) throw InvariantError("roots do not multiply out to the target polynomial");

  // lambda^n = q_n f + rem_n for n <= 2r - 2.
  std::vector<DivMod> pw;
  for (std::size_t n = 0; n + 1 < 2 * r || n <= r; ++n) pw.push_back(divmod_monic(lam.pow(n), f, kLambda));

  std::vector<SuperModule> parts(r, F.V);
  DirectSumLayout lay(parts);
  BlockAssembler dw(lay, lay, Parity::odd);
  BlockAssembler hb(lay, lay, Parity::odd);
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t n = k; n < k + r; ++n) {
      const ParityMap& d = F.coefficients[n - k];
      if (d.is_zero()) continue;
      for (std::size_t i = 0; i < r; ++i) {
        Poly c = pw[n].remainder.coefficient_in(l, i);
        if (!c.is_zero()) dw.add(i, k, d.scaled(c));
        Poly q = pw[n].quotient.coefficient_in(l, i);
        if (!q.is_zero()) hb.add(i, k, d.scaled(q));
      }
    }
  }

  // Newton basis p_k = prod_{m<k}(lambda - z_m); column k of T holds p_k.
  std::vector<std::vector<Poly>> t(r, std::vector<Poly>(r, Poly(ring)));
  Poly p(ring, 1);
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t i = 0; i <= k; ++i) t[i][k] = p.coefficient_in(l, i);
    p = p * (lam - roots[k]);
  }
  std::vector<std::vector<Poly>> u(r, std::vector<Poly>(r, Poly(ring)));
  for (std::size_t k = 0; k < r; ++k) {
    u[k][k] = Poly(ring, 1);
    for (std::size_t i = k; i-- > 0;) {
      Poly acc(ring);
      for (std::size_t m = i + 1; m <= k; ++m) acc += t[i][m] * u[m][k];
      u[i][k] = -acc;
    }
  }
  BlockAssembler tb(lay, lay, Parity::even), ub(lay, lay, Parity::even);
  const ParityMap id = ParityMap::identity(F.V);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = i; k < r; ++k) {
      if (!t[i][k].is_zero()) tb.add(i, k, id.scaled(t[i][k]));
      if (!u[i][k].is_zero()) ub.add(i, k, id.scaled(u[i][k]));
    }
  const ParityMap T = tb.build(), U = ub.build();

  RemarkResult res;
  res.roots = roots;
  Verdict vp, vn;
  res.power_basis = try_complex(dw.build(), vp, "power basis d^2 = 0");
  res.checks.push_back(vp);
  res.newton_basis = try_complex(compose(U, compose(res.power_basis.differential(), T)), vn, "Newton basis d^2 = 0");
  res.checks.push_back(vn);
  res.h = hb.build();
  res.checks.push_back(is_null_homotopy(res.power_basis, res.h));

  Filtration filt;
  for (std::size_t j = 1; j <= r; ++j) filt.steps.push_back(blocks_from(lay, j - 1));
  res.checks.push_back(filtration_verify(res.newton_basis, filt));

  KCertificate cert(z);
  const std::size_t wp = cert.add_complex(res.power_basis);
  const std::size_t wn = cert.add_complex(res.newton_basis);
  FiltrationMove fm{wn, filt, {}, {}, {}};
  Verdict gr = Verdict::ok("graded pieces equal (V, d(z_j))");
  for (std::size_t j = 0; j < r; ++j) {
    CurvedComplex cj;
    try {
      cj = curvature_check(F.at(roots[j]), Poly(ring));
    } catch (const InvariantError& e) {
      throw InvariantError("d(z) does not square to zero at root " + roots[j].to_string() + ": " + e.what());
    }
    res.complexes.push_back(cj);
    res.multiplicities.push_back(1);
    const std::size_t idx = cert.add_complex(cj);
    cert.add_claim(idx, 1);
    fm.graded.push_back(idx);
    if (res.checks.back().pass) {
      CurvedComplex g = associated_graded(res.newton_basis, filt, j + 1);
      Verdict v = compare_maps("graded", g.differential(), cj.differential());
      if (!v && gr.pass) gr = Verdict::fail(gr.check, "piece " + std::to_string(j + 1) + " differs", v.entry);
      fm.forward.push_back(ParityMap::identity(g.module()));
      fm.backward.push_back(ParityMap::identity(g.module()));
    }
  }
  res.checks.push_back(gr);
  Verdict iso = is_chain_map(U, res.power_basis, res.newton_basis);
  if (iso) {
    if (auto mm = first_mismatch(compose(T, U), ParityMap::identity(lay.module())))
      iso = Verdict::fail("change of basis", "T U != id", mm);
  }
  iso.check = "change of basis";
  res.checks.push_back(iso);

  cert.add_step(-1, std::move(fm));
  cert.add_step(-1, IsoMove{wp, wn, U, T});
  cert.add_step(1, HomotopyMove{wp, res.h});
  res.cert = std::move(cert);
  return res;
}

} // namespace curvedk
