#include <algorithm>

#include "curvedk/constructions.hpp"

namespace curvedk {

namespace {

long factorial(unsigned n) {
  long out = 1;
  for (unsigned k = 2; k <= n; ++k) out *= static_cast<long>(k);
  return out;
}

void validate(const TauData& t) {
  if (!t.ring) throw InvariantError("tau data has no ring");
  if (!t.ring->index_of(kLambda)) throw InvariantError("tau data ring must contain lambda");
  for (const auto& c : t.coordinates)
    if (!t.ring->index_of(c)) throw InvariantError("unknown coordinate " + c);
  const std::size_t n = t.coordinates.size();
  if (t.r < 2) throw InvariantError("tau data needs r >= 2");
  if (t.dt.rows() != t.rank1 || t.dt.cols() != n + 1) throw ShapeMismatch("dt must be rank1 x (n + 1)");
  for (const auto& [alpha, values] : t.nu) {
    unsigned deg = 0;
    for (unsigned a : alpha) deg += a;
    if (alpha.size() != n + 1 || deg + 1 != t.r) throw ShapeMismatch("nu keys must be exponent vectors of degree r - 1");
    if (values.size() != t.rank1) throw ShapeMismatch("nu values must have rank1 entries");
  }
}

std::vector<Poly> lambda_point(const TauData& t) {
  std::vector<Poly> v;
  for (const auto& c : t.coordinates) v.push_back(Poly::variable(*t.ring, c));
  v.push_back(Poly::variable(*t.ring, kLambda));
  return v;
}

Poly pairing(const std::vector<Poly>& a, const std::vector<Poly>& b, const PolyRing& ring) {
  Poly out(ring);
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) out += a[i] * b[i];
  return out;
}

} // namespace

std::vector<Poly> nu_power(const TauData& t, const std::vector<Poly>& v) {
  validate(t);
  if (v.size() != t.coordinates.size() + 1) throw ShapeMismatch("nu_power: point has the wrong length");
  std::vector<Poly> out(t.rank1, Poly(*t.ring));
  for (const auto& [alpha, values] : t.nu) {
    long denom = 1;
    Poly mono(*t.ring, 1);
    for (std::size_t a = 0; a < alpha.size(); ++a) {
      denom *= factorial(alpha[a]);
      mono = mono * v[a].embed(*t.ring).pow(alpha[a]);
    }
    const Scalar coeff(t.ring->field(), Rational(Rational(factorial(t.r - 1)) / Rational(denom)));
    const Poly term = mono.scaled(coeff);
    for (std::size_t j = 0; j < t.rank1; ++j) out[j] += term * values[j].embed(*t.ring);
  }
  return out;
}

std::vector<Poly> dt_apply(const TauData& t, const std::vector<Poly>& v) {
  validate(t);
  if (v.size() != t.coordinates.size() + 1) throw ShapeMismatch("dt_apply: point has the wrong length");
  std::vector<Poly> out(t.rank1, Poly(*t.ring));
  for (std::size_t j = 0; j < t.rank1; ++j)
    for (std::size_t a = 0; a < v.size(); ++a) out[j] += t.dt(j, a).embed(*t.ring) * v[a].embed(*t.ring);
  return out;
}

Verdict tau_zero_composition(const TauData& t) {
  const auto v = lambda_point(t);
  const Poly q = pairing(nu_power(t, v), dt_apply(t, v), *t.ring);
  const std::size_t l = *t.ring->index_of(kLambda);
  const Poly top = q.coefficient_in(l, t.r);
  const Poly lam_r = Poly::variable(*t.ring, kLambda).pow(t.r);
  const Poly rest = q - top * lam_r;
  if (!rest.is_zero())
    return Verdict::fail("<nu(v^(r-1)), dt(v)> is a multiple of lambda^r", "residual " + rest.to_string());
  if (!top.is_constant())
    return Verdict::fail("<nu(v^(r-1)), dt(v)> is a multiple of lambda^r",
                         "coefficient of lambda^r depends on the coordinates: " + top.to_string());
  return Verdict::ok("<nu(v^(r-1)), dt(v)> is a multiple of lambda^r");
}

LambdaSectionResult s_lambda_check(const TauData& t) {
  validate(t);
  const PolyRing& ring = *t.ring;
  const auto v = lambda_point(t);
  OrthoSection sl{dt_apply(t, v), nu_power(t, v), std::nullopt};
  OrthoSection s0 = sl;
  const Poly zero(ring);
  for (auto& p : s0.vector_part) p = p.substitute(kLambda, zero);
  for (auto& p : s0.covector_part) p = p.substitute(kLambda, zero);

  SpinorModule spinor(ring, t.rank1);
  const Poly lam_r = Poly::variable(ring, kLambda).pow(t.r);
  LambdaSectionResult res{sl, s0, spinor, clifford_square(sl, spinor), Verdict::ok("s_lambda^2 = lambda^r"),
                          clifford_square(s0, spinor), std::nullopt};
  if (!(res.square == lam_r)) {
    res.verdict = Verdict::fail(res.verdict.check, "residual " + (res.square - lam_r).to_string());
    return res;
  }
  if (!res.square0.is_zero()) {
    res.verdict = Verdict::fail("s_0 isotropic", "s_0^2 = " + res.square0.to_string());
    return res;
  }
  res.family = lambda_family_from_total(clifford_action(sl, spinor), t.r);
  return res;
}

Verdict ramond_check(const RamondData& R) {
  const std::string what = "<nu(x), d(x)> = -(e1^r - e2^r)";
  if (!R.ring) return Verdict::fail(what, "no ring");
  if (R.d.size() != R.nu.size()) return Verdict::fail(what, "d and nu have different lengths");
  if (!R.ring->field().contains_roots_of_unity(R.r))
    return Verdict::fail(what, "field " + R.ring->field().name() + " lacks primitive " + std::to_string(R.r) +
                                   "-th roots of unity");
  const Poly lhs = pairing(R.nu, R.d, *R.ring);
  const Poly rhs = -(R.e1.pow(R.r) - R.e2.pow(R.r));
  if (!(lhs == rhs)) return Verdict::fail(what, "residual " + (lhs - rhs).to_string());
  return Verdict::ok(what);
}

Poly cyclotomic_cofactor(const Poly& e1, const Poly& e2, const Scalar& xi, unsigned r) {
  Poly out(e1.ring());
  for (unsigned i = 0; i < r; ++i) out += (e1.pow(i) * e2.pow(r - 1 - i)).scaled(xi.pow(r - 1 - i));
  return out;
}

OrthoSection s_xi_build(const RamondData& R, const Scalar& xi) {
  if (Verdict v = ramond_check(R); !v) throw InvariantError(v.to_string());
  const Scalar x = xi.in_field(R.ring->field());
  if (!x.pow(R.r).is_one()) throw InvariantError("xi is not an r-th root of unity");
  return OrthoSection{R.d, R.nu, std::make_pair(R.e1 - R.e2.scaled(x), cyclotomic_cofactor(R.e1, R.e2, x, R.r))};
}

bool TwistReduction::pass() const {
  auto all = [](const std::vector<Verdict>& vs) {
    return std::all_of(vs.begin(), vs.end(), [](const Verdict& v) { return v.pass; });
  };
  return all(cofactor_checks) && product_check.pass && lemma2.pass() && all(match_verdicts) &&
         match_verdicts.size() == roots.size() && verify(cert).verdict.pass;
}

TwistReduction s_xi_reduce(const RamondData& R, const SupportLocus& z) {
  if (Verdict v = ramond_check(R); !v) throw InvariantError(v.to_string());
  const PolyRing& ring = *R.ring;
  const std::vector<Scalar> roots = roots_of_unity(ring.field(), R.r);
  std::vector<Poly> f_list;
  for (const auto& xi : roots) f_list.push_back(R.e1 - R.e2.scaled(xi));

  std::vector<Verdict> cofactor_checks;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    Poly prod(ring, 1);
    for (std::size_t j = 0; j < roots.size(); ++j)
      if (j != i) prod = prod * f_list[j];
    const Poly want = cyclotomic_cofactor(R.e1, R.e2, roots[i], R.r);
    const std::string what = "cofactor for xi = " + roots[i].to_string();
    cofactor_checks.push_back(prod == want ? Verdict::ok(what) : Verdict::fail(what, "residual " + (prod - want).to_string()));
  }
  Poly all(ring, 1);
  for (const auto& f : f_list) all = all * f;
  const Poly diff = R.e1.pow(R.r) - R.e2.pow(R.r);
  Verdict product_check = all == diff ? Verdict::ok("prod f_xi = e1^r - e2^r")
                                      : Verdict::fail("prod f_xi = e1^r - e2^r", "residual " + (all - diff).to_string());

  // The transported action is [[s0, f*id], [cofactor*id, -s0[1]]] on S (+) S[1];
  // with the summands swapped it is the twisted differential on V (+) V[1]
  // for V = S[1] and d = -shift(s0).
  const SpinorModule ext(ring, R.d.size(), true);
  const SpinorSplit split = spinor_split(ext);
  const SpinorModule& base = split.base;
  const OrthoSection s0{R.d, R.nu, std::nullopt};
  const ParityMap a0 = clifford_action(s0, base);
  TwistFamily twist = make_twist_family(-shift(a0), f_list);
  Lemma2Result l2 = lemma2_build(twist, z);

  const SuperModule& S = base.module();
  const DirectSumLayout swapped({shift(S), S});
  BlockAssembler swap_fwd(split.layout, swapped, Parity::even);
  swap_fwd.add(0, 1, ParityMap::identity(shift(S)));
  swap_fwd.add(1, 0, ParityMap::identity(S));
  BlockAssembler swap_bwd(swapped, split.layout, Parity::even);
  swap_bwd.add(1, 0, ParityMap::identity(shift(S)));
  swap_bwd.add(0, 1, ParityMap::identity(S));
  const ParityMap to_v = compose(swap_fwd.build(), split.backward); // S_ext -> V (+) V[1]
  const ParityMap from_v = compose(split.forward, swap_bwd.build());

  std::vector<Verdict> match_verdicts;
  std::vector<CurvedComplex> spinor_complexes;
  KCertificate isos(z);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const ParityMap act = clifford_action(s_xi_build(R, roots[i]), ext);
    const ParityMap moved = compose(to_v, compose(act, from_v));
    const std::string what = "transported s_xi matches d_" + std::to_string(i + 1);
    if (i < l2.d_list.size()) {
      Verdict v = compare_maps(what, moved, l2.d_list[i].differential());
      match_verdicts.push_back(v);
    } else {
      match_verdicts.push_back(Verdict::fail(what, "twisted differential missing"));
    }
    try {
      spinor_complexes.push_back(curvature_check(act, Poly(ring)));
    } catch (const InvariantError& e) {
      match_verdicts.back() = Verdict::fail(what, std::string("s_xi is not isotropic: ") + e.what());
      continue;
    }
    if (i >= l2.d_list.size()) continue;
    const std::size_t from = isos.add_complex(spinor_complexes.back());
    const std::size_t to = isos.add_complex(l2.d_list[i]);
    isos.add_claim(from, 1);
    isos.add_claim(to, -1);
    isos.add_step(1, IsoMove{from, to, to_v, from_v});
  }
  KCertificate cert = compose_certs(l2.cert, isos);
  return TwistReduction{roots,
                        std::move(f_list),
                        std::move(cofactor_checks),
                        std::move(product_check),
                        std::move(twist),
                        std::move(l2),
                        std::move(match_verdicts),
                        std::move(spinor_complexes),
                        std::move(cert)};
}

} // namespace curvedk
