#include <algorithm>
#include <bit>

#include "curvedk/constructions.hpp"

namespace curvedk {

namespace {

// prod_{m=a}^{b} f_m with 1-based indices; 1 when a > b.
Poly product(const std::vector<Poly>& f, std::size_t a, std::size_t b, const PolyRing& ring) {
  Poly out(ring, 1);
  for (std::size_t m = a; m <= b && m >= 1 && m <= f.size(); ++m) out = out * f[m - 1];
  return out;
}

std::vector<std::size_t> parts_from(const DirectSumLayout& lay, std::size_t first) {
  std::vector<std::size_t> out;
  for (std::size_t p = first; p < lay.parts().size(); ++p) {
    auto idx = lay.indices_of(p);
    out.insert(out.end(), idx.begin(), idx.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

TwistFamily make_twist_family(ParityMap d, std::vector<Poly> f) {
  if (d.parity() != Parity::odd || !d.is_endomorphism()) throw InvariantError("twist family needs an odd endomorphism");
  if (f.empty()) throw InvariantError("twist family needs at least one factor");
  const PolyRing& ring = d.ring();
  for (auto& p : f) p = p.embed(ring);
  const Poly c = -product(f, 1, f.size(), ring);
  curvature_check(d, c);
  SuperModule V = d.source();
  return TwistFamily{std::move(V), std::move(d), std::move(f)};
}

CurvedComplex twisted_differential(const TwistFamily& t, std::size_t i) {
  const PolyRing& ring = t.d.ring();
  const std::size_t r = t.f.size();
  if (i >= r) throw ShapeMismatch("twisted_differential: index out of range");
  Poly others(ring, 1);
  for (std::size_t j = 0; j < r; ++j)
    if (j != i) others = others * t.f[j];
  DirectSumLayout lay({t.V, shift(t.V)});
  const ParityMap id = ParityMap::identity(t.V);
  BlockAssembler a(lay, lay, Parity::odd);
  a.add(0, 0, t.d);
  a.add(0, 1, shift_source(id).scaled(others));
  a.add(1, 0, shift_target(id).scaled(t.f[i]));
  a.add(1, 1, -shift(t.d));
  return curvature_check(a.build(), Poly(ring));
}

bool Lemma2Result::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Verdict& v) { return v.pass; });
}

Lemma2Result lemma2_build(const TwistFamily& t, const SupportLocus& z) {
  const PolyRing& ring = t.d.ring();
  const std::size_t r = t.f.size();
  std::vector<SuperModule> parts;
  for (std::size_t i = 1; i <= r; ++i) {
    std::vector<std::string> ev, od;
    for (const auto& s : t.V.even_labels()) ev.push_back("x" + std::to_string(i) + ":" + s);
    for (const auto& s : t.V.odd_labels()) od.push_back("x" + std::to_string(i) + ":" + s);
    SuperModule xi(ring, ev, od);
    for (auto& s : ev) s = "x'" + s.substr(1);
    for (auto& s : od) s = "x'" + s.substr(1);
    parts.push_back(xi);
    parts.push_back(SuperModule(ring, std::move(od), std::move(ev)));
  }
  DirectSumLayout lay(parts);
  auto x = [](std::size_t i) { return 2 * (i - 1); };
  auto xp = [](std::size_t i) { return 2 * (i - 1) + 1; };
  const ParityMap id = ParityMap::identity(t.V);
  const ParityMap ss = shift_source(id); // V[1] -> V
  const ParityMap st = shift_target(id); // V -> V[1]

  BlockAssembler D(lay, lay, Parity::odd);
  for (std::size_t i = 1; i <= r; ++i) {
    D.add(x(i), x(i), t.d);
    for (std::size_t k = 1; k <= i; ++k)
      D.add(x(i), xp(k), ss.scaled(product(t.f, i + 1, r, ring) * product(t.f, 1, k - 1, ring)));
    D.add(xp(i), xp(i), -shift(t.d));
    D.add(xp(i), x(i), st.scaled(t.f[i - 1]));
    if (i >= 2) D.add(xp(i), x(i - 1), -st);
  }
  BlockAssembler H(lay, lay, Parity::odd);
  for (std::size_t i = 1; i <= r; ++i)
    for (std::size_t k = i + 1; k <= r; ++k) H.add(x(i), xp(k), -ss.scaled(product(t.f, i + 1, k - 1, ring)));
  H.add(xp(1), x(r), st);

  Lemma2Result res{{}, lay, {}, {}, {}, H.build(), {}, {}};
  Verdict vd = Verdict::ok("d_i^2 = 0");
  for (std::size_t i = 0; i < r; ++i) {
    try {
      res.d_list.push_back(twisted_differential(t, i));
    } catch (const InvariantError& e) {
      vd = Verdict::fail(vd.check, "d_" + std::to_string(i + 1) + ": " + e.what());
      break;
    }
  }
  res.checks.push_back(vd);
  try {
    res.W = curvature_check(D.build(), Poly(ring));
    res.checks.push_back(Verdict::ok("D^2 = 0"));
  } catch (const InvariantError& e) {
    res.checks.push_back(Verdict::fail("D^2 = 0", e.what()));
    return res;
  }
  for (std::size_t j = 1; j <= r; ++j) res.filtration.steps.push_back(parts_from(lay, 2 * (j - 1)));
  res.checks.push_back(filtration_verify(res.W, res.filtration));
  Verdict gr = Verdict::ok("graded pieces equal (V + V[1], d_j)");
  if (res.checks.back().pass && vd.pass) {
    for (std::size_t j = 1; j <= r; ++j) {
      res.graded.push_back(associated_graded(res.W, res.filtration, j));
      Verdict v = compare_maps("graded", res.graded.back().differential(), res.d_list[j - 1].differential());
      if (!v && gr.pass) gr = Verdict::fail(gr.check, "piece " + std::to_string(j) + " differs", v.entry);
    }
  } else {
    gr = Verdict::fail(gr.check, "filtration or d_i invalid");
  }
  res.checks.push_back(gr);
  res.checks.push_back(is_null_homotopy(res.W, res.h));
  if (!vd.pass) return res;

  KCertificate cert(z);
  const std::size_t w = cert.add_complex(res.W);
  FiltrationMove fm{w, res.filtration, {}, {}, {}};
  for (std::size_t i = 0; i < r; ++i) {
    const std::size_t idx = cert.add_complex(res.d_list[i]);
    cert.add_claim(idx, 1);
    fm.graded.push_back(idx);
  }
  for (const auto& g : res.graded) {
    fm.forward.push_back(ParityMap::identity(g.module()));
    fm.backward.push_back(ParityMap::identity(g.module()));
  }
  cert.add_step(-1, std::move(fm));
  cert.add_step(1, HomotopyMove{w, res.h});
  res.cert = std::move(cert);
  return res;
}

// ---------------------------------------------------------------- symmetric powers

namespace {

void monomials(std::size_t vars, unsigned degree, std::vector<unsigned>& cur, std::size_t pos,
               std::vector<std::vector<unsigned>>& out) {
  if (pos + 1 == vars) {
    cur[pos] = degree;
    out.push_back(cur);
    return;
  }
  for (unsigned e = degree + 1; e-- > 0;) {
    cur[pos] = e;
    monomials(vars, degree - e, cur, pos + 1, out);
  }
}

std::vector<std::vector<unsigned>> all_monomials(std::size_t vars, unsigned degree) {
  std::vector<std::vector<unsigned>> out;
  if (vars == 0) {
    if (degree == 0) out.emplace_back();
    return out;
  }
  std::vector<unsigned> cur(vars, 0);
  monomials(vars, degree, cur, 0, out);
  return out;
}

std::string sym_label(const std::vector<unsigned>& alpha, std::uint32_t subset) {
  std::string s;
  for (std::size_t a = 0; a < alpha.size(); ++a) {
    if (!alpha[a]) continue;
    if (!s.empty()) s += "*";
    s += "u" + std::to_string(a);
    if (alpha[a] > 1) s += "^" + std::to_string(alpha[a]);
  }
  if (s.empty()) s = "1";
  s += "|";
  bool first = true;
  for (std::size_t b = 0; subset >> b; ++b) {
    if (!((subset >> b) & 1u)) continue;
    if (!first) s += "^";
    s += "w" + std::to_string(b);
    first = false;
  }
  if (first) s += "1";
  return s;
}

} // namespace

std::size_t SymPower::index_of(const std::vector<unsigned>& alpha, std::uint32_t subset) const {
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (basis[i].first == alpha && basis[i].second == subset) return i;
  throw ShapeMismatch("basis vector not present in symmetric power");
}

SymPower sym_power(const TwoTerm& c, unsigned r) {
  if (c.d.rows() != c.rank1 || c.d.cols() != c.rank0) throw ShapeMismatch("two-term complex matrix has wrong shape");
  if (c.rank1 > 20) throw ShapeMismatch("two-term complex too large");
  const PolyRing& ring = c.d.ring();
  std::vector<std::pair<std::vector<unsigned>, std::uint32_t>> even, odd;
  for (unsigned i = 0; i <= r && i <= c.rank1; ++i) {
    std::vector<std::uint32_t> subsets;
    for (std::uint32_t s = 0; s < (std::uint32_t{1} << c.rank1); ++s)
      if (static_cast<unsigned>(std::popcount(s)) == i) subsets.push_back(s);
    for (const auto& alpha : all_monomials(c.rank0, r - i))
      for (auto s : subsets) (i % 2 ? odd : even).emplace_back(alpha, s);
  }
  SymPower out;
  out.basis = even;
  out.basis.insert(out.basis.end(), odd.begin(), odd.end());
  std::vector<std::string> el, ol;
  for (const auto& [a, s] : even) el.push_back(sym_label(a, s));
  for (const auto& [a, s] : odd) ol.push_back(sym_label(a, s));
  SuperModule m(ring, std::move(el), std::move(ol));

  PolyMatrix full(ring, m.rank(), m.rank());
  for (std::size_t col = 0; col < out.basis.size(); ++col) {
    const auto& [alpha, s] = out.basis[col];
    for (std::size_t a = 0; a < c.rank0; ++a) {
      if (!alpha[a]) continue;
      std::vector<unsigned> beta = alpha;
      --beta[a];
      for (std::size_t b = 0; b < c.rank1; ++b) {
        const std::uint32_t bit = std::uint32_t{1} << b;
        if ((s & bit) || c.d(b, a).is_zero()) continue;
        const long sign = std::popcount(s & (bit - 1)) % 2 ? -1 : 1;
        full(out.index_of(beta, s | bit), col) += c.d(b, a).scaled(Scalar(ring.field(), sign * long(alpha[a])));
      }
    }
  }
  out.complex = curvature_check(ParityMap::from_full(m, m, Parity::odd, full), Poly(ring));
  return out;
}

ChainMap sym_power_augmentation(const SymPower& s, const TwoTerm& c, unsigned r) {
  if (c.rank0 == 0) throw ShapeMismatch("augmentation needs the distinguished basis vector");
  const PolyRing& ring = c.d.ring();
  SuperModule line(ring, std::vector<std::string>{"1^" + std::to_string(r)}, {});
  CurvedComplex target = curvature_check(ParityMap::zero(line, line, Parity::odd), Poly(ring));
  std::vector<unsigned> top(c.rank0, 0);
  top.back() = r;
  PolyMatrix full(ring, 1, s.complex.module().rank());
  full(0, s.index_of(top, 0)) = Poly(ring, 1);
  ParityMap map = ParityMap::from_full(s.complex.module(), line, Parity::even, full);
  return make_chain_map(s.complex, target, map);
}

// ---------------------------------------------------------------- cone lifting

ChainMap cone_lift(const ChainMap& g, const ChainMap& f, const ParityMap& h) {
  if (!(g.target == f.source)) throw InvariantError("cone_lift: f must start where g ends");
  const ParityMap fg = compose(f.map, g.map);
  Verdict v = is_homotopy(g.source, f.target, h, fg, ParityMap::zero(fg.source(), fg.target(), Parity::even));
  if (!v) throw InvariantError("cone_lift: h is not a homotopy from f o g to 0: " + v.to_string());
  DirectSumLayout lay = cone_layout(g);
  DirectSumLayout tgt({f.target.module()});
  BlockAssembler a(lay, tgt, Parity::even);
  a.add(0, 0, f.map);
  a.add(0, 1, shift_source(h));
  return make_chain_map(cone(g), f.target, a.build());
}

ParityMap cone_lift_inverse(const ChainMap& g, const ParityMap& lifted) {
  DirectSumLayout lay = cone_layout(g);
  DirectSumLayout tgt({lifted.target()});
  return shift_source(extract_block(lifted, lay, tgt, 0, 1));
}

ConeLiftChecks cone_lift_checks(const ChainMap& g, const ChainMap& f, const ParityMap& h1, const ParityMap& h2) {
  const ChainMap l1 = cone_lift(g, f, h1);
  const ChainMap l2 = cone_lift(g, f, h2);
  ConeLiftChecks out;
  out.restriction = compare_maps("restriction equals f", compose(l1.map, cone_inclusion(g)), f.map);
  out.difference = compare_maps("difference factors through projection", l1.map - l2.map,
                                compose(shift_source(h1 - h2), cone_projection(g)));
  out.inverse = compare_maps("homotopy recovered", cone_lift_inverse(g, l1.map), h1);
  return out;
}

} // namespace curvedk
