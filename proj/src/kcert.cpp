#include <set>

#include "curvedk/kcert.hpp"

namespace curvedk {

std::size_t KCertificate::add_complex(const CurvedComplex& c) {
  for (std::size_t i = 0; i < complexes_.size(); ++i)
    if (complexes_[i] == c) return i;
  complexes_.push_back(c);
  return complexes_.size() - 1;
}

void KCertificate::add_claim(std::size_t complex, std::int64_t coefficient) {
  if (complex >= complexes_.size()) throw ShapeMismatch("claim refers to unknown complex");
  auto& slot = claim_[complex];
  slot += coefficient;
  if (slot == 0) claim_.erase(complex);
}

std::string KCertificate::claim_text() const {
  if (claim_.empty()) return "0";
  std::string out;
  for (const auto& [idx, a] : claim_) {
    const std::int64_t mag = a < 0 ? -a : a;
    if (out.empty())
      out += a < 0 ? "-" : "";
    else
      out += a < 0 ? " - " : " + ";
    if (mag != 1) out += std::to_string(mag) + "*";
    out += "[C" + std::to_string(idx) + "]";
  }
  return out;
}

std::string move_kind(const Move& move) {
  switch (move.index()) {
  case 0:
    return "filtration";
  case 1:
    return "homotopy";
  default:
    return "iso";
  }
}

std::map<std::size_t, std::int64_t> relation(const Move& move) {
  std::map<std::size_t, std::int64_t> r;
  if (const auto* f = std::get_if<FiltrationMove>(&move)) {
    r[f->complex] += 1;
    for (std::size_t g : f->graded) r[g] -= 1;
  } else if (const auto* h = std::get_if<HomotopyMove>(&move)) {
    r[h->complex] += 1;
  } else {
    const auto& i = std::get<IsoMove>(move);
    r[i.from] += 1;
    r[i.to] -= 1;
  }
  for (auto it = r.begin(); it != r.end();) it = it->second == 0 ? r.erase(it) : std::next(it);
  return r;
}

namespace {

Verdict check_isomorphism(const std::string& what, const CurvedComplex& a, const CurvedComplex& b,
                          const ParityMap& fwd, const ParityMap& bwd) {
  if (fwd.parity() != Parity::even || bwd.parity() != Parity::even)
    return Verdict::fail(what, "isomorphism maps must be even");
  if (!same_shape(fwd.source(), a.module()) || !same_shape(fwd.target(), b.module()) ||
      !same_shape(bwd.source(), b.module()) || !same_shape(bwd.target(), a.module()))
    return Verdict::fail(what, "isomorphism maps have the wrong shape");
  if (Verdict v = is_chain_map(fwd, a, b); !v) return Verdict::fail(what, "forward map: " + v.detail, v.entry);
  if (Verdict v = is_chain_map(bwd, b, a); !v) return Verdict::fail(what, "backward map: " + v.detail, v.entry);
  if (auto mm = first_mismatch(compose(bwd, fwd), ParityMap::identity(a.module())))
    return Verdict::fail(what, "backward o forward is not the identity", mm);
  if (auto mm = first_mismatch(compose(fwd, bwd), ParityMap::identity(b.module())))
    return Verdict::fail(what, "forward o backward is not the identity", mm);
  return Verdict::ok(what);
}

const CurvedComplex& table_entry(const KCertificate& cert, std::size_t i) {
  if (i >= cert.complexes().size()) throw ShapeMismatch("move refers to complex " + std::to_string(i) + " out of range");
  return cert.complexes()[i];
}

} // namespace

Verdict verify_move(const KCertificate& cert, const Step& step) {
  try {
    if (const auto* f = std::get_if<FiltrationMove>(&step.move)) {
      const CurvedComplex& c = table_entry(cert, f->complex);
      Verdict v = filtration_verify(c, f->filtration);
      if (!v) return v;
      const std::size_t n = f->filtration.steps.size();
      if (f->graded.size() != n || f->forward.size() != n || f->backward.size() != n)
        return Verdict::fail("filtration", "need one graded complex and isomorphism pair per step");
      for (std::size_t j = 1; j <= n; ++j) {
        CurvedComplex gr = associated_graded(c, f->filtration, j);
        const CurvedComplex& g = table_entry(cert, f->graded[j - 1]);
        Verdict iv = check_isomorphism("graded piece " + std::to_string(j), gr, g, f->forward[j - 1],
                                       f->backward[j - 1]);
        if (!iv) return iv;
      }
      return Verdict::ok("filtration");
    }
    if (const auto* h = std::get_if<HomotopyMove>(&step.move)) {
      const CurvedComplex& c = table_entry(cert, h->complex);
      if (!same_shape(h->h.source(), c.module()) || !same_shape(h->h.target(), c.module()))
        return Verdict::fail("homotopy", "homotopy has the wrong shape");
      return is_null_homotopy(c, h->h);
    }
    const auto& i = std::get<IsoMove>(step.move);
    return check_isomorphism("iso", table_entry(cert, i.from), table_entry(cert, i.to), i.forward, i.backward);
  } catch (const Error& e) {
    return Verdict::fail(move_kind(step.move), std::string("malformed move: ") + e.what());
  }
}

CertificateReport verify(const KCertificate& cert) {
  CertificateReport report{Verdict::ok("certificate"), {}, std::nullopt, {}, {}};
  for (std::size_t i = 0; i < cert.complexes().size(); ++i) {
    const CurvedComplex& c = cert.complexes()[i];
    if (!c.is_complex()) {
      report.verdict = Verdict::fail("certificate", "complex C" + std::to_string(i) + " has nonzero curvature");
      return report;
    }
    try {
      curvature_check(c.differential(), c.curvature());
    } catch (const Error& e) {
      report.verdict = Verdict::fail("certificate", "complex C" + std::to_string(i) + ": " + e.what());
      return report;
    }
  }
  for (const auto& [idx, a] : cert.claim())
    if (idx >= cert.complexes().size()) {
      report.verdict = Verdict::fail("certificate", "claim refers to unknown complex");
      return report;
    }

  std::map<std::size_t, std::int64_t> total;
  std::set<std::size_t> contractible;
  for (std::size_t k = 0; k < cert.steps().size(); ++k) {
    const Step& step = cert.steps()[k];
    Verdict v = verify_move(cert, step);
    if (!v && !report.first_bad_move) report.first_bad_move = k;
    if (v)
      if (const auto* h = std::get_if<HomotopyMove>(&step.move)) contractible.insert(h->complex);
    report.moves.push_back(MoveStatus{k, move_kind(step.move), std::move(v)});
    for (const auto& [idx, a] : relation(step.move)) total[idx] += step.multiplier * a;
  }

  std::map<std::size_t, std::int64_t> residual = cert.claim();
  for (const auto& [idx, a] : total) residual[idx] -= a;
  for (auto it = residual.begin(); it != residual.end();) it = it->second == 0 ? residual.erase(it) : std::next(it);
  report.residual = residual;

  std::set<std::size_t> witnessed;
  for (const auto& w : cert.witnesses()) {
    if (w.complex >= cert.complexes().size() || w.homotopies.size() != cert.support().generators.size()) continue;
    const CurvedComplex& c = cert.complexes()[w.complex];
    bool ok = true;
    for (std::size_t g = 0; g < w.homotopies.size() && ok; ++g) {
      const Poly& gen = cert.support().generators[g];
      try {
        ParityMap want = ParityMap::identity(c.module()).scaled(gen.embed(c.ring()));
        ok = is_homotopy(c, c, w.homotopies[g], want, ParityMap::zero(c.module(), c.module(), Parity::even)).pass;
      } catch (const Error&) {
        ok = false;
      }
    }
    if (ok && !w.homotopies.empty()) witnessed.insert(w.complex);
  }
  for (const auto& [idx, a] : cert.claim())
    report.term_status[idx] = (witnessed.count(idx) || contractible.count(idx)) ? "certified" : "assumed";

  if (report.first_bad_move) {
    const auto& bad = report.moves[*report.first_bad_move];
    report.verdict = Verdict::fail("certificate",
                                   "move " + std::to_string(*report.first_bad_move) + " (" + bad.kind +
                                       ") does not replay: " + bad.verdict.detail,
                                   bad.verdict.entry);
  } else if (!residual.empty()) {
    std::string text;
    for (const auto& [idx, a] : residual) text += " C" + std::to_string(idx) + ":" + std::to_string(a);
    report.verdict = Verdict::fail("certificate", "claim minus relations is nonzero:" + text);
  }
  return report;
}

namespace {

bool same_locus(const SupportLocus& a, const SupportLocus& b) {
  if (a.generators.size() != b.generators.size()) return false;
  for (std::size_t i = 0; i < a.generators.size(); ++i) {
    const Poly& p = a.generators[i];
    const Poly& q = b.generators[i];
    if (p.ring().variables() != q.ring().variables() || !(p == q)) return false;
  }
  return true;
}

std::size_t remap(const std::vector<std::size_t>& m, std::size_t i) {
  if (i >= m.size()) throw ShapeMismatch("move refers to complex out of range");
  return m[i];
}

} // namespace

KCertificate compose_certs(const KCertificate& a, const KCertificate& b) {
  if (!same_locus(a.support(), b.support())) throw ContextMismatch("certificates have different support loci");
  KCertificate out = a;
  std::vector<std::size_t> map;
  for (const auto& c : b.complexes()) map.push_back(out.add_complex(c));
  for (const auto& [idx, coef] : b.claim()) out.add_claim(remap(map, idx), coef);
  for (Step step : b.steps()) {
    if (auto* f = std::get_if<FiltrationMove>(&step.move)) {
      f->complex = remap(map, f->complex);
      for (auto& g : f->graded) g = remap(map, g);
    } else if (auto* h = std::get_if<HomotopyMove>(&step.move)) {
      h->complex = remap(map, h->complex);
    } else {
      auto& i = std::get<IsoMove>(step.move);
      i.from = remap(map, i.from);
      i.to = remap(map, i.to);
    }
    out.add_step(step.multiplier, std::move(step.move));
  }
  for (SupportWitness w : b.witnesses()) {
    w.complex = remap(map, w.complex);
    out.add_witness(std::move(w));
  }
  return out;
}

} // namespace curvedk
