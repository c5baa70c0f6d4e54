#include <fstream>
#include <sstream>

#include "curvedk/serialize.hpp"

namespace curvedk {

namespace {

// Field access that reports missing or mistyped keys as ParseError.
template <class F>
auto guarded(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

std::vector<Poly> polys_from_json(const Json& j, const PolyRing& ring) {
  std::vector<Poly> out;
  for (const auto& s : j) out.push_back(Poly::parse(ring, s.get<std::string>()));
  return out;
}

Json polys_to_json(const std::vector<Poly>& ps) {
  Json out = Json::array();
  for (const auto& p : ps) out.push_back(p.to_string());
  return out;
}

Json filtration_to_json(const Filtration& f) {
  Json out = Json::array();
  for (const auto& step : f.steps) out.push_back(step);
  return out;
}

Filtration filtration_from_json(const Json& j) {
  Filtration f;
  for (const auto& step : j) f.steps.push_back(step.get<std::vector<std::size_t>>());
  return f;
}

Json maps_to_json(const std::vector<ParityMap>& maps) {
  Json out = Json::array();
  for (const auto& m : maps) out.push_back(to_json(m));
  return out;
}

std::vector<ParityMap> maps_from_json(const Json& j) {
  std::vector<ParityMap> out;
  for (const auto& m : j) out.push_back(map_from_json(m));
  return out;
}

Json chain_map_to_json(const ChainMap& c) {
  return Json{{"source", to_json(c.source)}, {"target", to_json(c.target)}, {"map", to_json(c.map)}};
}

ChainMap chain_map_from_json(const Json& j) {
  return make_chain_map(complex_from_json(j.at("source")), complex_from_json(j.at("target")),
                        map_from_json(j.at("map")));
}

} // namespace

Json to_json(const PolyRing& ring) {
  return Json{{"field", ring.field().name()}, {"variables", ring.variables()}};
}

const PolyRing& ring_from_json(const Json& j) {
  return guarded("ring", [&]() -> const PolyRing& {
    return PolyRing::get(parse_field(j.at("field").get<std::string>()),
                         j.at("variables").get<std::vector<std::string>>());
  });
}

Json to_json(const SuperModule& m) { return Json{{"even", m.even_labels()}, {"odd", m.odd_labels()}}; }

SuperModule module_from_json(const Json& j, const PolyRing& ring) {
  return guarded("module", [&] {
    return SuperModule(ring, j.at("even").get<std::vector<std::string>>(), j.at("odd").get<std::vector<std::string>>());
  });
}

Json matrix_to_json(const PolyMatrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k).to_string());
    out.push_back(std::move(row));
  }
  return out;
}

PolyMatrix matrix_from_json(const Json& j, const PolyRing& ring, std::size_t rows, std::size_t cols) {
  return guarded("matrix", [&] {
    if (!j.is_array() || j.size() != rows) throw ParseError("matrix must have " + std::to_string(rows) + " rows");
    PolyMatrix m(ring, rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      if (!j[i].is_array() || j[i].size() != cols)
        throw ParseError("matrix row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
      for (std::size_t k = 0; k < cols; ++k) m(i, k) = Poly::parse(ring, j[i][k].get<std::string>());
    }
    return m;
  });
}

Json to_json(const ParityMap& f) {
  return Json{{"ring", to_json(f.ring())},
              {"source", to_json(f.source())},
              {"target", to_json(f.target())},
              {"parity", to_string(f.parity())},
              {"matrix", matrix_to_json(f.full())}};
}

ParityMap map_from_json(const Json& j) {
  return guarded("map", [&] {
    const PolyRing& ring = ring_from_json(j.at("ring"));
    SuperModule src = module_from_json(j.at("source"), ring);
    SuperModule tgt = module_from_json(j.at("target"), ring);
    const Parity p = parse_parity(j.at("parity").get<std::string>());
    PolyMatrix full = matrix_from_json(j.at("matrix"), ring, tgt.rank(), src.rank());
    return ParityMap::from_full(std::move(src), std::move(tgt), p, full);
  });
}

Json to_json(const CurvedComplex& c) {
  return Json{{"differential", to_json(c.differential())}, {"curvature", c.curvature().to_string()}};
}

CurvedComplex complex_from_json(const Json& j) {
  return guarded("complex", [&] {
    ParityMap d = map_from_json(j.at("differential"));
    if (!j.contains("curvature")) return curvature_check(d);
    return curvature_check(d, Poly::parse(d.ring(), j.at("curvature").get<std::string>()));
  });
}

Json to_json(const KCertificate& cert) {
  Json support = Json::array();
  for (const auto& g : cert.support().generators) support.push_back(Json{{"ring", to_json(g.ring())}, {"poly", g.to_string()}});
  Json claim = Json::array();
  for (const auto& [idx, a] : cert.claim()) claim.push_back(Json{{"complex", idx}, {"coefficient", a}});
  Json complexes = Json::array();
  for (const auto& c : cert.complexes()) complexes.push_back(to_json(c));
  Json moves = Json::array();
  for (const auto& step : cert.steps()) {
    Json m{{"kind", move_kind(step.move)}, {"multiplier", step.multiplier}};
    if (const auto* f = std::get_if<FiltrationMove>(&step.move)) {
      m["complex"] = f->complex;
      m["filtration"] = filtration_to_json(f->filtration);
      m["graded"] = f->graded;
      m["forward"] = maps_to_json(f->forward);
      m["backward"] = maps_to_json(f->backward);
    } else if (const auto* h = std::get_if<HomotopyMove>(&step.move)) {
      m["complex"] = h->complex;
      m["homotopy"] = to_json(h->h);
    } else {
      const auto& i = std::get<IsoMove>(step.move);
      m["from"] = i.from;
      m["to"] = i.to;
      m["forward"] = to_json(i.forward);
      m["backward"] = to_json(i.backward);
    }
    moves.push_back(std::move(m));
  }
  Json witnesses = Json::array();
  for (const auto& w : cert.witnesses())
    witnesses.push_back(Json{{"complex", w.complex}, {"homotopies", maps_to_json(w.homotopies)}});
  return Json{{"format", "curvedk-certificate"},
              {"claim_text", cert.claim_text()},
              {"support", support},
              {"claim", claim},
              {"complexes", complexes},
              {"moves", moves},
              {"witnesses", witnesses}};
}

KCertificate certificate_from_json(const Json& j) {
  return guarded("certificate", [&] {
    if (j.value("format", "") != "curvedk-certificate") throw ParseError("not a certificate bundle");
    SupportLocus z;
    for (const auto& g : j.at("support"))
      z.generators.push_back(Poly::parse(ring_from_json(g.at("ring")), g.at("poly").get<std::string>()));
    KCertificate cert(z);
    // Complexes are appended without deduplication so that indices survive.
    for (const auto& c : j.at("complexes")) cert.complexes().push_back(complex_from_json(c));
    for (const auto& c : j.at("claim")) cert.add_claim(c.at("complex").get<std::size_t>(), c.at("coefficient").get<std::int64_t>());
    for (const auto& m : j.at("moves")) {
      const std::string kind = m.at("kind").get<std::string>();
      const std::int64_t mult = m.at("multiplier").get<std::int64_t>();
      if (kind == "filtration") {
        cert.add_step(mult, FiltrationMove{m.at("complex").get<std::size_t>(), filtration_from_json(m.at("filtration")),
                                           m.at("graded").get<std::vector<std::size_t>>(),
                                           maps_from_json(m.at("forward")), maps_from_json(m.at("backward"))});
      } else if (kind == "homotopy") {
        cert.add_step(mult, HomotopyMove{m.at("complex").get<std::size_t>(), map_from_json(m.at("homotopy"))});
      } else if (kind == "iso") {
        cert.add_step(mult, IsoMove{m.at("from").get<std::size_t>(), m.at("to").get<std::size_t>(),
                                    map_from_json(m.at("forward")), map_from_json(m.at("backward"))});
      } else {
        throw ParseError("unknown move kind '" + kind + "'");
      }
    }
    for (const auto& w : j.value("witnesses", Json::array()))
      cert.add_witness(SupportWitness{w.at("complex").get<std::size_t>(), maps_from_json(w.at("homotopies"))});
    return cert;
  });
}

Json to_json(const Verdict& v) {
  Json out{{"check", v.check}, {"pass", v.pass}};
  if (!v.detail.empty()) out["detail"] = v.detail;
  if (v.entry)
    out["entry"] = Json{{"row", v.entry->row}, {"col", v.entry->col}, {"residual", v.entry->residual.to_string()}};
  return out;
}

Json to_json(const CertificateReport& r) {
  Json moves = Json::array();
  for (const auto& m : r.moves) moves.push_back(Json{{"index", m.index}, {"kind", m.kind}, {"verdict", to_json(m.verdict)}});
  Json residual = Json::object();
  for (const auto& [idx, a] : r.residual) residual["C" + std::to_string(idx)] = a;
  Json terms = Json::object();
  for (const auto& [idx, s] : r.term_status) terms["C" + std::to_string(idx)] = s;
  Json out{{"verdict", to_json(r.verdict)}, {"moves", moves}, {"residual", residual}, {"term_status", terms}};
  out["first_bad_move"] = r.first_bad_move ? Json(*r.first_bad_move) : Json(nullptr);
  return out;
}

// ---------------------------------------------------------------- instances

std::string instance_kind(const Instance& inst) {
  switch (inst.index()) {
  case 0:
    return "lambda-family";
  case 1:
    return "twist-family";
  case 2:
    return "tau-data";
  case 3:
    return "ramond-data";
  case 4:
    return "cone-instance";
  default:
    return "map";
  }
}

Json instance_to_json(const Instance& inst) {
  Json j{{"kind", instance_kind(inst)}};
  if (const auto* l = std::get_if<LambdaInstance>(&inst)) {
    const LambdaFamily& f = l->family;
    j["r"] = f.r;
    j["differential"] = to_json(f.total());
    const Poly lam = Poly::variable(f.lambda_ring(), kLambda);
    if (!(f.target_poly() == lam.pow(f.r))) j["target"] = f.target_poly().to_string();
    if (l->roots) j["roots"] = polys_to_json(*l->roots);
  } else if (const auto* t = std::get_if<TwistFamily>(&inst)) {
    j["differential"] = to_json(t->d);
    j["factors"] = polys_to_json(t->f);
  } else if (const auto* t = std::get_if<TauData>(&inst)) {
    j["ring"] = to_json(*t->ring);
    j["coordinates"] = t->coordinates;
    j["rank1"] = t->rank1;
    j["r"] = t->r;
    j["dt"] = matrix_to_json(t->dt);
    Json nu = Json::array();
    for (const auto& [alpha, values] : t->nu) nu.push_back(Json{{"exponents", alpha}, {"values", polys_to_json(values)}});
    j["nu"] = nu;
  } else if (const auto* R = std::get_if<RamondData>(&inst)) {
    j["ring"] = to_json(*R->ring);
    j["coordinates"] = R->coordinates;
    j["r"] = R->r;
    j["d"] = polys_to_json(R->d);
    j["nu"] = polys_to_json(R->nu);
    j["e1"] = R->e1.to_string();
    j["e2"] = R->e2.to_string();
  } else if (const auto* c = std::get_if<ConeInstance>(&inst)) {
    j["g"] = chain_map_to_json(c->g);
    j["f"] = chain_map_to_json(c->f);
    j["h1"] = to_json(c->h1);
    j["h2"] = to_json(c->h2);
  } else {
    j["differential"] = to_json(std::get<ParityMap>(inst));
  }
  return j;
}

Instance instance_from_json(const Json& j) {
  return guarded("instance", [&]() -> Instance {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "lambda-family") {
      const unsigned r = j.at("r").get<unsigned>();
      ParityMap d = map_from_json(j.at("differential"));
      std::vector<Poly> target;
      if (j.contains("target")) {
        const Poly f = Poly::parse(d.ring(), j.at("target").get<std::string>());
        const auto l = d.ring().index_of(kLambda);
        if (!l) throw ParseError("lambda-family ring has no lambda");
        for (unsigned k = 0; k <= r; ++k) target.push_back(f.coefficient_in(*l, k));
      }
      LambdaInstance out{lambda_family_from_total(d, r, target), std::nullopt};
      if (j.contains("roots")) out.roots = polys_from_json(j.at("roots"), d.ring());
      return out;
    }
    if (kind == "twist-family") {
      ParityMap d = map_from_json(j.at("differential"));
      return make_twist_family(d, polys_from_json(j.at("factors"), d.ring()));
    }
    if (kind == "tau-data") {
      const PolyRing& ring = ring_from_json(j.at("ring"));
      TauData t{&ring, j.at("coordinates").get<std::vector<std::string>>(), j.at("rank1").get<std::size_t>(),
                j.at("r").get<unsigned>(), PolyMatrix(), {}};
      t.dt = matrix_from_json(j.at("dt"), ring, t.rank1, t.coordinates.size() + 1);
      for (const auto& e : j.at("nu"))
        t.nu.emplace_back(e.at("exponents").get<std::vector<unsigned>>(), polys_from_json(e.at("values"), ring));
      if (Verdict v = tau_zero_composition(t); !v) throw InvariantError(v.to_string());
      return t;
    }
    if (kind == "ramond-data") {
      const PolyRing& ring = ring_from_json(j.at("ring"));
      RamondData R{&ring,
                   j.at("coordinates").get<std::vector<std::string>>(),
                   j.at("r").get<unsigned>(),
                   polys_from_json(j.at("d"), ring),
                   polys_from_json(j.at("nu"), ring),
                   Poly::parse(ring, j.at("e1").get<std::string>()),
                   Poly::parse(ring, j.at("e2").get<std::string>())};
      if (Verdict v = ramond_check(R); !v) throw InvariantError(v.to_string());
      return R;
    }
    if (kind == "cone-instance") {
      return ConeInstance{chain_map_from_json(j.at("g")), chain_map_from_json(j.at("f")), map_from_json(j.at("h1")),
                          map_from_json(j.at("h2"))};
    }
    if (kind == "map") return map_from_json(j.at("differential"));
    throw ParseError("unknown instance kind '" + kind + "'");
  });
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw Error("write failed for " + path);
}

} // namespace curvedk
