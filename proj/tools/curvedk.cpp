// Command-line front end: generate instances, run the constructions, write
// and replay certificate bundles. Exit codes: 0 pass, 1 fail, 2 usage/parse.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "curvedk/serialize.hpp"

using namespace curvedk;

namespace {

struct Config {
  std::uint64_t seed = 1;
  std::size_t trials = 0;
  unsigned r = 2;
  std::string field = "Q";
  std::string out;
  std::string json_report;
  std::string input;
  std::string kind;
  std::size_t size = 2;
  bool example = false;
};

// Collects the textual report and its JSON mirror side by side.
class Report {
public:
  Report(const std::string& command, const Config& cfg) {
    json_["command"] = command;
    if (!cfg.input.empty()) json_["input"] = cfg.input;
    json_["seed"] = cfg.seed;
    json_["checks"] = Json::array();
    text_ << "command: " << command << '\n';
    if (!cfg.input.empty()) text_ << "input: " << cfg.input << '\n';
    text_ << "seed: " << cfg.seed << '\n';
  }

  void check(const Verdict& v) {
    ok_ = ok_ && v.pass;
    json_["checks"].push_back(to_json(v));
    text_ << (v.pass ? "[pass] " : "[FAIL] ") << v.check;
    if (!v.pass && !v.detail.empty()) text_ << ": " << v.detail;
    if (!v.pass && v.entry) text_ << " (entry " << v.entry->row << "," << v.entry->col << " residual " << v.entry->residual.to_string() << ")";
    text_ << '\n';
  }

  void line(const std::string& key, const std::string& value) {
    json_[key] = value;
    text_ << key << ": " << value << '\n';
  }

  void certificate(const KCertificate& cert, const Config& cfg) {
    const CertificateReport rep = verify(cert);
    ok_ = ok_ && rep.verdict.pass;
    Json j = to_json(rep);
    j["claim"] = cert.claim_text();
    json_["certificate"] = j;
    text_ << "certificate: " << (rep.verdict.pass ? "pass" : "FAIL") << " (claim " << cert.claim_text() << " = 0, "
          << cert.steps().size() << " moves)\n";
    for (const auto& m : rep.moves)
      text_ << "  move " << m.index << " " << m.kind << ": " << (m.verdict.pass ? "pass" : "FAIL " + m.verdict.detail)
            << '\n';
    for (const auto& [idx, status] : rep.term_status) text_ << "  term C" << idx << ": " << status << '\n';
    if (!rep.verdict.pass) text_ << "  " << rep.verdict.detail << '\n';
    if (!cfg.out.empty()) {
      write_json_file(cfg.out, to_json(cert));
      text_ << "bundle: " << cfg.out << '\n';
    }
  }

  void exactness(const CurvedComplex& c, const std::string& name, const Config& cfg) {
    if (cfg.trials == 0) return;
    const ExactnessReport rep = strict_exactness_sample(c, SupportLocus{}, cfg.trials, cfg.seed);
    Verdict v = rep.verdict;
    v.check = "sampled exactness of " + name + " (" + std::to_string(cfg.trials) + " points)";
    check(v);
  }

  void fail(const std::string& what) {
    ok_ = false;
    line("error", what);
  }

  int finish(const Config& cfg) {
    json_["verdict"] = ok_ ? "pass" : "fail";
    text_ << "verdict: " << (ok_ ? "pass" : "FAIL") << '\n';
    std::cout << text_.str();
    if (!cfg.json_report.empty()) write_json_file(cfg.json_report, json_);
    return ok_ ? 0 : 1;
  }

private:
  std::ostringstream text_;
  Json json_;
  bool ok_ = true;
};

Instance load(const Config& cfg) { return instance_from_json(read_json_file(cfg.input)); }

template <class T>
T load_as(const Config& cfg) {
  Instance inst = load(cfg);
  if (auto* p = std::get_if<T>(&inst)) return std::move(*p);
  throw ParseError(cfg.input + ": expected a different instance kind, got " + instance_kind(inst));
}

void add_checks(Report& rep, const std::vector<Verdict>& checks) {
  for (const auto& v : checks) rep.check(v);
}

int cmd_check_mf(const Config& cfg) {
  Report rep("check-mf", cfg);
  Instance inst = load(cfg);
  ParityMap d;
  if (auto* l = std::get_if<LambdaInstance>(&inst))
    d = l->family.total();
  else if (auto* t = std::get_if<TwistFamily>(&inst))
    d = t->d;
  else if (auto* m = std::get_if<ParityMap>(&inst))
    d = *m;
  else
    throw ParseError("check-mf expects a map, lambda-family or twist-family instance");
  try {
    rep.line("curvature", curvature_check(d).curvature().to_string());
  } catch (const InvariantError& e) {
    rep.fail(e.what());
  }
  return rep.finish(cfg);
}

int cmd_lemma1(const Config& cfg) {
  Report rep("lemma1", cfg);
  LambdaInstance inst = load_as<LambdaInstance>(cfg);
  Lemma1Result res = lemma1_build(inst.family);
  add_checks(rep, res.checks);
  rep.certificate(res.cert, cfg);
  if (res.pass()) rep.exactness(res.W, "W", cfg);
  return rep.finish(cfg);
}

int cmd_remark(const Config& cfg) {
  Report rep("remark", cfg);
  LambdaInstance inst = load_as<LambdaInstance>(cfg);
  RemarkResult res = remark_decompose(inst.family, inst.roots);
  std::string roots;
  for (const auto& z : res.roots) roots += (roots.empty() ? "" : ", ") + z.to_string();
  rep.line("roots", roots);
  add_checks(rep, res.checks);
  rep.certificate(res.cert, cfg);
  if (res.pass()) rep.exactness(res.power_basis, "V[lambda]/(f)", cfg);
  return rep.finish(cfg);
}

int cmd_lemma2(const Config& cfg) {
  Report rep("lemma2", cfg);
  TwistFamily t = load_as<TwistFamily>(cfg);
  Lemma2Result res = lemma2_build(t);
  add_checks(rep, res.checks);
  rep.certificate(res.cert, cfg);
  if (res.pass()) rep.exactness(res.W, "W", cfg);
  return rep.finish(cfg);
}

int cmd_slambda(const Config& cfg) {
  Report rep("slambda", cfg);
  TauData t = load_as<TauData>(cfg);
  rep.check(tau_zero_composition(t));
  LambdaSectionResult res = s_lambda_check(t);
  rep.line("square", res.square.to_string());
  rep.line("square_at_zero", res.square0.to_string());
  rep.check(res.verdict);
  if (res.family) {
    Lemma1Result l1 = lemma1_build(*res.family);
    add_checks(rep, l1.checks);
    rep.certificate(l1.cert, cfg);
    if (l1.pass()) rep.exactness(l1.W, "W", cfg);
  }
  return rep.finish(cfg);
}

int cmd_sxi(const Config& cfg) {
  Report rep("sxi", cfg);
  RamondData R = load_as<RamondData>(cfg);
  TwistReduction red = s_xi_reduce(R);
  for (std::size_t i = 0; i < red.roots.size(); ++i)
    rep.line("f[xi=" + red.roots[i].to_string() + "]", red.f_list[i].to_string());
  add_checks(rep, red.cofactor_checks);
  rep.check(red.product_check);
  add_checks(rep, red.lemma2.checks);
  add_checks(rep, red.match_verdicts);
  rep.certificate(red.cert, cfg);
  if (red.lemma2.pass()) rep.exactness(red.lemma2.W, "W", cfg);
  return rep.finish(cfg);
}

int cmd_conelift(const Config& cfg) {
  Report rep("conelift", cfg);
  ConeInstance c = load_as<ConeInstance>(cfg);
  ConeLiftChecks checks = cone_lift_checks(c.g, c.f, c.h1, c.h2);
  rep.check(checks.restriction);
  rep.check(checks.difference);
  rep.check(checks.inverse);
  if (!cfg.out.empty()) {
    write_json_file(cfg.out, instance_to_json(cone_lift(c.g, c.f, c.h1).map));
    rep.line("lift", cfg.out);
  }
  return rep.finish(cfg);
}

int cmd_verify(const Config& cfg) {
  Report rep("verify", cfg);
  KCertificate cert = certificate_from_json(read_json_file(cfg.input));
  Config quiet = cfg;
  quiet.out.clear();
  rep.certificate(cert, quiet);
  return rep.finish(cfg);
}

int cmd_gen(const Config& cfg) {
  if (cfg.size > 12) throw ParseError("size " + std::to_string(cfg.size) + " exceeds the limit 12");
  const ScalarField& field = parse_field(cfg.field);
  Rng rng(cfg.seed);
  Instance inst = ParityMap();
  const std::string& kind = cfg.kind;
  if (kind == "lambda-family") {
    inst = LambdaInstance{cfg.example ? example_lambda_family(cfg.r) : random_lambda_family(rng, cfg.r, cfg.size, field),
                          std::nullopt};
  } else if (kind == "remark-family") {
    std::vector<Poly> roots;
    const PolyRing& ring = instance_ring(rationals(), true);
    for (unsigned k = 0; k < cfg.r; ++k) roots.push_back(Poly(ring, static_cast<long>(k) - static_cast<long>(cfg.r / 2)));
    inst = LambdaInstance{random_remark_family(rng, roots, cfg.size), roots};
  } else if (kind == "twist-family") {
    inst = cfg.example ? example_twist_family() : random_twist_family(rng, cfg.r, cfg.size, field);
  } else if (kind == "tau-data") {
    if (!cfg.example && cfg.size == 0) throw ParseError("tau-data needs size >= 1");
    inst = cfg.example ? example_tau_data(cfg.r) : random_tau_data(rng, cfg.r, 2, cfg.size, field);
  } else if (kind == "ramond-data") {
    if (!cfg.example && cfg.size == 0) throw ParseError("ramond-data needs size >= 1");
    const ScalarField* f = cfg.field == "Q" ? nullptr : &field;
    inst = cfg.example ? example_ramond_data() : random_ramond_data(rng, cfg.r, cfg.size, f);
  } else if (kind == "cone-instance") {
    if (cfg.size == 0) throw ParseError("cone-instance needs size >= 1");
    inst = random_cone_instance(rng, cfg.size, field);
  } else {
    throw ParseError("unknown kind '" + kind +
                     "' (expected lambda-family, remark-family, twist-family, tau-data, ramond-data or cone-instance)");
  }
  Json j = instance_to_json(inst);
  j["seed"] = cfg.seed;
  if (cfg.out.empty())
    std::cout << j.dump(2) << '\n';
  else
    write_json_file(cfg.out, j);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification of filtration, homotopy and Clifford identities for curved complexes"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--seed", cfg.seed, "random seed")->check(CLI::PositiveNumber);
  app.add_option("--trials", cfg.trials, "sampled exactness points per certified complex (0 = skip)");
  app.add_option("--r", cfg.r, "order r")->check(CLI::Range(1u, 64u));
  app.add_option("--field", cfg.field, "Q or cyclotomic:r");
  app.add_option("--out", cfg.out, "output path (bundle or instance)");
  app.add_option("--json-report", cfg.json_report, "write a JSON mirror of the report");

  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const Config&);
  };
  const Sub subs[] = {
      {"check-mf", "curvature of a map, lambda-family or twist-family", cmd_check_mf},
      {"lemma1", "truncated lambda-complex certificate", cmd_lemma1},
      {"remark", "decomposition over the roots of the target", cmd_remark},
      {"lemma2", "twisted differentials certificate", cmd_lemma2},
      {"slambda", "lambda-section identity and its lambda-complex", cmd_slambda},
      {"sxi", "twisted sections and their reduction", cmd_sxi},
      {"conelift", "chain maps out of a cone from homotopies", cmd_conelift},
      {"verify", "replay a certificate bundle", cmd_verify},
  };
  int (*chosen)(const Config&) = nullptr;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("input", cfg.input, "input file")->required();
    sub->callback([&chosen, run = s.run] { chosen = run; });
  }
  CLI::App* gen = app.add_subcommand("gen", "generate a seeded instance");
  gen->add_option("kind", cfg.kind, "instance kind")->required();
  gen->add_option("--size", cfg.size, "rank bound");
  gen->add_flag("--example", cfg.example, "emit the documented instance of this kind");
  gen->callback([&chosen] { chosen = cmd_gen; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return chosen(cfg);
  } catch (const InvariantError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
