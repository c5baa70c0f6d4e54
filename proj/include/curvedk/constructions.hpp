#pragma once

// Builders for the filtration / homotopy identities of polynomial families of
// differentials, twisted factorizations, symmetric powers of two-term
// complexes, Clifford sections on spinor modules and cone lifting.

#include <optional>
#include <string>
#include <vector>

#include "curvedk/clifford.hpp"
#include "curvedk/complexes.hpp"
#include "curvedk/kcert.hpp"

namespace curvedk {

// ---------------------------------------------------------------- lambda families

/// d(lambda) = d_0 + d_1 lambda + ... + d_{r-1} lambda^{r-1} with
/// d(lambda)^2 = f(lambda) * id. The coefficients d_i must not involve lambda.
/// f is stored by coefficients f_0..f_r (monic, so f_r = 1); by default
/// f = lambda^r.
struct LambdaFamily {
  SuperModule V;
  std::vector<ParityMap> coefficients;
  unsigned r = 2;
  std::vector<Poly> target;

  /// The ring of the coefficients with lambda appended if missing.
  const PolyRing& lambda_ring() const;
  /// d(lambda) as one map over lambda_ring().
  ParityMap total() const;
  /// d(z) for a lambda-free polynomial z.
  ParityMap at(const Poly& z) const;
  /// f(lambda) as a polynomial in lambda_ring().
  Poly target_poly() const;
};

/// Family with f = lambda^r; throws InvariantError unless d(lambda)^2 = lambda^r.
LambdaFamily make_lambda_family(SuperModule V, std::vector<ParityMap> coefficients, unsigned r);
/// Family with a general monic target f of degree r.
LambdaFamily make_lambda_family(SuperModule V, std::vector<ParityMap> coefficients, unsigned r,
                                std::vector<Poly> target);
/// Splits a map over a ring containing lambda into its lambda-coefficients.
/// An empty target means lambda^r.
LambdaFamily lambda_family_from_total(const ParityMap& d_lambda, unsigned r, std::vector<Poly> target = {});
/// Exact check of sum_{i+j=k} d_i d_j = f_k * id for all k.
Verdict lambda_family_check(const LambdaFamily& f);

struct Lemma1Result {
  CurvedComplex W;
  CurvedComplex V0; // (V, d_0)
  Filtration filtration;
  std::vector<CurvedComplex> graded;
  ParityMap h;
  /// d_W^2 = 0, filtration, graded pieces equal (V, d_0), d_W h + h d_W = id.
  std::vector<Verdict> checks;
  KCertificate cert;

  bool pass() const;
};

/// Truncated complex V[lambda]/(lambda^r), its lambda-adic filtration and the
/// homotopy obtained by dividing the overflow of d(lambda) by lambda^r.
Lemma1Result lemma1_build(const LambdaFamily& f, const SupportLocus& z = {});

struct RemarkResult {
  std::vector<Poly> roots;
  std::vector<CurvedComplex> complexes; // (V, d(z)) per root
  std::vector<std::int64_t> multiplicities;
  CurvedComplex power_basis;  // V[lambda]/(f) in the basis lambda^k
  CurvedComplex newton_basis; // same module in the basis prod_{m<=k}(lambda - z_m)
  ParityMap h;
  std::vector<Verdict> checks;
  KCertificate cert;

  bool pass() const;
};

/// Roots of a monic univariate f with rational coefficients, when it splits
/// into distinct rational linear factors; throws InvariantError otherwise.
std::vector<Poly> rational_roots(const LambdaFamily& f);

/// Decomposition for a squarefree split target f. Roots are taken from
/// `roots` when given (they must be distinct and multiply out to f), else
/// searched with rational_roots.
RemarkResult remark_decompose(const LambdaFamily& f, std::optional<std::vector<Poly>> roots = std::nullopt,
                              const SupportLocus& z = {});

// ---------------------------------------------------------------- twisted families

/// d with d^2 = -(f_1 ... f_r) * id.
struct TwistFamily {
  SuperModule V;
  ParityMap d;
  std::vector<Poly> f;
};

TwistFamily make_twist_family(ParityMap d, std::vector<Poly> f);

struct Lemma2Result {
  std::vector<CurvedComplex> d_list; // (V (+) V[1], d_i)
  DirectSumLayout layout;            // x_1, x'_1, ..., x_r, x'_r
  CurvedComplex W;
  Filtration filtration;
  std::vector<CurvedComplex> graded;
  ParityMap h;
  std::vector<Verdict> checks;
  KCertificate cert;

  bool pass() const;
};

/// d_i(x, x') = (d x + (prod_{j != i} f_j) x', -d x' + f_i x).
CurvedComplex twisted_differential(const TwistFamily& t, std::size_t i);
Lemma2Result lemma2_build(const TwistFamily& t, const SupportLocus& z = {});

// ---------------------------------------------------------------- symmetric powers

/// Two-term complex C_0 -> C_1 given by a rank(C_1) x rank(C_0) matrix.
struct TwoTerm {
  std::size_t rank0 = 0;
  std::size_t rank1 = 0;
  PolyMatrix d;
};

struct SymPower {
  CurvedComplex complex;
  /// Basis description: exponent vector on C_0 and subset of C_1 per vector.
  std::vector<std::pair<std::vector<unsigned>, std::uint32_t>> basis;
  /// Full index of the basis vector (alpha, subset).
  std::size_t index_of(const std::vector<unsigned>& alpha, std::uint32_t subset) const;
};

/// S^{r-i} C_0 (x) Lambda^i C_1 folded by i mod 2, with the derivation
/// differential u_1...u_m (x) w -> sum_k u_1..^u_k..u_m (x) d(u_k) ^ w.
SymPower sym_power(const TwoTerm& c, unsigned r);

/// For C_0 = C'_0 (+) <1> with 1 the last basis vector: the projection of
/// S^r onto the line spanned by 1^r, a chain map to (1|0) with d = 0.
ChainMap sym_power_augmentation(const SymPower& s, const TwoTerm& c, unsigned r);

// ---------------------------------------------------------------- Clifford endgames

/// Data for the lambda-section: coordinates x_1..x_n on C_0, the extended
/// space C_0 (+) <1>, a linear dt: C_0 (+) <1> -> C_1 and a symmetric
/// (r-1)-form nu on C_0 (+) <1> with values in C_1^dual, stored by its values
/// on basis multisets (exponent vectors of length n + 1, the last entry
/// counting the vector 1).
struct TauData {
  const PolyRing* ring = nullptr; // contains the coordinates and lambda
  std::vector<std::string> coordinates;
  std::size_t rank1 = 0;
  unsigned r = 2;
  PolyMatrix dt; // rank1 x (n + 1), entries free of coordinates and lambda
  std::vector<std::pair<std::vector<unsigned>, std::vector<Poly>>> nu;
};

/// nu(v^{r-1}) for v = sum_a v_a e_a (+ v_1 * 1): multinomial expansion.
std::vector<Poly> nu_power(const TauData& t, const std::vector<Poly>& v);
/// dt(v).
std::vector<Poly> dt_apply(const TauData& t, const std::vector<Poly>& v);
/// Checks that <nu((x + lambda 1)^{r-1}), dt(x + lambda 1)> only has a
/// lambda^r term (a multiple of lambda^r free of the coordinates).
Verdict tau_zero_composition(const TauData& t);

struct LambdaSectionResult {
  OrthoSection s_lambda;
  OrthoSection s0;
  SpinorModule spinor;
  Poly square;    // clifford_square(s_lambda)
  Verdict verdict; // square == lambda^r
  Poly square0;    // clifford_square(s0)
  std::optional<LambdaFamily> family; // lambda-expansion of the action, on pass
};

LambdaSectionResult s_lambda_check(const TauData& t);

/// Data for the twisted sections: d: C_0 -> C_1 linear, nu of degree r-1,
/// e_1, e_2 linear forms, over a field with primitive r-th roots of unity;
/// <nu(x^{r-1}), d(x)> = -(e_1^r - e_2^r).
struct RamondData {
  const PolyRing* ring = nullptr;
  std::vector<std::string> coordinates;
  unsigned r = 2;
  std::vector<Poly> d;  // rank1 linear forms
  std::vector<Poly> nu; // rank1 forms of degree r - 1
  Poly e1;
  Poly e2;
};

Verdict ramond_check(const RamondData& R);

/// sum_{i<r} xi^{r-1-i} e_1^i e_2^{r-1-i}.
Poly cyclotomic_cofactor(const Poly& e1, const Poly& e2, const Scalar& xi, unsigned r);

/// (d, e_1 - xi e_2, nu, cyclotomic_cofactor) on C_1 (+) L (+) C_1^dual (+) L^{-1}.
OrthoSection s_xi_build(const RamondData& R, const Scalar& xi);

struct TwistReduction {
  std::vector<Scalar> roots;
  std::vector<Poly> f_list; // e_1 - xi e_2
  std::vector<Verdict> cofactor_checks;
  Verdict product_check; // prod f_xi = e_1^r - e_2^r
  TwistFamily twist;     // V = S[1], d = -shift(action(s_0))
  Lemma2Result lemma2;
  std::vector<Verdict> match_verdicts;
  std::vector<CurvedComplex> spinor_complexes; // (S_ext, action(s_xi))
  KCertificate cert; // sum_xi [S_ext, action(s_xi)] = 0

  bool pass() const;
};

TwistReduction s_xi_reduce(const RamondData& R, const SupportLocus& z = {});

// ---------------------------------------------------------------- cone lifting

/// Chain map Cone(g) -> C given by (f, h) for a homotopy h: f o g ~ 0.
/// Throws InvariantError when the homotopy precondition fails.
ChainMap cone_lift(const ChainMap& g, const ChainMap& f, const ParityMap& h);
/// Recovers h from a chain map Cone(g) -> C restricting to f on the target of g.
ParityMap cone_lift_inverse(const ChainMap& g, const ParityMap& lifted);

struct ConeLiftChecks {
  Verdict restriction; // Cone(h) o i = f
  Verdict difference;  // Cone(h1) - Cone(h2) = (h1 - h2) o pi
  Verdict inverse;     // recovering h1 from Cone(h1)
  bool pass() const { return restriction.pass && difference.pass && inverse.pass; }
};

ConeLiftChecks cone_lift_checks(const ChainMap& g, const ChainMap& f, const ParityMap& h1, const ParityMap& h2);

} // namespace curvedk
