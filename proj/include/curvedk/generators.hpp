#pragma once

// Seeded random instances that satisfy their type invariants by construction.
// All randomness comes from the caller's std::mt19937_64.

#include <random>

#include "curvedk/constructions.hpp"

namespace curvedk {

using Rng = std::mt19937_64;

/// Ring with coordinates x, y (and lambda when asked) over the given field.
const PolyRing& instance_ring(const ScalarField& field, bool with_lambda);

/// Small integer in [-bound, bound].
long random_int(Rng& rng, long bound);
/// Random polynomial in the first `vars` variables of the ring (lambda is
/// never used), total degree <= max_degree.
Poly random_poly(const PolyRing& ring, Rng& rng, unsigned vars, unsigned max_degree, unsigned max_terms = 3);

/// d(lambda) = P (lambda - M) Q^-1 (+) Q (sum_k lambda^{r-1-k} M^k) P^-1 with M
/// nilpotent of order <= r and P, Q unimodular; rank (n|n) with n <= max_rank.
LambdaFamily random_lambda_family(Rng& rng, unsigned r, std::size_t max_rank, const ScalarField& field = rationals());
/// The 2x2 family a = [[lambda, x], [0, lambda]], b = [[lambda^{r-1}, -x lambda^{r-2}], [0, lambda^{r-1}]].
LambdaFamily example_lambda_family(unsigned r);

/// d(lambda)^2 = prod_j (lambda - z_j) with the given distinct roots: an
/// elementary Koszul factorization split along a subset of the roots,
/// tensored with curvature-zero Koszul pieces.
LambdaFamily random_remark_family(Rng& rng, const std::vector<Poly>& roots, std::size_t extra_factors);

/// d^2 = -(f_1...f_r) with d = P diag(u_k) Q^-1 (+) Q diag(w_k) P^-1 and
/// u_k w_k = -prod f for random splittings of the factors.
TwistFamily random_twist_family(Rng& rng, unsigned r, std::size_t max_rank, const ScalarField& field = rationals());
/// V (1|1), a = x, b = -y, f = (x, y).
TwistFamily example_twist_family();

/// TauData with <nu((x + lambda 1)^{r-1}), dt(x + lambda 1)> = lambda^r.
TauData random_tau_data(Rng& rng, unsigned r, std::size_t coordinates, std::size_t rank1,
                        const ScalarField& field = rationals());
/// One coordinate, rank1 = 1, dt(x) = 0, dt(1) = e, nu(1^{r-1}) = e*.
TauData example_tau_data(unsigned r);

/// RamondData over `field` (default: the smallest cyclotomic field with
/// r-th roots of unity) with d_1 = e_2 - e_1, nu_1 = sum e_2^i e_1^{r-1-i}
/// and Koszul syzygies mixed in.
RamondData random_ramond_data(Rng& rng, unsigned r, std::size_t rank1, const ScalarField* field = nullptr);
/// r = 2, d = x e, e_1 = x, e_2 = 2x, nu = 3x e*.
RamondData example_ramond_data();

/// Composable chain maps g: A -> B, f: B -> C with two homotopies from f o g to 0.
struct ConeInstance {
  ChainMap g;
  ChainMap f;
  ParityMap h1;
  ParityMap h2;
};
ConeInstance random_cone_instance(Rng& rng, std::size_t max_rank, const ScalarField& field = rationals());

/// Odd map on (n|n) with d^2 = 0: P diag(u) Q^-1 (+) Q diag(w) P^-1 with u_k w_k = 0.
CurvedComplex random_complex(Rng& rng, const PolyRing& ring, std::size_t n);

/// Random section with base rank n and entries of degree <= max_degree.
OrthoSection random_section(Rng& rng, const PolyRing& ring, std::size_t n, unsigned max_degree, bool with_line);

} // namespace curvedk
