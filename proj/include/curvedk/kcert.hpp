#pragma once

// Replayable certificates for identities sum a_i [C_i] = 0 between classes of
// complexes that are exact off a common support locus.
//
// Each move contributes a relation vector that holds in K-theory:
//   FiltrationMove  [C] - sum_j [G_j]   (C filtered with gr^j isomorphic to G_j)
//   HomotopyMove    [C]                 (C homotopic to zero)
//   IsoMove         [C] - [C']          (C isomorphic to C')
// A certificate verifies when every move replays exactly and the claim equals
// the sum of multiplier * relation.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "curvedk/complexes.hpp"

namespace curvedk {

struct FiltrationMove {
  std::size_t complex = 0;
  Filtration filtration;
  /// Table index of the complex each graded piece is identified with.
  std::vector<std::size_t> graded;
  /// Even isomorphisms gr^j -> graded[j] and back.
  std::vector<ParityMap> forward;
  std::vector<ParityMap> backward;
};

struct HomotopyMove {
  std::size_t complex = 0;
  ParityMap h; // d h + h d = id
};

struct IsoMove {
  std::size_t from = 0;
  std::size_t to = 0;
  ParityMap forward;  // from -> to
  ParityMap backward; // to -> from
};

using Move = std::variant<FiltrationMove, HomotopyMove, IsoMove>;

struct Step {
  std::int64_t multiplier = 1;
  Move move;
};

/// Odd maps h_k with d h_k + h_k d = g_k * id, one per generator g_k of Z.
/// Such a family shows the complex is exact wherever some g_k is invertible.
struct SupportWitness {
  std::size_t complex = 0;
  std::vector<ParityMap> homotopies;
};

class KCertificate {
public:
  KCertificate() = default;
  explicit KCertificate(SupportLocus z) : z_(std::move(z)) {}

  const SupportLocus& support() const { return z_; }
  const std::vector<CurvedComplex>& complexes() const { return complexes_; }
  std::vector<CurvedComplex>& complexes() { return complexes_; }
  /// Claimed coefficients by table index; zero coefficients are dropped.
  const std::map<std::size_t, std::int64_t>& claim() const { return claim_; }
  const std::vector<Step>& steps() const { return steps_; }
  std::vector<Step>& steps() { return steps_; }
  const std::vector<SupportWitness>& witnesses() const { return witnesses_; }

  /// Table index of c, adding it unless an equal complex is already present.
  std::size_t add_complex(const CurvedComplex& c);
  void add_claim(std::size_t complex, std::int64_t coefficient);
  void add_step(std::int64_t multiplier, Move move) { steps_.push_back(Step{multiplier, std::move(move)}); }
  void add_witness(SupportWitness w) { witnesses_.push_back(std::move(w)); }

  /// "2*[C0] - [C3]" style rendering of the claim.
  std::string claim_text() const;

private:
  SupportLocus z_;
  std::vector<CurvedComplex> complexes_;
  std::map<std::size_t, std::int64_t> claim_;
  std::vector<Step> steps_;
  std::vector<SupportWitness> witnesses_;
};

struct MoveStatus {
  std::size_t index = 0;
  std::string kind;
  Verdict verdict;
};

struct CertificateReport {
  Verdict verdict;
  std::vector<MoveStatus> moves;
  /// Index of the first move that failed to replay.
  std::optional<std::size_t> first_bad_move;
  /// claim - sum multiplier * relation, by table index (empty on success).
  std::map<std::size_t, std::int64_t> residual;
  /// Per claimed term: "certified" (support witness or homotopy move) or "assumed".
  std::map<std::size_t, std::string> term_status;
};

/// Replays every move exactly and checks the bookkeeping.
CertificateReport verify(const KCertificate& cert);
/// Verifies a single move against the complex table.
Verdict verify_move(const KCertificate& cert, const Step& step);

/// Concatenates moves and sums claims; complexes are merged by equality.
/// Throws ContextMismatch when the support loci differ.
KCertificate compose_certs(const KCertificate& a, const KCertificate& b);

/// Relation vector of a move, by table index.
std::map<std::size_t, std::int64_t> relation(const Move& move);

std::string move_kind(const Move& move);

} // namespace curvedk
