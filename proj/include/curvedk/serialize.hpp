#pragma once

// JSON forms of instances, certificates and verdict reports. Polynomials are
// stored as strings in the ring named alongside them; every map carries its
// ring so files are self-contained.

#include <string>
#include <variant>

#include <json.hpp>

#include "curvedk/generators.hpp"

namespace curvedk {

using Json = nlohmann::ordered_json;

Json to_json(const PolyRing& ring);
const PolyRing& ring_from_json(const Json& j);

Json to_json(const SuperModule& m);
SuperModule module_from_json(const Json& j, const PolyRing& ring);

Json matrix_to_json(const PolyMatrix& m);
PolyMatrix matrix_from_json(const Json& j, const PolyRing& ring, std::size_t rows, std::size_t cols);

Json to_json(const ParityMap& f);
ParityMap map_from_json(const Json& j);

Json to_json(const CurvedComplex& c);
/// Recomputes the curvature and checks it against the stored one.
CurvedComplex complex_from_json(const Json& j);

Json to_json(const KCertificate& cert);
KCertificate certificate_from_json(const Json& j);

Json to_json(const Verdict& v);
Json to_json(const CertificateReport& r);

// ---------------------------------------------------------------- instances

/// A LambdaFamily plus optional roots of its target (for the decomposition).
struct LambdaInstance {
  LambdaFamily family;
  std::optional<std::vector<Poly>> roots;
};

using Instance = std::variant<LambdaInstance, TwistFamily, TauData, RamondData, ConeInstance, ParityMap>;

/// "lambda-family", "twist-family", "tau-data", "ramond-data", "cone-instance" or "map".
std::string instance_kind(const Instance& inst);
Json instance_to_json(const Instance& inst);
Instance instance_from_json(const Json& j);

/// Reads a JSON file; throws ParseError with the position on malformed input
/// and Error when the file cannot be opened.
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

} // namespace curvedk
