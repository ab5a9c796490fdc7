#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "twistlab/linalg.hpp"
#include "twistlab/matpoly.hpp"
#include "twistlab/mtheta.hpp"
#include "twistlab/verification.hpp"

namespace twistlab::io {

using Json = nlohmann::json;

/// Parses a file path, "-" for standard input, or inline JSON text.
/// Throws SchemaError on unreadable or malformed input.
Json load_json(const std::string& source);

// Encoders. Complex numbers are [re, im]; matrices are arrays of rows.
Json to_json(Complex z);
Json to_json(const CMatrix& m);
Json to_json(const std::vector<Complex>& values);
Json to_json(const matpoly::MatrixPolynomial& poly);
Json to_json(const matpoly::FactorTuple& factors);
Json to_json(const mtheta::LatticeParams& params);
Json to_json(const mtheta::ThetaElement& element);
Json to_json(const VerificationReport& report);

// Decoders. `path` names the value for diagnostics, e.g. "$.coeffs[1]".
Complex complex_from(const Json& j, const std::string& path = "$");
CMatrix matrix_from(const Json& j, const std::string& path = "$");
CVector vector_from(const Json& j, const std::string& path = "$");
std::vector<Complex> complex_list_from(const Json& j, const std::string& path = "$");
std::vector<std::size_t> index_list_from(const Json& j, const std::string& path = "$");
matpoly::MatrixPolynomial polynomial_from(const Json& j, const std::string& path = "$");
matpoly::FactorTuple factors_from(const Json& j, const std::string& path = "$");
mtheta::LatticeParams lattice_from(const Json& j, const std::string& path = "$");
mtheta::ThetaElement theta_from(const Json& j, const std::string& path = "$");

/// Member `key` of an object, or SchemaError naming the missing path.
const Json& member(const Json& j, const std::string& key, const std::string& path = "$");

}  // namespace twistlab::io
