#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "ggm/certify.hpp"
#include "ggm/norms.hpp"
#include "ggm/operators.hpp"
#include "ggm/space.hpp"

namespace ggm::io {

using Json = nlohmann::ordered_json;

/**
 * Space file (JSON):
 *   {"points": [[x, ...], ...] | ["id", ...],
 *    "metric": {"kind": "euclidean"} | {"kind": "snowflake", "exponent": s}
 *              | {"kind": "matrix", "matrix": [[d00, d01, ...], ...]},
 *    "weights": [w0, w1, ...]}
 * Ids are only allowed with the matrix metric. Doubles are written in
 * shortest round-trip form, so write then read reproduces the space exactly.
 */
Json space_to_json(const QuasimetricSpace& space);
QuasimetricSpace space_from_json(const Json& j);

/// Function file: {"values": [...]} (a bare array is also accepted).
Json function_to_json(const GridFunction& f);
GridFunction function_from_json(const Json& j);

Json geometry_to_json(const QuasimetricSpace& space);
Json norm_result_to_json(const NormResult& r, const QuasimetricSpace& space);
Json cz_report_to_json(const CZReport& r);
/// Report body without runtime fields; key order is fixed.
Json cert_report_to_json(const CertReport& r);

/// Per-epsilon rows of a reduction (header eps,eta,constant,witness).
std::string reduction_csv(const CertReport& r, const FunctionFamily& family);

/// Throws std::runtime_error naming the path when the file is missing or malformed.
Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace ggm::io
