#pragma once

// JSON encoding of the domain types. Doubles are written with round-trip
// precision, so parse(emit(x)) reproduces x bit for bit.

#include "secrecy/robust_srm.hpp"
#include "secrecy/sim.hpp"
#include "secrecy/types.hpp"
#include "secrecy/worst_case.hpp"

#include <json.hpp>

#include <string>

namespace secrecy
{

using Json = nlohmann::json;

/// Complex vectors as [[re, im], ...].
[[nodiscard]] Json vector_to_json(const CVector& v);
[[nodiscard]] CVector vector_from_json(const Json& j);

/// Complex matrices as {"re": [[...], ...], "im": [[...], ...]}, row major.
[[nodiscard]] Json matrix_to_json(const CMatrix& A);
[[nodiscard]] CMatrix matrix_from_json(const Json& j);

/// {"nt", "h", "eves": [{"g_bar", "epsilon"}], "power_db", "power"}. On
/// input "power" (linear) takes precedence over "power_db" when both are
/// present; "nt" is checked against the vector lengths when given.
void to_json(Json& j, const ProblemInstance& instance);
void from_json(const Json& j, ProblemInstance& instance);

/// {"W", "Sigma", "beam"?}; extra keys are ignored on input, so a solve
/// result doubles as a design file.
void to_json(Json& j, const TransmitDesign& design);
void from_json(const Json& j, TransmitDesign& design);

void to_json(Json& j, const WorstCaseEveReport& report);
void from_json(const Json& j, WorstCaseEveReport& report);

void to_json(Json& j, const DesignEvaluation& evaluation);
void from_json(const Json& j, DesignEvaluation& evaluation);

void to_json(Json& j, const LineSearchTrace& trace);
void from_json(const Json& j, LineSearchTrace& trace);

void to_json(Json& j, const SecrecyResult& result);
void from_json(const Json& j, SecrecyResult& result);

void to_json(Json& j, const SweepConfig& config);
void from_json(const Json& j, SweepConfig& config);

[[nodiscard]] Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

} // namespace secrecy
