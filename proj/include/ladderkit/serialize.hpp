#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "ladderkit/fluctuation.hpp"
#include "ladderkit/model.hpp"
#include "ladderkit/whfactor.hpp"

namespace ladderkit {

using json = nlohmann::json;

// JSON schema used by the CLI and the test fixtures:
//   { "minus": { "drift": c, "sigma2": s2, "downRate": l,
//                "downLaw": { "alpha": [...], "T": [[...], ...] } },
//     "upRate": l, "upLaw": { "alpha": [...], "T": [[...], ...] } }
// Matrices are row-major nested arrays. Keys are emitted in sorted order so
// that identical inputs serialise to identical bytes.

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);
json rowvector_to_json(const RowVector& v);
RowVector rowvector_from_json(const json& j);

json phasetype_to_json(const PhaseType& ph);
PhaseType phasetype_from_json(const json& j);

json model_to_json(const PhLevyModel& model);
PhLevyModel model_from_json(const json& j);

json solution_to_json(const LadderSolution& sol);
json atom_ph_to_json(const AtomPlusPhaseType& law);

/// FNV-1a over a string; used for the inputs digest in reports.
std::uint64_t fnv1a_digest(const std::string& bytes);

} // namespace ladderkit
