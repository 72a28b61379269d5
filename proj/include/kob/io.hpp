// SPDX-License-Identifier: Apache-2.0
//
// File formats. Matrices are JSON arrays of rows, each row an array of
// [re, im] pairs. Unknown keys are rejected.

#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>

#include "kob/circle_dirac.hpp"
#include "kob/fredholm_family.hpp"
#include "kob/obstruction.hpp"
#include "kob/tolerances.hpp"

namespace kob::io {

using json = nlohmann::json;

/// Decimal or exact "p/q".
double parse_real(std::string_view text);

/// %.17g with negative zero printed as 0.
std::string format_double(double x);

Matrix parse_matrix(const json &j, std::size_t expected_dim = 0);
json matrix_to_json(const Matrix &m);

struct HolonomyFile {
  circle::HolonomySpec holonomy;
  std::optional<circle::SpinStructure> spin;
};

/// {"k": int, "matrix": [...]} or {"k": int, "angles": [...]}, optional
/// "delta": "0" | "1/2". Angles may be numbers or "p/q" strings.
HolonomyFile parse_holonomy(const json &j, const Tolerances &tol = default_tolerances());
json holonomy_to_json(const circle::HolonomySpec &h, std::optional<circle::SpinStructure> spin = {});

/// {"dim": int, "points": [{"id", "coords"?, "matrix"}], "edges"?: [[id, id]]}
fredholm::SampledFamily parse_family(const json &j, const Tolerances &tol = default_tolerances());
json family_to_json(const fredholm::SampledFamily &fam);

json tolerances_to_json(const Tolerances &tol);
json cover_to_json(const fredholm::CoverReport &rep);
json verdict_to_json(const obstruction::ObstructionVerdict &v);

/// "value,multiplicity" header plus one row per spectral line.
std::string spectrum_csv(const circle::SpectrumWindow &w);

/// Reads and parses a JSON file; throws InputError on I/O or syntax errors.
json read_json_file(const std::string &path);

} // namespace kob::io
