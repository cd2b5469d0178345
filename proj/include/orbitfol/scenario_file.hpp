#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orbitfol/lie.hpp"

namespace orbitfol {

/// One field of a scenario file: either {"matrix": [[...]], "offset": [...]}
/// or {"components": ["expr", ...]}.
struct FieldSpec {
    std::optional<AffineField> affine;
    std::vector<std::string> components;

    AnyField to_field() const;
    friend bool operator==(const FieldSpec& a, const FieldSpec& b);
};

/// JSON scenario:
///   {"name": str?, "dim": n, "fields": [FieldSpec, ...],
///    "points": {"label": [..], ...}?, "invariants": ["expr", ...]?}
struct ScenarioFile {
    std::string name;
    int dim = 0;
    std::vector<FieldSpec> fields;
    std::vector<std::pair<std::string, Vector>> points;
    std::vector<std::string> invariants;

    friend bool operator==(const ScenarioFile& a, const ScenarioFile& b);
};

/// Throws ScenarioFormatError on malformed JSON, schema violations, dimension
/// mismatches or unparsable expressions.
ScenarioFile parse_scenario(const std::string& json_text);

/// Reads and parses a file; unreadable files also raise ScenarioFormatError.
ScenarioFile load_scenario(const std::filesystem::path& path);

/// Pretty-printed JSON accepted by parse_scenario.
std::string serialize_scenario(const ScenarioFile& scenario);

/// Family of the declared fields. Component fields must be affine (detected on
/// the default grid) and every field must be Killing (NotKillingError).
FieldFamily to_family(const ScenarioFile& scenario);

} // namespace orbitfol
