#pragma once

#include "nambu/structure.hpp"
#include "nambu/towers.hpp"

#include <map>
#include <optional>
#include <string>

namespace nambu {

/// Parsed problem description: exactly one of a structure or a tower, plus
/// optional expected-verdict annotations ("pass"/"fail" keyed by check-name
/// prefix) that the front-end uses to invert exit codes.
struct SpecFile {
    int version = 1;
    std::optional<NambuStructure> structure;
    std::optional<TowerSpec> tower;
    std::optional<std::string> gallery_name;  // provenance when built from a reference
    std::map<std::string, std::string> expectations;

    /// Canonical re-emission; parse(emit(s)) reproduces the canonical form.
    std::string emit() const;
};

/// Parses the JSON problem format.  Unknown keys are rejected; syntax errors
/// carry byte positions, semantic errors carry a JSON-pointer-style path.
SpecFile parse_spec_text(const std::string& text);
SpecFile parse_spec(const std::string& path);

}  // namespace nambu
