#pragma once

#include <string>
#include <vector>

#include "valign/norms.hpp"
#include "valign/preferences.hpp"
#include "valign/world.hpp"

namespace valign {

/// Decoded scenario file with expression DSL still in textual form. Produced
/// by parse_raw_scenario; build_scenario parses and binds the texts.
struct RawTableEntry {
    std::string from;
    std::string to;
    double pref = 0.0;
};

struct RawValueSpec {
    std::string id;
    std::string kind; // "utility" | "table" | "predicate"
    std::map<std::string, double> utilities;
    std::vector<RawTableEntry> entries;
    std::string formula;
    std::map<std::string, double> satisfaction;
};

struct RawAgent {
    std::string id;
    std::vector<std::string> values;
};

struct RawNormRule {
    std::string when;
    bool forbid = false;
    std::vector<std::pair<std::string, std::string>> rewrite; // var -> expression text
};

struct RawNorm {
    std::string id;
    std::vector<RawNormRule> rules;
};

struct RawScenario {
    RawWorld world;
    std::vector<RawValueSpec> values;
    std::vector<RawAgent> agents;
    std::vector<RawNorm> norms;
};

/// Fully validated scenario: world checked, predicate formulas and norm
/// expressions parsed and bound.
struct Scenario {
    World world;
    PreferenceCatalog catalog;
    std::vector<Norm> norms;

    const Norm* find_norm(const std::string& id) const;
    const Norm& norm(const std::string& id) const; // throws UnknownNorm
};

/// Structural decoding of the scenario document. Raises ParseError on
/// malformed structure (wrong types, missing or unknown keys); does not
/// touch DSL texts or world semantics.
RawScenario parse_raw_scenario(const std::string& text);

/// Validates the world and binds values/agents/norms. DSL syntax errors
/// inside the document are reported as SchemaMismatch with the owning
/// entity named, since the document itself was well-formed.
Scenario build_scenario(RawScenario raw);

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path); // IoError when unreadable

/// Canonical serialization: sorted schema/states/actions/transitions,
/// values sorted by id, agents and norms in declaration order. Re-parsing
/// the output yields a semantically identical scenario.
std::string scenario_to_json(const Scenario& scenario);

void save_scenario(const Scenario& scenario, const std::string& path);

} // namespace valign
