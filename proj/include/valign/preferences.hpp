#pragma once

#include <map>
#include <span>
#include <utility>
#include <variant>

#include "valign/errors.hpp"
#include "valign/expr.hpp"
#include "valign/world.hpp"

namespace valign {

/// state id -> utility in [0,1]. Preference over a pair is the clamped
/// utility delta, so deltas already live in [-1,1].
struct UtilityMap {
    std::map<std::string, double> utilities;
};

/// (state id, state id) -> preference in [-1,1]. Antisymmetric with zero
/// diagonal; a missing entry falls back to the negated reverse entry, a
/// missing diagonal entry defaults to zero.
struct PairwiseTable {
    std::map<std::pair<std::string, std::string>, double> entries;
};

/// Boolean formula over state variables with an optional per-state
/// satisfaction probability override. States the map does not mention
/// satisfy with probability 1 or 0 according to the formula, which is why
/// this kind works on norm-created states out of the box.
struct PredicateSpec {
    BoolExpr formula;
    std::map<std::string, double> satisfaction;
};

struct ValueSpec {
    std::string id;
    std::variant<UtilityMap, PairwiseTable, PredicateSpec> kind;

    /// Binds predicate formulas; other kinds have nothing to resolve.
    void bind(const Schema& schema);
};

struct Agent {
    std::string id;
    std::map<std::string, ValueSpec> bindings; // value id -> spec held by this agent

    const ValueSpec& spec(const std::string& value) const; // throws UnknownValue
};

struct PreferenceCatalog {
    std::map<std::string, ValueSpec> values; // shared declarations
    std::vector<Agent> agents;               // in declaration order

    const Agent* find_agent(const std::string& id) const;
    const Agent& agent(const std::string& id) const; // throws UnknownAgent
};

/// Preference of `agent` under one held value for moving s -> s_next.
/// UtilityMap: clamp(u(s_next) - u(s), -1, 1). PairwiseTable: table lookup.
/// PredicateSpec: satisfaction(s_next) - satisfaction(s).
/// Throws MissingPreference when a map/table has no entry for a state.
double eval_pref(const Agent& agent, const std::string& value, const State& s,
                 const State& s_next);

/// Unweighted arithmetic mean of eval_pref over the value ids.
double aggregate_values(const Agent& agent, std::span<const std::string> values,
                        const State& s, const State& s_next);

/// Unweighted arithmetic mean of eval_pref over the agents.
double aggregate_agents(std::span<const Agent> agents, const std::string& value,
                        const State& s, const State& s_next);

/// Mean over agents of the mean over values (both sets nonempty).
double aggregate_general(std::span<const Agent> agents, std::span<const std::string> values,
                         const State& s, const State& s_next);

struct SpecIssue {
    std::string location; // "agent 'a', value 'v'" or "value 'v'"
    ErrorCode code = ErrorCode::range_violation;
    std::string message;
};

struct SpecReport {
    std::vector<SpecIssue> issues;
    bool ok() const { return issues.empty(); }
};

/// Checks every ValueSpec invariant (utility and satisfaction ranges, table
/// range, zero diagonal, antisymmetry) across shared values and per-agent
/// bindings. Reports instead of raising.
SpecReport validate_specs(const PreferenceCatalog& catalog);

/// Raises the first issue of a failed report as an Error.
void enforce(const SpecReport& report);

} // namespace valign
