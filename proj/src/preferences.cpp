#include "valign/preferences.hpp"

#include <algorithm>
#include <cmath>

namespace valign {
namespace {

double utility_of(const UtilityMap& map, const Agent& agent, const std::string& value,
                  const State& state) {
    auto it = map.utilities.find(state.id);
    if (it == map.utilities.end())
        raise(ErrorCode::missing_preference, "agent '" + agent.id + "', value '" + value +
                                                 "': no utility for state '" + state.id + "'");
    return it->second;
}

double table_pref(const PairwiseTable& table, const Agent& agent, const std::string& value,
                  const State& s, const State& s_next) {
    if (auto it = table.entries.find({s.id, s_next.id}); it != table.entries.end())
        return it->second;
    if (auto it = table.entries.find({s_next.id, s.id}); it != table.entries.end())
        return -it->second;
    if (s.id == s_next.id) return 0.0;
    raise(ErrorCode::missing_preference, "agent '" + agent.id + "', value '" + value +
                                             "': no table entry for ('" + s.id + "', '" +
                                             s_next.id + "')");
}

double satisfaction_of(const PredicateSpec& spec, const State& state) {
    if (auto it = spec.satisfaction.find(state.id); it != spec.satisfaction.end())
        return it->second;
    return spec.formula.eval(state.vars, nullptr) ? 1.0 : 0.0;
}

void check_range(std::vector<SpecIssue>& issues, const std::string& location, double value,
                 double lo, double hi, const std::string& what) {
    if (std::isfinite(value) && value >= lo && value <= hi) return;
    issues.push_back({location, ErrorCode::range_violation,
                      what + " " + std::to_string(value) + " outside [" + std::to_string(lo) +
                          ", " + std::to_string(hi) + "]"});
}

void check_spec(std::vector<SpecIssue>& issues, const std::string& location,
                const ValueSpec& spec) {
    if (const auto* um = std::get_if<UtilityMap>(&spec.kind)) {
        for (const auto& [state, u] : um->utilities)
            check_range(issues, location, u, 0.0, 1.0, "utility of '" + state + "'");
        return;
    }
    if (const auto* ps = std::get_if<PredicateSpec>(&spec.kind)) {
        for (const auto& [state, p] : ps->satisfaction)
            check_range(issues, location, p, 0.0, 1.0, "satisfaction of '" + state + "'");
        return;
    }
    const auto& table = std::get<PairwiseTable>(spec.kind);
    for (const auto& [key, pref] : table.entries) {
        const auto& [a, b] = key;
        check_range(issues, location, pref, -1.0, 1.0,
                    "entry ('" + a + "', '" + b + "')");
        if (a == b && pref != 0.0) {
            issues.push_back({location, ErrorCode::diagonal_violation,
                              "entry ('" + a + "', '" + a + "') is " + std::to_string(pref) +
                                  ", diagonal must be zero"});
            continue;
        }
        if (a < b) { // each unordered pair checked once
            auto rev = table.entries.find({b, a});
            if (rev != table.entries.end() && std::abs(rev->second + pref) > 1e-12)
                issues.push_back({location, ErrorCode::antisymmetry_violation,
                                  "entries ('" + a + "', '" + b + "') and ('" + b + "', '" + a +
                                      "') are not negations"});
        }
    }
}

} // namespace

void ValueSpec::bind(const Schema& schema) {
    if (auto* ps = std::get_if<PredicateSpec>(&kind)) ps->formula.bind(schema, nullptr);
}

const ValueSpec& Agent::spec(const std::string& value) const {
    auto it = bindings.find(value);
    if (it == bindings.end())
        raise(ErrorCode::unknown_value, "agent '" + id + "' does not hold value '" + value + "'");
    return it->second;
}

const Agent* PreferenceCatalog::find_agent(const std::string& id) const {
    for (const Agent& a : agents)
        if (a.id == id) return &a;
    return nullptr;
}

const Agent& PreferenceCatalog::agent(const std::string& id) const {
    if (const Agent* a = find_agent(id)) return *a;
    raise(ErrorCode::unknown_agent, "unknown agent '" + id + "'");
}

double eval_pref(const Agent& agent, const std::string& value, const State& s,
                 const State& s_next) {
    const ValueSpec& spec = agent.spec(value);
    if (const auto* um = std::get_if<UtilityMap>(&spec.kind)) {
        double delta = utility_of(*um, agent, value, s_next) - utility_of(*um, agent, value, s);
        return std::clamp(delta, -1.0, 1.0);
    }
    if (const auto* table = std::get_if<PairwiseTable>(&spec.kind))
        return table_pref(*table, agent, value, s, s_next);
    const auto& pred = std::get<PredicateSpec>(spec.kind);
    return satisfaction_of(pred, s_next) - satisfaction_of(pred, s);
}

double aggregate_values(const Agent& agent, std::span<const std::string> values,
                        const State& s, const State& s_next) {
    if (values.empty()) raise(ErrorCode::unknown_value, "empty value set");
    double sum = 0.0;
    for (const std::string& value : values) sum += eval_pref(agent, value, s, s_next);
    return sum / static_cast<double>(values.size());
}

double aggregate_agents(std::span<const Agent> agents, const std::string& value,
                        const State& s, const State& s_next) {
    if (agents.empty()) raise(ErrorCode::unknown_agent, "empty agent set");
    double sum = 0.0;
    for (const Agent& agent : agents) sum += eval_pref(agent, value, s, s_next);
    return sum / static_cast<double>(agents.size());
}

double aggregate_general(std::span<const Agent> agents, std::span<const std::string> values,
                         const State& s, const State& s_next) {
    if (agents.empty()) raise(ErrorCode::unknown_agent, "empty agent set");
    double sum = 0.0;
    for (const Agent& agent : agents) sum += aggregate_values(agent, values, s, s_next);
    return sum / static_cast<double>(agents.size());
}

SpecReport validate_specs(const PreferenceCatalog& catalog) {
    SpecReport report;
    for (const auto& [id, spec] : catalog.values)
        check_spec(report.issues, "value '" + id + "'", spec);
    for (const Agent& agent : catalog.agents)
        for (const auto& [value, spec] : agent.bindings)
            check_spec(report.issues, "agent '" + agent.id + "', value '" + value + "'", spec);
    return report;
}

void enforce(const SpecReport& report) {
    if (report.ok()) return;
    const SpecIssue& first = report.issues.front();
    raise(first.code, first.location + ": " + first.message);
}

} // namespace valign
