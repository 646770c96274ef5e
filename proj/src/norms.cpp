#include "valign/norms.hpp"

#include <set>

#include "valign/errors.hpp"

namespace valign {
namespace {

const NormRule* first_match(const Norm& norm, const State& source, const std::string& action) {
    for (const auto& rule : norm.rules)
        if (rule.guard.matches(source, action)) return &rule;
    return nullptr;
}

/// Simultaneous substitution: every expression reads the original destination
/// assignment, unassigned variables carry over.
VarMap rewrite_vars(const RewriteEffect& effect, const Schema& schema, const State& dest) {
    VarMap out = dest.vars;
    for (const auto& [name, expr] : effect.assignments) {
        Decimal value = expr.eval(dest.vars);
        const VarDecl* decl = schema.find(name); // non-null, checked at bind
        if (decl->type == VarType::integer) {
            if (!value.is_integral())
                raise(ErrorCode::domain_overflow, "rewrite of int variable '" + name +
                                                      "' yields non-integer " + value.str());
            out[name] = value.whole_part();
        } else {
            out[name] = value;
        }
    }
    return out;
}

} // namespace

void Norm::bind(const World& world) {
    if (rules.empty()) raise(ErrorCode::schema_mismatch, "norm '" + id + "' has no rules");
    for (auto& rule : rules) {
        rule.guard.bind(world);
        if (auto* rw = std::get_if<RewriteEffect>(&rule.effect)) {
            if (rw->assignments.empty())
                raise(ErrorCode::schema_mismatch,
                      "norm '" + id + "': rewrite assigns no variables");
            for (auto& [name, expr] : rw->assignments) {
                const VarDecl* decl = world.schema().find(name);
                if (!decl)
                    raise(ErrorCode::schema_mismatch,
                          "norm '" + id + "': rewrite targets unknown variable '" + name + "'");
                if (decl->type == VarType::boolean)
                    raise(ErrorCode::schema_mismatch,
                          "norm '" + id + "': rewrite targets bool variable '" + name + "'");
                expr.bind(world.schema());
            }
        }
    }
}

NormativeWorld apply_norm(const World& world, const Norm& norm) {
    NormativeSummary summary;

    std::vector<State> states;
    states.reserve(world.states().size());
    std::map<std::string, std::string> by_assignment;
    std::set<std::string> used_ids;
    for (const auto& [id, st] : world.states()) {
        states.push_back(st);
        by_assignment.emplace(assignment_key(st.vars), id);
        used_ids.insert(id);
    }

    // Minted ids are the canonical assignment key; a numeric suffix is only
    // needed when a declared state already squats on that id with a different
    // assignment.
    auto target_for = [&](VarMap vars) -> std::string {
        std::string key = assignment_key(vars);
        if (auto it = by_assignment.find(key); it != by_assignment.end()) return it->second;
        std::string id = key;
        for (int n = 2; used_ids.contains(id); ++n) id = key + "#" + std::to_string(n);
        used_ids.insert(id);
        by_assignment.emplace(std::move(key), id);
        states.push_back(State{id, std::move(vars)});
        ++summary.states_added;
        return id;
    };

    // Keyed by (from, action, to), so transitions collapsing onto the same
    // destination merge; their probabilities are summed.
    std::map<Transition, std::optional<double>> merged;
    for (const Transition& t : world.transitions()) {
        const NormRule* rule = first_match(norm, world.state(t.from), t.action);
        Transition out = t;
        if (rule) {
            if (std::holds_alternative<ForbidEffect>(rule->effect)) {
                ++summary.transitions_forbidden;
                continue;
            }
            const auto& rw = std::get<RewriteEffect>(rule->effect);
            out.to = target_for(rewrite_vars(rw, world.schema(), world.state(t.to)));
            ++summary.transitions_rewritten;
        }
        auto [it, fresh] = merged.try_emplace(out, out.prob);
        if (!fresh && it->second && out.prob) *it->second += *out.prob;
    }

    RawWorld raw;
    raw.schema = world.schema();
    raw.actions.assign(world.actions().begin(), world.actions().end());
    raw.states = std::move(states);
    raw.transitions.reserve(merged.size());
    for (const auto& [t, prob] : merged) {
        Transition copy = t;
        copy.prob = prob;
        raw.transitions.push_back(std::move(copy));
    }
    raw.initial_states = world.initial_states();

    NormativeWorld result;
    result.base = world;
    result.norms_applied = {norm.id};
    result.world = validate_world(std::move(raw));
    result.summary = summary;
    return result;
}

NormativeWorld apply_norm_set(const World& world, std::span<const Norm> norms) {
    NormativeWorld result;
    result.base = world;
    result.world = world;
    for (const Norm& norm : norms) {
        NormativeWorld step = apply_norm(result.world, norm);
        result.world = std::move(step.world);
        result.norms_applied.push_back(norm.id);
        result.summary.states_added += step.summary.states_added;
        result.summary.transitions_forbidden += step.summary.transitions_forbidden;
        result.summary.transitions_rewritten += step.summary.transitions_rewritten;
    }
    return result;
}

} // namespace valign
