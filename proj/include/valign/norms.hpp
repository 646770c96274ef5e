#pragma once

#include <map>
#include <span>
#include <variant>

#include "valign/expr.hpp"
#include "valign/world.hpp"

namespace valign {

/// Guard of a norm rule: evaluated over the source state of a transition and
/// the action id. All transitions of one (from, action) probability group see
/// the same guard verdict, so groups are forbidden or rewritten as a whole.
struct Guard {
    BoolExpr expr;

    static Guard parse(const std::string& text) { return Guard{BoolExpr::parse(text)}; }
    void bind(const World& world) { expr.bind(world.schema(), &world.actions()); }
    bool matches(const State& source, const std::string& action) const {
        return expr.eval(source.vars, &action);
    }
    const std::string& text() const { return expr.text(); }
};

struct ForbidEffect {};

/// Rewrites the destination of a matched transition. Every expression is
/// evaluated over the original destination assignment (simultaneous
/// substitution), then the modified assignment identifies the new target
/// state, minting a fresh one when no declared state carries it.
struct RewriteEffect {
    std::map<std::string, ArithExpr> assignments; // variable -> expression
};

using Effect = std::variant<ForbidEffect, RewriteEffect>;

struct NormRule {
    Guard guard;
    Effect effect;
};

struct Norm {
    std::string id;
    std::vector<NormRule> rules; // first matching rule wins

    /// Binds guards and rewrite expressions against the world; throws
    /// SchemaMismatch on unknown variables/actions and on rewrites targeting
    /// boolean variables. A norm must have at least one rule.
    void bind(const World& world);
};

struct NormativeSummary {
    std::size_t states_added = 0;
    std::size_t states_removed = 0; // always zero: unreachable states are retained
    std::size_t transitions_forbidden = 0;
    std::size_t transitions_rewritten = 0;
};

/// World after a norm set has been applied, next to the untouched base.
struct NormativeWorld {
    World base;
    std::vector<std::string> norms_applied;
    World world;
    NormativeSummary summary;
};

NormativeWorld apply_norm(const World& world, const Norm& norm);

/// Left fold of apply_norm in the given order. Empty list is the identity.
NormativeWorld apply_norm_set(const World& world, std::span<const Norm> norms);

} // namespace valign
