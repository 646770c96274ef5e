#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "valign/schema.hpp"

namespace valign {

struct State {
    std::string id;
    VarMap vars;
};

struct Transition {
    std::string from;
    std::string action;
    std::string to;
    std::optional<double> prob;

    /// Canonical ordering used everywhere: by (from, action, to).
    friend bool operator<(const Transition& a, const Transition& b) {
        if (a.from != b.from) return a.from < b.from;
        if (a.action != b.action) return a.action < b.action;
        return a.to < b.to;
    }
    friend bool operator==(const Transition& a, const Transition& b) {
        return a.from == b.from && a.action == b.action && a.to == b.to;
    }
};

/// Unvalidated world description as produced by the file parser or built in
/// code; validate_world turns it into a World.
struct RawWorld {
    Schema schema;
    std::vector<std::string> actions;
    std::vector<State> states;
    std::vector<Transition> transitions;
    /// Absent means "every state is initial".
    std::optional<std::vector<std::string>> initial_states;
};

/// Finite labeled transition system. Immutable once built; every operation on
/// it is a pure function, safe to call from multiple threads.
class World {
public:
    const Schema& schema() const { return schema_; }
    const std::set<std::string>& actions() const { return actions_; }
    const std::map<std::string, State>& states() const { return states_; }
    const std::vector<Transition>& transitions() const { return transitions_; }
    const std::vector<std::string>& initial_states() const { return initial_; }

    bool has_state(const std::string& id) const { return states_.contains(id); }
    /// Throws UnknownState.
    const State& state(const std::string& id) const;

    /// Transitions leaving `from`, in canonical order. Empty for dead ends.
    std::span<const Transition> outgoing(const std::string& from) const;

    /// Fan-out of the (from, action) probability group a transition belongs
    /// to. Used to weight prob-less transitions uniformly within their group.
    std::size_t group_size(const Transition& t) const;

    /// State id owning the given assignment, if any.
    const std::string* state_id_for_assignment(const std::string& key) const;

    friend World validate_world(RawWorld raw);

private:
    Schema schema_;
    std::set<std::string> actions_;
    std::map<std::string, State> states_;
    std::vector<Transition> transitions_; // sorted canonical
    std::vector<std::string> initial_;    // sorted
    std::map<std::string, std::pair<std::size_t, std::size_t>> out_index_;
    std::map<std::string, std::string> assignment_index_;
};

/// Checks every world invariant (unique ids and assignments, declared
/// endpoints, complete probability groups summing to one, nonempty initial
/// set) and builds the lookup indexes.
World validate_world(RawWorld raw);

/// Transitions leaving `state`, optionally restricted to one action, in
/// canonical order.
std::vector<Transition> successors(const World& world, const std::string& state,
                                   const std::optional<std::string>& action_filter = {});

/// Chained transition sequence. steps[i].to == steps[i+1].from, length >= 1.
struct Path {
    std::vector<Transition> steps;

    std::size_t length() const { return steps.size(); }
    const std::string& first_state() const { return steps.front().from; }
    const std::string& last_state() const { return steps.back().to; }
};

struct PathSet {
    std::vector<Path> paths;
    int horizon = 0;
};

} // namespace valign
