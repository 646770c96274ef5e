#include "valign/world.hpp"

#include <algorithm>
#include <cmath>

#include "valign/errors.hpp"

namespace valign {

const State& World::state(const std::string& id) const {
    const auto it = states_.find(id);
    if (it == states_.end()) {
        raise(ErrorCode::unknown_state, "unknown state '" + id + "'");
    }
    return it->second;
}

std::span<const Transition> World::outgoing(const std::string& from) const {
    const auto it = out_index_.find(from);
    if (it == out_index_.end()) return {};
    return {transitions_.data() + it->second.first, it->second.second - it->second.first};
}

std::size_t World::group_size(const Transition& t) const {
    const auto out = outgoing(t.from);
    return static_cast<std::size_t>(
        std::count_if(out.begin(), out.end(),
                      [&](const Transition& o) { return o.action == t.action; }));
}

const std::string* World::state_id_for_assignment(const std::string& key) const {
    const auto it = assignment_index_.find(key);
    if (it == assignment_index_.end()) return nullptr;
    return &it->second;
}

World validate_world(RawWorld raw) {
    World w;

    std::sort(raw.schema.variables.begin(), raw.schema.variables.end(),
              [](const VarDecl& a, const VarDecl& b) { return a.name < b.name; });
    for (std::size_t i = 0; i + 1 < raw.schema.variables.size(); ++i) {
        if (raw.schema.variables[i].name == raw.schema.variables[i + 1].name) {
            raise(ErrorCode::schema_mismatch,
                  "schema declares variable '" + raw.schema.variables[i].name + "' twice");
        }
    }
    for (const VarDecl& decl : raw.schema.variables) {
        if (decl.name == "action" || decl.name == "true" || decl.name == "false" ||
            decl.name == "and" || decl.name == "or" || decl.name == "not") {
            raise(ErrorCode::schema_mismatch,
                  "variable name '" + decl.name + "' is reserved");
        }
    }
    w.schema_ = std::move(raw.schema);

    w.actions_.insert(raw.actions.begin(), raw.actions.end());

    for (State& s : raw.states) {
        if (s.vars.size() != w.schema_.variables.size()) {
            raise(ErrorCode::schema_mismatch,
                  "state '" + s.id + "' does not bind exactly the schema variables");
        }
        for (const VarDecl& decl : w.schema_.variables) {
            const auto it = s.vars.find(decl.name);
            if (it == s.vars.end()) {
                raise(ErrorCode::schema_mismatch,
                      "state '" + s.id + "' misses variable '" + decl.name + "'");
            }
            w.schema_.check_value(decl, it->second, "state '" + s.id + "'");
        }
        const std::string key = assignment_key(s.vars);
        const auto [it, inserted] = w.assignment_index_.emplace(key, s.id);
        if (!inserted) {
            raise(ErrorCode::duplicate_state,
                  "states '" + it->second + "' and '" + s.id +
                      "' share the assignment {" + key + "}");
        }
        const std::string id = s.id;
        if (!w.states_.emplace(id, std::move(s)).second) {
            raise(ErrorCode::duplicate_state, "state '" + id + "' declared twice");
        }
    }

    std::sort(raw.transitions.begin(), raw.transitions.end());
    for (std::size_t i = 0; i + 1 < raw.transitions.size(); ++i) {
        if (raw.transitions[i] == raw.transitions[i + 1]) {
            const Transition& t = raw.transitions[i];
            raise(ErrorCode::duplicate_transition,
                  "transition " + t.from + " -" + t.action + "-> " + t.to +
                      " declared twice");
        }
    }
    for (const Transition& t : raw.transitions) {
        if (!w.states_.contains(t.from)) {
            raise(ErrorCode::dangling_transition,
                  "transition source '" + t.from + "' is not a declared state");
        }
        if (!w.states_.contains(t.to)) {
            raise(ErrorCode::dangling_transition,
                  "transition target '" + t.to + "' is not a declared state");
        }
        if (!w.actions_.contains(t.action)) {
            raise(ErrorCode::dangling_transition,
                  "transition action '" + t.action + "' is not a declared action");
        }
        if (t.prob && (*t.prob <= 0.0 || *t.prob > 1.0)) {
            raise(ErrorCode::bad_probability_group,
                  "transition " + t.from + " -" + t.action + "-> " + t.to +
                      " has probability outside (0,1]");
        }
    }
    w.transitions_ = std::move(raw.transitions);

    // Probability groups: within one (from, action) block either every
    // transition carries a probability and they sum to one, or none do.
    for (std::size_t i = 0; i < w.transitions_.size();) {
        std::size_t j = i;
        bool any_prob = false;
        bool all_prob = true;
        double sum = 0.0;
        while (j < w.transitions_.size() && w.transitions_[j].from == w.transitions_[i].from &&
               w.transitions_[j].action == w.transitions_[i].action) {
            if (w.transitions_[j].prob) {
                any_prob = true;
                sum += *w.transitions_[j].prob;
            } else {
                all_prob = false;
            }
            ++j;
        }
        if (any_prob) {
            const std::string group = "(" + w.transitions_[i].from + ", " +
                                      w.transitions_[i].action + ")";
            if (!all_prob) {
                raise(ErrorCode::bad_probability_group,
                      "group " + group + " mixes transitions with and without probability");
            }
            if (std::abs(sum - 1.0) > 1e-9) {
                raise(ErrorCode::bad_probability_group,
                      "group " + group + " probabilities sum to " + std::to_string(sum));
            }
        }
        i = j;
    }

    for (std::size_t i = 0; i < w.transitions_.size();) {
        std::size_t j = i;
        while (j < w.transitions_.size() &&
               w.transitions_[j].from == w.transitions_[i].from) {
            ++j;
        }
        w.out_index_.emplace(w.transitions_[i].from, std::make_pair(i, j));
        i = j;
    }

    std::vector<std::string> initial;
    if (raw.initial_states) {
        initial = std::move(*raw.initial_states);
        if (initial.empty()) {
            raise(ErrorCode::empty_initial_set, "initial_states must not be empty");
        }
    } else {
        for (const auto& [id, s] : w.states_) initial.push_back(id);
        if (initial.empty()) {
            raise(ErrorCode::empty_initial_set, "world has no states");
        }
    }
    std::sort(initial.begin(), initial.end());
    initial.erase(std::unique(initial.begin(), initial.end()), initial.end());
    for (const std::string& id : initial) {
        if (!w.states_.contains(id)) {
            raise(ErrorCode::unknown_state, "initial state '" + id + "' is not declared");
        }
    }
    w.initial_ = std::move(initial);

    return w;
}

std::vector<Transition> successors(const World& world, const std::string& state,
                                   const std::optional<std::string>& action_filter) {
    world.state(state); // UnknownState check
    const auto out = world.outgoing(state);
    std::vector<Transition> result;
    for (const Transition& t : out) {
        if (!action_filter || t.action == *action_filter) result.push_back(t);
    }
    return result;
}

} // namespace valign
