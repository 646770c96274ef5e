#include "valign/enumerate.hpp"

#include <cstddef>

#include "valign/errors.hpp"

namespace valign {
namespace {

/// Iterative depth-first walk from one initial state. Branches are visited in
/// the canonical transition order, so paths come out lexicographically.
void paths_from(const World& world, const std::string& initial, int horizon,
                std::vector<Path>& out) {
    struct Frame {
        std::span<const Transition> options;
        std::size_t next = 0;
    };

    std::vector<Frame> stack;
    Path current;

    const auto first = world.outgoing(initial);
    if (first.empty()) return;
    stack.push_back({first, 0});

    while (!stack.empty()) {
        Frame& frame = stack.back();
        if (frame.next >= frame.options.size()) {
            stack.pop_back();
            if (!current.steps.empty()) current.steps.pop_back();
            continue;
        }
        const Transition& t = frame.options[frame.next++];
        current.steps.push_back(t);
        const auto next_options = world.outgoing(t.to);
        if (static_cast<int>(current.steps.size()) == horizon || next_options.empty()) {
            out.push_back(current);
            current.steps.pop_back();
        } else {
            stack.push_back({next_options, 0});
        }
    }
}

} // namespace

PathSet enumerate_paths(const World& world, int horizon, Exec exec) {
    if (horizon < 1) {
        raise(ErrorCode::parse_error, "horizon must be at least 1");
    }

    const std::vector<std::string>& initials = world.initial_states();
    std::vector<std::vector<Path>> per_initial(initials.size());

    if (exec == Exec::serial) {
        for (std::size_t i = 0; i < initials.size(); ++i) {
            paths_from(world, initials[i], horizon, per_initial[i]);
        }
    } else {
#pragma omp parallel for schedule(dynamic)
        for (std::size_t i = 0; i < initials.size(); ++i) {
            paths_from(world, initials[i], horizon, per_initial[i]);
        }
    }

    PathSet result;
    result.horizon = horizon;
    std::size_t total = 0;
    for (const auto& chunk : per_initial) total += chunk.size();
    result.paths.reserve(total);
    for (auto& chunk : per_initial) {
        for (auto& p : chunk) result.paths.push_back(std::move(p));
    }

    if (result.paths.empty()) {
        raise(ErrorCode::no_paths, "no initial state has an outgoing transition");
    }
    return result;
}

} // namespace valign
