#include "doctest.h"

#include "support/checks.hpp"
#include "valign/enumerate.hpp"

using namespace valign;
using support::code_of;

namespace {

World chain_world() {
    // a -> b -> c, c dead end
    RawWorld raw;
    raw.schema.variables.push_back({"x", VarType::integer, {}, {}});
    raw.states.push_back({"a", {{"x", std::int64_t{0}}}});
    raw.states.push_back({"b", {{"x", std::int64_t{1}}}});
    raw.states.push_back({"c", {{"x", std::int64_t{2}}}});
    raw.actions = {"go"};
    raw.transitions.push_back({"a", "go", "b", {}});
    raw.transitions.push_back({"b", "go", "c", {}});
    raw.initial_states = std::vector<std::string>{"a"};
    return validate_world(std::move(raw));
}

World loop_world() {
    // a loops on itself and can branch to dead-end b
    RawWorld raw;
    raw.schema.variables.push_back({"x", VarType::integer, {}, {}});
    raw.states.push_back({"a", {{"x", std::int64_t{0}}}});
    raw.states.push_back({"b", {{"x", std::int64_t{1}}}});
    raw.actions = {"loop", "out"};
    raw.transitions.push_back({"a", "loop", "a", {}});
    raw.transitions.push_back({"a", "out", "b", {}});
    raw.initial_states = std::vector<std::string>{"a"};
    return validate_world(std::move(raw));
}

std::vector<std::string> actions_of(const Path& p) {
    std::vector<std::string> out;
    for (const Transition& t : p.steps) out.push_back(t.action);
    return out;
}

} // namespace

TEST_CASE("dead ends truncate paths") {
    World w = chain_world();
    PathSet ps = enumerate_paths(w, 5);
    REQUIRE(ps.paths.size() == 1);
    CHECK(ps.paths[0].length() == 2); // maximal before the horizon
    CHECK(ps.paths[0].first_state() == "a");
    CHECK(ps.paths[0].last_state() == "c");
    CHECK(ps.horizon == 5);
}

TEST_CASE("horizon truncates cycles") {
    World w = loop_world();
    PathSet ps = enumerate_paths(w, 3);
    // lexicographic by transition sequence: loop < out at every fork
    REQUIRE(ps.paths.size() == 4);
    CHECK(actions_of(ps.paths[0]) == std::vector<std::string>{"loop", "loop", "loop"});
    CHECK(actions_of(ps.paths[1]) == std::vector<std::string>{"loop", "loop", "out"});
    CHECK(actions_of(ps.paths[2]) == std::vector<std::string>{"loop", "out"});
    CHECK(actions_of(ps.paths[3]) == std::vector<std::string>{"out"});
    for (const Path& p : ps.paths) CHECK(p.length() <= 3);
}

TEST_CASE("multiple initial states enumerate in sorted order") {
    RawWorld raw;
    raw.schema.variables.push_back({"x", VarType::integer, {}, {}});
    raw.states.push_back({"a", {{"x", std::int64_t{0}}}});
    raw.states.push_back({"b", {{"x", std::int64_t{1}}}});
    raw.states.push_back({"z", {{"x", std::int64_t{2}}}});
    raw.actions = {"go"};
    raw.transitions.push_back({"z", "go", "a", {}});
    raw.transitions.push_back({"a", "go", "b", {}});
    raw.initial_states = std::vector<std::string>{"z", "a"};
    World w = validate_world(std::move(raw));

    PathSet ps = enumerate_paths(w, 1);
    REQUIRE(ps.paths.size() == 2);
    CHECK(ps.paths[0].first_state() == "a");
    CHECK(ps.paths[1].first_state() == "z");
}

TEST_CASE("initial states without outgoing transitions contribute no paths") {
    RawWorld raw;
    raw.schema.variables.push_back({"x", VarType::integer, {}, {}});
    raw.states.push_back({"a", {{"x", std::int64_t{0}}}});
    raw.states.push_back({"b", {{"x", std::int64_t{1}}}});
    raw.actions = {"go"};
    raw.transitions.push_back({"a", "go", "b", {}});
    World w = validate_world(std::move(raw)); // both states initial
    PathSet ps = enumerate_paths(w, 2);
    REQUIRE(ps.paths.size() == 1);
    CHECK(ps.paths[0].first_state() == "a");
}

TEST_CASE("NoPaths when nothing leaves the initial set") {
    RawWorld raw;
    raw.schema.variables.push_back({"x", VarType::integer, {}, {}});
    raw.states.push_back({"a", {{"x", std::int64_t{0}}}});
    raw.states.push_back({"b", {{"x", std::int64_t{1}}}});
    raw.actions = {"go"};
    raw.transitions.push_back({"b", "go", "a", {}});
    raw.initial_states = std::vector<std::string>{"a"};
    World w = validate_world(std::move(raw));
    CHECK(code_of([&] { enumerate_paths(w, 3); }) == ErrorCode::no_paths);
}

TEST_CASE("horizon below one is rejected") {
    World w = chain_world();
    CHECK(code_of([&] { enumerate_paths(w, 0); }) == ErrorCode::parse_error);
}

TEST_CASE("serial and parallel enumeration agree") {
    World w = loop_world();
    for (int horizon : {1, 2, 5, 8}) {
        PathSet serial = enumerate_paths(w, horizon, Exec::serial);
        PathSet parallel = enumerate_paths(w, horizon, Exec::parallel);
        REQUIRE(serial.paths.size() == parallel.paths.size());
        for (std::size_t i = 0; i < serial.paths.size(); ++i)
            CHECK(serial.paths[i].steps == parallel.paths[i].steps);
    }
}
