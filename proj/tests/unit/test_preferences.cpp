#include "doctest.h"

#include "support/checks.hpp"
#include "support/scenarios.hpp"
#include "valign/preferences.hpp"

using namespace valign;
using support::code_of;

namespace {

State make_state(const std::string& id, std::int64_t x = 0) {
    return State{id, {{"x", x}}};
}

Agent table_agent(std::map<std::pair<std::string, std::string>, double> entries) {
    ValueSpec spec{"taste", PairwiseTable{std::move(entries)}};
    Agent agent;
    agent.id = "tester";
    agent.bindings.emplace("taste", std::move(spec));
    return agent;
}

} // namespace

TEST_CASE("utility map preferences are clamped deltas") {
    Agent agent = support::utility_agent(
        "safety", {{"safe", 1.0}, {"unsafe", 0.8}, {"accident", 0.4}});
    State safe = make_state("safe");
    State unsafe = make_state("unsafe");
    State accident = make_state("accident");

    CHECK(eval_pref(agent, "safety", safe, unsafe) == doctest::Approx(-0.2));
    CHECK(eval_pref(agent, "safety", unsafe, accident) == doctest::Approx(-0.4));
    CHECK(eval_pref(agent, "safety", unsafe, safe) == doctest::Approx(0.2));
    CHECK(eval_pref(agent, "safety", safe, safe) == 0.0);

    CHECK(code_of([&] { eval_pref(agent, "safety", safe, make_state("moon")); }) ==
          ErrorCode::missing_preference);
    CHECK(code_of([&] { eval_pref(agent, "nope", safe, unsafe); }) == ErrorCode::unknown_value);
}

TEST_CASE("utility preferences are antisymmetric and shift invariant") {
    Agent agent = support::utility_agent("v", {{"a", 0.3}, {"b", 0.7}});
    Agent shifted = support::utility_agent("v", {{"a", 0.5}, {"b", 0.9}});
    State a = make_state("a");
    State b = make_state("b");
    CHECK(eval_pref(agent, "v", a, b) == -eval_pref(agent, "v", b, a));
    CHECK(eval_pref(agent, "v", a, b) == doctest::Approx(eval_pref(shifted, "v", a, b)));
}

TEST_CASE("pairwise table preferences") {
    Agent agent = table_agent({{{"a", "b"}, 0.3}});
    State a = make_state("a");
    State b = make_state("b");
    State c = make_state("c");

    CHECK(eval_pref(agent, "taste", a, b) == doctest::Approx(0.3));
    // missing reverse entry falls back to the negated forward entry
    CHECK(eval_pref(agent, "taste", b, a) == doctest::Approx(-0.3));
    // missing diagonal defaults to zero
    CHECK(eval_pref(agent, "taste", a, a) == 0.0);
    CHECK(code_of([&] { eval_pref(agent, "taste", a, c); }) == ErrorCode::missing_preference);
}

TEST_CASE("predicate preferences never miss") {
    PredicateSpec pred;
    pred.formula = BoolExpr::parse("x >= 2");
    Schema schema;
    schema.variables.push_back({"x", VarType::integer, {}, {}});
    pred.formula.bind(schema, nullptr);
    pred.satisfaction["fuzzy"] = 0.25;

    ValueSpec spec{"threshold", std::move(pred)};
    Agent agent;
    agent.id = "tester";
    agent.bindings.emplace("threshold", std::move(spec));

    State low = make_state("low", 1);
    State high = make_state("high", 5);
    State fuzzy = make_state("fuzzy", 9); // override beats the formula
    CHECK(eval_pref(agent, "threshold", low, high) == 1.0);
    CHECK(eval_pref(agent, "threshold", high, low) == -1.0);
    CHECK(eval_pref(agent, "threshold", low, fuzzy) == doctest::Approx(0.25));
    CHECK(eval_pref(agent, "threshold", fuzzy, high) == doctest::Approx(0.75));
    CHECK(eval_pref(agent, "threshold", low, low) == 0.0);
}

TEST_CASE("value aggregation is the arithmetic mean") {
    Agent agent = support::utility_agent("safety", {{"a", 1.0}, {"b", 0.8}});
    ValueSpec eff{"efficiency", UtilityMap{{{"a", 0.2}, {"b", 0.8}}}};
    agent.bindings.emplace("efficiency", std::move(eff));
    State a = make_state("a");
    State b = make_state("b");

    std::vector<std::string> both{"safety", "efficiency"};
    // mean of -0.2 and +0.6
    CHECK(aggregate_values(agent, both, a, b) == doctest::Approx(0.2));
    std::vector<std::string> single{"safety"};
    CHECK(aggregate_values(agent, single, a, b) ==
          doctest::Approx(eval_pref(agent, "safety", a, b)));
    std::vector<std::string> twice{"safety", "safety"};
    CHECK(aggregate_values(agent, twice, a, b) ==
          doctest::Approx(eval_pref(agent, "safety", a, b)));
    CHECK(code_of([&] { aggregate_values(agent, {}, a, b); }) == ErrorCode::unknown_value);
}

TEST_CASE("agent aggregation is the arithmetic mean") {
    Agent up = support::utility_agent("v", {{"a", 0.1}, {"b", 0.5}});
    Agent down = support::utility_agent("v", {{"a", 0.5}, {"b", 0.1}});
    State a = make_state("a");
    State b = make_state("b");

    std::vector<Agent> agents{up, down};
    CHECK(aggregate_agents(agents, "v", a, b) == doctest::Approx(0.0)); // +0.4 and -0.4
    std::vector<Agent> one{up};
    CHECK(aggregate_agents(one, "v", a, b) == doctest::Approx(0.4));
    CHECK(aggregate_general(agents, std::vector<std::string>{"v"}, a, b) ==
          doctest::Approx(0.0));
}

TEST_CASE("validate_specs reports every invariant violation") {
    PreferenceCatalog catalog;
    catalog.values.emplace("broken_utility",
                           ValueSpec{"broken_utility", UtilityMap{{{"a", 1.2}}}});
    catalog.values.emplace(
        "broken_table",
        ValueSpec{"broken_table", PairwiseTable{{{{"a", "b"}, 0.3}, {{"b", "a"}, 0.1}}}});
    catalog.values.emplace("bad_diagonal",
                           ValueSpec{"bad_diagonal", PairwiseTable{{{{"a", "a"}, 0.5}}}});
    catalog.values.emplace("bad_satisfaction", [] {
        PredicateSpec pred;
        pred.formula = BoolExpr::parse("true");
        pred.satisfaction["a"] = 2.0;
        return ValueSpec{"bad_satisfaction", std::move(pred)};
    }());

    SpecReport report = validate_specs(catalog);
    CHECK_FALSE(report.ok());
    REQUIRE(report.issues.size() == 4);
    auto has = [&](ErrorCode code, const std::string& location_part) {
        for (const SpecIssue& issue : report.issues)
            if (issue.code == code && issue.location.find(location_part) != std::string::npos)
                return true;
        return false;
    };
    CHECK(has(ErrorCode::range_violation, "broken_utility"));
    CHECK(has(ErrorCode::antisymmetry_violation, "broken_table"));
    CHECK(has(ErrorCode::diagonal_violation, "bad_diagonal"));
    CHECK(has(ErrorCode::range_violation, "bad_satisfaction"));

    CHECK(code_of([&] { enforce(report); }) == report.issues.front().code);

    PreferenceCatalog good;
    good.values.emplace("table",
                        ValueSpec{"table", PairwiseTable{{{{"a", "b"}, 0.3}, {{"b", "a"}, -0.3}}}});
    CHECK(validate_specs(good).ok());
    CHECK_NOTHROW(enforce(validate_specs(good)));
}
