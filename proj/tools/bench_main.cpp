#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"

#include "valign/alignment.hpp"
#include "valign/version.hpp"

namespace {

using namespace valign;

// Dense synthetic world: every state has two actions with two successors
// each, so path count grows as 4^horizon from the single initial state.
World make_world(int n_states) {
    RawWorld raw;
    raw.schema.variables.push_back({"x", VarType::integer, {}, {}});
    for (int i = 0; i < n_states; ++i)
        raw.states.push_back({"s" + std::to_string(i), {{"x", static_cast<std::int64_t>(i)}}});
    raw.actions = {"a", "b"};
    auto to = [&](int i) { return "s" + std::to_string(i % n_states); };
    for (int i = 0; i < n_states; ++i) {
        raw.transitions.push_back({to(i), "a", to(i + 1), {}});
        raw.transitions.push_back({to(i), "a", to(i + 2), {}});
        raw.transitions.push_back({to(i), "b", to(i + 3), {}});
        raw.transitions.push_back({to(i), "b", to(i + 5), {}});
    }
    raw.initial_states = std::vector<std::string>{"s0"};
    return validate_world(std::move(raw));
}

Agent make_agent(int n_states) {
    UtilityMap map;
    for (int i = 0; i < n_states; ++i)
        map.utilities["s" + std::to_string(i)] =
            static_cast<double>(i) / static_cast<double>(n_states - 1);
    ValueSpec spec{"progress", std::move(map)};
    Agent agent;
    agent.id = "walker";
    agent.bindings.emplace("progress", std::move(spec));
    return agent;
}

Norm make_norm(const World& world, int n_states) {
    Norm norm;
    norm.id = "no_b_high";
    NormRule rule{Guard::parse("action == 'b' and x >= " + std::to_string(n_states / 2)),
                  ForbidEffect{}};
    norm.rules.push_back(std::move(rule));
    norm.bind(world);
    return norm;
}

template <typename Fn>
double best_ms(int runs, Fn&& fn) {
    double best = 1e300;
    for (int i = 0; i < runs; ++i) {
        auto start = std::chrono::steady_clock::now();
        fn();
        auto stop = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(stop - start).count());
    }
    return best;
}

bool same_results(const AlignmentReport& a, const AlignmentReport& b) {
    if (a.degree != b.degree || a.path_means != b.path_means ||
        a.paths.paths.size() != b.paths.paths.size())
        return false;
    for (std::size_t i = 0; i < a.paths.paths.size(); ++i)
        if (a.paths.paths[i].steps != b.paths.paths[i].steps) return false;
    return true;
}

} // namespace

int main(int argc, char** argv) {
    int n_states = 12;
    int horizon = 9;
    int runs = 3;

    CLI::App app{"serial vs OpenMP timing for enumeration and alignment"};
    app.add_option("--states", n_states, "synthetic world size")->check(CLI::Range(6, 4096));
    app.add_option("--horizon", horizon, "path length bound")->check(CLI::Range(1, 16));
    app.add_option("--runs", runs, "timed repetitions, best run reported")
        ->check(CLI::Range(1, 100));
    CLI11_PARSE(app, argc, argv);

    World world = make_world(n_states);
    Agent agent = make_agent(n_states);
    Norm norm = make_norm(world, n_states);
    const std::string value = "progress";

    AlignmentOptions serial{horizon, Weighting::uniform, Exec::serial};
    AlignmentOptions parallel{horizon, Weighting::uniform, Exec::parallel};

    AlignmentReport r_serial = degree_of_alignment(world, norm, agent, value, serial);
    AlignmentReport r_parallel = degree_of_alignment(world, norm, agent, value, parallel);

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("valign %s bench  states=%d horizon=%d paths=%zu threads=%d\n", k_version,
                n_states, horizon, r_serial.path_count, threads);

    double enum_serial =
        best_ms(runs, [&] { enumerate_paths(world, horizon, Exec::serial); });
    double enum_parallel =
        best_ms(runs, [&] { enumerate_paths(world, horizon, Exec::parallel); });
    std::printf("enumerate  serial %9.2f ms   parallel %9.2f ms   speedup %.2fx\n", enum_serial,
                enum_parallel, enum_serial / enum_parallel);

    double align_serial =
        best_ms(runs, [&] { degree_of_alignment(world, norm, agent, value, serial); });
    double align_parallel =
        best_ms(runs, [&] { degree_of_alignment(world, norm, agent, value, parallel); });
    std::printf("align      serial %9.2f ms   parallel %9.2f ms   speedup %.2fx\n", align_serial,
                align_parallel, align_serial / align_parallel);

    bool identical = same_results(r_serial, r_parallel);
    std::printf("results identical: %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
