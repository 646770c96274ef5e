// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances are pinned here on purpose; loosening them is a
// release decision, not a test fix.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "support/random_worlds.hpp"
#include "support/scenarios.hpp"
#include "valign/alignment.hpp"
#include "valign/report.hpp"
#include "valign/worldfile.hpp"

using namespace valign;

namespace {

int g_failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    if (!ok) ++g_failures;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

AlignmentOptions opts(int horizon, Weighting w = Weighting::uniform) {
    return AlignmentOptions{horizon, w, Exec::parallel};
}

Norm forbid_norm(const std::string& id, const std::string& guard, const World& world) {
    Norm norm;
    norm.id = id;
    norm.rules.push_back({Guard::parse(guard), ForbidEffect{}});
    norm.bind(world);
    return norm;
}

/// Same driving scenario except unsafe -drive_slow-> safe (recovery) instead
/// of the unsafe self-loop. Used to show the norm ordering is not an artifact
/// of one completion choice.
World recovery_variant(const World& base) {
    RawWorld raw;
    raw.schema = base.schema();
    raw.actions.assign(base.actions().begin(), base.actions().end());
    for (const auto& [id, state] : base.states()) raw.states.push_back(state);
    for (const Transition& t : base.transitions()) {
        Transition copy = t;
        if (t.from == "unsafe" && t.action == "drive_slow") copy.to = "safe";
        raw.transitions.push_back(copy);
    }
    raw.initial_states = base.initial_states();
    return validate_world(std::move(raw));
}

double run_cli_capture(const std::string& args, std::string& out) {
    std::string cmd = std::string(VALIGN_CLI_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return -1;
    out.clear();
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    int status = pclose(pipe);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_1_slow_norm_neutral(const Scenario& driving) {
    AlignmentReport r = degree_of_alignment(driving.world, driving.norm("always_drive_slow"),
                                            driving.catalog.agents.front(), "safety", opts(3));
    bool ok = close(r.degree, 0.0, 1e-12) && r.path_count == 1;
    report("criterion-1 slow-norm-neutral", ok,
           "degree " + fmt(r.degree) + " over " + std::to_string(r.path_count) +
               " path(s), expected 0 within 1e-12");
}

void criterion_2_fast_norm_misaligned(const Scenario& driving) {
    const Agent& agent = driving.catalog.agents.front();
    AlignmentReport fast = degree_of_alignment(
        driving.world, driving.norm("drive_fast_when_safe"), agent, "safety", opts(4));
    AlignmentReport slow = degree_of_alignment(
        driving.world, driving.norm("always_drive_slow"), agent, "safety", opts(4));

    bool pinned = close(fast.degree, -0.175, 1e-12);
    bool banded = fast.degree >= -0.27 && fast.degree <= -0.17;
    bool ordered = fast.degree < slow.degree;

    World variant = recovery_variant(driving.world);
    Norm v_fast = forbid_norm("fast", "action == 'drive_slow' and risk == 0", variant);
    Norm v_slow = forbid_norm("slow", "action == 'drive_fast'", variant);
    AlignmentReport vf = degree_of_alignment(variant, v_fast, agent, "safety", opts(4));
    AlignmentReport vs = degree_of_alignment(variant, v_slow, agent, "safety", opts(4));
    bool variant_ordered = vf.degree < vs.degree;

    bool ok = pinned && banded && ordered && variant_ordered;
    report("criterion-2 fast-norm-misaligned", ok,
           "degree " + fmt(fast.degree) + " (pinned -0.175 within 1e-12, band [-0.27,-0.17])" +
               ", slow " + fmt(slow.degree) + ", recovery variant " + fmt(vf.degree) + " vs " +
               fmt(vs.degree));
}

void criterion_3_relative_antisymmetry(const Scenario& driving) {
    std::vector<Agent> agents{driving.catalog.agents.front()};
    std::vector<std::string> values{"safety"};
    RelativeReport fwd =
        relative_alignment(driving.world, driving.norm("always_drive_slow"),
                           driving.norm("drive_fast_when_safe"), agents, values, opts(4));
    RelativeReport rev =
        relative_alignment(driving.world, driving.norm("drive_fast_when_safe"),
                           driving.norm("always_drive_slow"), agents, values, opts(4));
    bool ok = close(fwd.relative, 0.175, 1e-12) && rev.relative == -fwd.relative;
    report("criterion-3 relative-antisymmetry", ok,
           "forward " + fmt(fwd.relative) + ", reverse " + fmt(rev.relative) +
               ", expected +0.175 and its exact negation");
}

void criterion_4_exact_tax_rewrite(const Scenario& taxation) {
    NormativeWorld nw = apply_norm(taxation.world, taxation.norm("income_tax"));

    bool minted = nw.world.has_state("money=140,salary=50") &&
                  nw.world.has_state("money=190,salary=50");
    bool exact = true;
    if (minted) {
        Decimal rate = Decimal::from_string("0.2");
        Decimal m1 = std::get<Decimal>(nw.world.state("money=140,salary=50").vars.at("money"));
        Decimal m2 = std::get<Decimal>(nw.world.state("money=190,salary=50").vars.at("money"));
        Decimal e1 = Decimal::from_int(150) - rate * Decimal::from_int(50);
        Decimal e2 = Decimal::from_int(200) - rate * Decimal::from_int(50);
        // micro-unit equality: zero tolerance
        exact = m1.micro() == e1.micro() && m2.micro() == e2.micro() &&
                m1.micro() == 140'000'000 && m2.micro() == 190'000'000;
    }
    bool counts = nw.summary.states_added == 2 && nw.summary.transitions_rewritten == 2;

    AlignmentReport taxed = degree_of_alignment(
        taxation.world, taxation.norm("income_tax"), taxation.catalog.agents.front(),
        "prosperity", opts(3));
    AlignmentReport untaxed = degree_of_alignment(
        taxation.world, taxation.norm("no_tax"), taxation.catalog.agents.front(),
        "prosperity", opts(3));
    bool degrees = close(taxed.degree, 1.0, 1e-12) && close(untaxed.degree, 0.5, 1e-12);

    bool ok = minted && exact && counts && degrees;
    report("criterion-4 exact-tax-rewrite", ok,
           std::string("minted states ") + (minted ? "present" : "missing") +
               ", money micros exact " + (exact ? "yes" : "no") + ", prosperity " +
               fmt(taxed.degree) + " taxed vs " + fmt(untaxed.degree) + " untaxed");
}

void criterion_5_oracle_agreement() {
    const unsigned n_seeds = 500;
    unsigned compared = 0;
    unsigned no_paths = 0;
    std::string first_bad;

    for (unsigned seed = 1; seed <= n_seeds && first_bad.empty(); ++seed) {
        support::RandomCase c = support::make_random_case(seed);
        Agent agent = support::random_case_agent(c);
        std::vector<Agent> agents{agent};
        std::vector<std::string> values{"u"};
        std::vector<Norm> norms;
        if (c.norm) norms.push_back(*c.norm);

        auto expected = support::oracle::degree(c.oracle_world(), c.horizon);
        std::vector<support::oracle::OPath> opaths =
            support::oracle::enumerate(c.oracle_world(), c.horizon);

        try {
            AlignmentReport r =
                aggregated_alignment(c.world, norms, agents, values, opts(c.horizon));
            if (!expected) {
                first_bad = "seed " + std::to_string(seed) + ": engine found paths, oracle none";
                break;
            }
            if (!close(r.degree, support::oracle::to_double(*expected), 1e-9)) {
                first_bad = "seed " + std::to_string(seed) + ": degree " + fmt(r.degree) +
                            " vs oracle " + fmt(support::oracle::to_double(*expected));
                break;
            }
            bool same_paths = r.paths.paths.size() == opaths.size();
            for (std::size_t i = 0; same_paths && i < opaths.size(); ++i) {
                same_paths = r.paths.paths[i].steps.size() == opaths[i].size();
                for (std::size_t j = 0; same_paths && j < opaths[i].size(); ++j) {
                    const Transition& s = r.paths.paths[i].steps[j];
                    const support::oracle::OTransition& o = opaths[i][j];
                    same_paths = s.from == o.from && s.action == o.action && s.to == o.to;
                }
            }
            if (!same_paths) {
                first_bad = "seed " + std::to_string(seed) + ": path lists differ";
                break;
            }
            ++compared;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::no_paths) {
                first_bad = "seed " + std::to_string(seed) + ": unexpected " +
                            to_string(e.code());
                break;
            }
            if (expected) {
                first_bad = "seed " + std::to_string(seed) + ": engine NoPaths, oracle found " +
                            std::to_string(opaths.size());
                break;
            }
            ++no_paths;
        }
    }

    bool ok = first_bad.empty() && compared + no_paths == n_seeds && compared >= 200;
    report("criterion-5 oracle-agreement", ok,
           first_bad.empty()
               ? std::to_string(compared) + " degrees matched within 1e-9, " +
                     std::to_string(no_paths) + " NoPaths agreed, " +
                     std::to_string(n_seeds) + " seeds"
               : first_bad);
}

void criterion_6_invariants(const Scenario& driving) {
    std::string bad;
    const Agent& agent = driving.catalog.agents.front();

    // |degree| <= 1 whenever utilities live in [0, 1]
    for (unsigned seed = 2000; seed < 2120 && bad.empty(); ++seed) {
        support::RandomCase c = support::make_random_case(seed);
        std::vector<Agent> agents{support::random_case_agent(c)};
        std::vector<std::string> values{"u"};
        std::vector<Norm> norms;
        if (c.norm) norms.push_back(*c.norm);
        try {
            AlignmentReport r =
                aggregated_alignment(c.world, norms, agents, values, opts(c.horizon));
            if (std::abs(r.degree) > 1.0 + 1e-12)
                bad = "bounds: seed " + std::to_string(seed) + " degree " + fmt(r.degree);
        } catch (const Error&) {
        }
    }

    // a never-firing norm changes nothing
    if (bad.empty()) {
        Norm identity = forbid_norm("identity", "false", driving.world);
        std::vector<Norm> with{identity};
        std::vector<Agent> agents{agent};
        std::vector<std::string> values{"safety"};
        AlignmentReport a = aggregated_alignment(driving.world, with, agents, values, opts(3));
        AlignmentReport b = aggregated_alignment(driving.world, {}, agents, values, opts(3));
        if (a.degree != b.degree || a.path_count != b.path_count)
            bad = "identity norm changed the degree";
    }

    // utility path means telescope to (u(last) - u(first)) / |p|
    if (bad.empty()) {
        AlignmentReport r = degree_of_alignment(
            driving.world, driving.norm("drive_fast_when_safe"), agent, "safety", opts(4));
        std::map<std::string, double> u{{"safe", 1.0}, {"unsafe", 0.8}, {"accident", 0.4}};
        for (std::size_t i = 0; i < r.paths.paths.size() && bad.empty(); ++i) {
            const Path& p = r.paths.paths[i];
            double expect =
                (u[p.last_state()] - u[p.first_state()]) / static_cast<double>(p.length());
            if (!close(r.path_means[i], expect, 1e-12))
                bad = "telescoping: path " + std::to_string(i + 1);
        }
    }

    // value-set degree is the mean of single-value degrees
    if (bad.empty()) {
        std::vector<Agent> agents{agent};
        std::vector<Norm> norms{driving.norm("drive_fast_when_safe")};
        std::vector<std::string> both{"efficiency", "safety"};
        AlignmentReport combined =
            aggregated_alignment(driving.world, norms, agents, both, opts(4));
        AlignmentReport s = degree_of_alignment(driving.world, norms.front(), agent, "safety",
                                                opts(4));
        AlignmentReport e = degree_of_alignment(driving.world, norms.front(), agent,
                                                "efficiency", opts(4));
        if (!close(combined.degree, (s.degree + e.degree) / 2.0, 1e-9))
            bad = "linearity: " + fmt(combined.degree) + " vs mean " +
                  fmt((s.degree + e.degree) / 2.0);
    }

    // preference function: zero on the diagonal, antisymmetric across it
    if (bad.empty()) {
        const State& safe = driving.world.state("safe");
        const State& unsafe_s = driving.world.state("unsafe");
        double self = eval_pref(agent, "safety", safe, safe);
        double fwd = eval_pref(agent, "safety", safe, unsafe_s);
        double rev = eval_pref(agent, "safety", unsafe_s, safe);
        if (self != 0.0 || !close(fwd, -rev, 1e-12))
            bad = "preference symmetry: self " + fmt(self) + ", fwd " + fmt(fwd) + ", rev " +
                  fmt(rev);
    }

    // probability weights normalize to one
    if (bad.empty()) {
        World w = support::branch_world();
        Agent tester =
            support::utility_agent("v", {{"s0", 0.0}, {"s1", 1.0}, {"s2", 0.5}});
        std::vector<Agent> agents{tester};
        std::vector<std::string> values{"v"};
        AlignmentReport r = aggregated_alignment(
            w, {}, agents, values, opts(1, Weighting::probability_weighted));
        double sum = 0.0;
        for (double v : r.path_weights) sum += v;
        if (!close(sum, 1.0, 1e-9)) bad = "probability weights sum to " + fmt(sum);
    }

    report("criterion-6 invariants", bad.empty(),
           bad.empty() ? "bounds, identity norm, telescoping, linearity, preference "
                         "antisymmetry, weight normalization"
                       : bad);
}

void criterion_7_cli_determinism() {
    std::string driving = support::fixture_path("driving");
    std::string taxation = support::fixture_path("taxation");
    std::string bad;

    auto same_twice = [&](const std::string& args, const char* label) {
        if (!bad.empty()) return;
        std::string a, b;
        int ra = run_cli_capture(args, a);
        int rb = run_cli_capture(args, b);
        if (ra != 0 || rb != 0)
            bad = std::string(label) + ": exit " + std::to_string(ra) + "/" +
                  std::to_string(rb);
        else if (a != b)
            bad = std::string(label) + ": outputs differ between runs";
        else if (a.empty())
            bad = std::string(label) + ": empty output";
    };

    same_twice("align " + driving +
                   " --norm drive_fast_when_safe --value safety --horizon 4 --format json",
               "align json");
    same_twice("matrix " + taxation + " --horizon 3 --format json", "matrix json");

    if (bad.empty()) {
        std::string out1 = "/tmp/valign_accept_a.json";
        std::string out2 = "/tmp/valign_accept_b.json";
        std::string ignored;
        int r1 = run_cli_capture("apply-norm " + taxation + " --norm income_tax --out " + out1,
                                 ignored);
        int r2 = run_cli_capture("apply-norm " + taxation + " --norm income_tax --out " + out2,
                                 ignored);
        if (r1 != 0 || r2 != 0)
            bad = "apply-norm exit " + std::to_string(r1) + "/" + std::to_string(r2);
        else if (slurp(out1) != slurp(out2) || slurp(out1).empty())
            bad = "apply-norm outputs differ between runs";
    }

    report("criterion-7 cli-determinism", bad.empty(),
           bad.empty() ? "align json, matrix json and apply-norm byte-identical across runs"
                       : bad);
}

} // namespace

int main() {
    try {
        Scenario driving = support::load_fixture("driving");
        Scenario taxation = support::load_fixture("taxation");

        criterion_1_slow_norm_neutral(driving);
        criterion_2_fast_norm_misaligned(driving);
        criterion_3_relative_antisymmetry(driving);
        criterion_4_exact_tax_rewrite(taxation);
        criterion_5_oracle_agreement();
        criterion_6_invariants(driving);
        criterion_7_cli_determinism();
    } catch (const Error& e) {
        std::printf("FAIL setup: %s: %s\n", to_string(e.code()), e.what());
        return 1;
    }

    if (g_failures == 0) {
        std::printf("acceptance: all 7 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return 1;
}
