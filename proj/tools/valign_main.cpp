#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "valign/alignment.hpp"
#include "valign/report.hpp"
#include "valign/version.hpp"
#include "valign/worldfile.hpp"

namespace {

using namespace valign;

std::vector<std::string> split_ids(const std::string& text) {
    std::vector<std::string> out;
    std::string current;
    for (char c : text) {
        if (c == ',') {
            if (!current.empty()) out.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty()) out.push_back(current);
    return out;
}

std::string join_ids(const std::vector<std::string>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ",";
        out += ids[i];
    }
    return out;
}

struct Options {
    std::string file;
    std::string norm;  // single-norm-scope commands, comma list applied in order
    std::string norms; // compare/matrix
    std::string value;
    std::string agent;
    std::string out;
    int horizon = 3;
    std::string weighting = "uniform";
    std::string format = "table";
    bool serial = false;
};

AlignmentOptions engine_options(const Options& o) {
    AlignmentOptions opts;
    opts.horizon = o.horizon;
    opts.weighting =
        o.weighting == "uniform" ? Weighting::uniform : Weighting::probability_weighted;
    opts.exec = o.serial ? Exec::serial : Exec::parallel;
    return opts;
}

std::vector<Norm> resolve_norms(const Scenario& sc, const std::string& arg) {
    std::vector<Norm> out;
    for (const std::string& id : split_ids(arg)) out.push_back(sc.norm(id));
    return out;
}

std::vector<Agent> resolve_agents(const Scenario& sc, const std::string& arg) {
    if (arg.empty()) {
        if (sc.catalog.agents.empty()) raise(ErrorCode::unknown_agent, "no agents declared");
        return sc.catalog.agents;
    }
    std::vector<Agent> out;
    for (const std::string& id : split_ids(arg)) out.push_back(sc.catalog.agent(id));
    return out;
}

std::vector<std::string> resolve_values(const Scenario& sc, const std::string& arg) {
    if (arg.empty()) {
        std::vector<std::string> all;
        for (const auto& [id, spec] : sc.catalog.values) all.push_back(id);
        if (all.empty()) raise(ErrorCode::unknown_value, "no values declared");
        return all;
    }
    std::vector<std::string> out;
    for (const std::string& id : split_ids(arg)) {
        if (!sc.catalog.values.contains(id))
            raise(ErrorCode::unknown_value, "unknown value '" + id + "'");
        out.push_back(id);
    }
    return out;
}

std::vector<std::string> agent_ids(const std::vector<Agent>& agents) {
    std::vector<std::string> ids;
    for (const Agent& a : agents) ids.push_back(a.id);
    return ids;
}

int run_validate(const Options& o) {
    try {
        Scenario sc = load_scenario(o.file);
        ValidationReport vr;
        vr.states = sc.world.states().size();
        vr.transitions = sc.world.transitions().size();
        vr.values = sc.catalog.values.size();
        vr.agents = sc.catalog.agents.size();
        vr.norms = sc.norms.size();
        vr.specs = validate_specs(sc.catalog);
        std::cout << render_validation(vr);
        return vr.ok() ? 0 : 1;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::parse_error || e.code() == ErrorCode::io_error) throw;
        std::cout << "valign " << k_version << " validate\n"
                  << to_string(e.code()) << ": " << e.what() << "\n"
                  << "failed: 1 issue(s)\n";
        return 1;
    }
}

int run_align(const Options& o) {
    Scenario sc = load_scenario(o.file);
    enforce(validate_specs(sc.catalog));
    std::vector<Norm> norms = resolve_norms(sc, o.norm);
    std::vector<Agent> agents = resolve_agents(sc, o.agent);
    std::vector<std::string> values = resolve_values(sc, o.value);
    AlignmentReport report =
        aggregated_alignment(sc.world, norms, agents, values, engine_options(o));
    std::cout << render_alignment(report, *parse_format(o.format));
    return 0;
}

int run_compare(const Options& o) {
    std::vector<std::string> ids = split_ids(o.norms);
    if (ids.size() != 2) {
        std::cerr << "compare: --norms needs exactly two ids\n";
        return 2;
    }
    Scenario sc = load_scenario(o.file);
    enforce(validate_specs(sc.catalog));
    std::vector<Agent> agents = resolve_agents(sc, o.agent);
    std::vector<std::string> values = resolve_values(sc, o.value);
    RelativeReport report = relative_alignment(sc.world, sc.norm(ids[0]), sc.norm(ids[1]),
                                               agents, values, engine_options(o));
    std::cout << render_relative(report, *parse_format(o.format));
    return 0;
}

int run_matrix(const Options& o) {
    Scenario sc = load_scenario(o.file);
    enforce(validate_specs(sc.catalog));
    std::vector<Norm> norms = o.norms.empty() ? sc.norms : resolve_norms(sc, o.norms);
    if (norms.empty()) raise(ErrorCode::unknown_norm, "no norms declared");
    std::vector<Agent> agents = resolve_agents(sc, o.agent);
    std::vector<std::string> values = resolve_values(sc, o.value);
    MatrixReport report = alignment_matrix(sc.world, norms, values, agents, engine_options(o));
    std::cout << render_matrix(report, *parse_format(o.format));
    for (const auto& row : report.cells)
        for (const MatrixCell& cell : row)
            if (cell.degree) return 0;
    return 1;
}

int run_paths(const Options& o) {
    Scenario sc = load_scenario(o.file);
    std::vector<Norm> norms = resolve_norms(sc, o.norm);
    NormativeWorld nw = apply_norm_set(sc.world, norms);
    PathsReport report;
    report.horizon = o.horizon;
    report.norms = nw.norms_applied;
    report.paths =
        enumerate_paths(nw.world, o.horizon, o.serial ? Exec::serial : Exec::parallel);
    if (!o.value.empty()) {
        enforce(validate_specs(sc.catalog));
        std::vector<Agent> agents = resolve_agents(sc, o.agent);
        std::vector<std::string> values = resolve_values(sc, o.value);
        report.value = o.value;
        report.agent = join_ids(agent_ids(agents));
        for (const Path& path : report.paths.paths) {
            std::vector<double> deltas;
            for (const Transition& step : path.steps)
                deltas.push_back(aggregate_general(agents, values, nw.world.state(step.from),
                                                   nw.world.state(step.to)));
            report.deltas.push_back(std::move(deltas));
        }
    }
    std::cout << render_paths(report, *parse_format(o.format));
    return 0;
}

int run_apply_norm(const Options& o) {
    Scenario sc = load_scenario(o.file);
    std::vector<Norm> norms = resolve_norms(sc, o.norm);
    if (norms.empty()) raise(ErrorCode::unknown_norm, "no norm given");
    NormativeWorld nw = apply_norm_set(sc.world, norms);
    Scenario out{nw.world, sc.catalog, sc.norms};
    save_scenario(out, o.out);
    std::cout << "applied " << join_ids(nw.norms_applied) << ": states +"
              << nw.summary.states_added << ", forbidden " << nw.summary.transitions_forbidden
              << ", rewritten " << nw.summary.transitions_rewritten << " -> " << o.out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantifies how well norms align with values over finite transition systems"};
    app.set_version_flag("--version", std::string("valign ") + k_version);
    app.require_subcommand(1);

    Options o;
    auto add_file = [&](CLI::App* cmd) {
        cmd->add_option("file", o.file, "scenario file")->required()->check(CLI::ExistingFile);
    };
    auto add_output = [&](CLI::App* cmd) {
        cmd->add_option("--format", o.format, "output format (table|csv|json)")
            ->check(CLI::IsMember({"table", "csv", "json"}))
            ->capture_default_str();
        cmd->add_flag("--serial", o.serial, "run the serial reference kernels");
    };
    auto add_scope = [&](CLI::App* cmd) {
        cmd->add_option("--agent", o.agent, "agent ids, comma separated (default: all)");
        cmd->add_option("--horizon", o.horizon, "maximum transitions per path")
            ->check(CLI::Range(1, 1'000'000))
            ->capture_default_str();
        cmd->add_option("--weighting", o.weighting, "path weighting (uniform|probability)")
            ->check(CLI::IsMember({"uniform", "probability"}))
            ->capture_default_str();
    };

    CLI::App* validate = app.add_subcommand("validate", "check world, value specs and norms");
    add_file(validate);

    CLI::App* align = app.add_subcommand("align", "degree of alignment of a norm");
    add_file(align);
    align->add_option("--norm", o.norm, "norm ids applied in order (default: none)");
    align->add_option("--value", o.value, "value ids, comma separated (default: all)");
    add_scope(align);
    add_output(align);

    CLI::App* compare = app.add_subcommand("compare", "relative alignment of two norms");
    add_file(compare);
    compare->add_option("--norms", o.norms, "exactly two norm ids, comma separated")->required();
    compare->add_option("--value", o.value, "value ids, comma separated (default: all)");
    add_scope(compare);
    add_output(compare);

    CLI::App* matrix = app.add_subcommand("matrix", "norm x value alignment grid");
    add_file(matrix);
    matrix->add_option("--norms", o.norms, "norm ids (default: all)");
    matrix->add_option("--values", o.value, "value ids (default: all)");
    add_scope(matrix);
    add_output(matrix);

    CLI::App* paths = app.add_subcommand("paths", "maximal bounded paths of the normative world");
    add_file(paths);
    paths->add_option("--norm", o.norm, "norm ids applied in order (default: none)");
    paths->add_option("--value", o.value, "value ids for per-step preference deltas");
    paths->add_option("--agent", o.agent, "agent ids for the deltas (default: all)");
    paths->add_option("--horizon", o.horizon, "maximum transitions per path")
        ->check(CLI::Range(1, 1'000'000))
        ->capture_default_str();
    add_output(paths);

    CLI::App* apply = app.add_subcommand("apply-norm", "write the normative world as a scenario");
    add_file(apply);
    apply->add_option("--norm", o.norm, "norm ids applied in order")->required();
    apply->add_option("--out", o.out, "output scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) return run_validate(o);
        if (align->parsed()) return run_align(o);
        if (compare->parsed()) return run_compare(o);
        if (matrix->parsed()) return run_matrix(o);
        if (paths->parsed()) return run_paths(o);
        if (apply->parsed()) return run_apply_norm(o);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::parse_error || e.code() == ErrorCode::io_error) {
            std::cerr << to_string(e.code()) << ": " << e.what() << "\n";
            return 2;
        }
        std::cout << error_json(e.code(), e.what());
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
