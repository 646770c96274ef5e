#include "valign/alignment.hpp"

#include <cstddef>
#include <exception>
#include <limits>
#include <numeric>

namespace valign {
namespace {

// Weighted per-path means for one value scope on an already-built normative
// world. Weights are shared across values, so matrix rows recompute them
// cheaply per cell rather than caching.
struct Breakdown {
    std::vector<double> means;
    std::vector<double> weights;
    double degree = 0.0;
};

double path_mean(const World& world, const Path& path, std::span<const Agent> agents,
                 std::span<const std::string> values) {
    double sum = 0.0;
    for (const Transition& step : path.steps)
        sum += aggregate_general(agents, values, world.state(step.from), world.state(step.to));
    return sum / static_cast<double>(path.length());
}

double path_weight_raw(const World& world, const Path& path) {
    double product = 1.0;
    for (const Transition& step : path.steps) {
        // Prob-less groups count as uniform choice among their transitions.
        double p = step.prob ? *step.prob
                             : 1.0 / static_cast<double>(world.group_size(step));
        product *= p;
    }
    return product;
}

Breakdown breakdown(const World& world, const PathSet& paths, std::span<const Agent> agents,
                    std::span<const std::string> values, const AlignmentOptions& opts) {
    const std::size_t n = paths.paths.size();
    Breakdown out;
    out.means.resize(n);
    out.weights.resize(n);

    // Disjoint writes per path; the smallest-index exception wins so the
    // surfaced error does not depend on the thread schedule.
    std::exception_ptr error;
    std::size_t error_at = std::numeric_limits<std::size_t>::max();
    if (opts.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::size_t i = 0; i < n; ++i) {
            try {
                out.means[i] = path_mean(world, paths.paths[i], agents, values);
            } catch (...) {
#pragma omp critical(valign_align_error)
                if (i < error_at) {
                    error_at = i;
                    error = std::current_exception();
                }
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            out.means[i] = path_mean(world, paths.paths[i], agents, values);
    }
    if (error) std::rethrow_exception(error);

    if (opts.weighting == Weighting::uniform) {
        std::fill(out.weights.begin(), out.weights.end(), 1.0 / static_cast<double>(n));
    } else {
        for (std::size_t i = 0; i < n; ++i)
            out.weights[i] = path_weight_raw(world, paths.paths[i]);
        double total = pairwise_sum(out.weights); // > 0: factors are in (0,1]
        for (double& w : out.weights) w /= total;
    }

    std::vector<double> terms(n);
    for (std::size_t i = 0; i < n; ++i) terms[i] = out.weights[i] * out.means[i];
    out.degree = pairwise_sum(terms);
    return out;
}

std::vector<std::string> ids_of(std::span<const Agent> agents) {
    std::vector<std::string> ids;
    ids.reserve(agents.size());
    for (const Agent& a : agents) ids.push_back(a.id);
    return ids;
}

void check_scope(std::span<const Agent> agents, std::span<const std::string> values) {
    if (agents.empty()) raise(ErrorCode::unknown_agent, "empty agent set");
    if (values.empty()) raise(ErrorCode::unknown_value, "empty value set");
}

} // namespace

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double sum = 0.0;
        for (double v : values) sum += v;
        return sum;
    }
    std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

AlignmentReport aggregated_alignment(const World& world, std::span<const Norm> norms,
                                     std::span<const Agent> agents,
                                     std::span<const std::string> values,
                                     const AlignmentOptions& opts) {
    check_scope(agents, values);

    NormativeWorld nw = apply_norm_set(world, norms);
    PathSet paths = enumerate_paths(nw.world, opts.horizon, opts.exec);
    Breakdown b = breakdown(nw.world, paths, agents, values, opts);

    AlignmentReport report;
    report.norms = nw.norms_applied;
    report.values.assign(values.begin(), values.end());
    report.agents = ids_of(agents);
    report.horizon = opts.horizon;
    report.weighting = opts.weighting;
    report.degree = b.degree;
    report.path_count = paths.paths.size();
    std::size_t steps = 0;
    for (const Path& p : paths.paths) steps += p.length();
    report.mean_path_length = static_cast<double>(steps) / static_cast<double>(paths.paths.size());
    report.paths = std::move(paths);
    report.path_means = std::move(b.means);
    report.path_weights = std::move(b.weights);
    report.summary = nw.summary;
    return report;
}

AlignmentReport degree_of_alignment(const World& world, const Norm& norm, const Agent& agent,
                                    const std::string& value, const AlignmentOptions& opts) {
    return aggregated_alignment(world, {&norm, 1}, {&agent, 1}, {&value, 1}, opts);
}

RelativeReport relative_alignment(const World& world, const Norm& n1, const Norm& n2,
                                  std::span<const Agent> agents,
                                  std::span<const std::string> values,
                                  const AlignmentOptions& opts) {
    RelativeReport report;
    report.first = aggregated_alignment(world, {&n1, 1}, agents, values, opts);
    report.second = aggregated_alignment(world, {&n2, 1}, agents, values, opts);
    report.relative = report.first.degree - report.second.degree;
    return report;
}

MatrixReport alignment_matrix(const World& world, std::span<const Norm> norms,
                              std::span<const std::string> values,
                              std::span<const Agent> agents, const AlignmentOptions& opts) {
    if (agents.empty()) raise(ErrorCode::unknown_agent, "empty agent set");
    MatrixReport report;
    for (const Norm& n : norms) report.norms.push_back(n.id);
    report.values.assign(values.begin(), values.end());
    report.agents = ids_of(agents);
    report.horizon = opts.horizon;
    report.weighting = opts.weighting;

    for (const Norm& norm : norms) {
        std::vector<MatrixCell> row(values.size());
        // Normative world and path set are shared by the whole row; a
        // failure there fails every cell of the row.
        try {
            NormativeWorld nw = apply_norm_set(world, {&norm, 1});
            PathSet paths = enumerate_paths(nw.world, opts.horizon, opts.exec);
            for (std::size_t j = 0; j < values.size(); ++j) {
                try {
                    std::span<const std::string> one{&values[j], 1};
                    row[j].degree = breakdown(nw.world, paths, agents, one, opts).degree;
                } catch (const Error& e) {
                    row[j].error = e.code();
                    row[j].message = e.what();
                }
            }
        } catch (const Error& e) {
            for (MatrixCell& cell : row) {
                cell.error = e.code();
                cell.message = e.what();
            }
        }
        report.cells.push_back(std::move(row));
    }
    return report;
}

} // namespace valign
