#pragma once

#include <optional>
#include <span>

#include "valign/enumerate.hpp"
#include "valign/norms.hpp"
#include "valign/preferences.hpp"

namespace valign {

enum class Weighting { uniform, probability_weighted };

inline const char* to_string(Weighting w) {
    return w == Weighting::uniform ? "uniform" : "probability";
}

struct AlignmentOptions {
    int horizon = 3;
    Weighting weighting = Weighting::uniform;
    Exec exec = Exec::parallel;
};

/// Result of one degree computation. paths, path_means and path_weights are
/// index-aligned; degree is the weighted mean of path_means and the weights
/// sum to one.
struct AlignmentReport {
    std::vector<std::string> norms; // application order
    std::vector<std::string> values;
    std::vector<std::string> agents;
    int horizon = 3;
    Weighting weighting = Weighting::uniform;

    double degree = 0.0;
    std::size_t path_count = 0;
    double mean_path_length = 0.0;
    PathSet paths;
    std::vector<double> path_means;
    std::vector<double> path_weights;
    NormativeSummary summary;
};

struct RelativeReport {
    AlignmentReport first;
    AlignmentReport second;
    double relative = 0.0; // first.degree - second.degree, positive favors first
};

struct MatrixCell {
    std::optional<double> degree;
    std::optional<ErrorCode> error;
    std::string message;
};

struct MatrixReport {
    std::vector<std::string> norms;  // row ids
    std::vector<std::string> values; // column ids
    std::vector<std::string> agents;
    int horizon = 3;
    Weighting weighting = Weighting::uniform;
    std::vector<std::vector<MatrixCell>> cells; // [norm][value]
};

/// Degree of alignment aggregated over a value set and an agent set: the
/// norm list is applied in order, maximal paths are enumerated up to the
/// horizon, each path contributes the mean preference change over its
/// transitions, and paths are averaged uniformly or by normalized
/// probability products. Throws NoPaths when the normative world admits no
/// path from the initial states.
AlignmentReport aggregated_alignment(const World& world, std::span<const Norm> norms,
                                     std::span<const Agent> agents,
                                     std::span<const std::string> values,
                                     const AlignmentOptions& opts = {});

/// Single norm/value/agent specialization.
AlignmentReport degree_of_alignment(const World& world, const Norm& norm, const Agent& agent,
                                    const std::string& value,
                                    const AlignmentOptions& opts = {});

/// degree(n1) - degree(n2) over the same scope; positive means n1 is the
/// better-aligned norm.
RelativeReport relative_alignment(const World& world, const Norm& n1, const Norm& n2,
                                  std::span<const Agent> agents,
                                  std::span<const std::string> values,
                                  const AlignmentOptions& opts = {});

/// Norm x value grid over a shared agent set. A failing cell records its
/// error instead of aborting the rest of the matrix.
MatrixReport alignment_matrix(const World& world, std::span<const Norm> norms,
                              std::span<const std::string> values,
                              std::span<const Agent> agents,
                              const AlignmentOptions& opts = {});

/// Deterministic pairwise (cascade) sum, independent of thread schedule.
double pairwise_sum(std::span<const double> values);

} // namespace valign
