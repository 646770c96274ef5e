#pragma once

#include <optional>
#include <string>

#include "valign/alignment.hpp"

namespace valign {

enum class Format { table, csv, json };

std::optional<Format> parse_format(const std::string& text);

/// Fixed six-decimal rendering used by the human-readable formats. The json
/// format keeps full double precision instead so that re-parsing the output
/// reproduces the exact numbers.
std::string format_number(double value);

std::string path_to_string(const Path& path);

std::string render_alignment(const AlignmentReport& report, Format format);
std::string render_relative(const RelativeReport& report, Format format);
std::string render_matrix(const MatrixReport& report, Format format);

/// Path listing for one norm scope; deltas are per-step preference changes,
/// present only when a value scope was requested.
struct PathsReport {
    std::vector<std::string> norms;
    int horizon = 3;
    PathSet paths;
    std::optional<std::string> value;
    std::optional<std::string> agent;
    std::vector<std::vector<double>> deltas; // [path][step], empty without value scope
};

std::string render_paths(const PathsReport& report, Format format);

/// cmd_validate diagnostics. Plain text; names every failing entity.
struct ValidationReport {
    std::size_t states = 0;
    std::size_t transitions = 0;
    std::size_t values = 0;
    std::size_t agents = 0;
    std::size_t norms = 0;
    SpecReport specs;

    bool ok() const { return specs.ok(); }
};

std::string render_validation(const ValidationReport& report);

/// Machine-readable error object emitted on domain failures (exit 1).
std::string error_json(ErrorCode code, const std::string& message);

} // namespace valign
