#include "valign/report.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "valign/version.hpp"

namespace valign {
namespace {

using json = nlohmann::ordered_json;

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char c : text) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

json summary_json(const NormativeSummary& summary) {
    json out;
    out["states_added"] = summary.states_added;
    out["states_removed"] = summary.states_removed;
    out["transitions_forbidden"] = summary.transitions_forbidden;
    out["transitions_rewritten"] = summary.transitions_rewritten;
    return out;
}

json steps_json(const Path& path) {
    json steps = json::array();
    for (const Transition& t : path.steps) {
        json step;
        step["from"] = t.from;
        step["action"] = t.action;
        step["to"] = t.to;
        if (t.prob) step["prob"] = *t.prob;
        steps.push_back(std::move(step));
    }
    return steps;
}

json alignment_json(const AlignmentReport& report) {
    json out;
    out["version"] = k_version;
    out["report"] = "alignment";
    out["norms"] = report.norms;
    out["values"] = report.values;
    out["agents"] = report.agents;
    out["horizon"] = report.horizon;
    out["weighting"] = to_string(report.weighting);
    out["degree"] = report.degree;
    out["path_count"] = report.path_count;
    out["mean_path_length"] = report.mean_path_length;
    out["summary"] = summary_json(report.summary);
    json paths = json::array();
    for (std::size_t i = 0; i < report.paths.paths.size(); ++i) {
        json p;
        p["weight"] = report.path_weights[i];
        p["mean"] = report.path_means[i];
        p["steps"] = steps_json(report.paths.paths[i]);
        paths.push_back(std::move(p));
    }
    out["paths"] = std::move(paths);
    return out;
}

void meta_csv(std::ostringstream& out, const char* report,
              const std::vector<std::string>& norms, const std::vector<std::string>& values,
              const std::vector<std::string>& agents, int horizon, Weighting weighting) {
    out << "key,value\n";
    out << "version," << k_version << "\n";
    out << "report," << report << "\n";
    if (!norms.empty()) out << "norms," << csv_field(join(norms, ";")) << "\n";
    if (!values.empty()) out << "values," << csv_field(join(values, ";")) << "\n";
    if (!agents.empty()) out << "agents," << csv_field(join(agents, ";")) << "\n";
    out << "horizon," << horizon << "\n";
    out << "weighting," << to_string(weighting) << "\n";
}

std::string matrix_cell_text(const MatrixCell& cell) {
    if (cell.degree) return format_number(*cell.degree);
    return std::string("error:") + to_string(*cell.error);
}

} // namespace

std::optional<Format> parse_format(const std::string& text) {
    if (text == "table") return Format::table;
    if (text == "csv") return Format::csv;
    if (text == "json") return Format::json;
    return std::nullopt;
}

std::string format_number(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6f", value);
    return buffer;
}

std::string path_to_string(const Path& path) {
    std::string out = path.first_state();
    for (const Transition& t : path.steps) {
        out += " -" + t.action + "-> " + t.to;
    }
    return out;
}

std::string render_alignment(const AlignmentReport& report, Format format) {
    if (format == Format::json) return alignment_json(report).dump(2) + "\n";

    if (format == Format::csv) {
        std::ostringstream out;
        meta_csv(out, "alignment", report.norms, report.values, report.agents, report.horizon,
                 report.weighting);
        out << "degree," << format_number(report.degree) << "\n";
        out << "path_count," << report.path_count << "\n";
        out << "mean_path_length," << format_number(report.mean_path_length) << "\n";
        out << "states_added," << report.summary.states_added << "\n";
        out << "states_removed," << report.summary.states_removed << "\n";
        out << "transitions_forbidden," << report.summary.transitions_forbidden << "\n";
        out << "transitions_rewritten," << report.summary.transitions_rewritten << "\n";
        out << "\npath,weight,mean,steps\n";
        for (std::size_t i = 0; i < report.paths.paths.size(); ++i)
            out << (i + 1) << "," << format_number(report.path_weights[i]) << ","
                << format_number(report.path_means[i]) << ","
                << csv_field(path_to_string(report.paths.paths[i])) << "\n";
        return out.str();
    }

    std::ostringstream out;
    out << "valign " << k_version << " alignment\n";
    out << "norms:     " << join(report.norms, ", ") << "\n";
    out << "values:    " << join(report.values, ", ") << "\n";
    out << "agents:    " << join(report.agents, ", ") << "\n";
    out << "horizon:   " << report.horizon << "\n";
    out << "weighting: " << to_string(report.weighting) << "\n";
    out << "degree:    " << format_number(report.degree) << "\n";
    out << "paths:     " << report.path_count
        << " (mean length " << format_number(report.mean_path_length) << ")\n";
    out << "norm effect: +" << report.summary.states_added << " states, -"
        << report.summary.transitions_forbidden << " transitions, ~"
        << report.summary.transitions_rewritten << " rewritten\n";
    out << "per-path breakdown:\n";
    for (std::size_t i = 0; i < report.paths.paths.size(); ++i)
        out << "  " << (i + 1) << "  weight " << format_number(report.path_weights[i])
            << "  mean " << format_number(report.path_means[i]) << "  "
            << path_to_string(report.paths.paths[i]) << "\n";
    return out.str();
}

std::string render_relative(const RelativeReport& report, Format format) {
    if (format == Format::json) {
        json out;
        out["version"] = k_version;
        out["report"] = "relative";
        out["first"] = alignment_json(report.first);
        out["second"] = alignment_json(report.second);
        out["relative"] = report.relative;
        return out.dump(2) + "\n";
    }

    const std::string first_norm = join(report.first.norms, ";");
    const std::string second_norm = join(report.second.norms, ";");
    if (format == Format::csv) {
        std::ostringstream out;
        meta_csv(out, "relative", {}, report.first.values, report.first.agents,
                 report.first.horizon, report.first.weighting);
        out << "first_norm," << csv_field(first_norm) << "\n";
        out << "first_degree," << format_number(report.first.degree) << "\n";
        out << "first_path_count," << report.first.path_count << "\n";
        out << "second_norm," << csv_field(second_norm) << "\n";
        out << "second_degree," << format_number(report.second.degree) << "\n";
        out << "second_path_count," << report.second.path_count << "\n";
        out << "relative," << format_number(report.relative) << "\n";
        return out.str();
    }

    std::ostringstream out;
    out << "valign " << k_version << " relative alignment\n";
    out << "values:    " << join(report.first.values, ", ") << "\n";
    out << "agents:    " << join(report.first.agents, ", ") << "\n";
    out << "horizon:   " << report.first.horizon << "\n";
    out << "weighting: " << to_string(report.first.weighting) << "\n";
    out << "first:     " << first_norm << "  degree " << format_number(report.first.degree)
        << "  paths " << report.first.path_count << "\n";
    out << "second:    " << second_norm << "  degree " << format_number(report.second.degree)
        << "  paths " << report.second.path_count << "\n";
    out << "relative:  " << format_number(report.relative) << " (positive favors first)\n";
    return out.str();
}

std::string render_matrix(const MatrixReport& report, Format format) {
    if (format == Format::json) {
        json out;
        out["version"] = k_version;
        out["report"] = "matrix";
        out["norms"] = report.norms;
        out["values"] = report.values;
        out["agents"] = report.agents;
        out["horizon"] = report.horizon;
        out["weighting"] = to_string(report.weighting);
        json cells = json::array();
        for (std::size_t i = 0; i < report.norms.size(); ++i)
            for (std::size_t j = 0; j < report.values.size(); ++j) {
                const MatrixCell& cell = report.cells[i][j];
                json c;
                c["norm"] = report.norms[i];
                c["value"] = report.values[j];
                if (cell.degree) {
                    c["degree"] = *cell.degree;
                } else {
                    c["error"] = to_string(*cell.error);
                    c["message"] = cell.message;
                }
                cells.push_back(std::move(c));
            }
        out["cells"] = std::move(cells);
        return out.dump(2) + "\n";
    }

    if (format == Format::csv) {
        std::ostringstream out;
        meta_csv(out, "matrix", {}, {}, report.agents, report.horizon, report.weighting);
        out << "\nnorm";
        for (const std::string& value : report.values) out << "," << csv_field(value);
        out << "\n";
        for (std::size_t i = 0; i < report.norms.size(); ++i) {
            out << csv_field(report.norms[i]);
            for (std::size_t j = 0; j < report.values.size(); ++j)
                out << "," << matrix_cell_text(report.cells[i][j]);
            out << "\n";
        }
        return out.str();
    }

    std::vector<std::size_t> widths;
    widths.push_back(4); // "norm"
    for (const std::string& id : report.norms) widths[0] = std::max(widths[0], id.size());
    for (std::size_t j = 0; j < report.values.size(); ++j) {
        std::size_t w = report.values[j].size();
        for (std::size_t i = 0; i < report.norms.size(); ++i)
            w = std::max(w, matrix_cell_text(report.cells[i][j]).size());
        widths.push_back(w);
    }
    auto pad = [](const std::string& text, std::size_t width) {
        return text + std::string(width - text.size(), ' ');
    };

    std::ostringstream out;
    out << "valign " << k_version << " alignment matrix\n";
    out << "agents: " << join(report.agents, ", ") << "  horizon: " << report.horizon
        << "  weighting: " << to_string(report.weighting) << "\n";
    out << pad("norm", widths[0]);
    for (std::size_t j = 0; j < report.values.size(); ++j)
        out << "  " << pad(report.values[j], widths[j + 1]);
    out << "\n";
    for (std::size_t i = 0; i < report.norms.size(); ++i) {
        out << pad(report.norms[i], widths[0]);
        for (std::size_t j = 0; j < report.values.size(); ++j)
            out << "  " << pad(matrix_cell_text(report.cells[i][j]), widths[j + 1]);
        out << "\n";
    }
    return out.str();
}

std::string render_paths(const PathsReport& report, Format format) {
    const bool has_deltas = !report.deltas.empty();

    if (format == Format::json) {
        json out;
        out["version"] = k_version;
        out["report"] = "paths";
        out["norms"] = report.norms;
        if (report.value) out["value"] = *report.value;
        if (report.agent) out["agent"] = *report.agent;
        out["horizon"] = report.horizon;
        out["path_count"] = report.paths.paths.size();
        json paths = json::array();
        for (std::size_t i = 0; i < report.paths.paths.size(); ++i) {
            json p;
            json steps = steps_json(report.paths.paths[i]);
            if (has_deltas)
                for (std::size_t j = 0; j < steps.size(); ++j)
                    steps[j]["delta"] = report.deltas[i][j];
            p["steps"] = std::move(steps);
            paths.push_back(std::move(p));
        }
        out["paths"] = std::move(paths);
        return out.dump(2) + "\n";
    }

    if (format == Format::csv) {
        std::ostringstream out;
        out << "key,value\n";
        out << "version," << k_version << "\n";
        out << "report,paths\n";
        out << "norms," << csv_field(join(report.norms, ";")) << "\n";
        if (report.value) out << "value," << csv_field(*report.value) << "\n";
        if (report.agent) out << "agent," << csv_field(*report.agent) << "\n";
        out << "horizon," << report.horizon << "\n";
        out << "path_count," << report.paths.paths.size() << "\n";
        out << "\npath,step,from,action,to,prob,delta\n";
        for (std::size_t i = 0; i < report.paths.paths.size(); ++i) {
            const Path& path = report.paths.paths[i];
            for (std::size_t j = 0; j < path.steps.size(); ++j) {
                const Transition& t = path.steps[j];
                out << (i + 1) << "," << (j + 1) << "," << csv_field(t.from) << ","
                    << csv_field(t.action) << "," << csv_field(t.to) << ",";
                if (t.prob) out << *t.prob;
                out << ",";
                if (has_deltas) out << format_number(report.deltas[i][j]);
                out << "\n";
            }
        }
        return out.str();
    }

    std::ostringstream out;
    out << "valign " << k_version << " paths\n";
    out << "norms: " << join(report.norms, ", ") << "  horizon: " << report.horizon
        << "  paths: " << report.paths.paths.size() << "\n";
    if (report.value)
        out << "value: " << *report.value << "  agent: " << (report.agent ? *report.agent : "")
            << "\n";
    for (std::size_t i = 0; i < report.paths.paths.size(); ++i) {
        out << "  " << (i + 1) << "  " << path_to_string(report.paths.paths[i]);
        if (has_deltas) {
            out << "  deltas";
            for (double d : report.deltas[i]) out << " " << format_number(d);
        }
        out << "\n";
    }
    return out.str();
}

std::string render_validation(const ValidationReport& report) {
    std::ostringstream out;
    out << "valign " << k_version << " validate\n";
    out << "states " << report.states << ", transitions " << report.transitions << ", values "
        << report.values << ", agents " << report.agents << ", norms " << report.norms << "\n";
    for (const SpecIssue& issue : report.specs.issues)
        out << issue.location << ": " << to_string(issue.code) << ": " << issue.message << "\n";
    if (report.ok())
        out << "ok\n";
    else
        out << "failed: " << report.specs.issues.size() << " issue(s)\n";
    return out.str();
}

std::string error_json(ErrorCode code, const std::string& message) {
    json out;
    out["error"]["code"] = to_string(code);
    out["error"]["message"] = message;
    return out.dump() + "\n";
}

} // namespace valign
