#include "tdm/view.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <json.hpp>

namespace tdm {

std::string_view to_string(OutputFormat f) {
    switch (f) {
    case OutputFormat::svg:
        return "svg";
    case OutputFormat::json:
        return "json";
    case OutputFormat::dot:
        return "dot";
    }
    return "svg";
}

OutputFormat parse_output_format(std::string_view s) {
    if (s == "svg") return OutputFormat::svg;
    if (s == "json") return OutputFormat::json;
    if (s == "dot") return OutputFormat::dot;
    throw FilterError(fmt::format("format must be svg, json or dot, got '{}'", s));
}

namespace {

std::vector<ViewModel> panels(const Tdm& tdm, const LevelPartition& partition, const FilterSpec& spec,
                              const RenderOptions& options) {
    if (options.strip) return strip_views(tdm, partition, spec, {options.include_empty, options.hide_greyed});
    return {compose_view(tdm, partition, spec)};
}

nlohmann::ordered_json panel_json(const LevelPartition& partition, const ViewModel& view) {
    using nlohmann::ordered_json;
    ordered_json p;
    p["level_index"] = view.level_index;
    p["mode"] = to_string(view.spec.mode);
    p["active_levels"] = view.active_levels;
    p["levels"] = ordered_json::array();
    for (auto k : view.active_levels) {
        ordered_json selected = ordered_json::array();
        ordered_json greyed = ordered_json::array();
        for (auto i : partition.level(k)) {
            (view.status.at(i) == EdgeStatus::selected ? selected : greyed).push_back(Tdm::edge_id(i));
        }
        p["levels"].push_back({{"level", k}, {"selected", std::move(selected)}, {"greyed", std::move(greyed)}});
    }
    p["selection"] = ordered_json::object();
    for (const auto& [i, status] : view.status) p["selection"][Tdm::edge_id(i)] = to_string(status);
    return p;
}

nlohmann::ordered_json report_json(const Tdm& tdm, const FilterSpec& spec, const RenderOptions& options,
                                   bool with_scene) {
    using nlohmann::ordered_json;
    auto partition = partition_levels(tdm);
    ordered_json doc;
    doc["query"] = filter_to_query(spec);
    doc["strip"] = options.strip;
    doc["panels"] = ordered_json::array();
    for (const auto& view : panels(tdm, partition, spec, options)) {
        auto p = panel_json(partition, view);
        if (with_scene) p["scene"] = scene_to_json(build_scene(tdm, view, options.layout, options.hide_greyed));
        doc["panels"].push_back(std::move(p));
    }
    return doc;
}

} // namespace

std::string render_view(const Tdm& tdm, const FilterSpec& spec, const RenderOptions& options) {
    spec.validate(tdm);
    options.layout.validate();
    auto partition = partition_levels(tdm);
    switch (options.format) {
    case OutputFormat::svg:
        if (options.strip) {
            return emit_level_strip(tdm, partition, spec, options.layout,
                                    {options.include_empty, options.hide_greyed});
        }
        return emit_svg(build_scene(tdm, compose_view(tdm, partition, spec), options.layout, options.hide_greyed));
    case OutputFormat::dot:
        if (options.strip) throw FilterError("level strips are available as svg or json only");
        return emit_dot(build_scene(tdm, compose_view(tdm, partition, spec), options.layout, options.hide_greyed));
    case OutputFormat::json:
        return report_json(tdm, spec, options, true).dump(2) + "\n";
    }
    throw InvariantError("unhandled output format");
}

std::string selection_report(const Tdm& tdm, const FilterSpec& spec, const RenderOptions& options) {
    spec.validate(tdm);
    return report_json(tdm, spec, options, false).dump(2) + "\n";
}

ModelStats compute_stats(const Tdm& tdm) {
    ModelStats s;
    s.vertices = tdm.vertices().size();
    s.edges = tdm.edges().size();
    s.zero_coverage_sets = tdm.diagnostics().size();
    s.level_edges.assign(s.vertices, 0);
    s.level_coverage.assign(s.vertices, 0);
    for (const auto& e : tdm.edges()) {
        s.level_edges.at(e.arity() - 1) += 1;
        s.level_coverage.at(e.arity() - 1) += e.coverage;
        s.total_coverage += e.coverage;
        s.total_correct += e.correct;
        auto bin = static_cast<std::size_t>((e.correct * 10) / e.coverage);
        s.achievement_histogram.at(std::min<std::size_t>(bin, 9)) += 1;
    }
    return s;
}

std::string stats_to_json(const ModelStats& s) {
    nlohmann::ordered_json j;
    j["vertices"] = s.vertices;
    j["edges"] = s.edges;
    j["zero_coverage_sets"] = s.zero_coverage_sets;
    j["levels"] = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < s.level_edges.size(); ++k) {
        j["levels"].push_back({{"level", k + 1}, {"edges", s.level_edges[k]}, {"coverage", s.level_coverage[k]}});
    }
    j["total_coverage"] = s.total_coverage;
    j["total_correct"] = s.total_correct;
    j["achievement_histogram"] = nlohmann::ordered_json::array();
    for (std::size_t b = 0; b < s.achievement_histogram.size(); ++b) {
        j["achievement_histogram"].push_back(
            {{"from", fmt::format("0.{}", b)}, {"to", b == 9 ? "1.0" : fmt::format("0.{}", b + 1)},
             {"edges", s.achievement_histogram[b]}});
    }
    return j.dump(2) + "\n";
}

std::string stats_to_text(const ModelStats& s) {
    std::string out = fmt::format("{} vertices, {} hyperedges, {} zero-coverage sets\n", s.vertices, s.edges,
                                  s.zero_coverage_sets);
    for (std::size_t k = 0; k < s.level_edges.size(); ++k) {
        out += fmt::format("level {}: {} edges, coverage {}\n", k + 1, s.level_edges[k], s.level_coverage[k]);
    }
    out += fmt::format("total coverage {}, correct {}\n", s.total_coverage, s.total_correct);
    out += "achievement histogram:\n";
    for (std::size_t b = 0; b < s.achievement_histogram.size(); ++b) {
        out += fmt::format("  [{:.1f}, {:.1f}{} {}\n", b / 10.0, (b + 1) / 10.0, b == 9 ? "]" : ")",
                           s.achievement_histogram[b]);
    }
    return out;
}

} // namespace tdm
