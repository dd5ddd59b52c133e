#pragma once

// One entry point from (model, filter, output options) to document bytes,
// shared by the command line and the HTTP service.

#include "tdm/hypergraph.hpp"
#include "tdm/levels.hpp"
#include "tdm/render.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tdm {

enum class OutputFormat { svg, json, dot };

std::string_view to_string(OutputFormat f);
/// Throws FilterError for anything but svg, json or dot.
OutputFormat parse_output_format(std::string_view s);

struct RenderOptions {
    OutputFormat format = OutputFormat::svg;
    bool strip = false;
    bool include_empty = false;
    bool hide_greyed = false;
    LayoutConfig layout;
};

/// The rendered view document. Throws FilterError for inconsistent
/// spec/options (e.g. a strip requested as DOT).
std::string render_view(const Tdm& tdm, const FilterSpec& spec, const RenderOptions& options);

/// Selection report: per panel, edge id -> status, in canonical edge order.
std::string selection_report(const Tdm& tdm, const FilterSpec& spec, const RenderOptions& options);

/// Per-level edge counts, coverage totals and an achievement histogram.
struct ModelStats {
    std::vector<std::size_t> level_edges;
    std::vector<std::int64_t> level_coverage;
    std::int64_t total_coverage = 0;
    std::int64_t total_correct = 0;
    /// Ten bins [0, 0.1), ..., [0.9, 1.0]; edge counts.
    std::array<std::size_t, 10> achievement_histogram{};
    std::size_t vertices = 0;
    std::size_t edges = 0;
    std::size_t zero_coverage_sets = 0;
};

ModelStats compute_stats(const Tdm& tdm);
std::string stats_to_json(const ModelStats& stats);
std::string stats_to_text(const ModelStats& stats);

} // namespace tdm
