#pragma once

// Deterministic drawing of a composed view: circular vertex layout, loop /
// segment / hull edge glyphs, achievement colour ramp and coverage widths.

#include "tdm/hypergraph.hpp"
#include "tdm/levels.hpp"

#include <array>
#include <cstdint>
#include <json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tdm {

struct LayoutConfig {
    double width = 600.0;
    double height = 600.0;
    double vertex_radius = 18.0;
    /// Gap between the layout circle and the canvas border.
    double circle_margin = 70.0;
    /// Inflation of hulls around their member vertices.
    double hull_margin = 26.0;
    double stroke_min = 2.0;
    double stroke_max = 14.0;
    /// Radius of self-loop circles.
    double loop_offset = 16.0;

    /// Throws std::invalid_argument.
    void validate() const;
};

struct Point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point&) const = default;
};

/// Equally spaced on a circle in vertex order, starting at 12 o'clock and
/// running clockwise. A single vertex sits at the canvas centre.
std::vector<Point> layout_vertices(const Tdm& tdm, const LayoutConfig& config);

enum class GlyphKind { self_loop, segment, hull };

std::string_view to_string(GlyphKind k);

struct EdgeGeometry {
    GlyphKind kind = GlyphKind::segment;
    // self_loop: circle tangent to the vertex glyph, pushed away from the layout centre.
    Point center;
    double radius = 0.0;
    // segment endpoints
    Point from;
    Point to;
    // hull: convex hull of the member positions, and the outline path
    // (hull inflated by the hull margin with round corners).
    std::vector<Point> hull;
    std::string path;
};

EdgeGeometry edge_geometry(const Hyperedge& edge, std::span<const Point> positions, const LayoutConfig& config);

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    std::string hex() const;
    bool operator==(const Rgb&) const = default;
};

inline constexpr Rgb kRampLow{0xC2, 0x18, 0x5B};
inline constexpr Rgb kRampMid{0xA1, 0x88, 0x7F};
inline constexpr Rgb kRampHigh{0x1B, 0x5E, 0x20};
inline constexpr Rgb kGreyed{0x9E, 0x9E, 0x9E};
inline constexpr double kGreyedOpacity = 0.4;

/// Piecewise-linear sRGB ramp: 0 -> dark pink, 0.5 -> brown-pink, 1 -> dark green.
Rgb achievement_color(double t);

struct EdgeStyle {
    Rgb color;
    double width = 0.0;
    double opacity = 1.0;
    /// The achievement fed to the colour ramp; unset for greyed edges.
    std::optional<Rational> ramp_param;
};

/// `ranges` are the coverage/achievement ranges of the visible edges.
EdgeStyle style_edge(const Hyperedge& edge, EdgeStatus status, const LegendRanges& ranges,
                     const LayoutConfig& config);

struct VertexGlyph {
    std::string label;
    Point position;
};

struct EdgeGlyph {
    std::size_t edge_index = 0;
    std::string id;
    std::vector<std::string> topics;
    std::int64_t coverage = 0;
    Rational achievement;
    std::vector<Contributor> contributors;
    EdgeStatus status = EdgeStatus::selected;
    EdgeGeometry geometry;
    EdgeStyle style;
};

struct Legend {
    std::array<std::pair<double, Rgb>, 3> color_stops{
        {{0.0, kRampLow}, {0.5, kRampMid}, {1.0, kRampHigh}}};
    std::optional<LegendRanges> ranges;
    double stroke_min = 0.0;
    double stroke_max = 0.0;
};

struct SceneGraph {
    double width = 0.0;
    double height = 0.0;
    std::string title;
    double vertex_radius = 0.0;
    std::vector<VertexGlyph> vertices;
    /// Draw order: higher arity first, self-loops last.
    std::vector<EdgeGlyph> edges;
    Legend legend;
};

/// Height of the legend band appended below the layout canvas.
inline constexpr double kLegendHeight = 60.0;

SceneGraph build_scene(const Tdm& tdm, const ViewModel& view, const LayoutConfig& config,
                       bool hide_greyed = false);

/// Standalone SVG 1.1 document. Byte-identical for identical scenes.
std::string emit_svg(const SceneGraph& scene);

struct StripOptions {
    bool include_empty = false;
    bool hide_greyed = false;
};

/// One view per level 1..level_index (skipping empty levels unless
/// include_empty), each built with the spec's mode at that level.
std::vector<ViewModel> strip_views(const Tdm& tdm, const LevelPartition& partition, const FilterSpec& spec,
                                   const StripOptions& options);

/// Multi-panel SVG, panels side by side and sharing vertex positions.
std::string emit_level_strip(const Tdm& tdm, const LevelPartition& partition, const FilterSpec& spec,
                             const LayoutConfig& config, const StripOptions& options = {});

/// Graphviz export. Edges of arity >= 3 are drawn through a synthetic
/// point node.
std::string emit_dot(const SceneGraph& scene);

/// JSON mirror of the scene fields.
nlohmann::ordered_json scene_to_json(const SceneGraph& scene);

/// Formats with exactly three decimals; never emits "-0.000".
std::string fmt3(double v);

} // namespace tdm
