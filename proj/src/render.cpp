#include "tdm/render.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>
#include <stdexcept>

namespace tdm {

void LayoutConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(fmt::format("{} must be positive", name));
    };
    positive(width, "canvas width");
    positive(height, "canvas height");
    positive(vertex_radius, "vertex radius");
    positive(circle_margin, "circle margin");
    positive(hull_margin, "hull margin");
    positive(stroke_min, "minimum stroke width");
    positive(stroke_max, "maximum stroke width");
    positive(loop_offset, "self-loop offset");
    if (!(stroke_min < stroke_max)) throw std::invalid_argument("minimum stroke width must be below the maximum");
    if (!(std::min(width, height) / 2.0 > circle_margin)) {
        throw std::invalid_argument("circle margin leaves no room for the layout circle");
    }
}

std::string fmt3(double v) {
    auto s = fmt::format("{:.3f}", v);
    if (s == "-0.000") return "0.000";
    return s;
}

std::vector<Point> layout_vertices(const Tdm& tdm, const LayoutConfig& config) {
    config.validate();
    const auto n = tdm.vertices().size();
    const Point c{config.width / 2.0, config.height / 2.0};
    if (n == 1) return {c};
    const double r = std::min(config.width, config.height) / 2.0 - config.circle_margin;
    std::vector<Point> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Conventional angle: 90 degrees at 12 o'clock, decreasing clockwise.
        double theta = std::numbers::pi / 2.0 - 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        out.push_back({c.x + r * std::cos(theta), c.y - r * std::sin(theta)});
    }
    return out;
}

std::string_view to_string(GlyphKind k) {
    switch (k) {
    case GlyphKind::self_loop:
        return "loop";
    case GlyphKind::segment:
        return "segment";
    case GlyphKind::hull:
        return "hull";
    }
    return "unknown";
}

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew's monotone chain; drops collinear points. Counter-clockwise in raw
// coordinates (positive signed area).
std::vector<Point> convex_hull(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Point& a, const Point& b) {
                              return std::abs(a.x - b.x) < 1e-9 && std::abs(a.y - b.y) < 1e-9;
                          }),
              pts.end());
    if (pts.size() < 3) return pts;
    double extent = 0.0;
    for (const auto& p : pts) extent = std::max({extent, std::abs(p.x - pts[0].x), std::abs(p.y - pts[0].y)});
    const double eps = 1e-9 * std::max(1.0, extent * extent);

    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= eps) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= eps) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

// Outline of `hull` grown by `margin`: offset edges joined by circular arcs.
// Two points give a capsule, one point a circle.
std::string rounded_outline(const std::vector<Point>& hull, double m) {
    const auto M = fmt3(m);
    if (hull.size() == 1) {
        const auto& p = hull[0];
        return fmt::format("M {} {} A {} {} 0 1 1 {} {} A {} {} 0 1 1 {} {} Z", fmt3(p.x + m), fmt3(p.y), M, M,
                           fmt3(p.x - m), fmt3(p.y), M, M, fmt3(p.x + m), fmt3(p.y));
    }
    const auto n = hull.size();
    std::vector<Point> normals(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = hull[i];
        const auto& b = hull[(i + 1) % n];
        double dx = b.x - a.x;
        double dy = b.y - a.y;
        double len = std::hypot(dx, dy);
        normals[i] = {dy / len, -dx / len};
    }
    auto offset = [&](std::size_t vertex, std::size_t normal) {
        return Point{hull[vertex].x + m * normals[normal].x, hull[vertex].y + m * normals[normal].y};
    };
    auto start = offset(0, 0);
    std::string d = fmt::format("M {} {}", fmt3(start.x), fmt3(start.y));
    for (std::size_t i = 0; i < n; ++i) {
        auto j = (i + 1) % n;
        auto line_end = offset(j, i);
        auto arc_end = offset(j, j);
        d += fmt::format(" L {} {} A {} {} 0 0 1 {} {}", fmt3(line_end.x), fmt3(line_end.y), M, M, fmt3(arc_end.x),
                         fmt3(arc_end.y));
    }
    d += " Z";
    return d;
}

} // namespace

EdgeGeometry edge_geometry(const Hyperedge& edge, std::span<const Point> positions, const LayoutConfig& config) {
    EdgeGeometry g;
    if (edge.topics.empty()) throw std::invalid_argument("edge has no topics");
    for (auto t : edge.topics) {
        if (t >= positions.size()) throw std::out_of_range("edge references a vertex without a position");
    }
    if (edge.arity() == 1) {
        g.kind = GlyphKind::self_loop;
        const auto& v = positions[edge.topics[0]];
        Point centre{config.width / 2.0, config.height / 2.0};
        double dx = v.x - centre.x;
        double dy = v.y - centre.y;
        double len = std::hypot(dx, dy);
        if (len < 1e-9) {
            dx = 0.0;
            dy = -1.0;
        } else {
            dx /= len;
            dy /= len;
        }
        g.radius = config.loop_offset;
        const double d = config.vertex_radius + config.loop_offset;
        g.center = {v.x + d * dx, v.y + d * dy};
        return g;
    }
    if (edge.arity() == 2) {
        g.kind = GlyphKind::segment;
        g.from = positions[edge.topics[0]];
        g.to = positions[edge.topics[1]];
        return g;
    }
    g.kind = GlyphKind::hull;
    std::vector<Point> members;
    for (auto t : edge.topics) members.push_back(positions[t]);
    g.hull = convex_hull(std::move(members));
    g.path = rounded_outline(g.hull, config.hull_margin);
    return g;
}

std::string Rgb::hex() const { return fmt::format("#{:02X}{:02X}{:02X}", r, g, b); }

Rgb achievement_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    auto lerp = [](const Rgb& a, const Rgb& b, double s) {
        auto ch = [s](std::uint8_t x, std::uint8_t y) {
            return static_cast<std::uint8_t>(std::lround(x + (static_cast<double>(y) - x) * s));
        };
        return Rgb{ch(a.r, b.r), ch(a.g, b.g), ch(a.b, b.b)};
    };
    if (t <= 0.5) return lerp(kRampLow, kRampMid, t / 0.5);
    return lerp(kRampMid, kRampHigh, (t - 0.5) / 0.5);
}

EdgeStyle style_edge(const Hyperedge& edge, EdgeStatus status, const LegendRanges& ranges,
                     const LayoutConfig& config) {
    EdgeStyle s;
    if (ranges.cov_max == ranges.cov_min) {
        s.width = (config.stroke_min + config.stroke_max) / 2.0;
    } else {
        double f = static_cast<double>(edge.coverage - ranges.cov_min) /
                   static_cast<double>(ranges.cov_max - ranges.cov_min);
        s.width = config.stroke_min + (config.stroke_max - config.stroke_min) * std::clamp(f, 0.0, 1.0);
    }
    if (status == EdgeStatus::greyed) {
        s.color = kGreyed;
        s.opacity = kGreyedOpacity;
    } else {
        s.ramp_param = edge.achievement();
        s.color = achievement_color(s.ramp_param->to_double());
        s.opacity = 1.0;
    }
    return s;
}

namespace {

std::string view_title(const ViewModel& view) {
    if (view.active_levels.empty()) return "No levels";
    if (view.active_levels.size() == 1) {
        return fmt::format("Level {} ({})", view.active_levels.front(), to_string(view.spec.mode));
    }
    return fmt::format("Levels {}-{} ({})", view.active_levels.front(), view.active_levels.back(),
                       to_string(view.spec.mode));
}

} // namespace

SceneGraph build_scene(const Tdm& tdm, const ViewModel& view, const LayoutConfig& config, bool hide_greyed) {
    config.validate();
    SceneGraph scene;
    scene.width = config.width;
    scene.height = config.height + kLegendHeight;
    scene.title = view_title(view);
    scene.vertex_radius = config.vertex_radius;
    auto positions = layout_vertices(tdm, config);
    for (std::size_t i = 0; i < tdm.vertices().size(); ++i) {
        scene.vertices.push_back({tdm.vertices()[i].label, positions[i]});
    }
    scene.legend.ranges = view.legend;
    scene.legend.stroke_min = config.stroke_min;
    scene.legend.stroke_max = config.stroke_max;

    for (const auto& [index, status] : view.status) {
        if (hide_greyed && status == EdgeStatus::greyed) continue;
        const auto& e = tdm.edges().at(index);
        EdgeGlyph g;
        g.edge_index = index;
        g.id = Tdm::edge_id(index);
        g.topics = tdm.labels(e.topics);
        g.coverage = e.coverage;
        g.achievement = e.achievement();
        g.contributors = e.contributors;
        g.status = status;
        g.geometry = edge_geometry(e, positions, config);
        g.style = style_edge(e, status, *view.legend, config);
        scene.edges.push_back(std::move(g));
    }
    std::stable_sort(scene.edges.begin(), scene.edges.end(), [](const EdgeGlyph& a, const EdgeGlyph& b) {
        if (a.topics.size() != b.topics.size()) return a.topics.size() > b.topics.size();
        return a.edge_index < b.edge_index;
    });
    return scene;
}

namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        case '\'':
            out += "&apos;";
            break;
        default:
            out.push_back(c);
        }
    }
    return out;
}

constexpr std::string_view kRampId = "tdm-achievement-ramp";

void append_defs(std::string& out) {
    Legend legend;
    out += "  <defs>\n";
    out += fmt::format("    <linearGradient id=\"{}\" x1=\"0\" y1=\"0\" x2=\"1\" y2=\"0\">\n", kRampId);
    for (const auto& [offset, rgb] : legend.color_stops) {
        out += fmt::format("      <stop offset=\"{}\" stop-color=\"{}\"/>\n", fmt3(offset), rgb.hex());
    }
    out += "    </linearGradient>\n";
    out += "  </defs>\n";
}

std::string edge_data_attributes(const EdgeGlyph& g) {
    std::vector<std::string> contributors;
    for (const auto& c : g.contributors) {
        contributors.push_back(fmt::format("{}:{}:{}", c.question_id, c.attempts, c.correct));
    }
    return fmt::format(
        "data-edge-id=\"{}\" data-topics=\"{}\" data-coverage=\"{}\" data-achievement=\"{}/{}\" "
        "data-achievement-display=\"{}\" data-status=\"{}\" data-contributors=\"{}\"",
        xml_escape(g.id), xml_escape(fmt::format("{}", fmt::join(g.topics, ","))), g.coverage, g.achievement.num,
        g.achievement.den, g.achievement.to_fixed(2), to_string(g.status),
        xml_escape(fmt::format("{}", fmt::join(contributors, ";"))));
}

void append_edge(std::string& out, const EdgeGlyph& g, std::string_view indent) {
    const auto& geo = g.geometry;
    const auto& st = g.style;
    const auto cls = fmt::format("edge {} {}", to_string(geo.kind), to_string(g.status));
    const auto data = edge_data_attributes(g);
    switch (geo.kind) {
    case GlyphKind::self_loop:
        out += fmt::format("{}<circle class=\"{}\" {} cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"{}\" "
                           "stroke-width=\"{}\" stroke-opacity=\"{}\"/>\n",
                           indent, cls, data, fmt3(geo.center.x), fmt3(geo.center.y), fmt3(geo.radius),
                           st.color.hex(), fmt3(st.width), fmt3(st.opacity));
        break;
    case GlyphKind::segment:
        out += fmt::format("{}<line class=\"{}\" {} x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" "
                           "stroke-width=\"{}\" stroke-opacity=\"{}\" stroke-linecap=\"round\"/>\n",
                           indent, cls, data, fmt3(geo.from.x), fmt3(geo.from.y), fmt3(geo.to.x), fmt3(geo.to.y),
                           st.color.hex(), fmt3(st.width), fmt3(st.opacity));
        break;
    case GlyphKind::hull:
        out += fmt::format("{}<path class=\"{}\" {} d=\"{}\" fill=\"{}\" fill-opacity=\"{}\" stroke=\"{}\" "
                           "stroke-width=\"{}\" stroke-opacity=\"{}\" stroke-linejoin=\"round\"/>\n",
                           indent, cls, data, geo.path, st.color.hex(), fmt3(0.25 * st.opacity), st.color.hex(),
                           fmt3(st.width), fmt3(st.opacity));
        break;
    }
}

void append_legend(std::string& out, const SceneGraph& scene, std::string_view indent) {
    const double top = scene.height - kLegendHeight;
    out += fmt::format("{}<g class=\"legend\" transform=\"translate(0,{})\">\n", indent, fmt3(top));
    out += fmt::format("{}  <text x=\"20.000\" y=\"14.000\" font-family=\"sans-serif\" font-size=\"11\" "
                       "fill=\"#37474F\">achievement</text>\n",
                       indent);
    out += fmt::format("{}  <rect class=\"color-ramp\" x=\"20.000\" y=\"20.000\" width=\"160.000\" height=\"12.000\" "
                       "fill=\"url(#{})\"/>\n",
                       indent, kRampId);
    const std::array<std::pair<double, const char*>, 3> ticks{{{20.0, "0%"}, {100.0, "50%"}, {180.0, "100%"}}};
    for (const auto& [x, label] : ticks) {
        out += fmt::format("{}  <text x=\"{}\" y=\"46.000\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                           "font-size=\"10\" fill=\"#37474F\">{}</text>\n",
                           indent, fmt3(x), label);
    }
    if (scene.legend.ranges) {
        const auto& r = *scene.legend.ranges;
        const double mid = (scene.legend.stroke_min + scene.legend.stroke_max) / 2.0;
        const double lo = r.cov_min == r.cov_max ? mid : scene.legend.stroke_min;
        const double hi = r.cov_min == r.cov_max ? mid : scene.legend.stroke_max;
        out += fmt::format("{}  <text x=\"220.000\" y=\"14.000\" font-family=\"sans-serif\" font-size=\"11\" "
                           "fill=\"#37474F\">coverage</text>\n",
                           indent);
        out += fmt::format("{}  <line class=\"width-ramp min\" x1=\"220.000\" y1=\"26.000\" x2=\"260.000\" "
                           "y2=\"26.000\" stroke=\"#607D8B\" stroke-width=\"{}\"/>\n",
                           indent, fmt3(lo));
        out += fmt::format("{}  <text x=\"240.000\" y=\"46.000\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                           "font-size=\"10\" fill=\"#37474F\">{}</text>\n",
                           indent, r.cov_min);
        out += fmt::format("{}  <line class=\"width-ramp max\" x1=\"280.000\" y1=\"26.000\" x2=\"320.000\" "
                           "y2=\"26.000\" stroke=\"#607D8B\" stroke-width=\"{}\"/>\n",
                           indent, fmt3(hi));
        out += fmt::format("{}  <text x=\"300.000\" y=\"46.000\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                           "font-size=\"10\" fill=\"#37474F\">{}</text>\n",
                           indent, r.cov_max);
    }
    out += fmt::format("{}</g>\n", indent);
}

// Body of one scene, positioned in its own coordinate frame.
void append_scene(std::string& out, const SceneGraph& scene, std::string_view indent) {
    out += fmt::format("{}<title>{}</title>\n", indent, xml_escape(scene.title));
    out += fmt::format("{}<rect class=\"background\" x=\"0.000\" y=\"0.000\" width=\"{}\" height=\"{}\" "
                       "fill=\"#FFFFFF\"/>\n",
                       indent, fmt3(scene.width), fmt3(scene.height));
    out += fmt::format("{}<text class=\"title\" x=\"12.000\" y=\"22.000\" font-family=\"sans-serif\" "
                       "font-size=\"14\" fill=\"#263238\">{}</text>\n",
                       indent, xml_escape(scene.title));
    const auto inner = fmt::format("{}  ", indent);
    out += fmt::format("{}<g class=\"edges\">\n", indent);
    for (const auto& g : scene.edges) append_edge(out, g, inner);
    out += fmt::format("{}</g>\n", indent);
    out += fmt::format("{}<g class=\"vertices\">\n", indent);
    const double r = scene.vertex_radius;
    for (const auto& v : scene.vertices) {
        out += fmt::format("{}<g class=\"vertex\" data-topic=\"{}\">\n", inner, xml_escape(v.label));
        out += fmt::format("{}  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#FFFFFF\" stroke=\"#37474F\" "
                           "stroke-width=\"2.000\"/>\n",
                           inner, fmt3(v.position.x), fmt3(v.position.y), fmt3(r));
        out += fmt::format("{}  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\" dominant-baseline=\"central\" "
                           "font-family=\"sans-serif\" font-size=\"12\" fill=\"#263238\">{}</text>\n",
                           inner, fmt3(v.position.x), fmt3(v.position.y), xml_escape(v.label));
        out += fmt::format("{}</g>\n", inner);
    }
    out += fmt::format("{}</g>\n", indent);
    append_legend(out, scene, indent);
}

std::string svg_open(double width, double height) {
    return fmt::format("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
                       "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" "
                       "viewBox=\"0 0 {0} {1}\">\n",
                       fmt3(width), fmt3(height));
}

} // namespace

std::string emit_svg(const SceneGraph& scene) {
    std::string out = svg_open(scene.width, scene.height);
    append_defs(out);
    out += "  <g class=\"scene\">\n";
    append_scene(out, scene, "    ");
    out += "  </g>\n";
    out += "</svg>\n";
    return out;
}

std::vector<ViewModel> strip_views(const Tdm& tdm, const LevelPartition& partition, const FilterSpec& spec,
                                   const StripOptions& options) {
    spec.validate(tdm);
    const auto last = spec.level.value_or(partition.count());
    std::vector<ViewModel> views;
    for (std::size_t k = 1; k <= last; ++k) {
        if (partition.level(k).empty() && !options.include_empty) continue;
        auto panel_spec = spec;
        panel_spec.level = k;
        views.push_back(compose_view(tdm, partition, panel_spec));
    }
    return views;
}

std::string emit_level_strip(const Tdm& tdm, const LevelPartition& partition, const FilterSpec& spec,
                             const LayoutConfig& config, const StripOptions& options) {
    config.validate();
    auto views = strip_views(tdm, partition, spec, options);
    const double panel_w = config.width;
    const double total_w = panel_w * static_cast<double>(std::max<std::size_t>(views.size(), 1));
    std::string out = svg_open(total_w, config.height + kLegendHeight);
    append_defs(out);
    for (std::size_t p = 0; p < views.size(); ++p) {
        const auto& view = views[p];
        auto scene = build_scene(tdm, view, config, options.hide_greyed);
        out += fmt::format("  <g class=\"panel\" data-level=\"{}\" data-mode=\"{}\" transform=\"translate({},0)\">\n",
                           view.level_index, to_string(view.spec.mode), fmt3(panel_w * static_cast<double>(p)));
        append_scene(out, scene, "    ");
        out += "  </g>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string emit_dot(const SceneGraph& scene) {
    auto quote = [](std::string_view s) {
        std::string out = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') out.push_back('\\');
            out.push_back(c);
        }
        return out + "\"";
    };
    std::string out = "graph tdm {\n  layout=neato;\n  node [shape=circle, fontname=\"sans-serif\"];\n";
    for (const auto& v : scene.vertices) {
        // Graphviz uses points with y growing upwards.
        out += fmt::format("  {} [pos=\"{},{}!\"];\n", quote(v.label), fmt3(v.position.x),
                           fmt3(scene.height - kLegendHeight - v.position.y));
    }
    for (const auto& g : scene.edges) {
        const auto attrs = fmt::format("color=\"{}\", penwidth={}, tooltip={}", g.style.color.hex(),
                                       fmt3(g.style.width), quote(fmt::format("{}: coverage {}, achievement {}/{}",
                                                                              g.id, g.coverage, g.achievement.num,
                                                                              g.achievement.den)));
        if (g.topics.size() == 1) {
            out += fmt::format("  {0} -- {0} [id={1}, {2}];\n", quote(g.topics[0]), quote(g.id), attrs);
        } else if (g.topics.size() == 2) {
            out += fmt::format("  {} -- {} [id={}, {}];\n", quote(g.topics[0]), quote(g.topics[1]), quote(g.id),
                               attrs);
        } else {
            const auto aux = quote(fmt::format("aux_{}", g.id));
            out += fmt::format("  {} [shape=point, label=\"\", comment=\"synthetic hyperedge node\"];\n", aux);
            for (const auto& t : g.topics) {
                out += fmt::format("  {} -- {} [id={}, {}];\n", aux, quote(t), quote(fmt::format("{}:{}", g.id, t)),
                                   attrs);
            }
        }
    }
    out += "}\n";
    return out;
}

nlohmann::ordered_json scene_to_json(const SceneGraph& scene) {
    using nlohmann::ordered_json;
    auto point = [](const Point& p) { return ordered_json{{"x", fmt3(p.x)}, {"y", fmt3(p.y)}}; };
    ordered_json j;
    j["width"] = fmt3(scene.width);
    j["height"] = fmt3(scene.height);
    j["title"] = scene.title;
    j["vertices"] = ordered_json::array();
    for (const auto& v : scene.vertices) j["vertices"].push_back({{"label", v.label}, {"position", point(v.position)}});
    j["edges"] = ordered_json::array();
    for (const auto& g : scene.edges) {
        ordered_json e;
        e["id"] = g.id;
        e["topics"] = g.topics;
        e["coverage"] = g.coverage;
        e["achievement_num"] = g.achievement.num;
        e["achievement_den"] = g.achievement.den;
        e["status"] = to_string(g.status);
        e["kind"] = to_string(g.geometry.kind);
        switch (g.geometry.kind) {
        case GlyphKind::self_loop:
            e["center"] = point(g.geometry.center);
            e["radius"] = fmt3(g.geometry.radius);
            break;
        case GlyphKind::segment:
            e["from"] = point(g.geometry.from);
            e["to"] = point(g.geometry.to);
            break;
        case GlyphKind::hull:
            e["path"] = g.geometry.path;
            break;
        }
        e["color"] = g.style.color.hex();
        e["width"] = fmt3(g.style.width);
        e["opacity"] = fmt3(g.style.opacity);
        j["edges"].push_back(std::move(e));
    }
    ordered_json legend;
    legend["color_stops"] = ordered_json::array();
    for (const auto& [offset, rgb] : scene.legend.color_stops) {
        legend["color_stops"].push_back({{"offset", fmt3(offset)}, {"color", rgb.hex()}});
    }
    if (scene.legend.ranges) {
        const auto& r = *scene.legend.ranges;
        legend["coverage"] = {{"min", r.cov_min}, {"max", r.cov_max}};
        legend["achievement"] = {{"min", r.achv_min.to_fixed(2)}, {"max", r.achv_max.to_fixed(2)}};
    } else {
        legend["coverage"] = nullptr;
        legend["achievement"] = nullptr;
    }
    legend["stroke"] = {{"min", fmt3(scene.legend.stroke_min)}, {"max", fmt3(scene.legend.stroke_max)}};
    j["legend"] = std::move(legend);
    j["z_order"] = ordered_json::array();
    for (const auto& g : scene.edges) j["z_order"].push_back(g.id);
    return j;
}

} // namespace tdm
