#include "tdm/levels.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fmt/format.h>
#include <set>

namespace tdm {

LevelPartition partition_levels(const Tdm& tdm) {
    LevelPartition p;
    p.levels.resize(tdm.vertices().size());
    for (std::size_t i = 0; i < tdm.edges().size(); ++i) {
        p.levels.at(tdm.edges()[i].arity() - 1).push_back(i);
    }
    return p;
}

std::string_view to_string(TopicMatch m) { return m == TopicMatch::any ? "any" : "all"; }
std::string_view to_string(ViewMode m) { return m == ViewMode::cumulative ? "cumulative" : "accumulative"; }
std::string_view to_string(Extremum e) { return e == Extremum::level_min ? "level-min" : "level-max"; }
std::string_view to_string(EdgeStatus s) { return s == EdgeStatus::selected ? "selected" : "greyed"; }

bool FilterSpec::has_predicates() const noexcept {
    return !topics.empty() || achv_min || achv_max || achv_extremum || cov_min || cov_max || cov_extremum;
}

void FilterSpec::validate() const {
    const Rational one{1, 1};
    if ((achv_min || achv_max) && achv_extremum) {
        throw FilterError("achievement bounds and extremum selector are mutually exclusive");
    }
    if ((cov_min || cov_max) && cov_extremum) {
        throw FilterError("coverage bounds and extremum selector are mutually exclusive");
    }
    if (achv_min && *achv_min > one) throw FilterError("achv_min must lie in [0, 1]");
    if (achv_max && *achv_max > one) throw FilterError("achv_max must lie in [0, 1]");
    if (achv_min && achv_max && *achv_min > *achv_max) throw FilterError("achv_min exceeds achv_max");
    if (cov_min && *cov_min < 0) throw FilterError("cov_min must be non-negative");
    if (cov_max && *cov_max < 0) throw FilterError("cov_max must be non-negative");
    if (cov_min && cov_max && *cov_min > *cov_max) throw FilterError("cov_min exceeds cov_max");
    if (level && *level < 1) throw FilterError("level must be at least 1");
    std::set<std::string> seen;
    for (const auto& t : topics) {
        if (t.empty()) throw FilterError("empty topic label in filter");
        if (!seen.insert(t).second) throw FilterError(fmt::format("topic '{}' listed twice", t));
    }
}

void FilterSpec::validate(const Tdm& tdm) const {
    validate();
    for (const auto& t : topics) {
        try {
            tdm.find_topic(t);
        } catch (const std::out_of_range&) {
            throw FilterError(fmt::format("unknown topic '{}'", t));
        }
    }
    if (level && *level > tdm.vertices().size()) {
        throw FilterError(fmt::format("level {} out of range 1..{}", *level, tdm.vertices().size()));
    }
}

namespace {

std::string percent_encode(std::string_view s) {
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out += fmt::format("%{:02X}", c);
        }
    }
    return out;
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::string percent_decode(std::string_view s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '+') {
            out.push_back(' ');
        } else if (s[i] == '%') {
            if (i + 2 >= s.size()) throw FilterError("truncated percent escape");
            int hi = hex_value(s[i + 1]);
            int lo = hex_value(s[i + 2]);
            if (hi < 0 || lo < 0) throw FilterError("invalid percent escape");
            out.push_back(static_cast<char>(hi * 16 + lo));
            i += 2;
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

std::int64_t parse_count(const std::string& key, const std::string& value) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size() || v < 0) {
        throw FilterError(fmt::format("{} must be a non-negative integer, got '{}'", key, value));
    }
    return v;
}

Rational parse_fraction(const std::string& key, const std::string& value) {
    try {
        return Rational::parse_decimal(value);
    } catch (const std::invalid_argument&) {
        throw FilterError(fmt::format("{} must be a decimal in [0, 1], got '{}'", key, value));
    }
}

Extremum parse_extremum(const std::string& key, const std::string& value) {
    if (value == "level-min") return Extremum::level_min;
    if (value == "level-max") return Extremum::level_max;
    throw FilterError(fmt::format("{} must be level-min or level-max, got '{}'", key, value));
}

} // namespace

std::string filter_to_query(const FilterSpec& spec) {
    std::vector<std::string> parts;
    if (!spec.topics.empty()) {
        std::vector<std::string> enc;
        for (const auto& t : spec.topics) enc.push_back(percent_encode(t));
        parts.push_back(fmt::format("topics={}", fmt::join(enc, ",")));
    }
    if (!spec.topics.empty() || spec.topic_mode != TopicMatch::any) {
        parts.push_back(fmt::format("topic_mode={}", to_string(spec.topic_mode)));
    }
    if (spec.achv_min) parts.push_back("achv_min=" + spec.achv_min->to_decimal());
    if (spec.achv_max) parts.push_back("achv_max=" + spec.achv_max->to_decimal());
    if (spec.achv_extremum) parts.push_back(fmt::format("achv_extremum={}", to_string(*spec.achv_extremum)));
    if (spec.cov_min) parts.push_back(fmt::format("cov_min={}", *spec.cov_min));
    if (spec.cov_max) parts.push_back(fmt::format("cov_max={}", *spec.cov_max));
    if (spec.cov_extremum) parts.push_back(fmt::format("cov_extremum={}", to_string(*spec.cov_extremum)));
    if (spec.level) parts.push_back(fmt::format("level={}", *spec.level));
    parts.push_back(fmt::format("mode={}", to_string(spec.mode)));
    return fmt::format("{}", fmt::join(parts, "&"));
}

QueryParams parse_query(std::string_view query) {
    if (query.starts_with('?')) query.remove_prefix(1);
    QueryParams out;
    std::size_t pos = 0;
    while (pos < query.size()) {
        auto amp = query.find('&', pos);
        auto item = query.substr(pos, amp == std::string_view::npos ? std::string_view::npos : amp - pos);
        pos = amp == std::string_view::npos ? query.size() : amp + 1;
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string_view::npos) {
            out.emplace_back(percent_decode(item), "");
        } else {
            out.emplace_back(percent_decode(item.substr(0, eq)), percent_decode(item.substr(eq + 1)));
        }
    }
    return out;
}

FilterSpec filter_from_params(const QueryParams& params) {
    FilterSpec spec;
    std::set<std::string> seen;
    for (const auto& [key, value] : params) {
        if (!seen.insert(key).second) throw FilterError(fmt::format("parameter '{}' given more than once", key));
        if (key == "topics") {
            std::size_t pos = 0;
            while (pos <= value.size()) {
                auto comma = value.find(',', pos);
                auto label = value.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
                if (label.empty()) throw FilterError("empty topic label in 'topics'");
                spec.topics.push_back(label);
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
        } else if (key == "topic_mode") {
            if (value == "any") {
                spec.topic_mode = TopicMatch::any;
            } else if (value == "all") {
                spec.topic_mode = TopicMatch::all;
            } else {
                throw FilterError(fmt::format("topic_mode must be any or all, got '{}'", value));
            }
        } else if (key == "achv_min") {
            spec.achv_min = parse_fraction(key, value);
        } else if (key == "achv_max") {
            spec.achv_max = parse_fraction(key, value);
        } else if (key == "achv_extremum") {
            spec.achv_extremum = parse_extremum(key, value);
        } else if (key == "cov_min") {
            spec.cov_min = parse_count(key, value);
        } else if (key == "cov_max") {
            spec.cov_max = parse_count(key, value);
        } else if (key == "cov_extremum") {
            spec.cov_extremum = parse_extremum(key, value);
        } else if (key == "level") {
            auto v = parse_count(key, value);
            if (v < 1) throw FilterError("level must be at least 1");
            spec.level = static_cast<std::size_t>(v);
        } else if (key == "mode") {
            if (value == "cumulative") {
                spec.mode = ViewMode::cumulative;
            } else if (value == "accumulative") {
                spec.mode = ViewMode::accumulative;
            } else {
                throw FilterError(fmt::format("mode must be cumulative or accumulative, got '{}'", value));
            }
        } else {
            throw FilterError(fmt::format("unknown filter parameter '{}'", key));
        }
    }
    spec.validate();
    return spec;
}

namespace {

template <class Key>
std::vector<std::size_t> keep_extremum(const std::vector<std::size_t>& candidates, Extremum which, Key key) {
    if (candidates.empty()) return {};
    auto best = key(candidates.front());
    for (auto i : candidates) {
        auto k = key(i);
        if (which == Extremum::level_max ? k > best : k < best) best = k;
    }
    std::vector<std::size_t> out;
    for (auto i : candidates) {
        if (key(i) == best) out.push_back(i);
    }
    return out;
}

} // namespace

LevelSelection filter_level(const Tdm& tdm, const std::vector<std::size_t>& level, const FilterSpec& spec) {
    TopicSet wanted;
    for (const auto& label : spec.topics) {
        try {
            wanted.push_back(tdm.find_topic(label));
        } catch (const std::out_of_range&) {
            throw FilterError(fmt::format("unknown topic '{}'", label));
        }
    }
    std::sort(wanted.begin(), wanted.end());

    auto passes_bounds = [&](const Hyperedge& e) {
        if (!wanted.empty()) {
            if (spec.topic_mode == TopicMatch::any) {
                bool hit = std::any_of(wanted.begin(), wanted.end(), [&](std::size_t t) {
                    return std::binary_search(e.topics.begin(), e.topics.end(), t);
                });
                if (!hit) return false;
            } else if (!std::includes(e.topics.begin(), e.topics.end(), wanted.begin(), wanted.end())) {
                return false;
            }
        }
        auto achv = e.achievement();
        if (spec.achv_min && achv < *spec.achv_min) return false;
        if (spec.achv_max && achv > *spec.achv_max) return false;
        if (spec.cov_min && e.coverage < *spec.cov_min) return false;
        if (spec.cov_max && e.coverage > *spec.cov_max) return false;
        return true;
    };

    std::vector<std::size_t> candidates;
    for (auto i : level) {
        if (passes_bounds(tdm.edges().at(i))) candidates.push_back(i);
    }
    if (spec.achv_extremum) {
        candidates = keep_extremum(candidates, *spec.achv_extremum,
                                   [&](std::size_t i) { return tdm.edges()[i].achievement(); });
    }
    if (spec.cov_extremum) {
        candidates = keep_extremum(candidates, *spec.cov_extremum,
                                   [&](std::size_t i) { return tdm.edges()[i].coverage; });
    }

    LevelSelection out;
    for (auto i : level) {
        if (std::find(candidates.begin(), candidates.end(), i) != candidates.end()) {
            out.selected.push_back(i);
        } else {
            out.greyed.push_back(i);
        }
    }
    return out;
}

std::vector<std::size_t> ViewModel::visible() const {
    std::vector<std::size_t> out;
    for (const auto& [i, s] : status) out.push_back(i);
    return out;
}

std::vector<std::size_t> ViewModel::selected() const {
    std::vector<std::size_t> out;
    for (const auto& [i, s] : status) {
        if (s == EdgeStatus::selected) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> ViewModel::greyed() const {
    std::vector<std::size_t> out;
    for (const auto& [i, s] : status) {
        if (s == EdgeStatus::greyed) out.push_back(i);
    }
    return out;
}

ViewModel compose_view(const Tdm& tdm, const LevelPartition& partition, const FilterSpec& spec) {
    spec.validate(tdm);
    ViewModel view;
    view.spec = spec;
    view.level_index = spec.level.value_or(partition.count());
    if (spec.level && (*spec.level < 1 || *spec.level > partition.count())) {
        throw FilterError(fmt::format("level {} out of range 1..{}", *spec.level, partition.count()));
    }
    if (view.level_index == 0) return view;

    if (spec.mode == ViewMode::accumulative) {
        view.active_levels.push_back(view.level_index);
    } else {
        for (std::size_t k = 1; k <= view.level_index; ++k) view.active_levels.push_back(k);
    }
    for (auto k : view.active_levels) {
        auto sel = filter_level(tdm, partition.level(k), spec);
        for (auto i : sel.selected) view.status.emplace(i, EdgeStatus::selected);
        for (auto i : sel.greyed) view.status.emplace(i, EdgeStatus::greyed);
    }
    for (const auto& [i, s] : view.status) {
        const auto& e = tdm.edges()[i];
        if (!view.legend) {
            view.legend = LegendRanges{e.coverage, e.coverage, e.achievement(), e.achievement()};
            continue;
        }
        auto& l = *view.legend;
        l.cov_min = std::min(l.cov_min, e.coverage);
        l.cov_max = std::max(l.cov_max, e.coverage);
        if (e.achievement() < l.achv_min) l.achv_min = e.achievement();
        if (e.achievement() > l.achv_max) l.achv_max = e.achievement();
    }
    return view;
}

} // namespace tdm
