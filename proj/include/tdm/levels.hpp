#pragma once

// Arity levels, per-level filtering (grey-out semantics) and composition of
// cumulative / accumulative views.

#include "tdm/hypergraph.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tdm {

/// Invalid filter parameters or filter/model mismatch.
class FilterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// levels[k] holds the indices of edges with arity k + 1. There is one entry
/// per vertex, so trailing levels may be empty.
struct LevelPartition {
    std::vector<std::vector<std::size_t>> levels;

    std::size_t count() const noexcept { return levels.size(); }
    /// 1-based access, matching Level_1 .. Level_n.
    const std::vector<std::size_t>& level(std::size_t i) const { return levels.at(i - 1); }
};

LevelPartition partition_levels(const Tdm& tdm);

enum class TopicMatch { any, all };
enum class ViewMode { cumulative, accumulative };
enum class Extremum { level_min, level_max };
enum class EdgeStatus { selected, greyed };

std::string_view to_string(TopicMatch m);
std::string_view to_string(ViewMode m);
std::string_view to_string(Extremum e);
std::string_view to_string(EdgeStatus s);

struct FilterSpec {
    std::vector<std::string> topics;
    TopicMatch topic_mode = TopicMatch::any;

    // Achievement in [0, 1]; bounds are inclusive. Bounds and extremum are
    // mutually exclusive.
    std::optional<Rational> achv_min;
    std::optional<Rational> achv_max;
    std::optional<Extremum> achv_extremum;

    std::optional<std::int64_t> cov_min;
    std::optional<std::int64_t> cov_max;
    std::optional<Extremum> cov_extremum;

    ViewMode mode = ViewMode::cumulative;
    /// Unset means the highest level (the number of vertices).
    std::optional<std::size_t> level;

    bool has_predicates() const noexcept;
    /// Checks internal consistency; throws FilterError.
    void validate() const;
    /// validate() plus checks against a model (known topics, level range).
    void validate(const Tdm& tdm) const;

    bool operator==(const FilterSpec&) const = default;
};

/// URL query encoding, e.g.
/// `topics=T1,T4&topic_mode=any&achv_max=0.6&level=3&mode=cumulative`.
/// Only fields that are set are emitted; keys appear in a fixed order.
std::string filter_to_query(const FilterSpec& spec);

using QueryParams = std::vector<std::pair<std::string, std::string>>;

/// Splits and percent-decodes a query string (leading '?' optional).
QueryParams parse_query(std::string_view query);

/// Builds a FilterSpec from decoded key/value pairs. Throws FilterError on
/// unknown keys, repeated keys or malformed values.
FilterSpec filter_from_params(const QueryParams& params);

inline FilterSpec filter_from_query(std::string_view query) { return filter_from_params(parse_query(query)); }

struct LevelSelection {
    std::vector<std::size_t> selected;
    std::vector<std::size_t> greyed;
};

/// Applies every predicate in `spec` to the edges of one level. Extremum
/// selectors are evaluated among edges passing the topic and bound predicates,
/// keeping all ties. The spec's mode and level fields are ignored.
LevelSelection filter_level(const Tdm& tdm, const std::vector<std::size_t>& level, const FilterSpec& spec);

struct LegendRanges {
    std::int64_t cov_min = 0;
    std::int64_t cov_max = 0;
    Rational achv_min;
    Rational achv_max;

    bool operator==(const LegendRanges&) const = default;
};

struct ViewModel {
    FilterSpec spec;
    std::size_t level_index = 0;
    /// 1-based level numbers shown by the view.
    std::vector<std::size_t> active_levels;
    /// Status of every visible edge, keyed by edge index.
    std::map<std::size_t, EdgeStatus> status;
    /// Ranges over visible edges; empty when nothing is visible.
    std::optional<LegendRanges> legend;

    std::vector<std::size_t> visible() const;
    std::vector<std::size_t> selected() const;
    std::vector<std::size_t> greyed() const;
};

/// Composes a view. Throws FilterError when the level index is out of range
/// or the spec is inconsistent with the model.
ViewModel compose_view(const Tdm& tdm, const LevelPartition& partition, const FilterSpec& spec);

} // namespace tdm
