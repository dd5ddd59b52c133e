#pragma once

// Two-weighted topic hypergraph. Vertices are topics; each hyperedge is a
// distinct exact tag set carrying coverage (attempted responses) and
// achievement (fraction of those answered correctly).

#include "tdm/ingest.hpp"
#include "tdm/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tdm {

/// Sorted, duplicate-free topic indices.
using TopicSet = std::vector<std::size_t>;

struct TopicVertex {
    std::string label;
    std::size_t index = 0;

    bool operator==(const TopicVertex&) const = default;
};

struct Contributor {
    std::string question_id;
    std::int64_t attempts = 0;
    std::int64_t correct = 0;

    bool operator==(const Contributor&) const = default;
};

struct Hyperedge {
    TopicSet topics;
    std::int64_t coverage = 0; // c1
    std::int64_t correct = 0;  // c2 numerator; c2 = correct / coverage
    std::vector<Contributor> contributors;

    std::size_t arity() const noexcept { return topics.size(); }
    bool is_self_loop() const noexcept { return topics.size() == 1; }
    Rational achievement() const { return {correct, coverage}; }

    bool operator==(const Hyperedge&) const = default;
};

class Tdm {
public:
    Tdm() = default;

    /// Validates invariants and sorts edges canonically (arity, then labels).
    /// Throws InvariantError on violation.
    Tdm(std::vector<TopicVertex> vertices, std::vector<Hyperedge> edges, std::vector<TopicSet> diagnostics);

    const std::vector<TopicVertex>& vertices() const noexcept { return vertices_; }
    const std::vector<Hyperedge>& edges() const noexcept { return edges_; }
    /// Tag sets present in the data whose coverage is zero.
    const std::vector<TopicSet>& diagnostics() const noexcept { return diagnostics_; }

    std::vector<std::string> labels(const TopicSet& set) const;
    /// Canonical edge id: "h1" for the first edge in canonical order.
    static std::string edge_id(std::size_t edge_index);
    std::size_t find_topic(std::string_view label) const;

    bool operator==(const Tdm&) const = default;

private:
    std::vector<TopicVertex> vertices_;
    std::vector<Hyperedge> edges_;
    std::vector<TopicSet> diagnostics_;
};

/// True iff the question's tag set equals `topics` exactly. `topics` must be
/// non-empty (std::invalid_argument otherwise).
bool exact_tag_match(std::size_t question, const TopicSet& topics, const BinaryMatrix& tags);

/// Sum of attempts over questions whose tag set equals `topics`.
std::int64_t compute_cov(const TopicSet& topics, const BinaryMatrix& tags, const BinaryMatrix& attempts);

/// Correct answers over coverage; throws std::domain_error when coverage is 0.
Rational compute_achv(const TopicSet& topics, const BinaryMatrix& tags, const BinaryMatrix& correct,
                      const BinaryMatrix& attempts);

Tdm build_tdm(const WorkingMatrices& matrices, const IndexMaps& maps);

inline Tdm build_tdm(const Dataset& d) { return build_tdm(d.matrices, d.maps); }

/// Canonical JSON export; stable field order, 2-space indent, trailing newline.
std::string tdm_to_json(const Tdm& tdm);

/// Loads a model written by tdm_to_json. Throws InputError on malformed input.
Tdm tdm_from_json(std::string_view text);

} // namespace tdm
