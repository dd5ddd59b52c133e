#include "tdm/hypergraph.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <json.hpp>
#include <map>
#include <set>
#include <stdexcept>

namespace tdm {

namespace {

bool canonical_less(const Hyperedge& a, const Hyperedge& b) {
    if (a.arity() != b.arity()) return a.arity() < b.arity();
    // Vertex indices follow label order, so index order is label order.
    return a.topics < b.topics;
}

bool is_topic_set(const TopicSet& s, std::size_t n_vertices) {
    if (s.empty()) return false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] >= n_vertices) return false;
        if (i > 0 && s[i - 1] >= s[i]) return false;
    }
    return true;
}

TopicSet tag_row(std::size_t question, const BinaryMatrix& tags) {
    TopicSet row;
    for (std::size_t t = 0; t < tags.cols(); ++t) {
        if (tags.get(question, t)) row.push_back(t);
    }
    return row;
}

} // namespace

Tdm::Tdm(std::vector<TopicVertex> vertices, std::vector<Hyperedge> edges, std::vector<TopicSet> diagnostics)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), diagnostics_(std::move(diagnostics)) {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (vertices_[i].index != i) throw InvariantError(fmt::format("vertex {} has index {}", i, vertices_[i].index));
        if (i > 0 && !(vertices_[i - 1].label < vertices_[i].label)) {
            throw InvariantError("vertex labels must be unique and sorted");
        }
    }
    std::set<TopicSet> seen;
    for (const auto& e : edges_) {
        if (!is_topic_set(e.topics, vertices_.size())) throw InvariantError("edge has an invalid topic set");
        if (!seen.insert(e.topics).second) throw InvariantError("two edges share a topic set");
        if (e.coverage < 1) throw InvariantError("edge coverage must be at least 1");
        if (e.correct < 0 || e.correct > e.coverage) throw InvariantError("edge achievement outside [0, 1]");
        std::int64_t attempts = 0;
        std::int64_t correct = 0;
        for (const auto& c : e.contributors) {
            if (c.correct < 0 || c.correct > c.attempts) throw InvariantError("contributor correct exceeds attempts");
            attempts += c.attempts;
            correct += c.correct;
        }
        if (attempts != e.coverage || correct != e.correct) {
            throw InvariantError("edge weights disagree with its contributors");
        }
    }
    for (auto& d : diagnostics_) {
        if (!is_topic_set(d, vertices_.size())) throw InvariantError("diagnostic has an invalid topic set");
        if (seen.contains(d)) throw InvariantError("zero-coverage set is also an edge");
    }
    std::sort(edges_.begin(), edges_.end(), canonical_less);
    std::sort(diagnostics_.begin(), diagnostics_.end(), [](const TopicSet& a, const TopicSet& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
}

std::vector<std::string> Tdm::labels(const TopicSet& set) const {
    std::vector<std::string> out;
    out.reserve(set.size());
    for (auto t : set) out.push_back(vertices_.at(t).label);
    return out;
}

std::string Tdm::edge_id(std::size_t edge_index) { return fmt::format("h{}", edge_index + 1); }

std::size_t Tdm::find_topic(std::string_view label) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), label,
                               [](const TopicVertex& v, std::string_view l) { return v.label < l; });
    if (it == vertices_.end() || it->label != label) {
        throw std::out_of_range(fmt::format("unknown topic '{}'", label));
    }
    return it->index;
}

bool exact_tag_match(std::size_t question, const TopicSet& topics, const BinaryMatrix& tags) {
    if (topics.empty()) throw std::invalid_argument("topic set must be non-empty");
    std::size_t matched = 0;
    for (auto t : topics) {
        if (!tags.get(question, t)) return false;
        ++matched;
    }
    return tags.row_sum(question) == matched;
}

std::int64_t compute_cov(const TopicSet& topics, const BinaryMatrix& tags, const BinaryMatrix& attempts) {
    std::int64_t cov = 0;
    for (std::size_t q = 0; q < tags.rows(); ++q) {
        if (exact_tag_match(q, topics, tags)) cov += static_cast<std::int64_t>(attempts.col_sum(q));
    }
    return cov;
}

Rational compute_achv(const TopicSet& topics, const BinaryMatrix& tags, const BinaryMatrix& correct,
                      const BinaryMatrix& attempts) {
    auto cov = compute_cov(topics, tags, attempts);
    if (cov == 0) throw std::domain_error("achievement is undefined for a zero-coverage topic set");
    std::int64_t right = 0;
    for (std::size_t q = 0; q < tags.rows(); ++q) {
        if (exact_tag_match(q, topics, tags)) right += static_cast<std::int64_t>(correct.col_sum(q));
    }
    return {right, cov};
}

Tdm build_tdm(const WorkingMatrices& m, const IndexMaps& maps) {
    std::vector<TopicVertex> vertices;
    for (std::size_t t = 0; t < maps.topics.size(); ++t) vertices.push_back({maps.topics.id(t), t});

    // Each question belongs to exactly one group: its own exact tag set.
    std::map<TopicSet, Hyperedge> groups;
    for (std::size_t q = 0; q < m.tags.rows(); ++q) {
        auto row = tag_row(q, m.tags);
        if (row.empty()) throw InvariantError(fmt::format("question '{}' has no topics", maps.questions.id(q)));
        auto& e = groups[row];
        e.topics = row;
        Contributor c{maps.questions.id(q), static_cast<std::int64_t>(m.attempts.col_sum(q)),
                      static_cast<std::int64_t>(m.correct.col_sum(q))};
        e.coverage += c.attempts;
        e.correct += c.correct;
        e.contributors.push_back(std::move(c));
    }

    std::vector<Hyperedge> edges;
    std::vector<TopicSet> zero;
    for (auto& [set, e] : groups) {
        if (e.coverage == 0) {
            zero.push_back(set);
        } else {
            edges.push_back(std::move(e));
        }
    }
    return Tdm(std::move(vertices), std::move(edges), std::move(zero));
}

std::string tdm_to_json(const Tdm& tdm) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["vertices"] = ordered_json::array();
    for (const auto& v : tdm.vertices()) {
        doc["vertices"].push_back({{"index", v.index}, {"label", v.label}});
    }
    doc["edges"] = ordered_json::array();
    for (std::size_t i = 0; i < tdm.edges().size(); ++i) {
        const auto& e = tdm.edges()[i];
        ordered_json contributors = ordered_json::array();
        for (const auto& c : e.contributors) {
            contributors.push_back({{"question", c.question_id}, {"attempts", c.attempts}, {"correct", c.correct}});
        }
        doc["edges"].push_back({{"id", Tdm::edge_id(i)},
                                {"topics", tdm.labels(e.topics)},
                                {"coverage", e.coverage},
                                {"achievement_num", e.correct},
                                {"achievement_den", e.coverage},
                                {"contributors", std::move(contributors)}});
    }
    doc["diagnostics"] = ordered_json::array();
    for (const auto& d : tdm.diagnostics()) doc["diagnostics"].push_back({{"topics", tdm.labels(d)}, {"coverage", 0}});
    return doc.dump(2) + "\n";
}

Tdm tdm_from_json(std::string_view text) {
    try {
        auto doc = nlohmann::json::parse(text);
        std::vector<TopicVertex> vertices;
        for (const auto& v : doc.at("vertices")) {
            vertices.push_back({v.at("label").get<std::string>(), v.at("index").get<std::size_t>()});
        }
        auto to_set = [&](const nlohmann::json& labels) {
            TopicSet set;
            for (const auto& l : labels) {
                auto label = l.get<std::string>();
                auto it = std::find_if(vertices.begin(), vertices.end(),
                                       [&](const TopicVertex& v) { return v.label == label; });
                if (it == vertices.end()) throw InputError(fmt::format("model references unknown topic '{}'", label));
                set.push_back(it->index);
            }
            std::sort(set.begin(), set.end());
            return set;
        };
        std::vector<Hyperedge> edges;
        for (const auto& e : doc.at("edges")) {
            Hyperedge h;
            h.topics = to_set(e.at("topics"));
            h.coverage = e.at("coverage").get<std::int64_t>();
            h.correct = e.at("achievement_num").get<std::int64_t>();
            if (e.at("achievement_den").get<std::int64_t>() != h.coverage) {
                throw InputError("achievement_den must equal coverage");
            }
            for (const auto& c : e.at("contributors")) {
                h.contributors.push_back({c.at("question").get<std::string>(), c.at("attempts").get<std::int64_t>(),
                                          c.at("correct").get<std::int64_t>()});
            }
            edges.push_back(std::move(h));
        }
        std::vector<TopicSet> diagnostics;
        if (doc.contains("diagnostics")) {
            for (const auto& d : doc.at("diagnostics")) diagnostics.push_back(to_set(d.at("topics")));
        }
        return Tdm(std::move(vertices), std::move(edges), std::move(diagnostics));
    } catch (const nlohmann::json::exception& ex) {
        throw InputError(fmt::format("malformed model JSON: {}", ex.what()));
    } catch (const InvariantError& ex) {
        throw InputError(fmt::format("invalid model: {}", ex.what()));
    }
}

} // namespace tdm
