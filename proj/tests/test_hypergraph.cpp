#include "support/fixtures.hpp"
#include "support/oracle.hpp"
#include "tdm/hypergraph.hpp"

#include <gtest/gtest.h>

#include <map>
#include <numeric>

using namespace tdm;
using namespace tdm::testing;

namespace {

TopicSet topics_of(const Tdm& tdm, std::initializer_list<const char*> labels) {
    TopicSet s;
    for (const auto* l : labels) s.push_back(tdm.find_topic(l));
    std::sort(s.begin(), s.end());
    return s;
}

const Hyperedge* edge_for(const Tdm& tdm, std::initializer_list<const char*> labels) {
    auto want = topics_of(tdm, labels);
    for (const auto& e : tdm.edges()) {
        if (e.topics == want) return &e;
    }
    return nullptr;
}

std::map<std::string, std::pair<std::int64_t, std::int64_t>> contributor_map(const Hyperedge& e) {
    std::map<std::string, std::pair<std::int64_t, std::int64_t>> m;
    for (const auto& c : e.contributors) m[c.question_id] = {c.attempts, c.correct};
    return m;
}

} // namespace

TEST(ExactTagMatch, RequiresEquality) {
    auto d = load_dataset(example_sqa(), example_qt());
    auto t = [&](std::initializer_list<const char*> ls) {
        TopicSet s;
        for (const auto* l : ls) s.push_back(d.maps.topics.at(l));
        std::sort(s.begin(), s.end());
        return s;
    };
    auto q9 = d.maps.questions.at("Q9");
    EXPECT_TRUE(exact_tag_match(q9, t({"T1", "T4", "T5"}), d.matrices.tags));
    EXPECT_FALSE(exact_tag_match(q9, t({"T1", "T4"}), d.matrices.tags));
    EXPECT_FALSE(exact_tag_match(q9, t({"T1", "T2", "T4", "T5"}), d.matrices.tags));
    EXPECT_THROW(exact_tag_match(q9, {}, d.matrices.tags), std::invalid_argument);
}

TEST(ComputeCov, ExampleWorkedValues) {
    auto d = load_dataset(example_sqa(), example_qt());
    auto t = [&](std::initializer_list<const char*> ls) {
        TopicSet s;
        for (const auto* l : ls) s.push_back(d.maps.topics.at(l));
        std::sort(s.begin(), s.end());
        return s;
    };
    const auto& m = d.matrices;
    EXPECT_EQ(compute_cov(t({"T1", "T4"}), m.tags, m.attempts), 13);
    EXPECT_EQ(compute_cov(t({"T3"}), m.tags, m.attempts), 6);
    EXPECT_EQ(compute_cov(t({"T1", "T2", "T4", "T5"}), m.tags, m.attempts), 11);
    EXPECT_EQ(compute_cov(t({"T1", "T3"}), m.tags, m.attempts), 0);

    EXPECT_EQ(compute_achv(t({"T1", "T4"}), m.tags, m.correct, m.attempts), Rational(7, 13));
    EXPECT_EQ(compute_achv(t({"T1", "T4"}), m.tags, m.correct, m.attempts).to_fixed(2), "0.54");
    EXPECT_EQ(compute_achv(t({"T1", "T4", "T5"}), m.tags, m.correct, m.attempts), Rational(1, 5));
    EXPECT_EQ(compute_achv(t({"T1", "T2", "T6"}), m.tags, m.correct, m.attempts), Rational(1, 1));
    EXPECT_EQ(compute_achv(t({"T2", "T6"}), m.tags, m.correct, m.attempts), Rational(0, 1));
    EXPECT_THROW(compute_achv(t({"T1", "T3"}), m.tags, m.correct, m.attempts), std::domain_error);
}

TEST(BuildTdm, ExampleEdges) {
    auto tdm = example_tdm();
    ASSERT_EQ(tdm.vertices().size(), 6u);
    ASSERT_EQ(tdm.edges().size(), 11u);
    EXPECT_TRUE(tdm.diagnostics().empty());

    struct Want {
        std::vector<std::string> labels;
        std::int64_t coverage, correct;
    };
    const std::vector<Want> want = {
        {{"T1"}, 3, 2},
        {{"T3"}, 6, 6},
        {{"T4"}, 12, 6},
        {{"T1", "T2"}, 6, 4},
        {{"T1", "T4"}, 13, 7},
        {{"T2", "T6"}, 6, 0},
        {{"T4", "T5"}, 6, 2},
        {{"T1", "T2", "T6"}, 3, 3},
        {{"T1", "T4", "T5"}, 5, 1},
        {{"T1", "T2", "T4", "T5"}, 11, 4},
        {{"T2", "T4", "T5", "T6"}, 5, 3},
    };
    for (std::size_t i = 0; i < want.size(); ++i) {
        const auto& e = tdm.edges()[i];
        EXPECT_EQ(tdm.labels(e.topics), want[i].labels) << Tdm::edge_id(i);
        EXPECT_EQ(e.coverage, want[i].coverage) << Tdm::edge_id(i);
        EXPECT_EQ(e.correct, want[i].correct) << Tdm::edge_id(i);
    }
    EXPECT_EQ(Tdm::edge_id(0), "h1");
    EXPECT_EQ(Tdm::edge_id(10), "h11");
}

TEST(BuildTdm, ExampleContributors) {
    auto tdm = example_tdm();
    const auto* e = edge_for(tdm, {"T1", "T4"});
    ASSERT_NE(e, nullptr);
    auto m = contributor_map(*e);
    EXPECT_EQ(m.size(), 3u);
    EXPECT_EQ(m["Q5"], std::make_pair(std::int64_t{4}, std::int64_t{2}));
    EXPECT_EQ(m["Q7"], std::make_pair(std::int64_t{5}, std::int64_t{2}));
    EXPECT_EQ(m["Q11"], std::make_pair(std::int64_t{4}, std::int64_t{3}));
}

TEST(BuildTdm, SingleSelfLoop) {
    auto tdm = build_tdm(load_dataset("student_id,question_id,score\nS1,Q1,1\n", "question_id,topics\nQ1,T1\n"));
    ASSERT_EQ(tdm.vertices().size(), 1u);
    ASSERT_EQ(tdm.edges().size(), 1u);
    EXPECT_TRUE(tdm.edges()[0].is_self_loop());
    EXPECT_EQ(tdm.edges()[0].coverage, 1);
    EXPECT_EQ(tdm.edges()[0].achievement(), Rational(1, 1));
}

TEST(BuildTdm, ZeroCoverageSetGoesToDiagnostics) {
    auto tdm = build_tdm(
        load_dataset("student_id,question_id,score\nS1,Q1,1\n", "question_id,topics\nQ1,T1\nQ2,T1;T2\n"));
    ASSERT_EQ(tdm.edges().size(), 1u);
    ASSERT_EQ(tdm.diagnostics().size(), 1u);
    EXPECT_EQ(tdm.labels(tdm.diagnostics()[0]), (std::vector<std::string>{"T1", "T2"}));
    // T2 is still a vertex even though no edge covers it.
    EXPECT_EQ(tdm.vertices().size(), 2u);
}

TEST(BuildTdm, NoResponsesMeansNoEdges) {
    auto tdm = build_tdm(load_dataset("student_id,question_id,score\n", "question_id,topics\nQ1,T1\n"));
    EXPECT_EQ(tdm.vertices().size(), 1u);
    EXPECT_TRUE(tdm.edges().empty());
    EXPECT_EQ(tdm.diagnostics().size(), 1u);
}

TEST(TdmInvariants, RejectsBrokenEdges) {
    std::vector<TopicVertex> v = {{"A", 0}, {"B", 1}};
    auto edge = [](TopicSet t, std::int64_t cov, std::int64_t cor) {
        return Hyperedge{std::move(t), cov, cor, {{"Q1", cov, cor}}};
    };
    EXPECT_NO_THROW(Tdm(v, {edge({0}, 2, 1), edge({0, 1}, 3, 0)}, {}));
    EXPECT_THROW(Tdm(v, {edge({0}, 0, 0)}, {}), InvariantError);
    EXPECT_THROW(Tdm(v, {edge({0}, 2, 3)}, {}), InvariantError);
    EXPECT_THROW(Tdm(v, {edge({0, 2}, 2, 1)}, {}), InvariantError);
    EXPECT_THROW(Tdm(v, {edge({}, 2, 1)}, {}), InvariantError);
    EXPECT_THROW(Tdm(v, {edge({1, 0}, 2, 1)}, {}), InvariantError);
    EXPECT_THROW(Tdm(v, {edge({0}, 2, 1), edge({0}, 3, 1)}, {}), InvariantError);
    EXPECT_THROW(Tdm(v, {Hyperedge{{0}, 2, 1, {{"Q1", 1, 1}}}}, {}), InvariantError);
}

TEST(TdmJson, RoundTrip) {
    auto tdm = example_tdm();
    auto text = tdm_to_json(tdm);
    EXPECT_EQ(tdm_from_json(text), tdm);
    EXPECT_EQ(tdm_to_json(tdm_from_json(text)), text);
    EXPECT_THROW(tdm_from_json("{"), InputError);
    EXPECT_THROW(tdm_from_json("{\"vertices\": 3}"), InputError);
}

TEST(HypergraphProperty, MatchesBruteForceOracle) {
    EXPECT_EQ(engine_edges(example_tdm()),
              brute_force_edges(parse_sqa(example_sqa()), parse_qt(example_qt())));
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        auto r = random_dataset(seed);
        auto tdm = build_tdm(load_dataset(r.sqa_csv, r.qt_csv));
        ASSERT_EQ(engine_edges(tdm), brute_force_edges(r.responses, r.tags)) << "seed " << seed;
    }
}

TEST(HypergraphProperty, CoverageSumsToAttemptTotal) {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        auto r = random_dataset(seed);
        auto tdm = build_tdm(load_dataset(r.sqa_csv, r.qt_csv));
        std::int64_t cov = 0, cor = 0;
        for (const auto& e : tdm.edges()) {
            cov += e.coverage;
            cor += e.correct;
        }
        std::int64_t correct = 0;
        for (const auto& rr : r.responses) correct += rr.score;
        ASSERT_EQ(cov, static_cast<std::int64_t>(r.responses.size())) << "seed " << seed;
        ASSERT_EQ(cor, correct) << "seed " << seed;
    }
}

TEST(HypergraphProperty, EdgeWeightsAreWellFormed) {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        auto r = random_dataset(seed);
        auto tdm = build_tdm(load_dataset(r.sqa_csv, r.qt_csv));
        for (std::size_t i = 0; i < tdm.edges().size(); ++i) {
            const auto& e = tdm.edges()[i];
            ASSERT_GE(e.coverage, 1);
            ASSERT_GE(e.correct, 0);
            ASSERT_LE(e.correct, e.coverage);
            std::int64_t att = 0, cor = 0;
            for (const auto& c : e.contributors) {
                att += c.attempts;
                cor += c.correct;
            }
            ASSERT_EQ(att, e.coverage);
            ASSERT_EQ(cor, e.correct);
            if (i > 0) {
                const auto& p = tdm.edges()[i - 1];
                ASSERT_TRUE(p.arity() < e.arity() ||
                            (p.arity() == e.arity() && tdm.labels(p.topics) < tdm.labels(e.topics)));
            }
        }
    }
}

TEST(HypergraphProperty, AddingAnAttemptNeverLowersCoverage) {
    // Extra response on an unattempted cell raises exactly one edge by one.
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto r = random_dataset(seed);
        std::set<std::pair<std::string, std::string>> seen;
        std::set<std::string> students;
        for (const auto& rr : r.responses) {
            seen.insert({rr.student_id, rr.question_id});
            students.insert(rr.student_id);
        }
        students.insert("s_extra");
        std::optional<ResponseRecord> extra;
        for (const auto& s : students) {
            for (const auto& t : r.tags) {
                if (!extra && !seen.count({s, t.question_id})) extra = ResponseRecord{s, t.question_id, 1};
            }
        }
        ASSERT_TRUE(extra.has_value());
        auto before = brute_force_edges(r.responses, r.tags);
        auto more = r.responses;
        more.push_back(*extra);
        auto d = load_dataset(write_canonical_sqa(more), write_canonical_qt(r.tags));
        auto after = engine_edges(build_tdm(d));

        std::map<std::vector<std::string>, OracleEdge> b;
        for (const auto& e : before) b[e.topics] = e;
        std::int64_t raised = 0;
        for (const auto& e : after) {
            auto it = b.find(e.topics);
            auto prev = it == b.end() ? 0 : it->second.coverage;
            ASSERT_GE(e.coverage, prev);
            raised += e.coverage - prev;
        }
        ASSERT_EQ(raised, 1) << "seed " << seed;
    }
}

TEST(HypergraphProperty, RowOrderDoesNotMatter) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto r = random_dataset(seed);
        auto p = shuffled(r, seed + 17);
        auto a = build_tdm(load_dataset(r.sqa_csv, r.qt_csv));
        auto b = build_tdm(load_dataset(p.sqa_csv, p.qt_csv));
        ASSERT_EQ(tdm_to_json(a), tdm_to_json(b)) << "seed " << seed;
    }
}
