#include "support/fixtures.hpp"

#include "tdm/io.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <random>

namespace tdm::testing {

std::string read_data(const std::string& name) { return read_file(std::string(TDM_TEST_DATA) + "/" + name); }

std::string example_sqa() { return read_data("example_sqa.csv"); }
std::string example_qt() { return read_data("example_qt.csv"); }
Tdm example_tdm() { return build_tdm(load_dataset(example_sqa(), example_qt())); }

const std::vector<GridRow>& example_grid() {
    static const std::vector<GridRow> grid = {
        {"Q1", {"T1"}, {"-", "1", "-", "-", "0", "1"}},
        {"Q2", {"T3"}, {"1", "1", "1", "1", "1", "1"}},
        {"Q3", {"T4"}, {"0", "1", "0", "1", "1", "1"}},
        {"Q4", {"T1", "T2"}, {"1", "1", "0", "1", "1", "0"}},
        {"Q5", {"T1", "T4"}, {"1", "-", "-", "0", "1", "0"}},
        {"Q6", {"T4"}, {"0", "0", "1", "0", "0", "1"}},
        {"Q7", {"T1", "T4"}, {"-", "0", "1", "1", "0", "0"}},
        {"Q8", {"T4", "T5"}, {"0", "1", "0", "0", "0", "1"}},
        {"Q9", {"T1", "T4", "T5"}, {"0", "0", "0", "0", "-", "1"}},
        {"Q10", {"T1", "T2", "T4", "T5"}, {"0", "0", "0", "1", "0", "1"}},
        {"Q11", {"T1", "T4"}, {"1", "-", "0", "1", "-", "1"}},
        {"Q12", {"T2", "T6"}, {"0", "0", "0", "0", "0", "0"}},
        {"Q13", {"T1", "T2", "T6"}, {"-", "-", "1", "1", "-", "1"}},
        {"Q14", {"T1", "T2", "T4", "T5"}, {"-", "0", "1", "0", "0", "1"}},
        {"Q15", {"T2", "T4", "T5", "T6"}, {"-", "0", "0", "1", "1", "1"}},
    };
    return grid;
}

namespace {

std::size_t below(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

std::string to_sqa(const std::vector<ResponseRecord>& rs) {
    std::string s = "student_id,question_id,score\n";
    for (const auto& r : rs) s += fmt::format("{},{},{}\n", r.student_id, r.question_id, r.score);
    return s;
}

std::string to_qt(const std::vector<TagRecord>& ts) {
    std::string s = "question_id,topics\n";
    for (const auto& t : ts) s += fmt::format("{},{}\n", t.question_id, fmt::join(t.topics, ";"));
    return s;
}

} // namespace

RandomDataset random_dataset(std::uint64_t seed, std::size_t max_topics, std::size_t max_questions,
                             std::size_t max_students) {
    std::mt19937_64 rng(seed);
    const auto n_topics = 1 + below(rng, max_topics);
    const auto n_questions = 1 + below(rng, max_questions);
    const auto n_students = 1 + below(rng, max_students);
    RandomDataset d;
    for (std::size_t q = 0; q < n_questions; ++q) {
        TagRecord t{fmt::format("q{}", q), {}};
        auto arity = 1 + below(rng, std::min<std::size_t>(n_topics, 4));
        while (t.topics.size() < arity) t.topics.insert(fmt::format("topic{}", below(rng, n_topics)));
        d.tags.push_back(std::move(t));
    }
    for (std::size_t u = 0; u < n_students; ++u) {
        for (std::size_t q = 0; q < n_questions; ++q) {
            auto roll = below(rng, 3);
            if (roll == 0) continue; // not attempted
            d.responses.push_back({fmt::format("s{}", u), fmt::format("q{}", q), static_cast<int>(below(rng, 2))});
        }
    }
    d.sqa_csv = to_sqa(d.responses);
    d.qt_csv = to_qt(d.tags);
    return d;
}

RandomDataset shuffled(const RandomDataset& d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    RandomDataset out = d;
    for (std::size_t i = out.responses.size(); i > 1; --i) std::swap(out.responses[i - 1], out.responses[below(rng, i)]);
    for (std::size_t i = out.tags.size(); i > 1; --i) std::swap(out.tags[i - 1], out.tags[below(rng, i)]);
    out.sqa_csv = to_sqa(out.responses);
    out.qt_csv = to_qt(out.tags);
    return out;
}

std::vector<OracleEdge> engine_edges(const Tdm& tdm) {
    std::vector<OracleEdge> out;
    for (const auto& e : tdm.edges()) out.push_back({tdm.labels(e.topics), e.coverage, e.correct});
    return out;
}

FilterSpec random_filter(const Tdm& tdm, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    FilterSpec f;
    const auto& vs = tdm.vertices();
    if (!vs.empty() && below(rng, 2) == 0) {
        auto n = 1 + below(rng, std::min<std::size_t>(vs.size(), 3));
        std::vector<std::string> pool;
        for (const auto& v : vs) pool.push_back(v.label);
        std::shuffle(pool.begin(), pool.end(), rng);
        f.topics.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n));
        f.topic_mode = below(rng, 2) == 0 ? TopicMatch::any : TopicMatch::all;
    }
    switch (below(rng, 4)) {
    case 0: {
        std::int64_t a = static_cast<std::int64_t>(below(rng, 11));
        std::int64_t b = static_cast<std::int64_t>(below(rng, 11));
        if (a > b) std::swap(a, b);
        if (below(rng, 2)) f.achv_min = Rational(a, 10);
        if (below(rng, 2)) f.achv_max = Rational(b, 10);
        break;
    }
    case 1:
        f.achv_extremum = below(rng, 2) ? Extremum::level_min : Extremum::level_max;
        break;
    default:
        break;
    }
    switch (below(rng, 4)) {
    case 0: {
        std::int64_t a = static_cast<std::int64_t>(below(rng, 12));
        std::int64_t b = static_cast<std::int64_t>(below(rng, 12));
        if (a > b) std::swap(a, b);
        if (below(rng, 2)) f.cov_min = a;
        if (below(rng, 2)) f.cov_max = b;
        break;
    }
    case 1:
        f.cov_extremum = below(rng, 2) ? Extremum::level_min : Extremum::level_max;
        break;
    default:
        break;
    }
    f.mode = below(rng, 2) ? ViewMode::cumulative : ViewMode::accumulative;
    return f;
}

} // namespace tdm::testing
