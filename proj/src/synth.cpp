#include "tdm/synth.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace tdm {

ConstraintProfile parse_profile(std::string_view s) {
    if (s == "spread") return ConstraintProfile::spread;
    if (s == "uniform") return ConstraintProfile::uniform;
    throw InputError(fmt::format("unknown constraint profile '{}' (expected spread or uniform)", s));
}

std::string_view to_string(ConstraintProfile p) { return p == ConstraintProfile::spread ? "spread" : "uniform"; }

namespace {

// std distributions are implementation-defined; draw directly from the
// engine so output is stable across standard libraries.
std::size_t below(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::string padded(char prefix, std::size_t i, std::size_t count) {
    auto width = fmt::format("{}", count).size();
    return fmt::format("{}{:0{}}", prefix, i + 1, width);
}

void check_feasible(const GeneratorConfig& c) {
    if (c.students == 0 || c.questions == 0 || c.topics == 0) {
        throw InputError("students, questions and topics must all be positive");
    }
    if (c.max_arity == 0) throw InputError("maximum arity must be positive");
    if (c.topics < c.max_arity) {
        throw InputError(fmt::format("infeasible: {} topic(s) cannot form questions spanning {} topics", c.topics,
                                     c.max_arity));
    }
    if (c.profile == ConstraintProfile::spread) {
        if (c.questions < 2) throw InputError("infeasible: the spread profile needs at least 2 questions");
        if (c.students < 2) throw InputError("infeasible: the spread profile needs at least 2 students");
    }
}

GeneratedDataset draw(std::mt19937_64& rng, const GeneratorConfig& c) {
    GeneratedDataset d;
    std::vector<std::string> topics;
    for (std::size_t t = 0; t < c.topics; ++t) topics.push_back(padded('T', t, c.topics));
    const bool anchored = c.profile == ConstraintProfile::spread;

    std::vector<double> easiness(c.questions);
    for (std::size_t q = 0; q < c.questions; ++q) {
        std::size_t arity = 1 + below(rng, c.max_arity);
        if (anchored && q == 0) arity = 1;
        if (anchored && q == 1) arity = c.max_arity;
        std::vector<std::size_t> pool(c.topics);
        std::iota(pool.begin(), pool.end(), 0);
        TagRecord rec{padded('Q', q, c.questions), {}};
        for (std::size_t k = 0; k < arity; ++k) {
            std::swap(pool[k], pool[k + below(rng, c.topics - k)]);
            rec.topics.insert(topics[pool[k]]);
        }
        d.tags.push_back(std::move(rec));
        easiness[q] = unit(rng);
    }
    if (anchored) {
        easiness[0] = 1.0;
        easiness[1] = 0.0;
    }

    std::vector<double> ability(c.students);
    for (auto& a : ability) a = unit(rng);
    if (anchored) {
        ability[0] = 0.0;
        ability[1] = 1.0;
    }

    for (std::size_t q = 0; q < c.questions; ++q) {
        const double attempt_rate = 0.5 + 0.5 * unit(rng);
        std::vector<bool> attempted(c.students);
        bool any = false;
        for (std::size_t u = 0; u < c.students; ++u) {
            attempted[u] = unit(rng) < attempt_rate;
            any = any || attempted[u];
        }
        if (!any) attempted[below(rng, c.students)] = true;
        for (std::size_t u = 0; u < c.students; ++u) {
            if (!attempted[u]) continue;
            int score = 0;
            if (anchored && easiness[q] == 1.0) {
                score = 1;
            } else if (anchored && easiness[q] == 0.0) {
                score = 0;
            } else {
                score = unit(rng) < 0.5 * (ability[u] + easiness[q]) ? 1 : 0;
            }
            d.responses.push_back({padded('S', u, c.students), d.tags[q].question_id, score});
        }
    }
    return d;
}

} // namespace

ConstraintReport check_constraints(const GeneratedDataset& data, const GeneratorConfig& config) {
    ConstraintReport r;
    r.min_arity = std::numeric_limits<std::size_t>::max();
    std::map<std::string, std::set<std::string>> tag_of;
    for (const auto& t : data.tags) {
        r.min_arity = std::min(r.min_arity, t.topics.size());
        r.max_arity = std::max(r.max_arity, t.topics.size());
        tag_of[t.question_id] = t.topics;
    }
    if (data.tags.empty()) r.min_arity = 0;
    if (r.min_arity < 1 || r.max_arity > config.max_arity) {
        r.failures.push_back(fmt::format("question arity outside 1..{}", config.max_arity));
    }
    if (config.profile == ConstraintProfile::uniform) return r;

    if (r.min_arity != 1 || r.max_arity != config.max_arity) {
        r.failures.push_back(fmt::format("arities span {}..{}, expected 1..{}", r.min_arity, r.max_arity,
                                         config.max_arity));
    }

    std::map<std::string, std::pair<std::int64_t, std::int64_t>> by_student;
    std::map<std::string, std::pair<std::int64_t, std::int64_t>> by_question;
    std::map<std::set<std::string>, std::pair<std::int64_t, std::int64_t>> by_tagset;
    for (const auto& x : data.responses) {
        by_student[x.student_id].first += 1;
        by_student[x.student_id].second += x.score;
        by_question[x.question_id].first += 1;
        by_question[x.question_id].second += x.score;
        auto& e = by_tagset[tag_of.at(x.question_id)];
        e.first += 1;
        e.second += x.score;
    }

    auto range = [](const auto& groups, Rational& lo, Rational& hi) {
        bool first = true;
        for (const auto& [key, v] : groups) {
            Rational f{v.second, v.first};
            if (first || f < lo) lo = f;
            if (first || f > hi) hi = f;
            first = false;
        }
    };
    range(by_student, r.student_min, r.student_max);
    range(by_question, r.question_min, r.question_max);
    range(by_tagset, r.edge_min, r.edge_max);

    if (by_question.size() != data.tags.size()) r.failures.push_back("some question has no attempts");
    r.attempts_min = std::numeric_limits<std::int64_t>::max();
    for (const auto& t : data.tags) {
        auto it = by_question.find(t.question_id);
        auto n = it == by_question.end() ? 0 : it->second.first;
        r.attempts_min = std::min(r.attempts_min, n);
        r.attempts_max = std::max(r.attempts_max, n);
    }
    if (data.tags.empty()) r.attempts_min = 0;
    if (!(r.attempts_min < r.attempts_max)) r.failures.push_back("no spread in the number of responses per question");
    if (!(r.student_min <= Rational{1, 3} && r.student_max >= Rational{2, 3})) {
        r.failures.push_back("student scores do not range from low (<= 1/3) to high (>= 2/3)");
    }
    if (!(r.question_min == Rational{0, 1} && r.question_max == Rational{1, 1})) {
        r.failures.push_back("question averages do not span 0% to 100%");
    }
    if (!(r.edge_min <= Rational{1, 4} && r.edge_max >= Rational{3, 4})) {
        r.failures.push_back("topic-group achievement does not range from very poor (<= 0.25) to very strong (>= 0.75)");
    }
    return r;
}

GeneratedDataset generate_dataset(const GeneratorConfig& config) {
    check_feasible(config);
    std::mt19937_64 rng(config.seed);
    constexpr int kMaxDraws = 500;
    for (int i = 0; i < kMaxDraws; ++i) {
        auto d = draw(rng, config);
        if (check_constraints(d, config).ok()) return d;
    }
    throw InputError(fmt::format("no dataset satisfying the {} profile found in {} draws", to_string(config.profile),
                                 kMaxDraws));
}

} // namespace tdm
