#pragma once

// Seeded synthetic assessment datasets for demos and tests.

#include "tdm/ingest.hpp"
#include "tdm/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tdm {

enum class ConstraintProfile {
    /// Every question spans 1..max_arity topics, nothing else is enforced.
    uniform,
    /// Arity range 1..max_arity covered; spread in student scores, in
    /// attempt counts, in question averages (0% and 100%) and in edge
    /// achievement (very poor to very strong).
    spread,
};

ConstraintProfile parse_profile(std::string_view s);
std::string_view to_string(ConstraintProfile p);

struct GeneratorConfig {
    std::uint64_t seed = 1;
    std::size_t students = 6;
    std::size_t questions = 15;
    std::size_t topics = 6;
    std::size_t max_arity = 4;
    ConstraintProfile profile = ConstraintProfile::spread;
};

struct GeneratedDataset {
    std::vector<ResponseRecord> responses;
    std::vector<TagRecord> tags;
};

/// Achieved ranges recomputed from the records alone.
struct ConstraintReport {
    std::size_t min_arity = 0;
    std::size_t max_arity = 0;
    Rational student_min;
    Rational student_max;
    std::int64_t attempts_min = 0;
    std::int64_t attempts_max = 0;
    Rational question_min;
    Rational question_max;
    Rational edge_min;
    Rational edge_max;
    std::vector<std::string> failures;

    bool ok() const noexcept { return failures.empty(); }
};

ConstraintReport check_constraints(const GeneratedDataset& data, const GeneratorConfig& config);

/// Deterministic for a given config. Throws InputError when the counts make
/// the profile infeasible or no draw satisfies it.
GeneratedDataset generate_dataset(const GeneratorConfig& config);

} // namespace tdm
