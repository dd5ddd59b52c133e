#pragma once

#include "support/oracle.hpp"
#include "tdm/hypergraph.hpp"
#include "tdm/ingest.hpp"
#include "tdm/levels.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tdm::testing {

std::string read_data(const std::string& name);

std::string example_sqa();
std::string example_qt();
Tdm example_tdm();

/// The example dataset as a grid: one row per question with its topic list
/// and the six student cells ("1", "0" or "-").
struct GridRow {
    std::string question;
    std::vector<std::string> topics;
    std::vector<std::string> cells;
};
const std::vector<GridRow>& example_grid();

struct RandomDataset {
    std::vector<ResponseRecord> responses;
    std::vector<TagRecord> tags;
    std::string sqa_csv;
    std::string qt_csv;
};

/// Small random dataset (1..max_topics topics, 1..max_questions questions,
/// 1..max_students students), independent of the library's generator.
RandomDataset random_dataset(std::uint64_t seed, std::size_t max_topics = 8, std::size_t max_questions = 12,
                             std::size_t max_students = 10);

/// Same records with rows shuffled and written in a different order.
RandomDataset shuffled(const RandomDataset& d, std::uint64_t seed);

/// Random filter valid for `tdm` (level left unset). Mixes topic, bound and
/// extremum predicates; every value survives a query-string round trip.
FilterSpec random_filter(const Tdm& tdm, std::uint64_t seed);

/// The engine's edges in oracle form.
std::vector<OracleEdge> engine_edges(const Tdm& tdm);

} // namespace tdm::testing
