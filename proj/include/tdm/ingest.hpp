#pragma once

// Assessment data ingestion: the SQA (student, question, score) and QT
// (question, topics) CSV files, identifier index maps and the three working
// matrices used to build the topic dependency hypergraph.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tdm {

/// Raised for malformed or inconsistent input data. Carries the 1-based
/// source line when the problem can be attributed to one.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& message, std::optional<std::size_t> line = std::nullopt);

    std::optional<std::size_t> line() const noexcept { return line_; }

private:
    std::optional<std::size_t> line_;
};

/// Raised when an internal consistency check fails.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct ResponseRecord {
    std::string student_id;
    std::string question_id;
    int score = 0; // 0 or 1

    bool operator==(const ResponseRecord&) const = default;
};

struct TagRecord {
    std::string question_id;
    std::set<std::string> topics;

    bool operator==(const TagRecord&) const = default;
};

/// Parses an SQA file with header `student_id,question_id,score`.
std::vector<ResponseRecord> parse_sqa(std::string_view raw);

/// Parses a QT file with header `question_id,topics`; topics are `;`-separated.
std::vector<TagRecord> parse_qt(std::string_view raw);

/// Identifier <-> index table. Indices are assigned in byte-wise lexicographic
/// order of the identifiers, so they do not depend on input row order.
class IndexMap {
public:
    IndexMap() = default;
    explicit IndexMap(const std::set<std::string>& ids);

    std::size_t size() const noexcept { return ids_.size(); }
    bool contains(std::string_view id) const;
    std::optional<std::size_t> find(std::string_view id) const;
    std::size_t at(std::string_view id) const;
    const std::string& id(std::size_t index) const { return ids_.at(index); }
    const std::vector<std::string>& ids() const noexcept { return ids_; }

    bool operator==(const IndexMap& other) const { return ids_ == other.ids_; }

private:
    std::vector<std::string> ids_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

struct IndexMaps {
    IndexMap questions;
    IndexMap students;
    IndexMap topics;

    bool operator==(const IndexMaps&) const = default;
};

/// Dense row-major 0/1 matrix.
class BinaryMatrix {
public:
    BinaryMatrix() = default;
    BinaryMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_(rows * cols, 0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    bool get(std::size_t r, std::size_t c) const { return cells_.at(r * cols_ + c) != 0; }
    void set(std::size_t r, std::size_t c, bool v) { cells_.at(r * cols_ + c) = v ? 1 : 0; }

    std::size_t row_sum(std::size_t r) const;
    std::size_t col_sum(std::size_t c) const;
    std::size_t total() const;

    bool operator==(const BinaryMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint8_t> cells_;
};

/// T: question x topic tags. A: student x question correctness.
/// R: student x question attempts (A[u][i] implies R[u][i]).
struct WorkingMatrices {
    BinaryMatrix tags;
    BinaryMatrix correct;
    BinaryMatrix attempts;

    bool operator==(const WorkingMatrices&) const = default;
};

/// Throws InputError("untagged question ...") when an SQA question has no QT row.
IndexMaps build_index_maps(const std::vector<ResponseRecord>& responses, const std::vector<TagRecord>& tags);

WorkingMatrices build_matrices(const std::vector<ResponseRecord>& responses,
                               const std::vector<TagRecord>& tags,
                               const IndexMaps& maps);

/// Canonical CSV writers: header, rows sorted by identifier, LF endings.
std::string write_canonical_sqa(std::vector<ResponseRecord> responses);
std::string write_canonical_qt(std::vector<TagRecord> tags);

/// Recovers records from the working matrices; inverse of build_matrices up
/// to row order.
std::vector<ResponseRecord> responses_from_matrices(const WorkingMatrices& m, const IndexMaps& maps);
std::vector<TagRecord> tags_from_matrices(const WorkingMatrices& m, const IndexMaps& maps);

/// Parsed and indexed dataset, the input to hypergraph construction.
struct Dataset {
    IndexMaps maps;
    WorkingMatrices matrices;
};

Dataset load_dataset(std::string_view sqa_csv, std::string_view qt_csv);

} // namespace tdm
