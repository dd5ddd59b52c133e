#include "tdm/ingest.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <tuple>
#include <utility>

namespace tdm {

InputError::InputError(const std::string& message, std::optional<std::size_t> line)
    : std::runtime_error(line ? fmt::format("{} at line {}", message, *line) : message), line_(line) {}

namespace {

struct CsvLine {
    std::size_t number;
    std::vector<std::string> fields;
};

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

// RFC 4180 fields on a single physical line.
std::vector<std::string> split_fields(std::string_view line, std::size_t number) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"' && trim(cur).empty()) {
            cur.clear();
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            out.emplace_back(was_quoted ? cur : std::string(trim(cur)));
            cur.clear();
            was_quoted = false;
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) throw InputError("unterminated quoted field", number);
    out.emplace_back(was_quoted ? cur : std::string(trim(cur)));
    return out;
}

// Splits into non-blank lines, validates the header and returns data rows.
std::vector<CsvLine> read_csv(std::string_view raw, const std::vector<std::string>& header) {
    if (raw.starts_with("\xEF\xBB\xBF")) raw.remove_prefix(3);
    std::vector<CsvLine> rows;
    bool seen_header = false;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos < raw.size()) {
        auto nl = raw.find('\n', pos);
        auto line = raw.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? raw.size() : nl + 1;
        ++number;
        if (line.ends_with('\r')) line.remove_suffix(1);
        if (trim(line).empty()) continue;
        auto fields = split_fields(line, number);
        if (!seen_header) {
            if (fields != header) {
                throw InputError(fmt::format("expected header '{}'", fmt::join(header, ",")), number);
            }
            seen_header = true;
            continue;
        }
        if (fields.size() != header.size()) {
            throw InputError(fmt::format("malformed row: expected {} columns, found {}", header.size(), fields.size()),
                             number);
        }
        rows.push_back({number, std::move(fields)});
    }
    if (!seen_header) throw InputError(fmt::format("missing header '{}'", fmt::join(header, ",")));
    return rows;
}

} // namespace

std::vector<ResponseRecord> parse_sqa(std::string_view raw) {
    std::vector<ResponseRecord> out;
    std::map<std::pair<std::string, std::string>, std::size_t> seen;
    for (auto& row : read_csv(raw, {"student_id", "question_id", "score"})) {
        auto& f = row.fields;
        if (f[0].empty()) throw InputError("empty student_id", row.number);
        if (f[1].empty()) throw InputError("empty question_id", row.number);
        if (f[2] != "0" && f[2] != "1") throw InputError("non-binary score", row.number);
        auto [it, inserted] = seen.emplace(std::pair{f[0], f[1]}, row.number);
        if (!inserted) {
            throw InputError(fmt::format("duplicate response ({}, {}) first seen at line {}", f[0], f[1], it->second),
                             row.number);
        }
        out.push_back({std::move(f[0]), std::move(f[1]), f[2] == "1" ? 1 : 0});
    }
    return out;
}

std::vector<TagRecord> parse_qt(std::string_view raw) {
    std::vector<TagRecord> out;
    std::map<std::string, std::size_t> seen;
    for (auto& row : read_csv(raw, {"question_id", "topics"})) {
        auto& f = row.fields;
        if (f[0].empty()) throw InputError("empty question_id", row.number);
        TagRecord rec{f[0], {}};
        std::string_view list = f[1];
        std::size_t pos = 0;
        while (pos <= list.size() && !list.empty()) {
            auto sep = list.find(';', pos);
            auto label = trim(list.substr(pos, sep == std::string_view::npos ? std::string_view::npos : sep - pos));
            if (label.empty()) {
                throw InputError(list.find_first_not_of(" \t;") == std::string_view::npos ? "empty topic list"
                                                                                            : "empty topic label",
                                 row.number);
            }
            if (!rec.topics.emplace(label).second) {
                throw InputError(fmt::format("duplicate topic '{}'", label), row.number);
            }
            if (sep == std::string_view::npos) break;
            pos = sep + 1;
        }
        if (rec.topics.empty()) throw InputError("empty topic list", row.number);
        auto [it, inserted] = seen.emplace(rec.question_id, row.number);
        if (!inserted) {
            throw InputError(fmt::format("duplicate question '{}' first seen at line {}", rec.question_id, it->second),
                             row.number);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

IndexMap::IndexMap(const std::set<std::string>& ids) : ids_(ids.begin(), ids.end()) {
    for (std::size_t i = 0; i < ids_.size(); ++i) index_.emplace(ids_[i], i);
}

bool IndexMap::contains(std::string_view id) const { return index_.find(id) != index_.end(); }

std::optional<std::size_t> IndexMap::find(std::string_view id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t IndexMap::at(std::string_view id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::out_of_range(fmt::format("unknown identifier '{}'", id));
    return it->second;
}

std::size_t BinaryMatrix::row_sum(std::size_t r) const {
    std::size_t n = 0;
    for (std::size_t c = 0; c < cols_; ++c) n += get(r, c);
    return n;
}

std::size_t BinaryMatrix::col_sum(std::size_t c) const {
    std::size_t n = 0;
    for (std::size_t r = 0; r < rows_; ++r) n += get(r, c);
    return n;
}

std::size_t BinaryMatrix::total() const { return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 1)); }

IndexMaps build_index_maps(const std::vector<ResponseRecord>& responses, const std::vector<TagRecord>& tags) {
    std::set<std::string> questions;
    std::set<std::string> students;
    std::set<std::string> topics;
    for (const auto& t : tags) {
        questions.insert(t.question_id);
        topics.insert(t.topics.begin(), t.topics.end());
    }
    for (const auto& r : responses) {
        if (!questions.contains(r.question_id)) {
            throw InputError(fmt::format("untagged question '{}' referenced by student '{}'", r.question_id,
                                         r.student_id));
        }
        students.insert(r.student_id);
    }
    return {IndexMap(questions), IndexMap(students), IndexMap(topics)};
}

WorkingMatrices build_matrices(const std::vector<ResponseRecord>& responses,
                               const std::vector<TagRecord>& tags,
                               const IndexMaps& maps) {
    const auto nq = maps.questions.size();
    const auto ns = maps.students.size();
    WorkingMatrices m{BinaryMatrix(nq, maps.topics.size()), BinaryMatrix(ns, nq), BinaryMatrix(ns, nq)};
    for (const auto& t : tags) {
        auto q = maps.questions.at(t.question_id);
        for (const auto& topic : t.topics) m.tags.set(q, maps.topics.at(topic), true);
    }
    for (const auto& r : responses) {
        auto u = maps.students.at(r.student_id);
        auto q = maps.questions.at(r.question_id);
        m.attempts.set(u, q, true);
        m.correct.set(u, q, r.score == 1);
    }
    return m;
}

std::string write_canonical_sqa(std::vector<ResponseRecord> responses) {
    std::sort(responses.begin(), responses.end(), [](const auto& a, const auto& b) {
        return std::tie(a.student_id, a.question_id) < std::tie(b.student_id, b.question_id);
    });
    std::string out = "student_id,question_id,score\n";
    for (const auto& r : responses) out += fmt::format("{},{},{}\n", r.student_id, r.question_id, r.score);
    return out;
}

std::string write_canonical_qt(std::vector<TagRecord> tags) {
    std::sort(tags.begin(), tags.end(), [](const auto& a, const auto& b) { return a.question_id < b.question_id; });
    std::string out = "question_id,topics\n";
    for (const auto& t : tags) out += fmt::format("{},{}\n", t.question_id, fmt::join(t.topics, ";"));
    return out;
}

std::vector<ResponseRecord> responses_from_matrices(const WorkingMatrices& m, const IndexMaps& maps) {
    std::vector<ResponseRecord> out;
    for (std::size_t u = 0; u < m.attempts.rows(); ++u) {
        for (std::size_t q = 0; q < m.attempts.cols(); ++q) {
            if (!m.attempts.get(u, q)) continue;
            out.push_back({maps.students.id(u), maps.questions.id(q), m.correct.get(u, q) ? 1 : 0});
        }
    }
    return out;
}

std::vector<TagRecord> tags_from_matrices(const WorkingMatrices& m, const IndexMaps& maps) {
    std::vector<TagRecord> out;
    for (std::size_t q = 0; q < m.tags.rows(); ++q) {
        TagRecord rec{maps.questions.id(q), {}};
        for (std::size_t t = 0; t < m.tags.cols(); ++t) {
            if (m.tags.get(q, t)) rec.topics.insert(maps.topics.id(t));
        }
        out.push_back(std::move(rec));
    }
    return out;
}

Dataset load_dataset(std::string_view sqa_csv, std::string_view qt_csv) {
    auto responses = parse_sqa(sqa_csv);
    auto tags = parse_qt(qt_csv);
    auto maps = build_index_maps(responses, tags);
    auto matrices = build_matrices(responses, tags, maps);
    return {std::move(maps), std::move(matrices)};
}

} // namespace tdm
