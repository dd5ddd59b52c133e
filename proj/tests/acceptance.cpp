// Acceptance suite: one PASS/FAIL line per criterion. Non-zero exit when any fails.

#include "support/fixtures.hpp"
#include "support/live_server.hpp"
#include "support/oracle.hpp"
#include "tdm/cli.hpp"
#include "tdm/io.hpp"
#include "tdm/levels.hpp"
#include "tdm/view.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

using namespace tdm;
using namespace tdm::testing;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool ok = false;
    std::string detail;
};

int failures = 0;

void report(const std::string& name, const std::function<Outcome()>& check) {
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& ex) {
        o = {false, fmt::format("exception: {}", ex.what())};
    }
    if (!o.ok) ++failures;
    std::cout << (o.ok ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
}

std::vector<std::string> edge_ids(const std::vector<std::size_t>& edges) {
    std::vector<std::string> out;
    for (auto e : edges) out.push_back(Tdm::edge_id(e));
    return out;
}

std::string show(const std::vector<std::vector<std::string>>& levels) {
    std::vector<std::string> parts;
    for (const auto& l : levels) parts.push_back(l.empty() ? "{}" : fmt::format("{{{}}}", fmt::join(l, ",")));
    return fmt::format("{}", fmt::join(parts, " / "));
}

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
    std::random_device rd;
    auto dir = fs::temp_directory_path() / fmt::format("tdm-acceptance-{}", rd());
    fs::create_directories(dir);
    return dir;
}

// --flag value pairs for `tdm view` equivalent to a query string.
std::vector<std::string> view_flags(const FilterSpec& spec) {
    std::vector<std::string> args;
    for (const auto& [key, value] : parse_query(filter_to_query(spec))) {
        if (key == "mode" && !spec.level) continue; // cumulative default
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        args.push_back(flag);
        args.push_back(value);
    }
    return args;
}

std::string url_encode(std::string_view s) {
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~' || c == '=' || c == '&' || c == ',') {
            out.push_back(static_cast<char>(c));
        } else {
            out += fmt::format("%{:02X}", c);
        }
    }
    return out;
}

Outcome worked_number() {
    auto t0 = Clock::now();
    auto tdm = build_tdm(load_dataset(example_sqa(), example_qt()));
    const Hyperedge* edge = nullptr;
    for (const auto& e : tdm.edges()) {
        if (tdm.labels(e.topics) == std::vector<std::string>{"T1", "T4"}) edge = &e;
    }
    auto elapsed = seconds_since(t0);
    if (!edge) return {false, "no {T1,T4} hyperedge"};
    std::map<std::string, std::int64_t> parts;
    for (const auto& c : edge->contributors) parts[c.question_id] = c.attempts;
    auto achv = edge->achievement();
    bool ok = edge->coverage == 13 && parts == std::map<std::string, std::int64_t>{{"Q5", 4}, {"Q7", 5}, {"Q11", 4}} &&
              achv.num == 7 && achv.den == 13 && achv.to_fixed(2) == "0.54" && elapsed < 1.0;
    return {ok, fmt::format("coverage {} = Q5 {} + Q7 {} + Q11 {}, achievement {}/{} shown {}, {:.3f}s",
                            edge->coverage, parts["Q5"], parts["Q7"], parts["Q11"], achv.num, achv.den,
                            achv.to_fixed(2), elapsed)};
}

Outcome level_partition() {
    auto tdm = example_tdm();
    auto p = partition_levels(tdm);
    FilterSpec t1;
    t1.topics = {"T1"};
    std::vector<std::vector<std::string>> levels, filtered;
    for (std::size_t k = 1; k <= p.count(); ++k) {
        levels.push_back(edge_ids(p.level(k)));
        filtered.push_back(edge_ids(filter_level(tdm, p.level(k), t1).selected));
    }
    const std::vector<std::vector<std::string>> want_levels = {
        {"h1", "h2", "h3"}, {"h4", "h5", "h6", "h7"}, {"h8", "h9"}, {"h10", "h11"}, {}, {}};
    const std::vector<std::vector<std::string>> want_t1 = {{"h1"}, {"h4", "h5"}, {"h8", "h9"}, {"h10"}, {}, {}};
    return {levels == want_levels && filtered == want_t1,
            fmt::format("levels {}; T1 filter {}", show(levels), show(filtered))};
}

Outcome oracle_equivalence() {
    auto t0 = Clock::now();
    bool ok = engine_edges(example_tdm()) == brute_force_edges(parse_sqa(example_sqa()), parse_qt(example_qt()));
    std::size_t datasets = 0, mismatches = 0;
    for (std::uint64_t seed = 1000; seed < 1250; ++seed) {
        auto r = random_dataset(seed, 8, 12, 10);
        auto tdm = build_tdm(load_dataset(r.sqa_csv, r.qt_csv));
        if (engine_edges(tdm) != brute_force_edges(r.responses, r.tags)) ++mismatches;
        ++datasets;
    }
    auto elapsed = seconds_since(t0);
    return {ok && mismatches == 0 && elapsed < 30.0,
            fmt::format("example dataset {}, {} random datasets with {} mismatches, {:.2f}s", ok ? "equal" : "differs",
                        datasets, mismatches, elapsed)};
}

Outcome conservation() {
    // Attempted cells counted straight from the transcribed grid.
    std::int64_t cells = 0;
    for (const auto& row : example_grid()) {
        for (const auto& c : row.cells) cells += c != "-";
    }
    std::int64_t sum = 0;
    for (const auto& e : example_tdm().edges()) sum += e.coverage;
    std::size_t broken = 0, datasets = 0;
    for (std::uint64_t seed = 1000; seed < 1250; ++seed) {
        auto r = random_dataset(seed);
        std::int64_t s = 0;
        for (const auto& e : build_tdm(load_dataset(r.sqa_csv, r.qt_csv)).edges()) s += e.coverage;
        if (s != static_cast<std::int64_t>(r.responses.size())) ++broken;
        ++datasets;
    }
    return {sum == cells && broken == 0,
            fmt::format("example dataset: sum of coverage {} vs {} attempted cells; {} random datasets, {} violations", sum,
                        cells, datasets, broken)};
}

Outcome mode_law() {
    std::size_t cases = 0, violations = 0;
    auto check = [&](const Tdm& tdm, const FilterSpec& base) {
        auto p = partition_levels(tdm);
        auto f = base;
        for (std::size_t k = 1; k <= p.count(); ++k) {
            f.level = k;
            f.mode = ViewMode::cumulative;
            auto cum = compose_view(tdm, p, f).status;
            std::map<std::size_t, EdgeStatus> merged;
            for (std::size_t j = 1; j <= k; ++j) {
                f.level = j;
                f.mode = ViewMode::accumulative;
                auto acc = compose_view(tdm, p, f).status;
                merged.insert(acc.begin(), acc.end());
            }
            if (cum != merged) ++violations;
        }
        ++cases;
    };
    auto t1 = example_tdm();
    for (std::uint64_t seed = 0; seed < 50; ++seed) check(t1, random_filter(t1, seed));
    for (std::uint64_t seed = 2000; seed < 2150; ++seed) {
        auto r = random_dataset(seed);
        auto tdm = build_tdm(load_dataset(r.sqa_csv, r.qt_csv));
        check(tdm, random_filter(tdm, seed));
    }
    return {cases >= 100 && violations == 0,
            fmt::format("{} (dataset, filter) cases over all levels, {} violations", cases, violations)};
}

Outcome achievement_filter() {
    auto tdm = example_tdm();
    auto p = partition_levels(tdm);
    auto sel = filter_level(tdm, p.level(3), filter_from_query("achv_max=0.6&level=3"));
    auto label = [&](std::size_t i) { return fmt::format("{{{}}}", fmt::join(tdm.labels(tdm.edges()[i].topics), ",")); };
    std::vector<std::string> s, g;
    for (auto i : sel.selected) s.push_back(label(i) + " " + tdm.edges()[i].achievement().to_fixed(1));
    for (auto i : sel.greyed) g.push_back(label(i) + " " + tdm.edges()[i].achievement().to_fixed(1));
    bool ok = s == std::vector<std::string>{"{T1,T4,T5} 0.2"} && g == std::vector<std::string>{"{T1,T2,T6} 1.0"};
    return {ok, fmt::format("selected [{}], greyed [{}]", fmt::join(s, "; "), fmt::join(g, "; "))};
}

Outcome determinism() {
    auto dir = scratch_dir();
    auto p = [&](const std::string& n) { return (dir / n).string(); };
    std::vector<std::string> problems;
    auto check_pair = [&](const std::string& sqa, const std::string& qt, const std::string& tag) {
        write_file_atomic(p(tag + "-sqa.csv"), sqa);
        write_file_atomic(p(tag + "-qt.csv"), qt);
        auto b = cli({"build", "--sqa", p(tag + "-sqa.csv"), "--qt", p(tag + "-qt.csv"), "-o", p(tag + ".json")});
        if (b.code != 0) problems.push_back(tag + " build: " + b.err);
        auto v = cli({"view", p(tag + ".json"), "--topics", "T1", "--level", "3", "-o", p(tag + ".svg")});
        if (v.code != 0) problems.push_back(tag + " view: " + v.err);
        return read_file(p(tag + ".json")) + "\n--\n" + read_file(p(tag + ".svg"));
    };
    auto first = check_pair(example_sqa(), example_qt(), "a");
    auto second = check_pair(example_sqa(), example_qt(), "b");
    // Row permutations of the same records.
    auto records = RandomDataset{parse_sqa(example_sqa()), parse_qt(example_qt()), example_sqa(), example_qt()};
    std::size_t permutations = 0, differ = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto s = shuffled(records, seed);
        if (check_pair(s.sqa_csv, s.qt_csv, fmt::format("perm{}", seed)) != first) ++differ;
        ++permutations;
    }
    fs::remove_all(dir);
    bool ok = problems.empty() && first == second && differ == 0;
    return {ok, fmt::format("repeat run {}, {} row permutations with {} differences{}",
                            first == second ? "byte-identical" : "differs", permutations, differ,
                            problems.empty() ? "" : "; " + problems.front())};
}

Outcome cli_server_parity() {
    auto dir = scratch_dir();
    auto sqa = (dir / "sqa.csv").string();
    auto qt = (dir / "qt.csv").string();
    auto model = (dir / "model.json").string();
    write_file_atomic(sqa, example_sqa());
    write_file_atomic(qt, example_qt());
    if (cli({"build", "--sqa", sqa, "--qt", qt, "-o", model}).code != 0) return {false, "build failed"};

    LiveServer server;
    auto client = server.client();
    httplib::MultipartFormDataItems items = {{"sqa", example_sqa(), "SQA.csv", "text/csv"},
                                             {"qt", example_qt(), "QT.csv", "text/csv"}};
    auto up = client.Post("/datasets", items);
    if (!up || up->status != 201) return {false, "upload failed"};
    auto id = nlohmann::json::parse(up->body)["id"].get<std::string>();

    auto tdm = example_tdm();
    std::mt19937_64 rng(20);
    std::size_t specs = 0, equal = 0;
    std::string first_diff;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto spec = random_filter(tdm, 5000 + seed);
        if (rng() % 4 != 0) spec.level = 1 + rng() % tdm.vertices().size();
        if (!spec.level) spec.mode = ViewMode::cumulative;
        std::vector<std::string> args = {"view", model};
        auto flags = view_flags(spec);
        args.insert(args.end(), flags.begin(), flags.end());
        auto local = cli(args);
        auto remote = client.Get(fmt::format("/datasets/{}/view?format=svg&{}", id, url_encode(filter_to_query(spec))));
        ++specs;
        if (local.code == 0 && remote && remote->status == 200 && remote->body == local.out) {
            ++equal;
        } else if (first_diff.empty()) {
            first_diff = filter_to_query(spec);
        }
    }
    fs::remove_all(dir);
    return {specs == 20 && equal == specs,
            fmt::format("{}/{} filter specs byte-identical{}", equal, specs,
                        first_diff.empty() ? "" : "; first mismatch " + first_diff)};
}

} // namespace

int main() {
    report("worked number {T1,T4}", worked_number);
    report("level partition and T1 filter", level_partition);
    report("oracle equivalence", oracle_equivalence);
    report("coverage conservation", conservation);
    report("cumulative equals union of accumulative", mode_law);
    report("achievement filter at level 3", achievement_filter);
    report("deterministic build and view", determinism);
    report("command line and server parity", cli_server_parity);
    std::cout << (failures == 0 ? "all criteria passed" : fmt::format("{} criteria failed", failures)) << std::endl;
    return failures == 0 ? 0 : 1;
}
