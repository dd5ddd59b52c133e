#include "tdm/cli.hpp"

#include "tdm/hypergraph.hpp"
#include "tdm/ingest.hpp"
#include "tdm/io.hpp"
#include "tdm/levels.hpp"
#include "tdm/server.hpp"
#include "tdm/synth.hpp"
#include "tdm/view.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <ostream>

namespace tdm {

namespace {

struct BuildArgs {
    std::string sqa;
    std::string qt;
    std::string out;
};

struct ViewArgs {
    std::string model;
    std::string topics;
    std::string topic_mode;
    std::string achv_min;
    std::string achv_max;
    std::string achv_extremum;
    std::string cov_min;
    std::string cov_max;
    std::string cov_extremum;
    std::string level;
    std::string mode;
    std::string format = "svg";
    std::string out;
    std::string report;
    bool strip = false;
    bool include_empty = false;
    bool hide_greyed = false;
    LayoutConfig layout;
};

struct GenerateArgs {
    GeneratorConfig config;
    std::string profile = "spread";
    std::string out_dir;
};

struct StatsArgs {
    std::string model;
    std::string format = "text";
};

struct ServeArgs {
    std::string addr;
    std::string data_dir;
};

void emit(std::ostream& out, const std::string& path, std::string_view content) {
    if (path.empty() || path == "-") {
        out << content;
    } else {
        write_file_atomic(path, content);
    }
}

int cmd_build(const BuildArgs& a, std::ostream& out) {
    auto dataset = load_dataset(read_file(a.sqa), read_file(a.qt));
    auto tdm = build_tdm(dataset);
    write_file_atomic(a.out, tdm_to_json(tdm));
    fmt::print(out, "{} vertices, {} hyperedges, {} zero-coverage sets\n", tdm.vertices().size(), tdm.edges().size(),
               tdm.diagnostics().size());
    return kExitOk;
}

int cmd_view(const ViewArgs& a, std::ostream& out) {
    auto tdm = tdm_from_json(read_file(a.model));
    QueryParams params;
    auto add = [&](const char* key, const std::string& v) {
        if (!v.empty()) params.emplace_back(key, v);
    };
    add("topics", a.topics);
    add("topic_mode", a.topic_mode);
    add("achv_min", a.achv_min);
    add("achv_max", a.achv_max);
    add("achv_extremum", a.achv_extremum);
    add("cov_min", a.cov_min);
    add("cov_max", a.cov_max);
    add("cov_extremum", a.cov_extremum);
    add("level", a.level);
    add("mode", a.mode);
    auto spec = filter_from_params(params);

    RenderOptions options;
    options.format = parse_output_format(a.format);
    options.strip = a.strip;
    options.include_empty = a.include_empty;
    options.hide_greyed = a.hide_greyed;
    options.layout = a.layout;
    try {
        options.layout.validate();
    } catch (const std::invalid_argument& ex) {
        throw FilterError(ex.what());
    }

    emit(out, a.out, render_view(tdm, spec, options));
    if (!a.report.empty()) emit(out, a.report, selection_report(tdm, spec, options));
    return kExitOk;
}

int cmd_generate(GenerateArgs a, std::ostream& out) {
    a.config.profile = parse_profile(a.profile);
    auto data = generate_dataset(a.config);
    auto report = check_constraints(data, a.config);
    if (!report.ok()) throw InvariantError("generated dataset fails its own constraint check");
    std::filesystem::create_directories(a.out_dir);
    write_file_atomic(std::filesystem::path(a.out_dir) / "SQA.csv", write_canonical_sqa(data.responses));
    write_file_atomic(std::filesystem::path(a.out_dir) / "QT.csv", write_canonical_qt(data.tags));
    fmt::print(out, "wrote {} responses, {} questions to {}\n", data.responses.size(), data.tags.size(), a.out_dir);
    fmt::print(out, "arity range: {}..{}\n", report.min_arity, report.max_arity);
    if (a.config.profile == ConstraintProfile::spread) {
        fmt::print(out, "student score range: {}..{}\n", report.student_min.to_fixed(2), report.student_max.to_fixed(2));
        fmt::print(out, "attempts per question: {}..{}\n", report.attempts_min, report.attempts_max);
        fmt::print(out, "question average range: {}..{}\n", report.question_min.to_fixed(2),
                   report.question_max.to_fixed(2));
        fmt::print(out, "topic-group achievement range: {}..{}\n", report.edge_min.to_fixed(2),
                   report.edge_max.to_fixed(2));
    }
    return kExitOk;
}

int cmd_stats(const StatsArgs& a, std::ostream& out) {
    auto stats = compute_stats(tdm_from_json(read_file(a.model)));
    out << (a.format == "json" ? stats_to_json(stats) : stats_to_text(stats));
    return kExitOk;
}

int cmd_serve(const ServeArgs& a, std::ostream& out) {
    auto config = ServerConfig::from_env();
    if (!a.addr.empty()) {
        auto colon = a.addr.rfind(':');
        if (colon == std::string::npos) throw InputError(fmt::format("--addr must be host:port, got '{}'", a.addr));
        config.host = a.addr.substr(0, colon);
        config.port = std::stoi(a.addr.substr(colon + 1));
    }
    if (!a.data_dir.empty()) config.data_dir = a.data_dir;
    DatasetRegistry registry(config.data_dir);
    Server server(registry, config);
    fmt::print(out, "listening on http://{}:{}\n", config.host, config.port);
    out.flush();
    if (!server.listen()) throw InputError(fmt::format("cannot listen on {}:{}", config.host, config.port));
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Topic dependency hypergraphs from assessment data"};
    app.name("tdm");
    app.require_subcommand(1);

    BuildArgs build;
    auto* b = app.add_subcommand("build", "Build a model JSON from SQA and QT CSV files");
    b->add_option("--sqa", build.sqa, "student_id,question_id,score CSV")->required();
    b->add_option("--qt", build.qt, "question_id,topics CSV")->required();
    b->add_option("-o,--out", build.out, "model JSON output path")->required();

    ViewArgs view;
    auto* v = app.add_subcommand("view", "Render a filtered view of a model");
    v->add_option("model", view.model, "model JSON")->required();
    v->add_option("--topics", view.topics, "comma-separated topic labels");
    v->add_option("--topic-mode", view.topic_mode, "any|all");
    v->add_option("--achv-min", view.achv_min, "inclusive lower achievement bound in [0,1]");
    v->add_option("--achv-max", view.achv_max, "inclusive upper achievement bound in [0,1]");
    v->add_option("--achv-extremum", view.achv_extremum, "level-min|level-max");
    v->add_option("--cov-min", view.cov_min, "inclusive lower coverage bound");
    v->add_option("--cov-max", view.cov_max, "inclusive upper coverage bound");
    v->add_option("--cov-extremum", view.cov_extremum, "level-min|level-max");
    auto* level = v->add_option("--level", view.level, "level index (default: highest)");
    v->add_option("--mode", view.mode, "cumulative|accumulative")->needs(level);
    v->add_flag("--strip", view.strip, "one panel per level up to --level");
    v->add_flag("--include-empty", view.include_empty, "keep panels for empty levels");
    v->add_flag("--hide-greyed", view.hide_greyed, "drop filtered-out edges instead of greying them");
    v->add_option("--format", view.format, "svg|json|dot");
    v->add_option("-o,--out", view.out, "output path (default: stdout)");
    v->add_option("--report", view.report, "write the selection report (JSON) here");
    v->add_option("--width", view.layout.width);
    v->add_option("--height", view.layout.height);
    v->add_option("--vertex-radius", view.layout.vertex_radius);
    v->add_option("--circle-margin", view.layout.circle_margin);
    v->add_option("--hull-margin", view.layout.hull_margin);
    v->add_option("--stroke-min", view.layout.stroke_min);
    v->add_option("--stroke-max", view.layout.stroke_max);
    v->add_option("--loop-offset", view.layout.loop_offset);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Write a seeded synthetic SQA/QT dataset");
    g->add_option("--seed", gen.config.seed);
    g->add_option("--students", gen.config.students);
    g->add_option("--questions", gen.config.questions);
    g->add_option("--topics", gen.config.topics);
    g->add_option("--max-arity", gen.config.max_arity);
    g->add_option("--profile", gen.profile, "spread|uniform");
    g->add_option("--out-dir", gen.out_dir, "directory for SQA.csv and QT.csv")->required();

    StatsArgs stats;
    auto* s = app.add_subcommand("stats", "Summarise a model");
    s->add_option("model", stats.model)->required();
    s->add_option("--format", stats.format, "text|json")->check(CLI::IsMember({"text", "json"}));

    ServeArgs serve;
    auto* sv = app.add_subcommand("serve", "Serve datasets and views over HTTP");
    sv->add_option("--addr", serve.addr, "host:port (default: $TDM_ADDR or 127.0.0.1:8080)");
    sv->add_option("--data-dir", serve.data_dir, "persistence directory (default: $TDM_DATA_DIR)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& ex) {
        fmt::print(err, "error: {}\n", ex.what());
        return kExitInputError;
    }

    try {
        if (b->parsed()) return cmd_build(build, out);
        if (v->parsed()) return cmd_view(view, out);
        if (g->parsed()) return cmd_generate(gen, out);
        if (s->parsed()) return cmd_stats(stats, out);
        if (sv->parsed()) return cmd_serve(serve, out);
    } catch (const InputError& ex) {
        fmt::print(err, "error: {}\n", ex.what());
        return kExitInputError;
    } catch (const FilterError& ex) {
        fmt::print(err, "error: {}\n", ex.what());
        return kExitInputError;
    } catch (const std::exception& ex) {
        fmt::print(err, "internal error: {}\n", ex.what());
        return kExitInternalError;
    }
    return kExitInputError;
}

} // namespace tdm
