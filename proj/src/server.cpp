#include "tdm/server.hpp"

#include "tdm/io.hpp"
#include "tdm/levels.hpp"
#include "tdm/view.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>
#include <mutex>
#include <openssl/evp.h>

namespace tdm {

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
    return out;
}

std::string dataset_id(std::string_view sqa_digest, std::string_view qt_digest) {
    return sha256_hex(fmt::format("{}:{}", sqa_digest, qt_digest)).substr(0, 16);
}

namespace {

std::string utc_now() {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

DatasetRegistry::DatasetRegistry(std::optional<std::filesystem::path> data_dir) : data_dir_(std::move(data_dir)) {
    if (data_dir_) {
        std::filesystem::create_directories(*data_dir_);
        load_existing();
    }
}

DatasetRegistry::AddResult DatasetRegistry::add(std::string_view sqa_csv, std::string_view qt_csv) {
    auto sqa_digest = sha256_hex(sqa_csv);
    auto qt_digest = sha256_hex(qt_csv);
    auto id = dataset_id(sqa_digest, qt_digest);
    if (auto existing = find(id)) return {existing, false};

    // Build outside the lock; insertion below is the only exclusive section.
    auto entry = std::make_shared<DatasetEntry>();
    entry->id = id;
    entry->sqa_digest = std::move(sqa_digest);
    entry->qt_digest = std::move(qt_digest);
    entry->created = utc_now();
    entry->model = build_tdm(load_dataset(sqa_csv, qt_csv));

    std::unique_lock lock(mutex_);
    auto [it, inserted] = entries_.emplace(id, entry);
    if (inserted && data_dir_) persist(*entry);
    return {it->second, inserted};
}

std::shared_ptr<const DatasetEntry> DatasetRegistry::find(std::string_view id) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : it->second;
}

std::vector<std::string> DatasetRegistry::ids() const {
    std::shared_lock lock(mutex_);
    std::vector<std::string> out;
    for (const auto& [id, e] : entries_) out.push_back(id);
    return out;
}

void DatasetRegistry::persist(const DatasetEntry& entry) const {
    nlohmann::ordered_json doc;
    doc["id"] = entry.id;
    doc["sqa_digest"] = entry.sqa_digest;
    doc["qt_digest"] = entry.qt_digest;
    doc["created"] = entry.created;
    doc["model"] = nlohmann::ordered_json::parse(tdm_to_json(entry.model));
    write_file_atomic(*data_dir_ / (entry.id + ".json"), doc.dump(2) + "\n");
}

void DatasetRegistry::load_existing() {
    for (const auto& f : std::filesystem::directory_iterator(*data_dir_)) {
        if (f.path().extension() != ".json") continue;
        auto doc = nlohmann::json::parse(read_file(f.path()));
        auto entry = std::make_shared<DatasetEntry>();
        entry->id = doc.at("id").get<std::string>();
        entry->sqa_digest = doc.at("sqa_digest").get<std::string>();
        entry->qt_digest = doc.at("qt_digest").get<std::string>();
        entry->created = doc.at("created").get<std::string>();
        entry->model = tdm_from_json(doc.at("model").dump());
        if (entry->id != dataset_id(entry->sqa_digest, entry->qt_digest)) {
            throw InputError(fmt::format("{}: id does not match its source digests", f.path().string()));
        }
        entries_.emplace(entry->id, std::move(entry));
    }
}

ServerConfig ServerConfig::from_env() {
    ServerConfig c;
    if (const char* addr = std::getenv("TDM_ADDR"); addr && *addr) {
        std::string_view a = addr;
        auto colon = a.rfind(':');
        if (colon == std::string_view::npos) throw InputError(fmt::format("TDM_ADDR must be host:port, got '{}'", a));
        c.host = std::string(a.substr(0, colon));
        c.port = std::stoi(std::string(a.substr(colon + 1)));
    }
    if (const char* dir = std::getenv("TDM_DATA_DIR"); dir && *dir) c.data_dir = dir;
    return c;
}

struct Server::Impl {
    DatasetRegistry& registry;
    ServerConfig config;
    httplib::Server http;

    Impl(DatasetRegistry& r, ServerConfig c) : registry(r), config(std::move(c)) { routes(); }

    static void send_json(httplib::Response& res, int status, const nlohmann::ordered_json& body) {
        res.status = status;
        res.set_content(body.dump(2) + "\n", "application/json");
    }

    static void send_error(httplib::Response& res, int status, std::string_view message,
                           std::optional<std::size_t> line = std::nullopt) {
        nlohmann::ordered_json body{{"error", message}};
        if (line) body["line"] = *line;
        send_json(res, status, body);
    }

    std::shared_ptr<const DatasetEntry> lookup(const httplib::Request& req, httplib::Response& res) {
        auto entry = registry.find(req.matches[1].str());
        if (!entry) send_error(res, 404, fmt::format("unknown dataset '{}'", req.matches[1].str()));
        return entry;
    }

    // Entries never change, so the source digest is a strong validator.
    static bool not_modified(const httplib::Request& req, httplib::Response& res, const DatasetEntry& e) {
        auto etag = fmt::format("\"{}\"", e.id);
        res.set_header("ETag", etag);
        res.set_header("Cache-Control", "public, max-age=31536000, immutable");
        if (req.get_header_value("If-None-Match") == etag) {
            res.status = 304;
            return true;
        }
        return false;
    }

    void post_dataset(const httplib::Request& req, httplib::Response& res) {
        std::optional<std::string> sqa;
        std::optional<std::string> qt;
        if (req.is_multipart_form_data()) {
            if (req.has_file("sqa")) sqa = req.get_file_value("sqa").content;
            if (req.has_file("qt")) qt = req.get_file_value("qt").content;
        } else {
            try {
                auto doc = nlohmann::json::parse(req.body);
                if (doc.contains("sqa")) sqa = doc.at("sqa").get<std::string>();
                if (doc.contains("qt")) qt = doc.at("qt").get<std::string>();
            } catch (const nlohmann::json::exception&) {
                return send_error(res, 400, "body must be multipart/form-data or JSON with 'sqa' and 'qt'");
            }
        }
        if (!sqa || !qt) return send_error(res, 400, "both 'sqa' and 'qt' bodies are required");
        try {
            auto [entry, created] = registry.add(*sqa, *qt);
            nlohmann::ordered_json body{{"id", entry->id},
                                        {"created", entry->created},
                                        {"sqa_digest", entry->sqa_digest},
                                        {"qt_digest", entry->qt_digest},
                                        {"vertices", entry->model.vertices().size()},
                                        {"edges", entry->model.edges().size()},
                                        {"zero_coverage_sets", entry->model.diagnostics().size()}};
            res.set_header("Location", fmt::format("/datasets/{}", entry->id));
            send_json(res, created ? 201 : 200, body);
        } catch (const InputError& ex) {
            send_error(res, 422, ex.what(), ex.line());
        }
    }

    void get_model(const httplib::Request& req, httplib::Response& res) {
        auto e = lookup(req, res);
        if (!e || not_modified(req, res, *e)) return;
        res.set_content(tdm_to_json(e->model), "application/json");
    }

    void get_levels(const httplib::Request& req, httplib::Response& res) {
        auto e = lookup(req, res);
        if (!e || not_modified(req, res, *e)) return;
        auto partition = partition_levels(e->model);
        nlohmann::ordered_json body;
        body["levels"] = nlohmann::ordered_json::array();
        for (std::size_t k = 1; k <= partition.count(); ++k) {
            nlohmann::ordered_json ids = nlohmann::ordered_json::array();
            for (auto i : partition.level(k)) ids.push_back(Tdm::edge_id(i));
            body["levels"].push_back({{"level", k}, {"edges", std::move(ids)}});
        }
        send_json(res, 200, body);
    }

    void get_view(const httplib::Request& req, httplib::Response& res) {
        auto e = lookup(req, res);
        if (!e) return;
        RenderOptions options;
        FilterSpec spec;
        try {
            auto q = req.target.find('?');
            auto params = parse_query(q == std::string::npos ? std::string_view{}
                                                             : std::string_view(req.target).substr(q + 1));
            QueryParams filter;
            auto flag = [](const std::string& key, const std::string& v) {
                if (v == "1" || v == "true" || v.empty()) return true;
                if (v == "0" || v == "false") return false;
                throw FilterError(fmt::format("{} must be true or false, got '{}'", key, v));
            };
            for (auto& [k, v] : params) {
                if (k == "format") {
                    options.format = parse_output_format(v);
                } else if (k == "strip") {
                    options.strip = flag(k, v);
                } else if (k == "include_empty") {
                    options.include_empty = flag(k, v);
                } else if (k == "hide_greyed") {
                    options.hide_greyed = flag(k, v);
                } else {
                    filter.emplace_back(k, v);
                }
            }
            spec = filter_from_params(filter);
            spec.validate(e->model);
        } catch (const FilterError& ex) {
            return send_error(res, 400, ex.what());
        }
        if (not_modified(req, res, *e)) return;
        std::string body;
        try {
            body = render_view(e->model, spec, options);
        } catch (const FilterError& ex) {
            return send_error(res, 400, ex.what());
        }
        const char* type = options.format == OutputFormat::svg    ? "image/svg+xml"
                           : options.format == OutputFormat::json ? "application/json"
                                                                  : "text/vnd.graphviz";
        res.set_content(body, type);
    }

    void routes() {
        http.set_default_headers({{"Access-Control-Allow-Origin", config.cors_origin},
                                  {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                  {"Access-Control-Allow-Headers", "Content-Type, If-None-Match"},
                                  {"Access-Control-Expose-Headers", "ETag, Location"}});
        http.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
        http.Post("/datasets", [this](const auto& req, auto& res) { post_dataset(req, res); });
        http.Get("/datasets", [this](const httplib::Request&, httplib::Response& res) {
            send_json(res, 200, {{"datasets", registry.ids()}});
        });
        http.Get(R"(/datasets/([^/]+)/model)", [this](const auto& req, auto& res) { get_model(req, res); });
        http.Get(R"(/datasets/([^/]+)/levels)", [this](const auto& req, auto& res) { get_levels(req, res); });
        http.Get(R"(/datasets/([^/]+)/view)", [this](const auto& req, auto& res) { get_view(req, res); });
        http.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
            std::string what = "internal error";
            try {
                std::rethrow_exception(ep);
            } catch (const std::exception& ex) {
                what = ex.what();
            } catch (...) {
            }
            send_error(res, 500, what);
        });
    }
};

Server::Server(DatasetRegistry& registry, ServerConfig config)
    : impl_(std::make_unique<Impl>(registry, std::move(config))) {}

Server::~Server() = default;

bool Server::listen() { return impl_->http.listen(impl_->config.host, impl_->config.port); }

int Server::bind_ephemeral() { return impl_->http.bind_to_any_port(impl_->config.host); }

bool Server::listen_after_bind() { return impl_->http.listen_after_bind(); }

void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

void Server::stop() { impl_->http.stop(); }

} // namespace tdm
