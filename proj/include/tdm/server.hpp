#pragma once

// HTTP service over built models:
//   POST /datasets                      multipart (sqa, qt) or JSON {"sqa", "qt"}
//   GET  /datasets                      known dataset ids
//   GET  /datasets/{id}/model           model JSON
//   GET  /datasets/{id}/levels          arity levels with explicit empty levels
//   GET  /datasets/{id}/view?...        filtered view, format=svg|json|dot

#include "tdm/hypergraph.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>

namespace tdm {

std::string sha256_hex(std::string_view data);

struct DatasetEntry {
    std::string id;
    std::string sqa_digest;
    std::string qt_digest;
    std::string created; // UTC, ISO 8601
    Tdm model;
};

/// Id derived from both source digests; identical uploads share an id.
std::string dataset_id(std::string_view sqa_digest, std::string_view qt_digest);

/// Concurrent readers, exclusive insertion. Entries are immutable once added.
/// With a data directory, every entry is persisted as `<id>.json` and
/// reloaded on construction.
class DatasetRegistry {
public:
    explicit DatasetRegistry(std::optional<std::filesystem::path> data_dir = std::nullopt);

    struct AddResult {
        std::shared_ptr<const DatasetEntry> entry;
        bool created = false;
    };

    /// Builds the model eagerly. Throws InputError on invalid CSV input.
    AddResult add(std::string_view sqa_csv, std::string_view qt_csv);

    std::shared_ptr<const DatasetEntry> find(std::string_view id) const;
    std::vector<std::string> ids() const;

private:
    void persist(const DatasetEntry& entry) const;
    void load_existing();

    std::optional<std::filesystem::path> data_dir_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<const DatasetEntry>, std::less<>> entries_;
};

struct ServerConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string cors_origin = "*";
    std::optional<std::filesystem::path> data_dir;

    /// Reads TDM_ADDR (host:port) and TDM_DATA_DIR over the defaults.
    static ServerConfig from_env();
};

class Server {
public:
    Server(DatasetRegistry& registry, ServerConfig config);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Blocks until stop(). Returns false when the address cannot be bound.
    bool listen();
    /// Binds an ephemeral port on the configured host; returns it (or -1).
    int bind_ephemeral();
    /// Serves on a socket bound by bind_ephemeral(); blocks until stop().
    bool listen_after_bind();
    void wait_until_ready() const;
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace tdm
