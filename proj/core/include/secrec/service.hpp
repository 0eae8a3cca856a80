#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "secrec/assistant.hpp"
#include "secrec/catalog.hpp"
#include "secrec/error.hpp"
#include "secrec/session.hpp"
#include "secrec/store.hpp"

namespace secrec {

struct ServiceConfig {
  std::filesystem::path kb_dir;
  std::filesystem::path store_dir;
  std::string host = "127.0.0.1";
  int port = 8080;
  AssistantConfig assistant;

  /// Parses "host:port" (port 0 picks a free one). Throws Error(InvalidRequest).
  void set_listen(const std::string& host_port);
};

struct HttpReply {
  int status = 200;
  nlohmann::json body;
};

/// Maps an error code to an HTTP status.
int http_status(ErrorCode code) noexcept;
nlohmann::json error_envelope(const Error& error);

/// JSON API over a KB catalog and a session store. `handle` is the whole
/// routing table and is usable without a socket; `listen` serves it over HTTP.
class Service {
 public:
  /// Loads the catalog and opens the store; throws on unreadable inputs.
  explicit Service(ServiceConfig config, SessionEngine::Clock clock = {});
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  HttpReply handle(const std::string& method, const std::string& path, const std::string& body);

  /// Binds the configured address and returns the port. Throws Error(Io)
  /// if the address cannot be bound.
  int bind();
  /// Serves requests until stop(); requires bind().
  void listen_after_bind();
  void stop();

  const ServiceConfig& config() const noexcept { return config_; }
  const SessionEngine& engine() const noexcept { return *engine_; }
  SessionStore& store() noexcept { return *store_; }

 private:
  struct Transport;

  ServiceConfig config_;
  std::shared_ptr<const KbCatalog> catalog_;
  std::unique_ptr<SessionEngine> engine_;
  std::unique_ptr<SessionStore> store_;
  Assistant assistant_;
  std::unique_ptr<Transport> transport_;
};

}  // namespace secrec
