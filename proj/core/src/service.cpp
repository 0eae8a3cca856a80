#include "secrec/service.hpp"

#include <httplib.h>

#include <charconv>
#include <mutex>
#include <sstream>

#include "secrec/dsl.hpp"
#include "secrec/error.hpp"
#include "secrec/payload.hpp"
#include "secrec/snapshot.hpp"

using nlohmann::json;

namespace secrec {

void ServiceConfig::set_listen(const std::string& host_port) {
  auto colon = host_port.rfind(':');
  if (colon == std::string::npos || colon + 1 == host_port.size()) {
    throw Error(ErrorCode::InvalidRequest, "listen address must be host:port, got '" + host_port + "'");
  }
  int p = -1;
  const char* first = host_port.data() + colon + 1;
  const char* last = host_port.data() + host_port.size();
  auto [ptr, ec] = std::from_chars(first, last, p);
  if (ec != std::errc{} || ptr != last || p < 0 || p > 65535) {
    throw Error(ErrorCode::InvalidRequest, "invalid port in '" + host_port + "'");
  }
  host = colon == 0 ? "127.0.0.1" : host_port.substr(0, colon);
  port = p;
}

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownKnowledgeBase:
    case ErrorCode::UnknownSession:
      return 404;
    case ErrorCode::WrongState:
    case ErrorCode::AlreadyAnswered:
    case ErrorCode::EmptyFeasibleSet:
    case ErrorCode::FeasibleSetNotEmpty:
    case ErrorCode::MigrationRequired:
      return 409;
    case ErrorCode::UnknownProperty:
    case ErrorCode::UnknownPattern:
    case ErrorCode::ValueOutOfDomain:
    case ErrorCode::ContextViolation:
    case ErrorCode::IncompleteContext:
    case ErrorCode::NotAnswered:
    case ErrorCode::NotRecommended:
      return 422;
    case ErrorCode::ParseError:
    case ErrorCode::SemanticError:
    case ErrorCode::InvalidRequest:
      return 400;
    case ErrorCode::InvalidKnowledgeBase:
    case ErrorCode::DegenerateWeights:
    case ErrorCode::CorruptSnapshot:
    case ErrorCode::Io:
      return 500;
  }
  return 500;
}

json error_envelope(const Error& error) {
  json details = json::object();
  if (const auto* kb = dynamic_cast<const KbError*>(&error)) {
    details["file"] = kb->span().file;
    details["line"] = kb->span().line;
    details["column"] = kb->span().column;
    if (!kb->expected().empty()) details["expected"] = kb->expected();
  }
  return {{"error", {{"code", to_string(error.code())}, {"message", error.what()}, {"details", details}}}};
}

struct Service::Transport {
  httplib::Server server;
};

namespace {

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(path);
  while (std::getline(in, part, '/')) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::InvalidRequest, "request body must be a JSON object");
  }
  return doc;
}

std::string required_string(const json& doc, const char* field) {
  auto it = doc.find(field);
  if (it == doc.end() || !it->is_string()) {
    throw Error(ErrorCode::InvalidRequest, std::string("missing string field '") + field + "'");
  }
  return it->get<std::string>();
}

struct RouteNotFound : Error {
  using Error::Error;
};

[[noreturn]] void not_found(const std::string& method, const std::string& path) {
  throw RouteNotFound(ErrorCode::InvalidRequest, "no route for " + method + " " + path);
}

}  // namespace

Service::Service(ServiceConfig config, SessionEngine::Clock clock)
    : config_(std::move(config)), assistant_(config_.assistant) {
  catalog_ = std::make_shared<const KbCatalog>(KbCatalog::load_directory(config_.kb_dir));
  engine_ = std::make_unique<SessionEngine>(catalog_, std::move(clock));
  store_ = std::make_unique<SessionStore>(config_.store_dir);
}

Service::~Service() = default;

HttpReply Service::handle(const std::string& method, const std::string& path, const std::string& body) {
  try {
    auto parts = split_path(path);
    if (parts.empty()) not_found(method, path);

    if (parts[0] == "kbs") {
      if (method != "GET" || parts.size() > 2) not_found(method, path);
      if (parts.size() == 1) {
        json out = json::array();
        for (const auto& id : catalog_->ids()) out.push_back(kb_summary_json(*catalog_->get(id)));
        return {200, out};
      }
      return {200, kb_detail_json(*catalog_->get(parts[1]))};
    }
    if (parts[0] != "sessions") not_found(method, path);

    if (parts.size() == 1) {
      if (method != "POST") not_found(method, path);
      json req = parse_body(body);
      Session s = engine_->start(required_string(req, "requirement"), required_string(req, "kb"));
      std::lock_guard lock(store_->session_mutex(s.id));
      store_->save(s);
      return {201, session_view_json(*engine_, s)};
    }

    const std::string& id = parts[1];
    const std::string sub = parts.size() > 2 ? parts[2] : "";

    // The assistant call may hit the network; the session lock is held only
    // around the load and the final append.
    if (sub == "assistant" && parts.size() == 3 && method == "POST") {
      std::string question = required_string(parse_body(body), "question");
      std::shared_ptr<const KnowledgeBase> kb;
      ContextAssignment ctx;
      {
        std::lock_guard lock(store_->session_mutex(id));
        Session s = store_->load(id);
        require_assistant_state(s);
        kb = engine_->active_kb(s);
        ctx = s.ctx;
      }
      AssistantExchange exchange = assistant_.ask(*kb, ctx, question);
      std::lock_guard lock(store_->session_mutex(id));
      Session s = store_->load(id);
      require_assistant_state(s);
      record_exchange(s, exchange, engine_->now());
      store_->save(s);
      return {200, exchange_json(exchange)};
    }

    std::lock_guard lock(store_->session_mutex(id));
    Session s = store_->load(id);

    if (sub.empty() && parts.size() == 2 && method == "GET") {
      return {200, session_view_json(*engine_, s)};
    }
    if (sub == "question" && parts.size() == 3 && method == "GET") {
      json out = {{"question", nullptr}};
      if (s.state == SessionState::Eliciting) {
        auto q = engine_->next_question(s);
        if (q) {
          out["question"] = question_json(*q);
        } else {
          store_->save(s);
        }
      }
      out["state"] = to_string(s.state);
      return {200, out};
    }
    if (sub == "answers" && parts.size() == 3 && method == "POST") {
      json req = parse_body(body);
      auto outcome = engine_->answer(s, required_string(req, "property"), required_string(req, "value"));
      store_->save(s);
      json out = answer_outcome_json(outcome);
      out["session"] = session_view_json(*engine_, s);
      return {200, out};
    }
    if (sub == "answers" && parts.size() == 4 && method == "DELETE") {
      engine_->retract(s, parts[3]);
      store_->save(s);
      return {200, session_view_json(*engine_, s)};
    }
    if (sub == "recommendations" && parts.size() == 3 && method == "GET") {
      if (s.state == SessionState::Eliciting && engine_->next_question(s)) {
        throw Error(ErrorCode::WrongState, "recommendations need every context question answered");
      }
      auto recs = engine_->recommendations(s);
      store_->save(s);
      return {200, recommendations_payload(*engine_->catalog().get(recs.kb_id), recs)};
    }
    if (sub == "selection" && parts.size() == 3 && method == "POST") {
      engine_->select_pattern(s, required_string(parse_body(body), "pattern"));
      store_->save(s);
      return {200, session_view_json(*engine_, s)};
    }
    not_found(method, path);
  } catch (const RouteNotFound& e) {
    return {404, error_envelope(e)};
  } catch (const Error& e) {
    return {http_status(e.code()), error_envelope(e)};
  } catch (const std::exception& e) {
    return {500, error_envelope(Error(ErrorCode::Io, e.what()))};
  }
}

int Service::bind() {
  if (!transport_) {
    transport_ = std::make_unique<Transport>();
    auto route = [this](const httplib::Request& req, httplib::Response& res) {
      HttpReply reply = handle(req.method, req.path, req.body);
      res.status = reply.status;
      res.set_content(dump_payload(reply.body), "application/json");
    };
    transport_->server.Get(".*", route);
    transport_->server.Post(".*", route);
    transport_->server.Delete(".*", route);
  }
  int port = config_.port;
  bool ok = false;
  if (port == 0) {
    port = transport_->server.bind_to_any_port(config_.host);
    ok = port > 0;
  } else {
    ok = transport_->server.bind_to_port(config_.host, port);
  }
  if (!ok) {
    throw Error(ErrorCode::Io, "cannot listen on " + config_.host + ":" + std::to_string(config_.port));
  }
  return port;
}

void Service::listen_after_bind() {
  if (!transport_) throw Error(ErrorCode::Io, "service is not bound");
  transport_->server.listen_after_bind();
}

void Service::stop() {
  if (transport_) transport_->server.stop();
}

}  // namespace secrec
