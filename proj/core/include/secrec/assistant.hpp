#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "secrec/model.hpp"
#include "secrec/session.hpp"

namespace secrec {

enum class AssistantBackend { Stub, External };

struct AssistantConfig {
  AssistantBackend backend = AssistantBackend::Stub;
  /// http://host[:port]/path of the external answering service.
  std::string endpoint;
  double timeout_seconds = 10.0;
  std::string api_key;

  /// Reads SECREC_ASSISTANT_BACKEND, SECREC_ASSISTANT_ENDPOINT,
  /// SECREC_ASSISTANT_TIMEOUT_SECONDS and SECREC_ASSISTANT_API_KEY.
  static AssistantConfig from_environment();
};

struct AssistantExchange {
  std::string question;
  std::string answer;
  AssistantBackend source = AssistantBackend::Stub;
  std::vector<std::string> cited_elements;

  bool operator==(const AssistantExchange&) const = default;
};

inline constexpr std::string_view kNoMatchAnswer = "no knowledge-base match";

const char* to_string(AssistantBackend backend) noexcept;

/// Deterministic offline answer: keyword overlap against property
/// descriptions, pattern descriptions and filter messages of `kb`. Filters
/// that currently exclude patterns also match on those patterns' vocabulary.
AssistantExchange stub_answer(const KnowledgeBase& kb, const ContextAssignment& ctx, std::string_view question);

class Assistant {
 public:
  explicit Assistant(AssistantConfig config = {}) : config_(std::move(config)) {}

  /// Never fails: external errors fall back to the stub.
  AssistantExchange ask(const KnowledgeBase& kb, const ContextAssignment& ctx, const std::string& question) const;

  const AssistantConfig& config() const noexcept { return config_; }

 private:
  AssistantConfig config_;
};

/// Appends the exchange to the session transcript.
void record_exchange(Session& session, const AssistantExchange& exchange, std::string timestamp);

/// Convenience for single-threaded callers: ask and record. Throws
/// Error(WrongState) outside the elicitation loop.
AssistantExchange ask(const SessionEngine& engine, Session& session, const Assistant& assistant,
                      const std::string& question);

/// Throws Error(WrongState) unless the session is eliciting (or conflicted).
void require_assistant_state(const Session& session);

}  // namespace secrec
