#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "secrec/catalog.hpp"
#include "secrec/maut.hpp"
#include "secrec/model.hpp"
#include "secrec/solver.hpp"

namespace secrec {

enum class Stage { SPStage, SDPStage };
enum class SessionState { Eliciting, Recommending, AwaitingSelection, Conflicted, Done };

const char* to_string(Stage stage) noexcept;
const char* to_string(SessionState state) noexcept;
std::optional<Stage> stage_from_string(std::string_view s) noexcept;
std::optional<SessionState> state_from_string(std::string_view s) noexcept;

struct AnswerRecord {
  PropertyId property;
  Value value;
  std::string timestamp;
  /// Pre-filled from the SP stage when entering the SDP stage.
  bool inherited = false;

  bool operator==(const AnswerRecord&) const = default;
};

struct TranscriptEvent {
  enum class Kind { Answer, Retract, Recommendations, Selection, Assistant };

  Kind kind = Kind::Answer;
  Stage stage = Stage::SPStage;
  std::string timestamp;
  PropertyId property;          ///< Answer, Retract
  Value value;                  ///< Answer
  bool inherited = false;       ///< Answer
  PatternId pattern;            ///< Selection
  std::string question;         ///< Assistant
  std::string answer;           ///< Assistant
  std::string source;           ///< Assistant: "stub" or "external"
  std::vector<std::string> cited;  ///< Assistant

  bool operator==(const TranscriptEvent&) const = default;
};

const char* to_string(TranscriptEvent::Kind kind) noexcept;
std::optional<TranscriptEvent::Kind> event_kind_from_string(std::string_view s) noexcept;

/// One architect interaction across the SP and SDP stages. Plain value; all
/// behavior lives in SessionEngine.
struct Session {
  std::string id;
  std::string requirement;
  std::string root_kb;
  Stage stage = Stage::SPStage;
  std::string active_kb;
  ContextAssignment ctx;
  std::vector<AnswerRecord> answer_log;  ///< current stage, in answer order
  std::optional<PatternId> selected_sp;
  std::optional<PatternId> selected_sdp;
  SessionState state = SessionState::Eliciting;
  std::vector<TranscriptEvent> transcript;

  bool operator==(const Session&) const = default;
};

struct Question {
  PropertyId property_id;
  std::string question_text;
  std::vector<Value> options;
  /// Feasible-set size if the option were chosen, in option order.
  std::vector<std::pair<Value, std::size_t>> impact_preview;
};

struct AnswerOutcome {
  bool accepted = false;
  std::size_t feasible_count = 0;
  std::optional<ConflictDiagnosis> conflict;
  SessionState state = SessionState::Eliciting;
};

struct Recommendations {
  std::string kb_id;
  Stage stage = Stage::SPStage;
  ContextAssignment ctx;
  Ranking ranking;
  Explanation explanation;
};

/// Throws std::logic_error for transitions outside the recommendation process.
void check_transition(SessionState from, SessionState to);

class SessionEngine {
 public:
  using Clock = std::function<std::string()>;

  explicit SessionEngine(std::shared_ptr<const KbCatalog> catalog, Clock clock = {});

  const KbCatalog& catalog() const noexcept { return *catalog_; }
  std::shared_ptr<const KnowledgeBase> active_kb(const Session& session) const;

  Session start(std::string requirement, const std::string& kb_id) const;
  std::optional<Question> next_question(Session& session) const;
  Question question_for(const Session& session, const PropertyId& property) const;
  AnswerOutcome answer(Session& session, const PropertyId& property, const Value& value) const;
  void retract(Session& session, const PropertyId& property) const;
  Recommendations recommendations(Session& session) const;
  void select_pattern(Session& session, const PatternId& pattern) const;

  FeasibilityResult feasibility(const Session& session) const;
  /// Diagnosis for a Conflicted session, nullopt otherwise.
  std::optional<ConflictDiagnosis> conflict(const Session& session) const;

  /// Re-executes the recorded transcript on a fresh session with the same id.
  Session replay(const Session& recorded) const;

  std::string now() const;

 private:
  void set_state(Session& session, SessionState to) const;
  void apply_answer(Session& session, const PropertyId& property, const Value& value, bool inherited) const;

  std::shared_ptr<const KbCatalog> catalog_;
  Clock clock_;
};

std::string new_session_id();
std::string utc_timestamp();

}  // namespace secrec
