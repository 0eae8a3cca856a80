#include "secrec/session.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <random>
#include <stdexcept>

#include "secrec/condition.hpp"
#include "secrec/error.hpp"

namespace secrec {

const char* to_string(Stage stage) noexcept { return stage == Stage::SPStage ? "SPStage" : "SDPStage"; }

const char* to_string(SessionState state) noexcept {
  switch (state) {
    case SessionState::Eliciting: return "Eliciting";
    case SessionState::Recommending: return "Recommending";
    case SessionState::AwaitingSelection: return "AwaitingSelection";
    case SessionState::Conflicted: return "Conflicted";
    case SessionState::Done: return "Done";
  }
  return "?";
}

std::optional<Stage> stage_from_string(std::string_view s) noexcept {
  if (s == "SPStage") return Stage::SPStage;
  if (s == "SDPStage") return Stage::SDPStage;
  return std::nullopt;
}

std::optional<SessionState> state_from_string(std::string_view s) noexcept {
  for (auto st : {SessionState::Eliciting, SessionState::Recommending, SessionState::AwaitingSelection,
                  SessionState::Conflicted, SessionState::Done}) {
    if (s == to_string(st)) return st;
  }
  return std::nullopt;
}

const char* to_string(TranscriptEvent::Kind kind) noexcept {
  switch (kind) {
    case TranscriptEvent::Kind::Answer: return "answer";
    case TranscriptEvent::Kind::Retract: return "retract";
    case TranscriptEvent::Kind::Recommendations: return "recommendations";
    case TranscriptEvent::Kind::Selection: return "selection";
    case TranscriptEvent::Kind::Assistant: return "assistant";
  }
  return "?";
}

std::optional<TranscriptEvent::Kind> event_kind_from_string(std::string_view s) noexcept {
  using K = TranscriptEvent::Kind;
  for (auto k : {K::Answer, K::Retract, K::Recommendations, K::Selection, K::Assistant}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

void check_transition(SessionState from, SessionState to) {
  using S = SessionState;
  bool ok = false;
  switch (from) {
    case S::Eliciting: ok = to == S::Eliciting || to == S::Conflicted || to == S::Recommending; break;
    case S::Conflicted: ok = to == S::Eliciting || to == S::Conflicted; break;
    case S::Recommending: ok = to == S::AwaitingSelection; break;
    case S::AwaitingSelection: ok = to == S::Eliciting || to == S::Done; break;
    case S::Done: ok = false; break;
  }
  if (!ok) {
    throw std::logic_error(std::string("illegal session transition ") + to_string(from) + " -> " + to_string(to));
  }
}

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string new_session_id() {
  thread_local std::mt19937_64 rng{std::random_device{}()};
  static const char* hex = "0123456789abcdef";
  std::string id;
  for (int word = 0; word < 2; ++word) {
    auto bits = rng();
    for (int i = 0; i < 16; ++i) {
      id += hex[bits & 15];
      bits >>= 4;
    }
  }
  return id;
}

namespace {

[[noreturn]] void wrong_state(const Session& s, const char* op) {
  throw Error(ErrorCode::WrongState,
              std::string(op) + " is not allowed while the session is " + to_string(s.state));
}

}  // namespace

SessionEngine::SessionEngine(std::shared_ptr<const KbCatalog> catalog, Clock clock)
    : catalog_(std::move(catalog)), clock_(std::move(clock)) {
  if (!catalog_) throw std::invalid_argument("SessionEngine needs a catalog");
}

std::string SessionEngine::now() const { return clock_ ? clock_() : utc_timestamp(); }

std::shared_ptr<const KnowledgeBase> SessionEngine::active_kb(const Session& session) const {
  return catalog_->get(session.active_kb);
}

void SessionEngine::set_state(Session& session, SessionState to) const {
  check_transition(session.state, to);
  session.state = to;
}

Session SessionEngine::start(std::string requirement, const std::string& kb_id) const {
  auto kb = catalog_->get(kb_id);
  Session s;
  s.id = new_session_id();
  s.requirement = std::move(requirement);
  s.root_kb = kb_id;
  s.active_kb = kb_id;
  s.stage = Stage::SPStage;
  s.state = SessionState::Eliciting;
  // Unconditional filters can empty the set before the first answer.
  if (filter_patterns(*kb, s.ctx).feasible.empty()) s.state = SessionState::Conflicted;
  return s;
}

Question SessionEngine::question_for(const Session& session, const PropertyId& property) const {
  auto kb = active_kb(session);
  const auto* prop = kb->find_property(property);
  if (!prop || prop->kind != PropertyKind::Context) {
    throw Error(ErrorCode::UnknownProperty, "unknown context property '" + property + "'");
  }
  Question q;
  q.property_id = prop->id;
  q.question_text = prop->question_text.empty() ? prop->description : prop->question_text;
  q.options = prop->domain;
  for (const auto& v : prop->domain) {
    ContextAssignment probe = session.ctx;
    probe.set(prop->id, v);
    std::size_t count = 0;
    if (check_context(*kb, probe).empty()) count = filter_patterns(*kb, probe).feasible.size();
    q.impact_preview.emplace_back(v, count);
  }
  return q;
}

std::optional<Question> SessionEngine::next_question(Session& session) const {
  if (session.state != SessionState::Eliciting) wrong_state(session, "next_question");
  auto kb = active_kb(session);
  for (const auto* prop : kb->properties_of(PropertyKind::Context)) {
    if (!session.ctx.contains(prop->id)) return question_for(session, prop->id);
  }
  set_state(session, SessionState::Recommending);
  return std::nullopt;
}

void SessionEngine::apply_answer(Session& session, const PropertyId& property, const Value& value,
                                 bool inherited) const {
  session.ctx.set(property, value);
  std::string ts = now();
  session.answer_log.push_back({property, value, ts, inherited});
  TranscriptEvent ev;
  ev.kind = TranscriptEvent::Kind::Answer;
  ev.stage = session.stage;
  ev.timestamp = ts;
  ev.property = property;
  ev.value = value;
  ev.inherited = inherited;
  session.transcript.push_back(std::move(ev));
}

AnswerOutcome SessionEngine::answer(Session& session, const PropertyId& property, const Value& value) const {
  if (session.state != SessionState::Eliciting) wrong_state(session, "answer");
  auto kb = active_kb(session);
  const auto* prop = kb->find_property(property);
  if (!prop || prop->kind != PropertyKind::Context) {
    throw Error(ErrorCode::UnknownProperty, "unknown context property '" + property + "'");
  }
  if (!prop->admits(value)) {
    std::string domain;
    for (const auto& v : prop->domain) domain += (domain.empty() ? "" : ", ") + v;
    throw Error(ErrorCode::ValueOutOfDomain,
                "value '" + value + "' is outside the domain of '" + property + "' {" + domain + "}");
  }
  if (session.ctx.contains(property)) {
    throw Error(ErrorCode::AlreadyAnswered, "'" + property + "' is already answered; retract it first");
  }
  ContextAssignment probe = session.ctx;
  probe.set(property, value);
  auto violated = check_context(*kb, probe);
  if (!violated.empty()) {
    std::string msg = "answer violates contextual constraint";
    for (const auto& id : violated) {
      msg += " '" + id + "'";
      for (const auto& c : kb->constraints) {
        if (c.id == id && !c.message.empty()) msg += ": " + c.message;
      }
    }
    throw Error(ErrorCode::ContextViolation, msg);
  }

  apply_answer(session, property, value, false);
  AnswerOutcome out;
  out.accepted = true;
  out.feasible_count = filter_patterns(*kb, session.ctx).feasible.size();
  if (out.feasible_count == 0) {
    set_state(session, SessionState::Conflicted);
    out.conflict = conflict(session);
  } else {
    set_state(session, SessionState::Eliciting);
  }
  out.state = session.state;
  return out;
}

void SessionEngine::retract(Session& session, const PropertyId& property) const {
  if (session.state != SessionState::Eliciting && session.state != SessionState::Conflicted) {
    wrong_state(session, "retract");
  }
  auto it = std::find_if(session.answer_log.begin(), session.answer_log.end(),
                         [&](const AnswerRecord& r) { return r.property == property; });
  if (it == session.answer_log.end()) {
    throw Error(ErrorCode::NotAnswered, "'" + property + "' has not been answered");
  }
  session.answer_log.erase(it);
  session.ctx.erase(property);
  TranscriptEvent ev;
  ev.kind = TranscriptEvent::Kind::Retract;
  ev.stage = session.stage;
  ev.timestamp = now();
  ev.property = property;
  session.transcript.push_back(std::move(ev));

  auto kb = active_kb(session);
  bool empty = filter_patterns(*kb, session.ctx).feasible.empty();
  set_state(session, empty ? SessionState::Conflicted : SessionState::Eliciting);
}

FeasibilityResult SessionEngine::feasibility(const Session& session) const {
  return filter_patterns(*active_kb(session), session.ctx);
}

std::optional<ConflictDiagnosis> SessionEngine::conflict(const Session& session) const {
  if (session.state != SessionState::Conflicted) return std::nullopt;
  std::vector<Answer> ordered;
  for (const auto& r : session.answer_log) ordered.emplace_back(r.property, r.value);
  return diagnose_conflict(*active_kb(session), ordered);
}

Recommendations SessionEngine::recommendations(Session& session) const {
  if (session.state != SessionState::Recommending && session.state != SessionState::AwaitingSelection) {
    wrong_state(session, "recommendations");
  }
  auto kb = active_kb(session);
  Recommendations out;
  out.kb_id = kb->id;
  out.stage = session.stage;
  out.ctx = session.ctx;
  out.ranking = rank(*kb, session.ctx);
  out.explanation = explain(*kb, session.ctx, out.ranking);
  if (session.state == SessionState::Recommending) {
    set_state(session, SessionState::AwaitingSelection);
    TranscriptEvent ev;
    ev.kind = TranscriptEvent::Kind::Recommendations;
    ev.stage = session.stage;
    ev.timestamp = now();
    session.transcript.push_back(std::move(ev));
  }
  return out;
}

void SessionEngine::select_pattern(Session& session, const PatternId& pattern) const {
  if (session.state != SessionState::AwaitingSelection) wrong_state(session, "select_pattern");
  auto kb = active_kb(session);
  auto feasible = filter_patterns(*kb, session.ctx).feasible;
  if (std::find(feasible.begin(), feasible.end(), pattern) == feasible.end()) {
    throw Error(ErrorCode::NotRecommended, "pattern '" + pattern + "' was not recommended");
  }
  TranscriptEvent ev;
  ev.kind = TranscriptEvent::Kind::Selection;
  ev.stage = session.stage;
  ev.timestamp = now();
  ev.pattern = pattern;
  session.transcript.push_back(std::move(ev));

  if (session.stage == Stage::SDPStage) {
    session.selected_sdp = pattern;
    set_state(session, SessionState::Done);
    return;
  }
  session.selected_sp = pattern;
  auto child_id = catalog_->child_of(kb->id, pattern);
  if (!child_id) {
    set_state(session, SessionState::Done);
    return;
  }
  auto child = catalog_->get(*child_id);
  std::vector<AnswerRecord> previous = std::move(session.answer_log);
  session.stage = Stage::SDPStage;
  session.active_kb = *child_id;
  session.ctx = {};
  session.answer_log.clear();
  set_state(session, SessionState::Eliciting);

  // Shared context properties carry over as inherited answers, unless one
  // would violate a constraint or empty the feasible set.
  for (const auto& rec : previous) {
    const auto* prop = child->find_property(rec.property);
    if (!prop || prop->kind != PropertyKind::Context || !prop->admits(rec.value)) continue;
    ContextAssignment probe = session.ctx;
    probe.set(rec.property, rec.value);
    if (!check_context(*child, probe).empty()) continue;
    if (filter_patterns(*child, probe).feasible.empty()) continue;
    apply_answer(session, rec.property, rec.value, true);
  }
}

Session SessionEngine::replay(const Session& recorded) const {
  Session s = start(recorded.requirement, recorded.root_kb);
  s.id = recorded.id;
  for (const auto& ev : recorded.transcript) {
    switch (ev.kind) {
      case TranscriptEvent::Kind::Answer:
        if (!ev.inherited) answer(s, ev.property, ev.value);
        break;
      case TranscriptEvent::Kind::Retract:
        retract(s, ev.property);
        break;
      case TranscriptEvent::Kind::Recommendations:
        if (s.state == SessionState::Eliciting && next_question(s)) {
          throw Error(ErrorCode::WrongState, "transcript requests recommendations before elicitation finished");
        }
        recommendations(s);
        break;
      case TranscriptEvent::Kind::Selection:
        select_pattern(s, ev.pattern);
        break;
      case TranscriptEvent::Kind::Assistant:
        s.transcript.push_back(ev);
        break;
    }
  }
  // Eliciting -> Recommending happens on a question request, which the
  // transcript does not record.
  if (recorded.state == SessionState::Recommending && s.state == SessionState::Eliciting) next_question(s);
  return s;
}

}  // namespace secrec
