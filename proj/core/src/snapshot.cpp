#include "secrec/snapshot.hpp"

#include "secrec/error.hpp"

namespace secrec {

using nlohmann::json;

namespace {

json optional_string(const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); }

json event_to_json(const TranscriptEvent& ev) {
  json j = {{"kind", to_string(ev.kind)}, {"stage", to_string(ev.stage)}, {"timestamp", ev.timestamp}};
  switch (ev.kind) {
    case TranscriptEvent::Kind::Answer:
      j["property"] = ev.property;
      j["value"] = ev.value;
      j["inherited"] = ev.inherited;
      break;
    case TranscriptEvent::Kind::Retract:
      j["property"] = ev.property;
      break;
    case TranscriptEvent::Kind::Selection:
      j["pattern"] = ev.pattern;
      break;
    case TranscriptEvent::Kind::Assistant:
      j["question"] = ev.question;
      j["answer"] = ev.answer;
      j["source"] = ev.source;
      j["cited"] = ev.cited;
      break;
    case TranscriptEvent::Kind::Recommendations:
      break;
  }
  return j;
}

[[noreturn]] void corrupt(const std::string& origin, const std::string& why) {
  throw Error(ErrorCode::CorruptSnapshot, "corrupt session snapshot '" + origin + "': " + why);
}

TranscriptEvent event_from_json(const json& j, const std::string& origin) {
  TranscriptEvent ev;
  auto kind = event_kind_from_string(j.at("kind").get<std::string>());
  auto stage = stage_from_string(j.at("stage").get<std::string>());
  if (!kind || !stage) corrupt(origin, "unknown transcript event kind or stage");
  ev.kind = *kind;
  ev.stage = *stage;
  ev.timestamp = j.at("timestamp").get<std::string>();
  ev.property = j.value("property", std::string());
  ev.value = j.value("value", std::string());
  ev.inherited = j.value("inherited", false);
  ev.pattern = j.value("pattern", std::string());
  ev.question = j.value("question", std::string());
  ev.answer = j.value("answer", std::string());
  ev.source = j.value("source", std::string());
  if (j.contains("cited")) ev.cited = j.at("cited").get<std::vector<std::string>>();
  return ev;
}

std::optional<std::string> read_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

}  // namespace

json session_to_json(const Session& s) {
  json log = json::array();
  for (const auto& r : s.answer_log) {
    log.push_back({{"property", r.property}, {"value", r.value}, {"timestamp", r.timestamp}, {"inherited", r.inherited}});
  }
  json transcript = json::array();
  for (const auto& ev : s.transcript) transcript.push_back(event_to_json(ev));
  return {
      {"schema_version", kSnapshotSchemaVersion},
      {"id", s.id},
      {"requirement", s.requirement},
      {"root_kb", s.root_kb},
      {"stage", to_string(s.stage)},
      {"active_kb", s.active_kb},
      {"state", to_string(s.state)},
      {"context", s.ctx.values},
      {"answer_log", log},
      {"selected_sp", optional_string(s.selected_sp)},
      {"selected_sdp", optional_string(s.selected_sdp)},
      {"transcript", transcript},
  };
}

Session session_from_json(const json& doc, const std::string& origin) {
  if (!doc.is_object()) corrupt(origin, "not a JSON object");
  if (!doc.contains("schema_version") || !doc.at("schema_version").is_number_integer()) {
    corrupt(origin, "missing schema_version");
  }
  int version = doc.at("schema_version").get<int>();
  if (version != kSnapshotSchemaVersion) {
    throw Error(ErrorCode::MigrationRequired, "session snapshot '" + origin + "' has schema_version " +
                                                  std::to_string(version) + "; this build reads version " +
                                                  std::to_string(kSnapshotSchemaVersion) + " (migration required)");
  }
  Session s;
  try {
    s.id = doc.at("id").get<std::string>();
    s.requirement = doc.at("requirement").get<std::string>();
    s.root_kb = doc.at("root_kb").get<std::string>();
    s.active_kb = doc.at("active_kb").get<std::string>();
    auto stage = stage_from_string(doc.at("stage").get<std::string>());
    auto state = state_from_string(doc.at("state").get<std::string>());
    if (!stage || !state) corrupt(origin, "unknown stage or state");
    s.stage = *stage;
    s.state = *state;
    s.ctx.values = doc.at("context").get<std::map<std::string, std::string>>();
    for (const auto& r : doc.at("answer_log")) {
      s.answer_log.push_back({r.at("property").get<std::string>(), r.at("value").get<std::string>(),
                              r.at("timestamp").get<std::string>(), r.value("inherited", false)});
    }
    s.selected_sp = read_optional(doc, "selected_sp");
    s.selected_sdp = read_optional(doc, "selected_sdp");
    for (const auto& ev : doc.at("transcript")) s.transcript.push_back(event_from_json(ev, origin));
  } catch (const json::exception& e) {
    corrupt(origin, e.what());
  }
  ContextAssignment replayed;
  for (const auto& r : s.answer_log) replayed.set(r.property, r.value);
  if (replayed != s.ctx || replayed.size() != s.answer_log.size()) {
    corrupt(origin, "answer_log does not replay to the stored context");
  }
  return s;
}

std::string serialize_snapshot(const Session& session) { return session_to_json(session).dump(2) + "\n"; }

Session parse_snapshot(std::string_view text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    corrupt(origin, e.what());
  }
  return session_from_json(doc, origin);
}

}  // namespace secrec
