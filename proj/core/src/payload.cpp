#include "secrec/payload.hpp"

#include "secrec/condition.hpp"
#include "secrec/snapshot.hpp"

namespace secrec {

using nlohmann::json;

json recommendations_payload(const KnowledgeBase& kb, const ContextAssignment& ctx, const Ranking& ranking,
                             const Explanation& explanation) {
  json recs = json::array();
  for (const auto& rec : explanation.recommended) {
    const auto* pat = kb.find_pattern(rec.pattern_id);
    json contributions = json::object();
    for (const auto& [crit, c] : rec.contributions) {
      contributions[crit] = {{"weight", c.weight}, {"utility", c.utility}, {"product", c.product}};
    }
    recs.push_back({
        {"rank", rec.rank},
        {"pattern", rec.pattern_id},
        {"level", pat ? to_string(pat->level) : "SP"},
        {"score", rec.score},
        {"description", rec.description},
        {"child_kb", pat && pat->child_kb ? json(*pat->child_kb) : json(nullptr)},
        {"contributions", contributions},
    });
  }
  json excluded = json::array();
  for (const auto& ex : explanation.excluded) {
    json violated = json::array();
    for (const auto& [fid, msg] : ex.violated) violated.push_back({{"filter", fid}, {"message", msg}});
    excluded.push_back({{"pattern", ex.pattern_id}, {"violated", violated}});
  }
  return {
      {"kb", kb.id},
      {"context", ctx.values},
      {"weights", ranking.weights.weights.weights},
      {"fired_rules", ranking.weights.fired_rules},
      {"recommendations", recs},
      {"excluded", excluded},
  };
}

json recommendations_payload(const KnowledgeBase& kb, const Recommendations& recs) {
  return recommendations_payload(kb, recs.ctx, recs.ranking, recs.explanation);
}

json conflict_json(const ConflictDiagnosis& diag) {
  json conflict = json::array();
  for (const auto& [p, v] : diag.conflict) conflict.push_back({{"property", p}, {"value", v}});
  json messages = json::array();
  for (const auto& [fid, msg] : diag.messages) messages.push_back({{"filter", fid}, {"message", msg}});
  return {{"conflict", conflict}, {"messages", messages}, {"unconditional_filters", diag.unconditional_filters}};
}

json feasibility_json(const FeasibilityResult& result) {
  return {{"feasible", result.feasible}, {"exclusions", result.exclusions}};
}

json question_json(const Question& q) {
  json preview = json::array();
  for (const auto& [v, n] : q.impact_preview) preview.push_back({{"value", v}, {"feasible_count", n}});
  return {{"property", q.property_id}, {"question", q.question_text}, {"options", q.options}, {"impact_preview", preview}};
}

json answer_outcome_json(const AnswerOutcome& outcome) {
  return {
      {"accepted", outcome.accepted},
      {"feasible_count", outcome.feasible_count},
      {"state", to_string(outcome.state)},
      {"conflict", outcome.conflict ? conflict_json(*outcome.conflict) : json(nullptr)},
  };
}

json exchange_json(const AssistantExchange& exchange) {
  return {{"question", exchange.question},
          {"answer", exchange.answer},
          {"source", to_string(exchange.source)},
          {"cited", exchange.cited_elements}};
}

std::string dump_payload(const json& doc) { return doc.dump(2) + "\n"; }

json kb_summary_json(const KnowledgeBase& kb) {
  return {
      {"id", kb.id},
      {"level", to_string(kb.level)},
      {"description", kb.description},
      {"patterns", kb.patterns.size()},
      {"context_properties", kb.properties_of(PropertyKind::Context).size()},
      {"pattern_properties", kb.properties_of(PropertyKind::Pattern).size()},
      {"filters", kb.filters.size()},
      {"criteria", kb.criteria.size()},
  };
}

json kb_detail_json(const KnowledgeBase& kb) {
  json out = kb_summary_json(kb);
  json props = json::array();
  for (const auto& p : kb.properties) {
    props.push_back({{"id", p.id},
                     {"kind", to_string(p.kind)},
                     {"domain", p.domain},
                     {"question", p.question_text},
                     {"description", p.description}});
  }
  json patterns = json::array();
  for (const auto& pat : kb.patterns) {
    patterns.push_back({{"id", pat.id},
                        {"level", to_string(pat.level)},
                        {"values", pat.values},
                        {"description", pat.description},
                        {"child_kb", pat.child_kb ? json(*pat.child_kb) : json(nullptr)}});
  }
  json filters = json::array();
  for (const auto& f : kb.filters) {
    filters.push_back({{"id", f.id},
                       {"when", to_string(f.guard)},
                       {"require", to_string(f.requirement)},
                       {"message", f.message}});
  }
  json criteria = json::array();
  for (const auto& c : kb.criteria) {
    criteria.push_back({{"id", c.id}, {"from", c.source_property}, {"polarity", to_string(c.polarity)}});
  }
  out["properties"] = props;
  out["pattern_definitions"] = patterns;
  out["filter_conditions"] = filters;
  out["criteria_definitions"] = criteria;
  out["base_weights"] = kb.base_weights;
  return out;
}

json session_view_json(const SessionEngine& engine, const Session& session) {
  json out = {{"session", session_to_json(session)}};
  auto feas = engine.feasibility(session);
  out["feasible"] = feas.feasible;
  out["feasible_count"] = feas.feasible.size();
  out["exclusions"] = feas.exclusions;
  auto diag = engine.conflict(session);
  out["conflict"] = diag ? conflict_json(*diag) : json(nullptr);
  return out;
}

}  // namespace secrec
