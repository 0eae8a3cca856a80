#pragma once

#include <nlohmann/json.hpp>

#include "secrec/assistant.hpp"
#include "secrec/maut.hpp"
#include "secrec/model.hpp"
#include "secrec/session.hpp"
#include "secrec/solver.hpp"

namespace secrec {

// JSON wire shapes shared by the CLI (--json) and the HTTP service, so both
// emit identical documents for identical inputs. Field names are documented
// in docs/api.md.

nlohmann::json recommendations_payload(const KnowledgeBase& kb, const ContextAssignment& ctx, const Ranking& ranking,
                                       const Explanation& explanation);
nlohmann::json recommendations_payload(const KnowledgeBase& kb, const Recommendations& recs);

nlohmann::json conflict_json(const ConflictDiagnosis& diag);
nlohmann::json feasibility_json(const FeasibilityResult& result);
nlohmann::json question_json(const Question& q);
nlohmann::json answer_outcome_json(const AnswerOutcome& outcome);
nlohmann::json kb_summary_json(const KnowledgeBase& kb);
nlohmann::json kb_detail_json(const KnowledgeBase& kb);

nlohmann::json exchange_json(const AssistantExchange& exchange);

/// Byte-exact wire rendering used by every front end.
std::string dump_payload(const nlohmann::json& doc);

/// Snapshot plus derived live data (feasible set, conflict diagnosis).
nlohmann::json session_view_json(const SessionEngine& engine, const Session& session);

}  // namespace secrec
