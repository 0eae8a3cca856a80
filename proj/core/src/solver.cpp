#include "secrec/solver.hpp"

#include "secrec/condition.hpp"
#include "secrec/error.hpp"

namespace secrec {
namespace {

void check_assignment(const KnowledgeBase& kb, const ContextAssignment& ctx) {
  for (const auto& [prop_id, value] : ctx.values) {
    const auto* prop = kb.find_property(prop_id);
    if (!prop || prop->kind != PropertyKind::Context) {
      throw Error(ErrorCode::UnknownProperty, "unknown context property '" + prop_id + "'");
    }
    if (!prop->admits(value)) {
      throw Error(ErrorCode::ValueOutOfDomain, "value '" + value + "' is outside the domain of '" + prop_id + "'");
    }
  }
}

ContextAssignment to_context(std::span<const Answer> answers) {
  ContextAssignment ctx;
  for (const auto& [p, v] : answers) ctx.set(p, v);
  return ctx;
}

bool empty_feasible(const KnowledgeBase& kb, const ContextAssignment& ctx) {
  return filter_patterns(kb, ctx).feasible.empty();
}

}  // namespace

std::vector<std::string> check_context(const KnowledgeBase& kb, const ContextAssignment& ctx) {
  check_assignment(kb, ctx);
  std::vector<std::string> violated;
  for (const auto& c : kb.constraints) {
    if (evaluate(c.expr, ctx) == Truth::False) violated.push_back(c.id);
  }
  return violated;
}

FeasibilityResult filter_patterns(const KnowledgeBase& kb, const ContextAssignment& ctx) {
  std::vector<const FilterCondition*> active;
  for (const auto& f : kb.filters) {
    if (evaluate(f.guard, ctx) == Truth::True) active.push_back(&f);
  }
  FeasibilityResult result;
  for (const auto& pat : kb.patterns) {
    std::vector<std::string> violated;
    for (const auto* f : active) {
      if (evaluate(f->requirement, pat) != Truth::True) violated.push_back(f->id);
    }
    if (violated.empty()) {
      result.feasible.push_back(pat.id);
    } else {
      result.exclusions.emplace(pat.id, std::move(violated));
    }
  }
  return result;
}

FeasibilityResult feasible_patterns(const KnowledgeBase& kb, const ContextAssignment& ctx) {
  auto violated = check_context(kb, ctx);
  if (!violated.empty()) {
    std::string ids;
    for (const auto& id : violated) ids += (ids.empty() ? "" : ", ") + id;
    throw Error(ErrorCode::ContextViolation, "context violates contextual constraint(s): " + ids);
  }
  return filter_patterns(kb, ctx);
}

ConflictDiagnosis diagnose_conflict(const KnowledgeBase& kb, std::span<const Answer> assignment) {
  std::vector<Answer> kept(assignment.begin(), assignment.end());
  check_assignment(kb, to_context(kept));
  if (!empty_feasible(kb, to_context(kept))) {
    throw Error(ErrorCode::FeasibleSetNotEmpty, "the assignment leaves at least one feasible pattern");
  }
  // One reverse pass suffices: filtering is monotone, so an answer that was
  // needed against a superset is still needed against every subset.
  for (std::size_t i = kept.size(); i-- > 0;) {
    std::vector<Answer> candidate = kept;
    candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(i));
    if (empty_feasible(kb, to_context(candidate))) kept = std::move(candidate);
  }

  ConflictDiagnosis diag;
  diag.conflict = kept;
  ContextAssignment conflict_ctx = to_context(kept);
  ContextAssignment nothing;
  for (const auto& f : kb.filters) {
    if (evaluate(f.guard, conflict_ctx) != Truth::True) continue;
    bool excludes = false;
    for (const auto& pat : kb.patterns) {
      if (evaluate(f.requirement, pat) != Truth::True) {
        excludes = true;
        break;
      }
    }
    if (!excludes) continue;
    diag.messages.emplace_back(f.id, f.message);
    if (evaluate(f.guard, nothing) == Truth::True) diag.unconditional_filters.push_back(f.id);
  }
  return diag;
}

ConflictDiagnosis diagnose_conflict(const KnowledgeBase& kb, const ContextAssignment& ctx) {
  std::vector<Answer> answers(ctx.values.begin(), ctx.values.end());
  return diagnose_conflict(kb, answers);
}

}  // namespace secrec
