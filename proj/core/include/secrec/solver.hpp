#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "secrec/model.hpp"

namespace secrec {

struct FeasibilityResult {
  /// Feasible pattern ids in KB declaration order.
  std::vector<PatternId> feasible;
  /// Excluded pattern id -> ids of the filter conditions it violates.
  std::map<PatternId, std::vector<std::string>> exclusions;

  bool operator==(const FeasibilityResult&) const = default;
};

using Answer = std::pair<PropertyId, Value>;

struct ConflictDiagnosis {
  /// Minimal subset of the assignment that empties the feasible set.
  std::vector<Answer> conflict;
  /// Filter id -> message for every filter active under `conflict` that
  /// excludes at least one pattern.
  std::vector<std::pair<std::string, std::string>> messages;
  /// Filters whose guard holds before any answer is given and that exclude
  /// patterns on their own.
  std::vector<std::string> unconditional_filters;

  bool operator==(const ConflictDiagnosis&) const = default;
};

/// Ids of contextual constraints that are decidably false under `ctx`.
/// Throws Error(UnknownProperty / ValueOutOfDomain) for malformed contexts.
std::vector<std::string> check_context(const KnowledgeBase& kb, const ContextAssignment& ctx);

/// Feasible set under three-valued filtering. Throws Error(ContextViolation)
/// when a contextual constraint is violated.
FeasibilityResult feasible_patterns(const KnowledgeBase& kb, const ContextAssignment& ctx);

/// Feasibility without the contextual-constraint precondition; used where
/// callers have already checked the context.
FeasibilityResult filter_patterns(const KnowledgeBase& kb, const ContextAssignment& ctx);

/// Greedy deletion over `assignment`, trying the most recent answer first.
/// Throws Error(FeasibleSetNotEmpty) if the full assignment leaves a pattern.
ConflictDiagnosis diagnose_conflict(const KnowledgeBase& kb, std::span<const Answer> assignment);

/// As above, taking answers in the context's key order.
ConflictDiagnosis diagnose_conflict(const KnowledgeBase& kb, const ContextAssignment& ctx);

}  // namespace secrec
