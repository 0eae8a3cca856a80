#pragma once

#include <map>
#include <string>
#include <vector>

#include "secrec/model.hpp"
#include "secrec/solver.hpp"

namespace secrec {

/// Normalized criterion weights: non-negative, summing to 1.
struct WeightVector {
  std::map<CriterionId, double> weights;

  double at(const CriterionId& id) const;
  bool operator==(const WeightVector&) const = default;
};

struct ResolvedWeights {
  WeightVector weights;
  std::vector<std::string> fired_rules;  ///< in KB declaration order
};

struct Contribution {
  double weight = 0;
  double utility = 0;
  double product = 0;

  bool operator==(const Contribution&) const = default;
};

struct ScoredPattern {
  PatternId pattern_id;
  double score = 0;
  std::map<CriterionId, Contribution> contributions;

  bool operator==(const ScoredPattern&) const = default;
};

struct Ranking {
  FeasibilityResult feasibility;
  ResolvedWeights weights;
  /// Descending score, ties in KB declaration order.
  std::vector<ScoredPattern> ranked;
};

/// Base weights plus the deltas of every rule whose guard holds, clamped at
/// zero and normalized. Throws Error(IncompleteContext) when a rule guard is
/// undecided and Error(DegenerateWeights) when nothing positive remains.
ResolvedWeights resolve_weights_detailed(const KnowledgeBase& kb, const ContextAssignment& ctx);
WeightVector resolve_weights(const KnowledgeBase& kb, const ContextAssignment& ctx);

/// Linear ordinal utility: rank/(n-1), mirrored for inverse criteria.
double utility(const KnowledgeBase& kb, const PatternDefinition& pattern, const Criterion& criterion);

/// Additive score of one pattern under explicit weights.
ScoredPattern score_with(const KnowledgeBase& kb, const PatternDefinition& pattern, const WeightVector& weights);

/// Scores a feasible pattern. Throws Error(UnknownPattern) for unknown ids and
/// Error(NotRecommended) for patterns excluded under `ctx`.
ScoredPattern score(const KnowledgeBase& kb, const PatternId& pattern, const ContextAssignment& ctx);

/// Scores and orders the feasible set. Throws Error(EmptyFeasibleSet) when no
/// pattern survives filtering; callers then use diagnose_conflict.
Ranking rank(const KnowledgeBase& kb, const ContextAssignment& ctx);

struct Explanation {
  struct Recommended {
    PatternId pattern_id;
    std::size_t rank = 0;
    double score = 0;
    std::string description;
    std::map<CriterionId, Contribution> contributions;
  };
  struct Excluded {
    PatternId pattern_id;
    std::vector<std::pair<std::string, std::string>> violated;  ///< filter id, message
  };

  WeightVector weights;
  std::vector<std::string> fired_rules;
  std::vector<Recommended> recommended;
  std::vector<Excluded> excluded;

  std::string to_text() const;
};

Explanation explain(const KnowledgeBase& kb, const ContextAssignment& ctx, const Ranking& ranking);

}  // namespace secrec
