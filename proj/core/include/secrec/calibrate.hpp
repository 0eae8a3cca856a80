#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "secrec/evaluate.hpp"
#include "secrec/model.hpp"

namespace secrec {

struct CalibrationOptions {
  double step = 0.1;
  double lower = -1.0;
  double upper = 1.0;
  /// Largest L1 distance from the starting deltas, in steps.
  int max_distance = 12;
  /// Non-zero starting deltas may not change sign.
  bool preserve_signs = true;
};

struct DeltaChange {
  std::string rule;
  CriterionId criterion;
  double from = 0;
  double to = 0;
};

struct CalibrationResult {
  bool found = false;
  KnowledgeBase kb;             ///< calibrated copy (the input when not found)
  int distance = 0;             ///< L1 distance in steps
  double margin = 0;            ///< smallest score gap backing an ordinal expectation
  std::size_t candidates = 0;   ///< delta vectors evaluated
  std::vector<DeltaChange> changes;
};

/// Smallest score gap by which the ranking under `ctx` satisfies `e`;
/// negative or zero when the expectation does not hold strictly. Exclusion
/// rules do not depend on weights and report +infinity when they hold.
double expectation_margin(const KnowledgeBase& kb, const ContextAssignment& ctx, const Expectation& e);

/// Grid search over every (weight rule, criterion) delta. Candidates are
/// visited by increasing L1 distance from the starting deltas; the first
/// distance with a passing candidate wins, ties go to the largest margin and
/// then to the first candidate visited.
CalibrationResult calibrate(const KnowledgeBase& start, const std::map<std::string, ContextAssignment>& contexts,
                            const std::vector<Expectation>& expectations, const CalibrationOptions& options = {});

}  // namespace secrec
