#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "secrec/model.hpp"

// Brute-force reference implementations, written independently of the
// library code they check.
namespace secrec::testing {

using Values = std::map<std::string, std::string>;

/// Kleene evaluation: nullopt when the outcome depends on unassigned properties.
std::optional<bool> kleene(const Condition& c, const Values& values);

/// Feasible pattern ids in declaration order: a pattern is out iff some
/// filter's guard is definitely true and its requirement is false.
std::vector<PatternId> brute_feasible(const KnowledgeBase& kb, const Values& ctx);

/// True iff no constraint is definitely false.
bool brute_admissible(const KnowledgeBase& kb, const Values& ctx);

std::map<std::string, double> brute_weights(const KnowledgeBase& kb, const Values& ctx);
double brute_utility(const KnowledgeBase& kb, const PatternDefinition& pat, const Criterion& c);
double brute_score(const KnowledgeBase& kb, const PatternDefinition& pat, const std::map<std::string, double>& w);

}  // namespace secrec::testing
