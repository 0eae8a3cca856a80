#pragma once

#include <functional>
#include <set>
#include <string>
#include <string_view>

#include "secrec/model.hpp"

namespace secrec {

/// Kleene three-valued truth. Unknown arises when a tested property is unassigned.
enum class Truth { False, True, Unknown };

using ValueLookup = std::function<const Value*(std::string_view property)>;

Truth evaluate(const Condition& cond, const ValueLookup& lookup);
Truth evaluate(const Condition& cond, const ContextAssignment& ctx);
/// Pattern values are total, so this is always decidable for valid KBs.
Truth evaluate(const Condition& cond, const PatternDefinition& pattern);

/// Ids of every property the condition tests.
std::set<PropertyId> referenced_properties(const Condition& cond);

/// Canonical infix rendering, as accepted by the .kb parser.
std::string to_string(const Condition& cond);

}  // namespace secrec
