#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "secrec/model.hpp"

namespace secrec {

enum class Section {
  Header,
  Properties,
  Patterns,
  Constraints,
  Filters,
  Criteria,
  WeightRules,
  BaseWeights,
};

/// Points at a KB element: the section, its index within the section and an
/// optional member (a property id, an attribute name or "attr:property").
struct Location {
  Section section = Section::Header;
  std::size_t index = 0;
  std::string member;

  auto operator<=>(const Location&) const = default;
};

struct Violation {
  Location location;
  std::string element;  ///< human-readable element id, e.g. "pattern password"
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

/// Checks every structural invariant of the knowledge-base model. Never throws
/// on account of KB content.
ValidationReport validate(const KnowledgeBase& kb);

}  // namespace secrec
