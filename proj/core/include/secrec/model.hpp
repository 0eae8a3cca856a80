#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace secrec {

using PropertyId = std::string;
using PatternId = std::string;
using CriterionId = std::string;
using Value = std::string;

enum class PropertyKind { Context, Pattern };
enum class PatternLevel { SP, SDP };
enum class KbLevel { Control, Pattern };
enum class Polarity { Direct, Inverse };

const char* to_string(PropertyKind kind) noexcept;
const char* to_string(PatternLevel level) noexcept;
const char* to_string(KbLevel level) noexcept;
const char* to_string(Polarity polarity) noexcept;

/// A finite ordinal variable. The position of a value in `domain` is its rank.
struct PropertyDecl {
  PropertyId id;
  PropertyKind kind = PropertyKind::Context;
  std::vector<Value> domain;
  std::string question_text;
  std::string description;

  /// Rank of `value` in the domain, or nullopt if it is not admissible.
  std::optional<std::size_t> rank_of(std::string_view value) const;
  bool admits(std::string_view value) const { return rank_of(value).has_value(); }

  bool operator==(const PropertyDecl&) const = default;
};

struct PatternDefinition {
  PatternId id;
  PatternLevel level = PatternLevel::SP;
  std::map<PropertyId, Value> values;
  std::string description;
  /// File reference to the pattern-level knowledge base refining this SP.
  std::optional<std::string> child_kb;

  const Value* value_of(std::string_view property) const;

  bool operator==(const PatternDefinition&) const = default;
};

/// Boolean expression over property tests. `children` is used by Not (one
/// child) and And/Or (two or more); `property`/`values` by the tests.
struct Condition {
  enum class Op { True, False, Eq, Ne, In, Not, And, Or };

  Op op = Op::True;
  PropertyId property;
  std::vector<Value> values;
  std::vector<Condition> children;

  static Condition always();
  static Condition never();
  static Condition eq(PropertyId property, Value value);
  static Condition ne(PropertyId property, Value value);
  static Condition in(PropertyId property, std::vector<Value> values);
  static Condition negate(Condition child);
  static Condition all_of(std::vector<Condition> children);
  static Condition any_of(std::vector<Condition> children);

  bool is_test() const noexcept { return op == Op::Eq || op == Op::Ne || op == Op::In; }

  bool operator==(const Condition&) const = default;
};

struct ContextualConstraint {
  std::string id;
  Condition expr;
  std::string message;

  bool operator==(const ContextualConstraint&) const = default;
};

/// guard => requirement. The guard reads context properties, the requirement
/// reads pattern properties.
struct FilterCondition {
  std::string id;
  Condition guard;
  Condition requirement;
  std::string message;

  bool operator==(const FilterCondition&) const = default;
};

struct Criterion {
  CriterionId id;
  PropertyId source_property;
  Polarity polarity = Polarity::Direct;

  bool operator==(const Criterion&) const = default;
};

struct WeightRule {
  std::string id;
  Condition guard;
  std::map<CriterionId, double> deltas;

  bool operator==(const WeightRule&) const = default;
};

struct KnowledgeBase {
  std::string id;
  KbLevel level = KbLevel::Control;
  std::string description;
  std::vector<PropertyDecl> properties;
  std::vector<PatternDefinition> patterns;
  std::vector<ContextualConstraint> constraints;
  std::vector<FilterCondition> filters;
  std::vector<Criterion> criteria;
  std::vector<WeightRule> weight_rules;
  std::map<CriterionId, double> base_weights;

  const PropertyDecl* find_property(std::string_view id) const;
  const PatternDefinition* find_pattern(std::string_view id) const;
  const FilterCondition* find_filter(std::string_view id) const;
  const Criterion* find_criterion(std::string_view id) const;

  /// Properties of the given kind in declaration order.
  std::vector<const PropertyDecl*> properties_of(PropertyKind kind) const;

  bool operator==(const KnowledgeBase&) const = default;
};

/// A (partial) realization context.
struct ContextAssignment {
  std::map<PropertyId, Value> values;

  const Value* get(std::string_view property) const;
  bool contains(std::string_view property) const { return get(property) != nullptr; }
  void set(PropertyId property, Value value) { values[std::move(property)] = std::move(value); }
  void erase(std::string_view property);
  std::size_t size() const noexcept { return values.size(); }
  bool empty() const noexcept { return values.empty(); }

  bool operator==(const ContextAssignment&) const = default;
};

}  // namespace secrec
