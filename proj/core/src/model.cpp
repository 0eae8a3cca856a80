#include "secrec/model.hpp"

#include <algorithm>

#include "secrec/error.hpp"

namespace secrec {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ParseError: return "parse_error";
    case ErrorCode::SemanticError: return "semantic_error";
    case ErrorCode::InvalidKnowledgeBase: return "invalid_knowledge_base";
    case ErrorCode::UnknownKnowledgeBase: return "unknown_kb";
    case ErrorCode::UnknownProperty: return "unknown_property";
    case ErrorCode::UnknownPattern: return "unknown_pattern";
    case ErrorCode::ValueOutOfDomain: return "value_out_of_domain";
    case ErrorCode::ContextViolation: return "context_violation";
    case ErrorCode::IncompleteContext: return "incomplete_context";
    case ErrorCode::EmptyFeasibleSet: return "empty_feasible_set";
    case ErrorCode::FeasibleSetNotEmpty: return "feasible_set_not_empty";
    case ErrorCode::DegenerateWeights: return "degenerate_weights";
    case ErrorCode::WrongState: return "wrong_state";
    case ErrorCode::AlreadyAnswered: return "already_answered";
    case ErrorCode::NotAnswered: return "not_answered";
    case ErrorCode::NotRecommended: return "not_recommended";
    case ErrorCode::UnknownSession: return "unknown_session";
    case ErrorCode::CorruptSnapshot: return "corrupt_snapshot";
    case ErrorCode::MigrationRequired: return "migration_required";
    case ErrorCode::InvalidRequest: return "invalid_request";
    case ErrorCode::Io: return "io_error";
  }
  return "unknown";
}

const char* to_string(PropertyKind kind) noexcept {
  return kind == PropertyKind::Context ? "context" : "pattern";
}

const char* to_string(PatternLevel level) noexcept {
  return level == PatternLevel::SP ? "SP" : "SDP";
}

const char* to_string(KbLevel level) noexcept {
  return level == KbLevel::Control ? "control" : "pattern";
}

const char* to_string(Polarity polarity) noexcept {
  return polarity == Polarity::Direct ? "direct" : "inverse";
}

std::optional<std::size_t> PropertyDecl::rank_of(std::string_view value) const {
  auto it = std::find(domain.begin(), domain.end(), value);
  if (it == domain.end()) return std::nullopt;
  return static_cast<std::size_t>(it - domain.begin());
}

const Value* PatternDefinition::value_of(std::string_view property) const {
  auto it = values.find(std::string(property));
  return it == values.end() ? nullptr : &it->second;
}

Condition Condition::always() { return Condition{}; }

Condition Condition::never() {
  Condition c;
  c.op = Op::False;
  return c;
}

Condition Condition::eq(PropertyId property, Value value) {
  Condition c;
  c.op = Op::Eq;
  c.property = std::move(property);
  c.values.push_back(std::move(value));
  return c;
}

Condition Condition::ne(PropertyId property, Value value) {
  Condition c = eq(std::move(property), std::move(value));
  c.op = Op::Ne;
  return c;
}

Condition Condition::in(PropertyId property, std::vector<Value> values) {
  Condition c;
  c.op = Op::In;
  c.property = std::move(property);
  c.values = std::move(values);
  return c;
}

Condition Condition::negate(Condition child) {
  Condition c;
  c.op = Op::Not;
  c.children.push_back(std::move(child));
  return c;
}

Condition Condition::all_of(std::vector<Condition> children) {
  Condition c;
  c.op = Op::And;
  c.children = std::move(children);
  return c;
}

Condition Condition::any_of(std::vector<Condition> children) {
  Condition c;
  c.op = Op::Or;
  c.children = std::move(children);
  return c;
}

namespace {

template <typename Range>
auto find_by_id(const Range& range, std::string_view id) -> decltype(&*range.begin()) {
  for (const auto& item : range) {
    if (item.id == id) return &item;
  }
  return nullptr;
}

}  // namespace

const PropertyDecl* KnowledgeBase::find_property(std::string_view id) const {
  return find_by_id(properties, id);
}

const PatternDefinition* KnowledgeBase::find_pattern(std::string_view id) const {
  return find_by_id(patterns, id);
}

const FilterCondition* KnowledgeBase::find_filter(std::string_view id) const {
  return find_by_id(filters, id);
}

const Criterion* KnowledgeBase::find_criterion(std::string_view id) const {
  return find_by_id(criteria, id);
}

std::vector<const PropertyDecl*> KnowledgeBase::properties_of(PropertyKind kind) const {
  std::vector<const PropertyDecl*> out;
  for (const auto& p : properties) {
    if (p.kind == kind) out.push_back(&p);
  }
  return out;
}

const Value* ContextAssignment::get(std::string_view property) const {
  auto it = values.find(std::string(property));
  return it == values.end() ? nullptr : &it->second;
}

void ContextAssignment::erase(std::string_view property) {
  values.erase(std::string(property));
}

}  // namespace secrec
