#include "secrec/validate.hpp"

#include <cmath>
#include <set>

#include "secrec/dsl.hpp"

namespace secrec {
namespace {

class Validator {
 public:
  explicit Validator(const KnowledgeBase& kb) : kb_(kb) {}

  ValidationReport run() {
    if (!is_identifier(kb_.id))
      add({Section::Header, 0, ""}, "knowledge base", "knowledge base id '" + kb_.id + "' is not a valid identifier");
    check_properties();
    check_patterns();
    check_constraints();
    check_filters();
    check_criteria();
    check_weights();
    return std::move(report_);
  }

 private:
  void add(Location loc, std::string element, std::string message) {
    report_.violations.push_back({std::move(loc), std::move(element), std::move(message)});
  }

  void check_properties() {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < kb_.properties.size(); ++i) {
      const auto& p = kb_.properties[i];
      std::string el = "property " + p.id;
      if (!is_identifier(p.id) || is_reserved_word(p.id))
        add({Section::Properties, i, ""}, el, "property id '" + p.id + "' is not a valid identifier");
      if (!seen.insert(p.id).second) add({Section::Properties, i, ""}, el, "duplicate property id '" + p.id + "'");
      std::set<std::string> values(p.domain.begin(), p.domain.end());
      if (values.size() != p.domain.size())
        add({Section::Properties, i, "domain"}, el, "domain of '" + p.id + "' contains duplicate values");
      if (values.size() < 2)
        add({Section::Properties, i, "domain"}, el, "domain of '" + p.id + "' needs at least 2 distinct values");
      for (const auto& v : p.domain) {
        if (!is_identifier(v))
          add({Section::Properties, i, "domain"}, el, "domain value '" + v + "' of '" + p.id + "' is not a valid identifier");
      }
      if (p.kind == PropertyKind::Pattern && !p.question_text.empty())
        add({Section::Properties, i, "question"}, el, "pattern property '" + p.id + "' must not carry a question");
    }
  }

  void check_patterns() {
    std::set<std::string> seen;
    PatternLevel expected = kb_.level == KbLevel::Control ? PatternLevel::SP : PatternLevel::SDP;
    auto pattern_props = kb_.properties_of(PropertyKind::Pattern);
    for (std::size_t i = 0; i < kb_.patterns.size(); ++i) {
      const auto& pat = kb_.patterns[i];
      std::string el = "pattern " + pat.id;
      if (!is_identifier(pat.id)) add({Section::Patterns, i, ""}, el, "pattern id '" + pat.id + "' is not a valid identifier");
      if (!seen.insert(pat.id).second) add({Section::Patterns, i, ""}, el, "duplicate pattern id '" + pat.id + "'");
      if (pat.level != expected)
        add({Section::Patterns, i, ""}, el,
            std::string("pattern '") + pat.id + "' has level " + to_string(pat.level) + " but a " +
                to_string(kb_.level) + "-level knowledge base holds " + to_string(expected) + " patterns");
      if (pat.child_kb && pat.level != PatternLevel::SP)
        add({Section::Patterns, i, "child"}, el, "only SP patterns may reference a child knowledge base");
      for (const auto* prop : pattern_props) {
        if (!pat.values.count(prop->id))
          add({Section::Patterns, i, ""}, el, "pattern '" + pat.id + "' has no value for property '" + prop->id + "'");
      }
      for (const auto& [prop_id, value] : pat.values) {
        const auto* prop = kb_.find_property(prop_id);
        if (!prop) {
          add({Section::Patterns, i, prop_id}, el, "pattern '" + pat.id + "' assigns undeclared property '" + prop_id + "'");
        } else if (prop->kind != PropertyKind::Pattern) {
          add({Section::Patterns, i, prop_id}, el,
              "pattern '" + pat.id + "' assigns context property '" + prop_id + "'");
        } else if (!prop->admits(value)) {
          add({Section::Patterns, i, prop_id}, el,
              "value '" + value + "' of pattern '" + pat.id + "' is outside the domain of '" + prop_id + "' {" +
                  join(prop->domain) + "}");
        }
      }
    }
  }

  static std::string join(const std::vector<Value>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out += ", ";
      out += values[i];
    }
    return out;
  }

  void check_condition(const Condition& cond, PropertyKind kind, Section section, std::size_t index,
                       const std::string& attr, const std::string& el) {
    using Op = Condition::Op;
    if ((cond.op == Op::And || cond.op == Op::Or) && cond.children.size() < 2)
      add({section, index, attr}, el, "AND/OR needs at least two operands");
    if (cond.op == Op::Not && cond.children.size() != 1)
      add({section, index, attr}, el, "NOT needs exactly one operand");
    if (cond.is_test()) {
      Location loc{section, index, attr + ":" + cond.property};
      const auto* prop = kb_.find_property(cond.property);
      if (cond.values.empty() || ((cond.op == Op::Eq || cond.op == Op::Ne) && cond.values.size() != 1))
        add(loc, el, "malformed test on '" + cond.property + "'");
      if (!prop) {
        add(loc, el, "reference to undeclared property '" + cond.property + "'");
      } else {
        if (prop->kind != kind)
          add(loc, el,
              std::string(attr) + " must reference " + to_string(kind) + " properties only, but '" + cond.property +
                  "' is a " + to_string(prop->kind) + " property");
        for (const auto& v : cond.values) {
          if (!prop->admits(v))
            add(loc, el, "value '" + v + "' is outside the domain of '" + cond.property + "' {" + join(prop->domain) + "}");
        }
      }
    }
    for (const auto& child : cond.children) check_condition(child, kind, section, index, attr, el);
  }

  void check_constraints() {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < kb_.constraints.size(); ++i) {
      const auto& c = kb_.constraints[i];
      std::string el = "constraint " + c.id;
      if (!is_identifier(c.id)) add({Section::Constraints, i, ""}, el, "constraint id '" + c.id + "' is not a valid identifier");
      if (!seen.insert(c.id).second) add({Section::Constraints, i, ""}, el, "duplicate constraint id '" + c.id + "'");
      check_condition(c.expr, PropertyKind::Context, Section::Constraints, i, "expr", el);
    }
  }

  void check_filters() {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < kb_.filters.size(); ++i) {
      const auto& f = kb_.filters[i];
      std::string el = "filter " + f.id;
      if (!is_identifier(f.id)) add({Section::Filters, i, ""}, el, "filter id '" + f.id + "' is not a valid identifier");
      if (!seen.insert(f.id).second) add({Section::Filters, i, ""}, el, "duplicate filter id '" + f.id + "'");
      check_condition(f.guard, PropertyKind::Context, Section::Filters, i, "when", el);
      check_condition(f.requirement, PropertyKind::Pattern, Section::Filters, i, "require", el);
    }
  }

  void check_criteria() {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < kb_.criteria.size(); ++i) {
      const auto& c = kb_.criteria[i];
      std::string el = "criterion " + c.id;
      if (!is_identifier(c.id)) add({Section::Criteria, i, ""}, el, "criterion id '" + c.id + "' is not a valid identifier");
      if (!seen.insert(c.id).second) add({Section::Criteria, i, ""}, el, "duplicate criterion id '" + c.id + "'");
      const auto* prop = kb_.find_property(c.source_property);
      if (!prop)
        add({Section::Criteria, i, "from"}, el, "criterion '" + c.id + "' reads undeclared property '" + c.source_property + "'");
      else if (prop->kind != PropertyKind::Pattern)
        add({Section::Criteria, i, "from"}, el, "criterion '" + c.id + "' must read a pattern property");
    }
  }

  void check_weights() {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < kb_.weight_rules.size(); ++i) {
      const auto& r = kb_.weight_rules[i];
      std::string el = "weight rule " + r.id;
      if (!is_identifier(r.id)) add({Section::WeightRules, i, ""}, el, "weight rule id '" + r.id + "' is not a valid identifier");
      if (!seen.insert(r.id).second) add({Section::WeightRules, i, ""}, el, "duplicate weight rule id '" + r.id + "'");
      check_condition(r.guard, PropertyKind::Context, Section::WeightRules, i, "when", el);
      for (const auto& [crit, delta] : r.deltas) {
        if (!kb_.find_criterion(crit))
          add({Section::WeightRules, i, crit}, el, "weight rule '" + r.id + "' adjusts unknown criterion '" + crit + "'");
        if (!std::isfinite(delta)) add({Section::WeightRules, i, crit}, el, "delta for '" + crit + "' is not finite");
      }
    }
    for (const auto& c : kb_.criteria) {
      if (!kb_.base_weights.count(c.id))
        add({Section::BaseWeights, 0, c.id}, "weights", "base weights do not cover criterion '" + c.id + "'");
    }
    for (const auto& [crit, w] : kb_.base_weights) {
      if (!kb_.find_criterion(crit))
        add({Section::BaseWeights, 0, crit}, "weights", "base weight for unknown criterion '" + crit + "'");
      if (!std::isfinite(w) || w < 0)
        add({Section::BaseWeights, 0, crit}, "weights", "base weight for '" + crit + "' must be a non-negative number");
    }
  }

  const KnowledgeBase& kb_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate(const KnowledgeBase& kb) { return Validator(kb).run(); }

}  // namespace secrec
