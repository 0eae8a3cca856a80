#include "secrec/lint.hpp"

#include <limits>
#include <set>

#include "secrec/condition.hpp"
#include "secrec/solver.hpp"

namespace secrec {

const char* to_string(LintWarning::Kind kind) noexcept {
  switch (kind) {
    case LintWarning::Kind::DeadPattern: return "dead-pattern";
    case LintWarning::Kind::VacuousGuard: return "vacuous-guard";
    case LintWarning::Kind::VacuousRequirement: return "vacuous-requirement";
    case LintWarning::Kind::UnreferencedProperty: return "unreferenced-property";
    case LintWarning::Kind::NoAdmissibleContext: return "no-admissible-context";
    case LintWarning::Kind::ContextSpaceTooLarge: return "context-space-too-large";
  }
  return "?";
}

std::uint64_t context_space_size(const KnowledgeBase& kb) {
  std::uint64_t n = 1;
  for (const auto* p : kb.properties_of(PropertyKind::Context)) {
    std::uint64_t d = p->domain.size();
    if (d != 0 && n > std::numeric_limits<std::uint64_t>::max() / d) return std::numeric_limits<std::uint64_t>::max();
    n *= d;
  }
  return n;
}

void for_each_total_context(const KnowledgeBase& kb, const std::function<bool(const ContextAssignment&)>& visit) {
  auto props = kb.properties_of(PropertyKind::Context);
  for (const auto* p : props) {
    if (p->domain.empty()) return;
  }
  std::vector<std::size_t> digits(props.size(), 0);
  ContextAssignment ctx;
  for (std::size_t i = 0; i < props.size(); ++i) ctx.set(props[i]->id, props[i]->domain[0]);
  while (true) {
    if (!visit(ctx)) return;
    std::size_t i = 0;
    for (; i < props.size(); ++i) {
      if (++digits[i] < props[i]->domain.size()) {
        ctx.set(props[i]->id, props[i]->domain[digits[i]]);
        break;
      }
      digits[i] = 0;
      ctx.set(props[i]->id, props[i]->domain[0]);
    }
    if (i == props.size()) return;
  }
}

namespace {

std::optional<SourceSpan> span_at(const SourceMap* source, Section section, std::size_t index,
                                  const std::string& member = "") {
  if (!source) return std::nullopt;
  return source->find(Location{section, index, member});
}

}  // namespace

std::vector<LintWarning> lint_kb(const KnowledgeBase& kb, const SourceMap* source, std::uint64_t max_contexts) {
  std::vector<LintWarning> out;

  std::set<PropertyId> referenced;
  auto note = [&referenced](const Condition& c) {
    auto refs = referenced_properties(c);
    referenced.insert(refs.begin(), refs.end());
  };
  for (const auto& c : kb.constraints) note(c.expr);
  for (const auto& f : kb.filters) {
    note(f.guard);
    note(f.requirement);
  }
  for (const auto& r : kb.weight_rules) note(r.guard);
  for (const auto& c : kb.criteria) referenced.insert(c.source_property);
  for (std::size_t i = 0; i < kb.properties.size(); ++i) {
    const auto& p = kb.properties[i];
    if (referenced.count(p.id)) continue;
    out.push_back({LintWarning::Kind::UnreferencedProperty, "property " + p.id,
                   std::string(to_string(p.kind)) + " property '" + p.id +
                       "' is not used by any constraint, filter, weight rule or criterion",
                   span_at(source, Section::Properties, i)});
  }

  for (std::size_t i = 0; i < kb.filters.size(); ++i) {
    const auto& f = kb.filters[i];
    bool all_pass = true;
    for (const auto& pat : kb.patterns) {
      if (evaluate(f.requirement, pat) != Truth::True) {
        all_pass = false;
        break;
      }
    }
    if (all_pass) {
      out.push_back({LintWarning::Kind::VacuousRequirement, "filter " + f.id,
                     "every pattern satisfies the requirement of filter '" + f.id + "'; it never excludes anything",
                     span_at(source, Section::Filters, i, "require")});
    }
  }

  std::uint64_t space = context_space_size(kb);
  if (space > max_contexts) {
    out.push_back({LintWarning::Kind::ContextSpaceTooLarge, "knowledge base " + kb.id,
                   "context space has " + std::to_string(space) + " assignments; exhaustive checks skipped",
                   span_at(source, Section::Header, 0)});
    return out;
  }

  std::vector<bool> alive(kb.patterns.size(), false);
  std::vector<bool> guard_fires(kb.filters.size(), false);
  bool any_admissible = false;
  for_each_total_context(kb, [&](const ContextAssignment& ctx) {
    for (const auto& c : kb.constraints) {
      if (evaluate(c.expr, ctx) != Truth::True) return true;
    }
    any_admissible = true;
    for (std::size_t i = 0; i < kb.filters.size(); ++i) {
      if (!guard_fires[i] && evaluate(kb.filters[i].guard, ctx) == Truth::True) guard_fires[i] = true;
    }
    auto feas = filter_patterns(kb, ctx);
    std::size_t j = 0;
    for (std::size_t i = 0; i < kb.patterns.size() && j < feas.feasible.size(); ++i) {
      if (kb.patterns[i].id == feas.feasible[j]) {
        alive[i] = true;
        ++j;
      }
    }
    return true;
  });

  if (!any_admissible) {
    out.push_back({LintWarning::Kind::NoAdmissibleContext, "knowledge base " + kb.id,
                   "the contextual constraints admit no total context", span_at(source, Section::Header, 0)});
  }
  for (std::size_t i = 0; i < kb.filters.size(); ++i) {
    if (guard_fires[i]) continue;
    out.push_back({LintWarning::Kind::VacuousGuard, "filter " + kb.filters[i].id,
                   "the guard of filter '" + kb.filters[i].id + "' holds in no admissible context",
                   span_at(source, Section::Filters, i, "when")});
  }
  for (std::size_t i = 0; i < kb.patterns.size(); ++i) {
    if (alive[i]) continue;
    out.push_back({LintWarning::Kind::DeadPattern, "pattern " + kb.patterns[i].id,
                   "pattern '" + kb.patterns[i].id + "' is infeasible in every admissible context",
                   span_at(source, Section::Patterns, i)});
  }
  return out;
}

}  // namespace secrec
