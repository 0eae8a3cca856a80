#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "secrec/dsl.hpp"
#include "secrec/model.hpp"

namespace secrec {

struct LintWarning {
  enum class Kind {
    DeadPattern,
    VacuousGuard,
    VacuousRequirement,
    UnreferencedProperty,
    NoAdmissibleContext,
    ContextSpaceTooLarge,
  };

  Kind kind;
  std::string element;
  std::string message;
  std::optional<SourceSpan> span;
};

const char* to_string(LintWarning::Kind kind) noexcept;

inline constexpr std::uint64_t kMaxLintContexts = 1'000'000;

/// Number of total context assignments, saturating at UINT64_MAX.
std::uint64_t context_space_size(const KnowledgeBase& kb);

/// Calls `visit` for every total assignment of the context properties, in
/// odometer order over declaration order. Stops early if `visit` returns false.
void for_each_total_context(const KnowledgeBase& kb, const std::function<bool(const ContextAssignment&)>& visit);

/// Static checks by exhaustive enumeration of the admissible context space.
/// `source`, when given, attaches spans to warnings.
std::vector<LintWarning> lint_kb(const KnowledgeBase& kb, const SourceMap* source = nullptr,
                                 std::uint64_t max_contexts = kMaxLintContexts);

}  // namespace secrec
