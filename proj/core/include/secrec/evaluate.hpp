#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "secrec/model.hpp"

namespace secrec {

/// One line of an expectations manifest:
///   <context|*> <top_set|top_one_of|excluded|never_top> <pattern>...
struct Expectation {
  enum class Rule { TopSet, TopOneOf, Excluded, NeverTop };

  std::string context;  ///< context name (ctx file stem) or "*" for all
  Rule rule = Rule::TopSet;
  std::vector<PatternId> patterns;
  std::size_t line = 0;
};

const char* to_string(Expectation::Rule rule) noexcept;

inline constexpr const char* kManifestFileName = "expectations.manifest";

std::vector<Expectation> parse_manifest(std::string_view text, const std::string& file = "<manifest>");

struct ExpectationResult {
  Expectation expectation;
  std::string context;  ///< concrete context the rule was checked against
  bool passed = false;
  std::string detail;
};

struct EvaluationReport {
  std::vector<ExpectationResult> results;

  bool all_passed() const;
  std::size_t failures() const;
  std::string to_text() const;
};

/// Checks expectations against named contexts. Throws Error(InvalidRequest)
/// for unknown contexts or patterns.
EvaluationReport evaluate_expectations(const KnowledgeBase& kb, const std::map<std::string, ContextAssignment>& contexts,
                                       const std::vector<Expectation>& expectations);

/// Loads `suite_dir/*.ctx` and `suite_dir/expectations.manifest`.
EvaluationReport evaluate_suite(const KnowledgeBase& kb, const std::filesystem::path& suite_dir);

/// Ctx files of a suite directory keyed by stem, validated against `kb`.
std::map<std::string, ContextAssignment> load_suite_contexts(const KnowledgeBase& kb,
                                                             const std::filesystem::path& suite_dir);

}  // namespace secrec
