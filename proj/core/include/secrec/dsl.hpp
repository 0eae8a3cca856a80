#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "secrec/error.hpp"
#include "secrec/model.hpp"
#include "secrec/validate.hpp"

namespace secrec {

struct SourceSpan {
  std::string file;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t length = 0;

  bool operator==(const SourceSpan&) const = default;
};

std::string to_string(const SourceSpan& span);

/// Parse or semantic failure in a .kb or .ctx document.
class KbError : public Error {
 public:
  KbError(ErrorCode code, SourceSpan span, std::string detail, std::vector<std::string> expected = {});

  const SourceSpan& span() const noexcept { return span_; }
  const std::string& detail() const noexcept { return detail_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  SourceSpan span_;
  std::string detail_;
  std::vector<std::string> expected_;
};

/// Source positions of KB elements, keyed like validation locations.
struct SourceMap {
  std::map<Location, SourceSpan> spans;
  SourceSpan fallback;

  /// Exact match, else the enclosing element, else the document start.
  const SourceSpan& find(const Location& loc) const;
};

struct ParsedKb {
  KnowledgeBase kb;
  SourceMap source;
};

ParsedKb parse_kb_document(std::string_view text, const std::string& file = "<input>");
KnowledgeBase parse_kb(std::string_view text, const std::string& file = "<input>");
ParsedKb load_kb_file(const std::filesystem::path& path);

/// Canonical LF-terminated rendering. Throws Error(InvalidKnowledgeBase) for KBs
/// that fail validation.
std::string serialize_kb(const KnowledgeBase& kb);

/// A .ctx document: `property = value` lines with `#` comments.
struct ParsedContext {
  ContextAssignment context;
  std::vector<std::pair<PropertyId, Value>> ordered;
  std::map<PropertyId, SourceSpan> property_spans;
  std::map<PropertyId, SourceSpan> value_spans;
};

ParsedContext parse_context(std::string_view text, const std::string& file = "<input>");
ParsedContext load_context_file(const std::filesystem::path& path);

/// Rejects unknown properties, pattern properties and out-of-domain values
/// with a KbError pointing into the .ctx document.
void check_context_against(const KnowledgeBase& kb, const ParsedContext& parsed);

std::string serialize_context(const std::vector<std::pair<PropertyId, Value>>& ordered);

bool is_identifier(std::string_view text) noexcept;
bool is_reserved_word(std::string_view text) noexcept;

std::string read_text_file(const std::filesystem::path& path);

}  // namespace secrec
