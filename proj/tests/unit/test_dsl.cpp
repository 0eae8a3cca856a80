#include <gtest/gtest.h>

#include <random>

#include "common.hpp"
#include "generators.hpp"
#include "secrec/dsl.hpp"
#include "secrec/error.hpp"

using namespace secrec;
using namespace secrec::testing;

namespace {

const char* kMinimal = R"(control demo
property budget context {low, high}
property costs pattern {low, high}
pattern cheap SP
  costs = low
criterion costs from costs inverse
weights
  base costs = 1
)";

KbError parse_error(const std::string& text) {
  try {
    parse_kb(text, "t.kb");
  } catch (const KbError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a parse error for:\n" << text;
  return KbError(ErrorCode::ParseError, {}, "");
}

// Span lies inside the document: line exists and the column is at most one
// past the end of that line.
bool span_in_bounds(const std::string& text, const SourceSpan& span) {
  std::vector<std::size_t> lengths{0};
  for (char c : text) {
    if (c == '\n') {
      lengths.push_back(0);
    } else {
      ++lengths.back();
    }
  }
  if (span.line < 1 || span.line > lengths.size() || span.column < 1) return false;
  return span.column <= lengths[span.line - 1] + 1;
}

}  // namespace

TEST(Dsl, ShippedAuthnShape) {
  auto parsed = load_kb_file(kRoot / "kbs" / "authn.kb");
  const auto& kb = parsed.kb;
  EXPECT_EQ(kb.id, "authn");
  EXPECT_EQ(kb.level, KbLevel::Control);
  EXPECT_EQ(kb.patterns.size(), 6u);
  EXPECT_EQ(kb.properties_of(PropertyKind::Pattern).size(), 5u);
  EXPECT_EQ(kb.properties_of(PropertyKind::Context).size(), 6u);
  EXPECT_EQ(kb.filters.size(), 3u);
  EXPECT_TRUE(kb.constraints.empty());
  EXPECT_EQ(kb.criteria.size(), 2u);
  EXPECT_EQ(kb.patterns[0].child_kb, std::optional<std::string>("password.kb"));
}

TEST(Dsl, ShippedFilters) {
  const auto& kb = authn();
  EXPECT_EQ(kb.filters[0].guard, Condition::eq("sec-lev", "high"));
  EXPECT_EQ(kb.filters[0].requirement, Condition::ne("AuthN-strength", "low"));
  EXPECT_EQ(kb.filters[1].guard, Condition::eq("intern-extern", "external"));
  EXPECT_EQ(kb.filters[1].requirement, Condition::eq("add-dev", "no"));
  EXPECT_EQ(kb.filters[2].guard, Condition::eq("shared-device", "yes"));
  EXPECT_EQ(kb.filters[2].requirement, Condition::ne("dev-bind", "bound"));
}

TEST(Dsl, PasswordKbIsPatternLevel) {
  auto kb = load_kb_file(kRoot / "kbs" / "password.kb").kb;
  EXPECT_EQ(kb.level, KbLevel::Pattern);
  ASSERT_EQ(kb.patterns.size(), 2u);
  EXPECT_EQ(kb.patterns[0].id, "centralized");
  EXPECT_EQ(kb.patterns[1].id, "decentralized");
  EXPECT_EQ(kb.patterns[0].level, PatternLevel::SDP);
}

TEST(Dsl, EmptyDocument) {
  auto e = parse_error("  # nothing here\n");
  EXPECT_EQ(e.code(), ErrorCode::SemanticError);
  EXPECT_NE(e.detail().find("no knowledge base declared"), std::string::npos);
}

TEST(Dsl, OutOfDomainPatternValue) {
  std::string text = kMinimal;
  text.replace(text.find("costs = low"), 11, "costs = enormous");
  auto e = parse_error(text);
  EXPECT_EQ(e.code(), ErrorCode::SemanticError);
  EXPECT_NE(e.detail().find("costs"), std::string::npos);
  EXPECT_NE(e.detail().find("{low, high}"), std::string::npos);
  EXPECT_EQ(e.span().line, 5u);
  EXPECT_EQ(e.span().file, "t.kb");
}

TEST(Dsl, SyntaxErrorListsExpectedTokens) {
  auto e = parse_error("control demo\nproperty budget context low, high}\n");
  EXPECT_EQ(e.code(), ErrorCode::ParseError);
  EXPECT_EQ(e.span().line, 2u);
  EXPECT_FALSE(e.expected().empty());
}

TEST(Dsl, FilterNeedsGuardAndRequirement) {
  std::string text = std::string(kMinimal) + "filter F1\n  require costs = low\n";
  auto e = parse_error(text);
  EXPECT_EQ(e.code(), ErrorCode::SemanticError);
  EXPECT_EQ(e.span().line, 9u);
}

TEST(Dsl, DuplicateAttribute) {
  std::string text = kMinimal;
  text.insert(text.find("property costs"), "  description \"a\"\n  description \"b\"\n");
  auto e = parse_error(text);
  EXPECT_NE(e.detail().find("duplicate"), std::string::npos);
}

TEST(Dsl, UnresolvedReferenceInGuard) {
  std::string text = std::string(kMinimal) + "filter F1\n  when ghost = x\n  require costs = low\n";
  auto e = parse_error(text);
  EXPECT_EQ(e.code(), ErrorCode::SemanticError);
  EXPECT_EQ(e.span().line, 10u);
}

TEST(Dsl, MinimalSerialization) {
  auto kb = parse_kb(kMinimal);
  std::string out = serialize_kb(kb);
  std::size_t blocks = 0;
  for (std::size_t pos = 0; (pos = out.find("\npattern ", pos)) != std::string::npos; ++pos) ++blocks;
  EXPECT_EQ(blocks, 1u);
  EXPECT_EQ(parse_kb(out), kb);
}

TEST(Dsl, CrlfAccepted) {
  std::string text = kMinimal;
  std::string crlf;
  for (char c : text) {
    if (c == '\n') crlf += '\r';
    crlf += c;
  }
  EXPECT_EQ(parse_kb(crlf), parse_kb(text));
  EXPECT_EQ(serialize_kb(parse_kb(crlf)).find('\r'), std::string::npos);
}

TEST(Dsl, DeclarationOrderOnlyMattersForRank) {
  std::string reordered = R"(control demo
property costs pattern {low, high}
property budget context {low, high}
pattern cheap SP
  costs = low
weights
  base costs = 1
criterion costs from costs inverse
)";
  auto a = parse_kb(kMinimal);
  auto b = parse_kb(reordered);
  EXPECT_EQ(a.patterns, b.patterns);
  EXPECT_EQ(a.criteria, b.criteria);
  EXPECT_EQ(a.base_weights, b.base_weights);
}

TEST(Dsl, SerializeRejectsInvalidKb) {
  KnowledgeBase kb = authn();
  kb.base_weights.clear();
  try {
    serialize_kb(kb);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidKnowledgeBase);
  }
}

TEST(Dsl, RoundTripGeneratedKbs) {
  std::mt19937_64 rng(7);
  GenOptions g;
  g.wild_text = true;
  for (int i = 0; i < 100; ++i) {
    auto kb = random_kb(rng, g);
    EXPECT_EQ(parse_kb(serialize_kb(kb)), kb);
  }
}

TEST(Dsl, ErrorSpansStayInBounds) {
  std::string base = read_text_file(kRoot / "kbs" / "authn.kb");
  std::mt19937_64 rng(99);
  const std::vector<std::string> junk = {"{", "}", "=", "AND", "filter", "\"", "pattern", "weights", "x y", "\n", "!=", "in"};
  int errors = 0;
  for (int i = 0; i < 400; ++i) {
    std::string text = base;
    int edits = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < edits; ++k) {
      std::size_t pos = rng() % (text.size() + 1);
      switch (rng() % 3) {
        case 0: text = text.substr(0, pos); break;
        case 1: text.insert(pos, " " + junk[rng() % junk.size()] + " "); break;
        default: text.erase(pos, rng() % 20); break;
      }
    }
    try {
      parse_kb(text, "fuzz.kb");
    } catch (const KbError& e) {
      ++errors;
      EXPECT_TRUE(span_in_bounds(text, e.span())) << to_string(e.span()) << "\n" << e.what();
    }
  }
  EXPECT_GT(errors, 100);
}

TEST(Dsl, ContextFiles) {
  auto parsed = parse_context("# comment\nsec-lev = high\n\nbudget=low  # trailing\n", "c.ctx");
  EXPECT_EQ(parsed.context.size(), 2u);
  EXPECT_EQ(parsed.ordered.front().first, "sec-lev");
  check_context_against(authn(), parsed);
  EXPECT_EQ(serialize_context(parsed.ordered), "sec-lev = high\nbudget = low\n");
}

TEST(Dsl, ContextErrors) {
  auto bad_prop = parse_context("sec-lev = high\nbogus = x\n", "c.ctx");
  try {
    check_context_against(authn(), bad_prop);
    FAIL();
  } catch (const KbError& e) {
    EXPECT_EQ(e.span().line, 2u);
    EXPECT_EQ(e.code(), ErrorCode::UnknownProperty);
  }
  auto bad_value = parse_context("sec-lev = ultra\n", "c.ctx");
  EXPECT_THROW(check_context_against(authn(), bad_value), KbError);
  auto pattern_prop = parse_context("costs = low\n", "c.ctx");
  EXPECT_THROW(check_context_against(authn(), pattern_prop), KbError);
  EXPECT_THROW(parse_context("sec-lev = high\nsec-lev = low\n"), KbError);
  EXPECT_THROW(parse_context("sec-lev high\n"), KbError);
}

TEST(Dsl, Identifiers) {
  EXPECT_TRUE(is_identifier("AuthN-usablty"));
  EXPECT_TRUE(is_identifier("_x1"));
  EXPECT_FALSE(is_identifier("1x"));
  EXPECT_FALSE(is_identifier(""));
  EXPECT_TRUE(is_reserved_word("filter"));
  EXPECT_FALSE(is_reserved_word("budget"));
}
