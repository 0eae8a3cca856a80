#include <gtest/gtest.h>

#include "common.hpp"
#include "secrec/condition.hpp"
#include "secrec/dsl.hpp"

using namespace secrec;
using namespace secrec::testing;

TEST(Condition, KleeneAndOr) {
  auto c = Condition::all_of({Condition::eq("a", "x"), Condition::eq("b", "y")});
  EXPECT_EQ(evaluate(c, ctx_of({{"a", "x"}})), Truth::Unknown);
  EXPECT_EQ(evaluate(c, ctx_of({{"a", "z"}})), Truth::False);
  EXPECT_EQ(evaluate(c, ctx_of({{"a", "x"}, {"b", "y"}})), Truth::True);
  auto d = Condition::any_of({Condition::eq("a", "x"), Condition::eq("b", "y")});
  EXPECT_EQ(evaluate(d, ctx_of({{"a", "x"}})), Truth::True);
  EXPECT_EQ(evaluate(d, ctx_of({{"a", "z"}})), Truth::Unknown);
}

TEST(Condition, NegationOfUnknownStaysUnknown) {
  auto c = Condition::negate(Condition::eq("a", "x"));
  EXPECT_EQ(evaluate(c, ContextAssignment{}), Truth::Unknown);
  EXPECT_EQ(evaluate(c, ctx_of({{"a", "y"}})), Truth::True);
}

TEST(Condition, InAndNe) {
  EXPECT_EQ(evaluate(Condition::in("a", {"x", "y"}), ctx_of({{"a", "y"}})), Truth::True);
  EXPECT_EQ(evaluate(Condition::in("a", {"x", "y"}), ctx_of({{"a", "z"}})), Truth::False);
  EXPECT_EQ(evaluate(Condition::ne("a", "x"), ctx_of({{"a", "x"}})), Truth::False);
  EXPECT_EQ(evaluate(Condition::always(), ContextAssignment{}), Truth::True);
  EXPECT_EQ(evaluate(Condition::never(), ContextAssignment{}), Truth::False);
}

TEST(Condition, PatternEvaluation) {
  const auto& kb = authn();
  const auto& req = kb.find_filter("F1")->requirement;
  EXPECT_EQ(evaluate(req, *kb.find_pattern("password")), Truth::False);
  EXPECT_EQ(evaluate(req, *kb.find_pattern("passkey")), Truth::True);
}

TEST(Condition, ReferencedProperties) {
  auto c = Condition::any_of({Condition::eq("a", "x"), Condition::negate(Condition::in("b", {"y"}))});
  EXPECT_EQ(referenced_properties(c), (std::set<PropertyId>{"a", "b"}));
}

TEST(Condition, PrinterKeepsStructure) {
  auto c = Condition::all_of({Condition::any_of({Condition::eq("a", "x"), Condition::eq("b", "y")}),
                              Condition::negate(Condition::in("c", {"p", "q"}))});
  std::string text = to_string(c);
  EXPECT_EQ(text, "(a = x OR b = y) AND NOT c in {p, q}");
  std::string kb = "control k\nproperty a context {x, z}\nproperty b context {y, z}\nproperty c context {p, q}\n"
                   "property v pattern {l, h}\npattern one SP v = l\nconstraint C1 expr " + text +
                   "\ncriterion u from v direct\nweights base u = 1\n";
  EXPECT_EQ(parse_kb(kb).constraints.at(0).expr, c);
}

TEST(Condition, NestedSameOperatorIsParenthesized) {
  auto c = Condition::all_of({Condition::all_of({Condition::eq("a", "x"), Condition::eq("b", "y")}), Condition::eq("c", "p")});
  EXPECT_EQ(to_string(c), "(a = x AND b = y) AND c = p");
}
