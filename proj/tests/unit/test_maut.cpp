#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "common.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "secrec/error.hpp"
#include "secrec/maut.hpp"

using namespace secrec;
using namespace secrec::testing;

namespace {

std::vector<PatternId> order(const Ranking& r) {
  std::vector<PatternId> out;
  for (const auto& s : r.ranked) out.push_back(s.pattern_id);
  return out;
}

KnowledgeBase two_criteria_kb() {
  return parse_kb(R"(control t
property c context {a, b}
property q pattern {low, mid, high}
property k pattern {low, high}
pattern p1 SP q = high k = high
pattern p2 SP q = low k = low
pattern p3 SP q = mid k = low
criterion quality from q direct
criterion cost from k inverse
weights base quality = 1, cost = 1
)");
}

}  // namespace

TEST(Maut, LowBudgetFavoursCosts) {
  auto w = resolve_weights(authn(), rc(4));
  EXPECT_GT(w.at("costs"), w.at("usability"));
  auto w8 = resolve_weights(authn(), ctx_of({{"sec-lev", "low"}, {"use-lev", "low"}, {"budget", "low"}, {"no-users", "low"}}));
  EXPECT_GT(w8.at("costs"), w8.at("usability"));
}

TEST(Maut, NormalizationOnly) {
  auto w = resolve_weights(two_criteria_kb(), {});
  EXPECT_DOUBLE_EQ(w.at("quality"), 0.5);
  EXPECT_DOUBLE_EQ(w.at("cost"), 0.5);
}

TEST(Maut, DegenerateWeights) {
  KnowledgeBase kb = two_criteria_kb();
  kb.weight_rules.push_back({"W1", Condition::eq("c", "a"), {{"quality", -2}, {"cost", -1}}});
  try {
    resolve_weights(kb, ctx_of({{"c", "a"}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateWeights);
  }
  EXPECT_NO_THROW(resolve_weights(kb, ctx_of({{"c", "b"}})));
}

TEST(Maut, UndecidedGuard) {
  try {
    resolve_weights(authn(), ctx_of({{"sec-lev", "high"}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IncompleteContext);
  }
}

TEST(Maut, FiredRulesAndClamping) {
  KnowledgeBase kb = two_criteria_kb();
  kb.weight_rules.push_back({"W1", Condition::eq("c", "a"), {{"cost", -5}}});
  auto rw = resolve_weights_detailed(kb, ctx_of({{"c", "a"}}));
  EXPECT_EQ(rw.fired_rules, (std::vector<std::string>{"W1"}));
  EXPECT_DOUBLE_EQ(rw.weights.at("cost"), 0.0);
  EXPECT_DOUBLE_EQ(rw.weights.at("quality"), 1.0);
}

TEST(Maut, Utilities) {
  const auto& kb = authn();
  const auto& usability = *kb.find_criterion("usability");
  const auto& costs = *kb.find_criterion("costs");
  EXPECT_DOUBLE_EQ(utility(kb, *kb.find_pattern("password"), costs), 1.0);
  EXPECT_DOUBLE_EQ(utility(kb, *kb.find_pattern("passkey"), usability), 1.0);
  EXPECT_DOUBLE_EQ(utility(kb, *kb.find_pattern("key-stretch"), usability), 0.0);
  EXPECT_DOUBLE_EQ(utility(kb, *kb.find_pattern("key-stretch"), costs), 0.5);
}

TEST(Maut, ScoreArithmetic) {
  const auto& kb = authn();
  WeightVector half{{{"usability", 0.5}, {"costs", 0.5}}};
  EXPECT_DOUBLE_EQ(score_with(kb, *kb.find_pattern("passkey"), half).score, 0.5);
  WeightVector costs_only{{{"usability", 0.0}, {"costs", 1.0}}};
  auto s = score_with(kb, *kb.find_pattern("key-stretch"), costs_only);
  EXPECT_DOUBLE_EQ(s.score, 0.5);
  EXPECT_DOUBLE_EQ(s.contributions.at("costs").product, 0.5);
  EXPECT_DOUBLE_EQ(s.contributions.at("usability").product, 0.0);
}

TEST(Maut, Rc4PasswordScoresHighest) {
  auto r = rank(authn(), rc(4));
  EXPECT_EQ(r.ranked.front().pattern_id, "password");
  EXPECT_EQ(score(authn(), "password", rc(4)).score, r.ranked.front().score);
}

TEST(Maut, ScoreErrors) {
  try {
    score(authn(), "password", rc(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotRecommended);
  }
  try {
    score(authn(), "ghost", rc(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownPattern);
  }
}

TEST(Maut, ShippedContextRankings) {
  auto top3 = [](const Ranking& r) {
    std::set<PatternId> s;
    for (std::size_t i = 0; i < 3 && i < r.ranked.size(); ++i) s.insert(r.ranked[i].pattern_id);
    return s;
  };
  const std::set<PatternId> usable = {"passkey", "biom-device", "biom-profile"};
  for (int k : {1, 2, 3, 7}) EXPECT_EQ(top3(rank(authn(), rc(k))), usable) << "rc" << k;
  EXPECT_EQ(rank(authn(), rc(5)).ranked.front().pattern_id, "password");
  EXPECT_EQ(rank(authn(), rc(6)).ranked.front().pattern_id, "biom-profile");
  auto top8 = rank(authn(), rc(8)).ranked.front().pattern_id;
  EXPECT_TRUE(top8 == "password" || top8 == "biom-profile");
  for (int k = 1; k <= 8; ++k) {
    auto first = rank(authn(), rc(k)).ranked.front().pattern_id;
    EXPECT_NE(first, "hrdw-token");
    EXPECT_NE(first, "key-stretch");
  }
}

TEST(Maut, EmptyFeasibleSet) {
  KnowledgeBase kb = authn();
  kb.filters.push_back({"F9", Condition::always(), Condition::never(), ""});
  try {
    rank(kb, rc(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyFeasibleSet);
  }
}

TEST(Maut, TiesFollowDeclarationOrder) {
  auto r = rank(authn(), rc(1));
  // passkey, biom-device and biom-profile share a score.
  EXPECT_EQ(order(r).at(0), "passkey");
  EXPECT_EQ(order(r).at(1), "biom-device");
  EXPECT_EQ(order(r).at(2), "biom-profile");
}

TEST(Maut, ExplanationContents) {
  auto r3 = rank(authn(), rc(3));
  auto e3 = explain(authn(), rc(3), r3);
  ASSERT_EQ(e3.excluded.size(), 1u);
  EXPECT_EQ(e3.excluded[0].pattern_id, "password");
  EXPECT_EQ(e3.excluded[0].violated[0].first, "F1");
  EXPECT_EQ(e3.excluded[0].violated[0].second, authn().find_filter("F1")->message);
  EXPECT_NE(e3.to_text().find("password excluded by F1"), std::string::npos);

  auto r4 = rank(authn(), rc(4));
  auto e4 = explain(authn(), rc(4), r4);
  EXPECT_GT(e4.weights.at("costs"), e4.weights.at("usability"));
  const auto& top = e4.recommended.front();
  EXPECT_EQ(top.pattern_id, "password");
  EXPECT_GT(top.contributions.at("costs").product, top.contributions.at("usability").product);
  EXPECT_EQ(top.description, authn().find_pattern("password")->description);
  EXPECT_EQ(e4.fired_rules, (std::vector<std::string>{"W1", "W2"}));
}

TEST(Maut, SinglePatternExplanation) {
  auto kb = parse_kb(R"(control one
property c context {a, b}
property q pattern {low, high}
pattern only SP q = high
criterion quality from q direct
weights base quality = 1
)");
  auto r = rank(kb, ctx_of({{"c", "a"}}));
  auto e = explain(kb, ctx_of({{"c", "a"}}), r);
  EXPECT_EQ(e.recommended.size(), 1u);
  EXPECT_TRUE(e.excluded.empty());
}

TEST(Maut, SwapCoherence) {
  KnowledgeBase kb = two_criteria_kb();
  KnowledgeBase swapped = kb;
  for (auto& c : swapped.criteria) c.polarity = c.polarity == Polarity::Direct ? Polarity::Inverse : Polarity::Direct;
  WeightVector w{{{"quality", 0.7}, {"cost", 0.3}}};
  WeightVector ws{{{"quality", 0.3}, {"cost", 0.7}}};
  for (const auto& p : kb.patterns) {
    auto a = score_with(kb, p, w);
    auto b = score_with(swapped, p, ws);
    for (const auto& c : kb.criteria) {
      EXPECT_NEAR(b.contributions.at(c.id).utility, 1.0 - a.contributions.at(c.id).utility, 1e-12);
      EXPECT_NEAR(b.contributions.at(c.id).weight, 1.0 - a.contributions.at(c.id).weight, 1e-12);
    }
  }
}

TEST(Maut, MatchesReferenceOnGeneratedKbs) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    auto kb = random_kb(rng);
    for (const auto& ctx : all_total_contexts(kb)) {
      Values v(ctx.values.begin(), ctx.values.end());
      if (!brute_admissible(kb, v) || brute_feasible(kb, v).empty()) continue;
      Ranking r;
      try {
        r = rank(kb, ctx);
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateWeights);
        continue;
      }
      auto w = brute_weights(kb, v);
      double sum = 0;
      for (const auto& [c, x] : r.weights.weights.weights) {
        EXPECT_NEAR(x, w.at(c), 1e-12);
        sum += x;
      }
      EXPECT_NEAR(sum, 1.0, 1e-9);
      for (const auto& s : r.ranked) {
        EXPECT_NEAR(s.score, brute_score(kb, *kb.find_pattern(s.pattern_id), w), 1e-12);
        EXPECT_GE(s.score, 0.0);
        EXPECT_LE(s.score, 1.0);
      }
    }
  }
}

TEST(Maut, ScalingInvariance) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> f(0.05, 20.0);
  for (int i = 0; i < 10; ++i) {
    KnowledgeBase kb = authn();
    double c = f(rng);
    for (auto& [k, v] : kb.base_weights) v *= c;
    for (auto& r : kb.weight_rules) {
      for (auto& [k, v] : r.deltas) v *= c;
    }
    for (int k = 1; k <= 8; ++k) EXPECT_EQ(order(rank(kb, rc(k))), order(rank(authn(), rc(k))));
  }
}
