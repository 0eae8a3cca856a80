#include "secrec/maut.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "secrec/condition.hpp"
#include "secrec/error.hpp"

namespace secrec {
namespace {

// Scores this close are treated as tied, so that rounding noise from
// equivalent weight vectors cannot reorder patterns.
constexpr double kTieQuantum = 1e-9;

long long tie_key(double score) { return std::llround(score / kTieQuantum); }

}  // namespace

double WeightVector::at(const CriterionId& id) const {
  auto it = weights.find(id);
  return it == weights.end() ? 0.0 : it->second;
}

ResolvedWeights resolve_weights_detailed(const KnowledgeBase& kb, const ContextAssignment& ctx) {
  std::map<CriterionId, double> raw;
  for (const auto& c : kb.criteria) {
    auto it = kb.base_weights.find(c.id);
    raw[c.id] = it == kb.base_weights.end() ? 0.0 : it->second;
  }
  ResolvedWeights out;
  for (const auto& rule : kb.weight_rules) {
    Truth t = evaluate(rule.guard, ctx);
    if (t == Truth::Unknown) {
      throw Error(ErrorCode::IncompleteContext,
                  "weight rule '" + rule.id + "' cannot be decided: its guard reads unassigned context properties");
    }
    if (t != Truth::True) continue;
    out.fired_rules.push_back(rule.id);
    for (const auto& [crit, delta] : rule.deltas) {
      if (raw.count(crit)) raw[crit] += delta;
    }
  }
  double total = 0;
  for (auto& [crit, w] : raw) {
    w = std::max(0.0, w);
    total += w;
  }
  if (!(total > 0)) {
    throw Error(ErrorCode::DegenerateWeights, "all criterion weights are zero after applying weight rules");
  }
  for (auto& [crit, w] : raw) out.weights.weights[crit] = w / total;
  return out;
}

WeightVector resolve_weights(const KnowledgeBase& kb, const ContextAssignment& ctx) {
  return resolve_weights_detailed(kb, ctx).weights;
}

double utility(const KnowledgeBase& kb, const PatternDefinition& pattern, const Criterion& criterion) {
  const auto* prop = kb.find_property(criterion.source_property);
  const Value* value = pattern.value_of(criterion.source_property);
  if (!prop || !value) {
    throw Error(ErrorCode::InvalidKnowledgeBase,
                "pattern '" + pattern.id + "' has no value for '" + criterion.source_property + "'");
  }
  auto r = prop->rank_of(*value);
  if (!r || prop->domain.size() < 2) {
    throw Error(ErrorCode::ValueOutOfDomain, "value '" + *value + "' is outside the domain of '" + prop->id + "'");
  }
  double top = static_cast<double>(prop->domain.size() - 1);
  double rank = static_cast<double>(*r);
  return criterion.polarity == Polarity::Direct ? rank / top : (top - rank) / top;
}

ScoredPattern score_with(const KnowledgeBase& kb, const PatternDefinition& pattern, const WeightVector& weights) {
  ScoredPattern out;
  out.pattern_id = pattern.id;
  for (const auto& c : kb.criteria) {
    Contribution contrib;
    contrib.weight = weights.at(c.id);
    contrib.utility = utility(kb, pattern, c);
    contrib.product = contrib.weight * contrib.utility;
    out.score += contrib.product;
    out.contributions.emplace(c.id, contrib);
  }
  return out;
}

ScoredPattern score(const KnowledgeBase& kb, const PatternId& pattern_id, const ContextAssignment& ctx) {
  const auto* pattern = kb.find_pattern(pattern_id);
  if (!pattern) throw Error(ErrorCode::UnknownPattern, "unknown pattern '" + pattern_id + "'");
  auto feasibility = feasible_patterns(kb, ctx);
  if (std::find(feasibility.feasible.begin(), feasibility.feasible.end(), pattern_id) == feasibility.feasible.end()) {
    throw Error(ErrorCode::NotRecommended, "pattern '" + pattern_id + "' is not feasible in this context");
  }
  return score_with(kb, *pattern, resolve_weights(kb, ctx));
}

Ranking rank(const KnowledgeBase& kb, const ContextAssignment& ctx) {
  Ranking out;
  out.feasibility = feasible_patterns(kb, ctx);
  if (out.feasibility.feasible.empty()) {
    throw Error(ErrorCode::EmptyFeasibleSet, "no pattern is feasible in this context");
  }
  out.weights = resolve_weights_detailed(kb, ctx);
  for (const auto& id : out.feasibility.feasible) {
    out.ranked.push_back(score_with(kb, *kb.find_pattern(id), out.weights.weights));
  }
  // feasible is already in declaration order, so a stable sort keeps ties in it.
  std::stable_sort(out.ranked.begin(), out.ranked.end(), [](const ScoredPattern& a, const ScoredPattern& b) {
    return tie_key(a.score) > tie_key(b.score);
  });
  return out;
}

Explanation explain(const KnowledgeBase& kb, const ContextAssignment& ctx, const Ranking& ranking) {
  (void)ctx;
  Explanation out;
  out.weights = ranking.weights.weights;
  out.fired_rules = ranking.weights.fired_rules;
  for (std::size_t i = 0; i < ranking.ranked.size(); ++i) {
    const auto& sp = ranking.ranked[i];
    const auto* pat = kb.find_pattern(sp.pattern_id);
    out.recommended.push_back({sp.pattern_id, i + 1, sp.score, pat ? pat->description : "", sp.contributions});
  }
  for (const auto& pat : kb.patterns) {
    auto it = ranking.feasibility.exclusions.find(pat.id);
    if (it == ranking.feasibility.exclusions.end()) continue;
    Explanation::Excluded ex{pat.id, {}};
    for (const auto& fid : it->second) {
      const auto* f = kb.find_filter(fid);
      ex.violated.emplace_back(fid, f ? f->message : "");
    }
    out.excluded.push_back(std::move(ex));
  }
  return out;
}

std::string Explanation::to_text() const {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  os << "Weights:";
  for (const auto& [crit, w] : weights.weights) os << ' ' << crit << '=' << w;
  os << '\n';
  os << "Weight rules fired:";
  if (fired_rules.empty()) os << " none";
  for (const auto& r : fired_rules) os << ' ' << r;
  os << '\n';
  for (const auto& rec : recommended) {
    os << '\n' << rec.rank << ". " << rec.pattern_id << "  score " << rec.score << '\n';
    if (!rec.description.empty()) os << "   " << rec.description << '\n';
    for (const auto& [crit, c] : rec.contributions) {
      os << "   " << crit << ": weight " << c.weight << " x utility " << c.utility << " = " << c.product << '\n';
    }
  }
  if (!excluded.empty()) os << "\nExcluded:\n";
  for (const auto& ex : excluded) {
    for (const auto& [fid, msg] : ex.violated) {
      os << "  " << ex.pattern_id << " excluded by " << fid;
      if (!msg.empty()) os << ": " << msg;
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace secrec
