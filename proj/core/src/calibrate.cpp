#include "secrec/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <set>

#include "secrec/error.hpp"
#include "secrec/maut.hpp"
#include "secrec/validate.hpp"

namespace secrec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Gaps below this count as ties for the ranking's tie key.
constexpr double kMinMargin = 1e-6;

struct Slot {
  std::size_t rule;
  CriterionId criterion;
  long start;
  long lo;
  long hi;
};

double best_score(const Ranking& r, const std::set<PatternId>& ids, bool inside) {
  for (const auto& sp : r.ranked) {
    if (ids.count(sp.pattern_id) == static_cast<std::size_t>(inside)) return sp.score;
  }
  return -kInf;
}

// k * step without accumulated binary noise (0.7, not 0.7000000000000001).
double grid_value(long k, double step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", static_cast<double>(k) * step);
  return std::strtod(buf, nullptr);
}

}  // namespace

double expectation_margin(const KnowledgeBase& kb, const ContextAssignment& ctx, const Expectation& e) {
  std::set<PatternId> ids(e.patterns.begin(), e.patterns.end());
  if (e.rule == Expectation::Rule::Excluded) {
    auto feas = filter_patterns(kb, ctx);
    for (const auto& p : ids) {
      if (!feas.exclusions.count(p)) return -kInf;
    }
    return kInf;
  }
  Ranking r;
  try {
    r = rank(kb, ctx);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::EmptyFeasibleSet) throw;
    return e.rule == Expectation::Rule::NeverTop ? kInf : -kInf;
  }
  switch (e.rule) {
    case Expectation::Rule::TopSet: {
      double worst_in = kInf;
      std::size_t present = 0;
      for (const auto& sp : r.ranked) {
        if (ids.count(sp.pattern_id)) {
          worst_in = std::min(worst_in, sp.score);
          ++present;
        }
      }
      if (present < ids.size()) return -kInf;
      double best_out = best_score(r, ids, false);
      return best_out == -kInf ? kInf : worst_in - best_out;
    }
    case Expectation::Rule::TopOneOf: {
      double in = best_score(r, ids, true);
      if (in == -kInf) return -kInf;
      double out = best_score(r, ids, false);
      return out == -kInf ? kInf : in - out;
    }
    case Expectation::Rule::NeverTop: {
      double in = best_score(r, ids, true);
      if (in == -kInf) return kInf;
      double out = best_score(r, ids, false);
      return out - in;
    }
    case Expectation::Rule::Excluded: break;
  }
  return kInf;
}

CalibrationResult calibrate(const KnowledgeBase& start, const std::map<std::string, ContextAssignment>& contexts,
                            const std::vector<Expectation>& expectations, const CalibrationOptions& options) {
  if (!(options.step > 0) || options.lower > options.upper) {
    throw Error(ErrorCode::InvalidRequest, "calibration grid needs a positive step and lower <= upper");
  }
  // Validate the inputs once; the candidates only differ in deltas.
  (void)evaluate_expectations(start, contexts, expectations);

  const double step = options.step;
  auto to_steps = [step](double v) { return std::lround(v / step); };
  const long grid_lo = static_cast<long>(std::ceil(options.lower / step - 1e-9));
  const long grid_hi = static_cast<long>(std::floor(options.upper / step + 1e-9));

  std::vector<Slot> slots;
  for (std::size_t i = 0; i < start.weight_rules.size(); ++i) {
    for (const auto& c : start.criteria) {
      const auto& deltas = start.weight_rules[i].deltas;
      auto it = deltas.find(c.id);
      long s = it == deltas.end() ? 0 : to_steps(it->second);
      long lo = std::min(grid_lo, s);
      long hi = std::max(grid_hi, s);
      if (options.preserve_signs && s > 0) lo = std::max(lo, 1L);
      if (options.preserve_signs && s < 0) hi = std::min(hi, -1L);
      slots.push_back({i, c.id, s, lo, hi});
    }
  }

  CalibrationResult result;
  result.kb = start;

  KnowledgeBase candidate = start;
  std::vector<long> value(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) value[i] = slots[i].start;

  auto apply = [&] {
    for (std::size_t i = 0; i < slots.size(); ++i) {
      auto& deltas = candidate.weight_rules[slots[i].rule].deltas;
      const auto& original = start.weight_rules[slots[i].rule].deltas;
      double v = grid_value(value[i], step);
      if (value[i] == slots[i].start && original.count(slots[i].criterion)) v = original.at(slots[i].criterion);
      if (value[i] == 0 && !original.count(slots[i].criterion)) {
        deltas.erase(slots[i].criterion);
      } else {
        deltas[slots[i].criterion] = v;
      }
    }
  };

  auto judge = [&]() -> double {
    double margin = kInf;
    for (const auto& e : expectations) {
      const auto check_one = [&](const ContextAssignment& ctx) {
        double m = expectation_margin(candidate, ctx, e);
        margin = std::min(margin, m);
      };
      if (e.context == "*") {
        for (const auto& [name, ctx] : contexts) check_one(ctx);
      } else {
        check_one(contexts.at(e.context));
      }
      if (margin <= kMinMargin) return margin;
    }
    return margin;
  };

  std::vector<long> best_value;
  double best_margin = -kInf;

  // Distributes `budget` steps over slots[from..] in a fixed order.
  std::function<void(std::size_t, long)> visit = [&](std::size_t from, long budget) {
    if (budget == 0) {
      apply();
      if (!validate(candidate).ok()) return;
      ++result.candidates;
      double m;
      try {
        m = judge();
      } catch (const Error&) {
        return;  // degenerate weight vector
      }
      if (m > kMinMargin && m > best_margin + 1e-12) {
        best_margin = m;
        best_value = value;
      }
      return;
    }
    if (from == slots.size()) return;
    visit(from + 1, budget);
    for (long k = 1; k <= budget; ++k) {
      for (long sign : {+1L, -1L}) {
        long v = slots[from].start + sign * k;
        if (v < slots[from].lo || v > slots[from].hi) continue;
        value[from] = v;
        visit(from + 1, budget - k);
        value[from] = slots[from].start;
      }
    }
  };

  for (int d = 0; d <= options.max_distance; ++d) {
    visit(0, d);
    if (!best_value.empty()) {
      result.found = true;
      result.distance = d;
      break;
    }
  }
  if (!result.found) return result;

  value = best_value;
  apply();
  result.kb = candidate;
  result.margin = best_margin;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (value[i] == slots[i].start) continue;
    result.changes.push_back({start.weight_rules[slots[i].rule].id, slots[i].criterion,
                              grid_value(slots[i].start, step), grid_value(value[i], step)});
  }
  return result;
}

}  // namespace secrec
