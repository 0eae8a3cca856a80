#include "generators.hpp"

#include <algorithm>

namespace secrec::testing {
namespace {

int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool coin(std::mt19937_64& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

std::string text(std::mt19937_64& rng, bool wild) {
  static const std::vector<std::string> words = {"alpha", "beta", "gamma", "login", "token", "user", "budget", "device"};
  static const std::vector<std::string> odd = {"\"", "\\", "\n", "\t", "\xc3\xa9", "#", "{", "}", "=", "AND"};
  std::string out;
  int n = pick(rng, 0, 5);
  for (int i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += (wild && coin(rng, 0.3)) ? odd[rng() % odd.size()] : words[rng() % words.size()];
  }
  return out;
}

const PropertyDecl& any_of_kind(std::mt19937_64& rng, const KnowledgeBase& kb, PropertyKind kind) {
  auto props = kb.properties_of(kind);
  return *props[rng() % props.size()];
}

Condition random_test(std::mt19937_64& rng, const PropertyDecl& p) {
  switch (pick(rng, 0, 2)) {
    case 0: return Condition::eq(p.id, p.domain[rng() % p.domain.size()]);
    case 1: return Condition::ne(p.id, p.domain[rng() % p.domain.size()]);
    default: {
      std::vector<Value> vals;
      for (const auto& v : p.domain) {
        if (coin(rng)) vals.push_back(v);
      }
      if (vals.empty()) vals.push_back(p.domain.front());
      return Condition::in(p.id, vals);
    }
  }
}

Condition random_condition(std::mt19937_64& rng, const KnowledgeBase& kb, PropertyKind kind, int depth) {
  int choice = depth <= 0 ? 0 : pick(rng, 0, 5);
  switch (choice) {
    case 3: return Condition::negate(random_condition(rng, kb, kind, depth - 1));
    case 4:
    case 5: {
      std::vector<Condition> kids;
      int n = pick(rng, 2, 3);
      for (int i = 0; i < n; ++i) kids.push_back(random_condition(rng, kb, kind, depth - 1));
      return choice == 4 ? Condition::all_of(std::move(kids)) : Condition::any_of(std::move(kids));
    }
    default:
      if (coin(rng, 0.04)) return coin(rng) ? Condition::always() : Condition::never();
      return random_test(rng, any_of_kind(rng, kb, kind));
  }
}

double quarter(std::mt19937_64& rng, int lo, int hi) { return pick(rng, lo, hi) * 0.25; }

}  // namespace

KnowledgeBase random_kb(std::mt19937_64& rng, const GenOptions& opts) {
  KnowledgeBase kb;
  kb.id = "kb" + std::to_string(rng() % 1000);
  kb.level = coin(rng) ? KbLevel::Control : KbLevel::Pattern;
  kb.description = text(rng, opts.wild_text);

  int n_ctx = pick(rng, 1, opts.max_context_properties);
  int n_pat = pick(rng, 1, opts.max_pattern_properties);
  for (int i = 0; i < n_ctx + n_pat; ++i) {
    PropertyDecl p;
    bool ctx = i < n_ctx;
    p.id = (ctx ? "c" : "p") + std::to_string(i) + (coin(rng) ? "-x" : "");
    p.kind = ctx ? PropertyKind::Context : PropertyKind::Pattern;
    int d = pick(rng, 2, opts.max_domain);
    for (int v = 0; v < d; ++v) p.domain.push_back("v" + std::to_string(v) + (coin(rng, 0.2) ? "_b" : ""));
    if (ctx && coin(rng)) p.question_text = text(rng, opts.wild_text);
    if (coin(rng)) p.description = text(rng, opts.wild_text);
    kb.properties.push_back(std::move(p));
  }

  int n_patterns = pick(rng, 1, opts.max_patterns);
  for (int i = 0; i < n_patterns; ++i) {
    PatternDefinition pat;
    pat.id = "pat" + std::to_string(i);
    pat.level = kb.level == KbLevel::Control ? PatternLevel::SP : PatternLevel::SDP;
    for (const auto* p : kb.properties_of(PropertyKind::Pattern)) pat.values[p->id] = p->domain[rng() % p->domain.size()];
    if (coin(rng)) pat.description = text(rng, opts.wild_text);
    if (pat.level == PatternLevel::SP && coin(rng, 0.2)) pat.child_kb = "child" + std::to_string(i) + ".kb";
    kb.patterns.push_back(std::move(pat));
  }

  int n_constraints = pick(rng, 0, opts.max_constraints);
  for (int i = 0; i < n_constraints; ++i) {
    kb.constraints.push_back({"C" + std::to_string(i), random_condition(rng, kb, PropertyKind::Context, opts.max_depth),
                              text(rng, opts.wild_text)});
  }
  int n_filters = pick(rng, 0, opts.max_filters);
  for (int i = 0; i < n_filters; ++i) {
    kb.filters.push_back({"F" + std::to_string(i), random_condition(rng, kb, PropertyKind::Context, opts.max_depth),
                          random_condition(rng, kb, PropertyKind::Pattern, opts.max_depth), text(rng, opts.wild_text)});
  }

  auto pattern_props = kb.properties_of(PropertyKind::Pattern);
  int n_criteria = pick(rng, 1, 3);
  for (int i = 0; i < n_criteria; ++i) {
    kb.criteria.push_back({"k" + std::to_string(i), pattern_props[rng() % pattern_props.size()]->id,
                           coin(rng) ? Polarity::Direct : Polarity::Inverse});
    kb.base_weights[kb.criteria.back().id] = quarter(rng, 1, 8);
  }
  int n_rules = pick(rng, 0, opts.max_weight_rules);
  for (int i = 0; i < n_rules; ++i) {
    WeightRule r;
    r.id = "W" + std::to_string(i);
    r.guard = random_condition(rng, kb, PropertyKind::Context, opts.max_depth);
    for (const auto& c : kb.criteria) {
      if (coin(rng)) r.deltas[c.id] = quarter(rng, -4, 4);
    }
    if (r.deltas.empty()) r.deltas[kb.criteria.front().id] = 0.5;
    kb.weight_rules.push_back(std::move(r));
  }
  return kb;
}

std::vector<ContextAssignment> all_total_contexts(const KnowledgeBase& kb) {
  std::vector<ContextAssignment> out{ContextAssignment{}};
  for (const auto* p : kb.properties_of(PropertyKind::Context)) {
    std::vector<ContextAssignment> next;
    for (const auto& partial : out) {
      for (const auto& v : p->domain) {
        ContextAssignment c = partial;
        c.set(p->id, v);
        next.push_back(std::move(c));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<std::pair<PropertyId, Value>> random_answers(std::mt19937_64& rng, const KnowledgeBase& kb) {
  std::vector<std::pair<PropertyId, Value>> out;
  for (const auto* p : kb.properties_of(PropertyKind::Context)) out.emplace_back(p->id, p->domain[rng() % p->domain.size()]);
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace secrec::testing
