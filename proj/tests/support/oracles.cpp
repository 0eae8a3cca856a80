#include "oracles.hpp"

#include <algorithm>

namespace secrec::testing {

std::optional<bool> kleene(const Condition& c, const Values& values) {
  using Op = Condition::Op;
  auto lookup = [&]() -> const std::string* {
    auto it = values.find(c.property);
    return it == values.end() ? nullptr : &it->second;
  };
  switch (c.op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Eq:
      if (auto* v = lookup()) return *v == c.values.at(0);
      return std::nullopt;
    case Op::Ne:
      if (auto* v = lookup()) return *v != c.values.at(0);
      return std::nullopt;
    case Op::In:
      if (auto* v = lookup()) return std::find(c.values.begin(), c.values.end(), *v) != c.values.end();
      return std::nullopt;
    case Op::Not: {
      auto r = kleene(c.children.at(0), values);
      if (!r) return std::nullopt;
      return !*r;
    }
    case Op::And: {
      bool unknown = false;
      for (const auto& k : c.children) {
        auto r = kleene(k, values);
        if (r && !*r) return false;
        if (!r) unknown = true;
      }
      if (unknown) return std::nullopt;
      return true;
    }
    case Op::Or: {
      bool unknown = false;
      for (const auto& k : c.children) {
        auto r = kleene(k, values);
        if (r && *r) return true;
        if (!r) unknown = true;
      }
      if (unknown) return std::nullopt;
      return false;
    }
  }
  return std::nullopt;
}

std::vector<PatternId> brute_feasible(const KnowledgeBase& kb, const Values& ctx) {
  std::vector<PatternId> out;
  for (const auto& pat : kb.patterns) {
    Values pv(pat.values.begin(), pat.values.end());
    bool ok = true;
    for (const auto& f : kb.filters) {
      auto g = kleene(f.guard, ctx);
      if (g && *g && !kleene(f.requirement, pv).value()) ok = false;
    }
    if (ok) out.push_back(pat.id);
  }
  return out;
}

bool brute_admissible(const KnowledgeBase& kb, const Values& ctx) {
  for (const auto& c : kb.constraints) {
    auto r = kleene(c.expr, ctx);
    if (r && !*r) return false;
  }
  return true;
}

std::map<std::string, double> brute_weights(const KnowledgeBase& kb, const Values& ctx) {
  std::map<std::string, double> w(kb.base_weights.begin(), kb.base_weights.end());
  for (const auto& r : kb.weight_rules) {
    if (kleene(r.guard, ctx).value()) {
      for (const auto& [k, d] : r.deltas) w[k] += d;
    }
  }
  double sum = 0;
  for (auto& [k, v] : w) {
    v = std::max(0.0, v);
    sum += v;
  }
  for (auto& [k, v] : w) v /= sum;
  return w;
}

double brute_utility(const KnowledgeBase& kb, const PatternDefinition& pat, const Criterion& c) {
  const PropertyDecl* prop = nullptr;
  for (const auto& p : kb.properties) {
    if (p.id == c.source_property) prop = &p;
  }
  auto pos = std::find(prop->domain.begin(), prop->domain.end(), pat.values.at(c.source_property)) - prop->domain.begin();
  double top = static_cast<double>(prop->domain.size() - 1);
  double u = static_cast<double>(pos) / top;
  return c.polarity == Polarity::Direct ? u : 1.0 - u;
}

double brute_score(const KnowledgeBase& kb, const PatternDefinition& pat, const std::map<std::string, double>& w) {
  double s = 0;
  for (const auto& c : kb.criteria) s += w.at(c.id) * brute_utility(kb, pat, c);
  return s;
}

}  // namespace secrec::testing
