#include "secrec/condition.hpp"

#include <algorithm>

namespace secrec {
namespace {

Truth negate(Truth t) {
  switch (t) {
    case Truth::True: return Truth::False;
    case Truth::False: return Truth::True;
    case Truth::Unknown: return Truth::Unknown;
  }
  return Truth::Unknown;
}

void collect(const Condition& cond, std::set<PropertyId>& out) {
  if (cond.is_test()) out.insert(cond.property);
  for (const auto& child : cond.children) collect(child, out);
}

int precedence(Condition::Op op) {
  switch (op) {
    case Condition::Op::Or: return 1;
    case Condition::Op::And: return 2;
    default: return 3;
  }
}

void print(const Condition& cond, std::string& out);

void print_child(const Condition& parent, const Condition& child, std::string& out) {
  // Same-operator nesting is parenthesized so the tree shape survives a re-parse.
  bool parens = precedence(child.op) < 3 &&
                (precedence(child.op) <= precedence(parent.op) || parent.op == Condition::Op::Not);
  if (parens) out += '(';
  print(child, out);
  if (parens) out += ')';
}

void print(const Condition& cond, std::string& out) {
  using Op = Condition::Op;
  switch (cond.op) {
    case Op::True: out += "true"; return;
    case Op::False: out += "false"; return;
    case Op::Eq:
    case Op::Ne:
      out += cond.property;
      out += cond.op == Op::Eq ? " = " : " != ";
      out += cond.values.empty() ? std::string() : cond.values.front();
      return;
    case Op::In:
      out += cond.property;
      out += " in {";
      for (std::size_t i = 0; i < cond.values.size(); ++i) {
        if (i) out += ", ";
        out += cond.values[i];
      }
      out += '}';
      return;
    case Op::Not:
      out += "NOT ";
      if (!cond.children.empty()) print_child(cond, cond.children.front(), out);
      return;
    case Op::And:
    case Op::Or:
      for (std::size_t i = 0; i < cond.children.size(); ++i) {
        if (i) out += cond.op == Op::And ? " AND " : " OR ";
        print_child(cond, cond.children[i], out);
      }
      return;
  }
}

}  // namespace

Truth evaluate(const Condition& cond, const ValueLookup& lookup) {
  using Op = Condition::Op;
  switch (cond.op) {
    case Op::True: return Truth::True;
    case Op::False: return Truth::False;
    case Op::Eq:
    case Op::Ne:
    case Op::In: {
      const Value* v = lookup(cond.property);
      if (!v) return Truth::Unknown;
      bool member = std::find(cond.values.begin(), cond.values.end(), *v) != cond.values.end();
      if (cond.op == Op::Ne) member = !member;
      return member ? Truth::True : Truth::False;
    }
    case Op::Not:
      return cond.children.empty() ? Truth::Unknown : negate(evaluate(cond.children.front(), lookup));
    case Op::And: {
      Truth acc = Truth::True;
      for (const auto& child : cond.children) {
        Truth t = evaluate(child, lookup);
        if (t == Truth::False) return Truth::False;
        if (t == Truth::Unknown) acc = Truth::Unknown;
      }
      return acc;
    }
    case Op::Or: {
      Truth acc = Truth::False;
      for (const auto& child : cond.children) {
        Truth t = evaluate(child, lookup);
        if (t == Truth::True) return Truth::True;
        if (t == Truth::Unknown) acc = Truth::Unknown;
      }
      return acc;
    }
  }
  return Truth::Unknown;
}

Truth evaluate(const Condition& cond, const ContextAssignment& ctx) {
  return evaluate(cond, [&ctx](std::string_view p) { return ctx.get(p); });
}

Truth evaluate(const Condition& cond, const PatternDefinition& pattern) {
  return evaluate(cond, [&pattern](std::string_view p) { return pattern.value_of(p); });
}

std::set<PropertyId> referenced_properties(const Condition& cond) {
  std::set<PropertyId> out;
  collect(cond, out);
  return out;
}

std::string to_string(const Condition& cond) {
  std::string out;
  print(cond, out);
  return out;
}

}  // namespace secrec
