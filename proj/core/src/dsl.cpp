#include "secrec/dsl.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "lexer.hpp"
#include "secrec/condition.hpp"

namespace secrec {

using detail::Token;
using detail::TokenKind;

namespace {

constexpr std::array<std::string_view, 25> kReserved = {
    "control", "sp",      "property", "pattern", "constraint", "filter", "criterion", "weights", "description",
    "question", "child",  "expr",     "when",    "require",    "message", "base",     "rule",    "then",
    "from",    "AND",     "OR",       "NOT",     "in",         "true",   "false"};

bool is_block_keyword(std::string_view s) {
  return s == "control" || s == "sp" || s == "property" || s == "pattern" || s == "constraint" || s == "filter" ||
         s == "criterion" || s == "weights";
}

std::string format_error(const SourceSpan& span, const std::string& detail, const std::vector<std::string>& expected) {
  std::string msg = to_string(span) + ": " + detail;
  if (!expected.empty()) {
    msg += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    msg += ")";
  }
  return msg;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string file) : toks_(std::move(tokens)), file_(std::move(file)) {}

  ParsedKb run() {
    out_.source.fallback = SourceSpan{file_, 1, 1, 0};
    while (peek().kind != TokenKind::End) parse_block();
    if (!have_header_) {
      throw KbError(ErrorCode::SemanticError, span_of(toks_.front()), "no knowledge base declared");
    }
    for (auto& pat : out_.kb.patterns) {
      if (!pattern_level_given_[&pat - out_.kb.patterns.data()]) {
        pat.level = out_.kb.level == KbLevel::Control ? PatternLevel::SP : PatternLevel::SDP;
      }
    }
    auto report = validate(out_.kb);
    if (!report.ok()) {
      const auto& v = report.violations.front();
      throw KbError(ErrorCode::SemanticError, out_.source.find(v.location), v.message);
    }
    return std::move(out_);
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }

  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  SourceSpan span_of(const Token& t) const { return SourceSpan{file_, t.line, t.column, t.length}; }

  [[noreturn]] void syntax_error(const Token& t, std::vector<std::string> expected) const {
    std::string found = t.kind == TokenKind::End ? "end of input"
                                                 : std::string(detail::describe(t.kind)) + " '" + t.text + "'";
    throw KbError(ErrorCode::ParseError, span_of(t), "syntax error: unexpected " + found, std::move(expected));
  }

  [[noreturn]] void semantic_error(const Token& t, const std::string& message) const {
    throw KbError(ErrorCode::SemanticError, span_of(t), message);
  }

  bool at_word(std::string_view word) const {
    return peek().kind == TokenKind::Identifier && peek().text == word;
  }

  const Token& expect(TokenKind kind, std::vector<std::string> expected = {}) {
    if (peek().kind != kind) {
      if (expected.empty()) expected.push_back(detail::describe(kind));
      syntax_error(peek(), std::move(expected));
    }
    return next();
  }

  const Token& expect_word(std::string_view word) {
    if (!at_word(word)) syntax_error(peek(), {"'" + std::string(word) + "'"});
    return next();
  }

  const Token& expect_identifier(const char* what) { return expect(TokenKind::Identifier, {what}); }

  const Token& expect_property_id() {
    const Token& t = expect_identifier("property id");
    if (is_reserved_word(t.text)) semantic_error(t, "'" + t.text + "' is a reserved word");
    return t;
  }

  std::string expect_string() { return expect(TokenKind::String).text; }

  double expect_number() {
    const Token& t = expect(TokenKind::Number);
    std::string_view s = t.text;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) semantic_error(t, "number out of range");
    return v;
  }

  void record(Location loc, const Token& t) { out_.source.spans.emplace(std::move(loc), span_of(t)); }

  void set_once(std::string& slot, bool& seen, const Token& at, const char* what) {
    if (seen) semantic_error(at, std::string("duplicate '") + what + "' attribute");
    seen = true;
    slot = expect_string();
  }

  void parse_block() {
    const Token& kw = peek();
    if (kw.kind != TokenKind::Identifier || !is_block_keyword(kw.text)) {
      syntax_error(kw, {"'control'", "'sp'", "'property'", "'pattern'", "'constraint'", "'filter'", "'criterion'",
                        "'weights'"});
    }
    if (kw.text == "control" || kw.text == "sp") return parse_header();
    if (kw.text == "property") return parse_property();
    if (kw.text == "pattern") return parse_pattern();
    if (kw.text == "constraint") return parse_constraint();
    if (kw.text == "filter") return parse_filter();
    if (kw.text == "criterion") return parse_criterion();
    return parse_weights();
  }

  void parse_header() {
    const Token& kw = next();
    if (have_header_) semantic_error(kw, "duplicate knowledge base header");
    have_header_ = true;
    out_.kb.level = kw.text == "control" ? KbLevel::Control : KbLevel::Pattern;
    const Token& id = expect_identifier("knowledge base id");
    out_.kb.id = id.text;
    record({Section::Header, 0, ""}, id);
    bool seen_desc = false;
    while (at_word("description")) set_once(out_.kb.description, seen_desc, next(), "description");
  }

  void parse_property() {
    next();
    std::size_t index = out_.kb.properties.size();
    PropertyDecl decl;
    const Token& id = expect_property_id();
    decl.id = id.text;
    record({Section::Properties, index, ""}, id);
    const Token& kind = expect_identifier("'context' or 'pattern'");
    if (kind.text == "context") {
      decl.kind = PropertyKind::Context;
    } else if (kind.text == "pattern") {
      decl.kind = PropertyKind::Pattern;
    } else {
      syntax_error(kind, {"'context'", "'pattern'"});
    }
    record({Section::Properties, index, "domain"}, expect(TokenKind::LBrace));
    decl.domain.push_back(expect_identifier("domain value").text);
    while (peek().kind == TokenKind::Comma) {
      next();
      decl.domain.push_back(expect_identifier("domain value").text);
    }
    expect(TokenKind::RBrace, {"','", "'}'"});
    bool seen_q = false, seen_d = false;
    while (true) {
      if (at_word("question")) {
        record({Section::Properties, index, "question"}, peek());
        set_once(decl.question_text, seen_q, next(), "question");
      } else if (at_word("description")) {
        set_once(decl.description, seen_d, next(), "description");
      } else {
        break;
      }
    }
    out_.kb.properties.push_back(std::move(decl));
  }

  void parse_pattern() {
    next();
    std::size_t index = out_.kb.patterns.size();
    PatternDefinition pat;
    const Token& id = expect_identifier("pattern id");
    pat.id = id.text;
    record({Section::Patterns, index, ""}, id);
    bool level_given = false;
    if ((at_word("SP") || at_word("SDP")) && peek(1).kind != TokenKind::Equals) {
      pat.level = next().text == "SP" ? PatternLevel::SP : PatternLevel::SDP;
      level_given = true;
    }
    bool seen_d = false;
    while (peek().kind == TokenKind::Identifier && !is_block_keyword(peek().text)) {
      if (at_word("description")) {
        set_once(pat.description, seen_d, next(), "description");
      } else if (at_word("child")) {
        const Token& kw = next();
        record({Section::Patterns, index, "child"}, kw);
        if (pat.child_kb) semantic_error(kw, "duplicate 'child' attribute");
        pat.child_kb = expect_string();
      } else {
        const Token& prop = expect_property_id();
        expect(TokenKind::Equals);
        const Token& value = expect_identifier("value");
        if (pat.values.count(prop.text)) {
          semantic_error(prop, "pattern '" + pat.id + "' assigns '" + prop.text + "' twice");
        }
        pat.values.emplace(prop.text, value.text);
        record({Section::Patterns, index, prop.text}, value);
      }
    }
    out_.kb.patterns.push_back(std::move(pat));
    pattern_level_given_.push_back(level_given);
  }

  void parse_constraint() {
    const Token& kw = next();
    std::size_t index = out_.kb.constraints.size();
    ContextualConstraint c;
    const Token& id = expect_identifier("constraint id");
    c.id = id.text;
    record({Section::Constraints, index, ""}, id);
    bool seen_expr = false, seen_msg = false;
    while (true) {
      if (at_word("expr")) {
        const Token& at = next();
        if (seen_expr) semantic_error(at, "duplicate 'expr' attribute");
        seen_expr = true;
        record({Section::Constraints, index, "expr"}, at);
        c.expr = parse_condition(Section::Constraints, index, "expr");
      } else if (at_word("message")) {
        set_once(c.message, seen_msg, next(), "message");
      } else {
        break;
      }
    }
    if (!seen_expr) semantic_error(kw, "constraint '" + c.id + "' needs an 'expr'");
    out_.kb.constraints.push_back(std::move(c));
  }

  void parse_filter() {
    const Token& kw = next();
    std::size_t index = out_.kb.filters.size();
    FilterCondition f;
    const Token& id = expect_identifier("filter id");
    f.id = id.text;
    record({Section::Filters, index, ""}, id);
    bool seen_when = false, seen_req = false, seen_msg = false;
    while (true) {
      if (at_word("when")) {
        const Token& at = next();
        if (seen_when) semantic_error(at, "duplicate 'when' attribute");
        seen_when = true;
        record({Section::Filters, index, "when"}, at);
        f.guard = parse_condition(Section::Filters, index, "when");
      } else if (at_word("require")) {
        const Token& at = next();
        if (seen_req) semantic_error(at, "duplicate 'require' attribute");
        seen_req = true;
        record({Section::Filters, index, "require"}, at);
        f.requirement = parse_condition(Section::Filters, index, "require");
      } else if (at_word("message")) {
        set_once(f.message, seen_msg, next(), "message");
      } else {
        break;
      }
    }
    if (!seen_when) semantic_error(kw, "filter '" + f.id + "' needs a 'when' guard");
    if (!seen_req) semantic_error(kw, "filter '" + f.id + "' needs a 'require' clause");
    out_.kb.filters.push_back(std::move(f));
  }

  void parse_criterion() {
    next();
    std::size_t index = out_.kb.criteria.size();
    Criterion c;
    const Token& id = expect_identifier("criterion id");
    c.id = id.text;
    record({Section::Criteria, index, ""}, id);
    expect_word("from");
    const Token& prop = expect_property_id();
    c.source_property = prop.text;
    record({Section::Criteria, index, "from"}, prop);
    const Token& pol = expect_identifier("'direct' or 'inverse'");
    if (pol.text == "direct") {
      c.polarity = Polarity::Direct;
    } else if (pol.text == "inverse") {
      c.polarity = Polarity::Inverse;
    } else {
      syntax_error(pol, {"'direct'", "'inverse'"});
    }
    out_.kb.criteria.push_back(std::move(c));
  }

  bool at_pair(TokenKind second) const {
    return peek().kind == TokenKind::Identifier && peek(1).kind == second;
  }

  void parse_weights() {
    const Token& kw = next();
    if (have_weights_) semantic_error(kw, "duplicate 'weights' block");
    have_weights_ = true;
    record({Section::BaseWeights, 0, ""}, kw);
    bool seen_base = false;
    while (true) {
      if (at_word("base")) {
        const Token& at = next();
        if (seen_base) semantic_error(at, "duplicate 'base' line");
        seen_base = true;
        parse_base_weights();
      } else if (at_word("rule")) {
        next();
        parse_weight_rule();
      } else {
        break;
      }
    }
  }

  void parse_base_weights() {
    if (!at_pair(TokenKind::Equals)) return;
    while (true) {
      const Token& crit = next();
      expect(TokenKind::Equals);
      double w = expect_number();
      if (!out_.kb.base_weights.emplace(crit.text, w).second) {
        semantic_error(crit, "duplicate base weight for '" + crit.text + "'");
      }
      record({Section::BaseWeights, 0, crit.text}, crit);
      if (peek().kind != TokenKind::Comma) break;
      next();
      if (!at_pair(TokenKind::Equals)) syntax_error(peek(), {"criterion id"});
    }
  }

  void parse_weight_rule() {
    std::size_t index = out_.kb.weight_rules.size();
    WeightRule rule;
    const Token& id = expect_identifier("weight rule id");
    rule.id = id.text;
    record({Section::WeightRules, index, ""}, id);
    record({Section::WeightRules, index, "when"}, expect_word("when"));
    rule.guard = parse_condition(Section::WeightRules, index, "when");
    expect_word("then");
    if (at_pair(TokenKind::Number)) {
      while (true) {
        const Token& crit = next();
        double delta = expect_number();
        if (!rule.deltas.emplace(crit.text, delta).second) {
          semantic_error(crit, "duplicate delta for '" + crit.text + "'");
        }
        record({Section::WeightRules, index, crit.text}, crit);
        if (peek().kind != TokenKind::Comma) break;
        next();
        if (!at_pair(TokenKind::Number)) syntax_error(peek(), {"criterion id followed by a signed number"});
      }
    }
    out_.kb.weight_rules.push_back(std::move(rule));
  }

  // condition := conj ('OR' conj)* ; conj := unary ('AND' unary)*
  Condition parse_condition(Section section, std::size_t index, const std::string& attr) {
    std::vector<Condition> parts;
    parts.push_back(parse_conjunction(section, index, attr));
    while (at_word("OR")) {
      next();
      parts.push_back(parse_conjunction(section, index, attr));
    }
    return parts.size() == 1 ? std::move(parts.front()) : Condition::any_of(std::move(parts));
  }

  Condition parse_conjunction(Section section, std::size_t index, const std::string& attr) {
    std::vector<Condition> parts;
    parts.push_back(parse_unary(section, index, attr));
    while (at_word("AND")) {
      next();
      parts.push_back(parse_unary(section, index, attr));
    }
    return parts.size() == 1 ? std::move(parts.front()) : Condition::all_of(std::move(parts));
  }

  Condition parse_unary(Section section, std::size_t index, const std::string& attr) {
    if (at_word("NOT")) {
      next();
      return Condition::negate(parse_unary(section, index, attr));
    }
    if (peek().kind == TokenKind::LParen) {
      next();
      Condition inner = parse_condition(section, index, attr);
      expect(TokenKind::RParen, {"'AND'", "'OR'", "')'"});
      return inner;
    }
    if (at_word("true")) {
      next();
      return Condition::always();
    }
    if (at_word("false")) {
      next();
      return Condition::never();
    }
    if (peek().kind != TokenKind::Identifier || is_reserved_word(peek().text)) {
      syntax_error(peek(), {"property id", "'NOT'", "'('", "'true'", "'false'"});
    }
    const Token& prop = next();
    out_.source.spans.emplace(Location{section, index, attr + ":" + prop.text}, span_of(prop));
    if (peek().kind == TokenKind::Equals || peek().kind == TokenKind::NotEquals) {
      bool eq = next().kind == TokenKind::Equals;
      const Token& value = expect_identifier("value");
      return eq ? Condition::eq(prop.text, value.text) : Condition::ne(prop.text, value.text);
    }
    if (at_word("in")) {
      next();
      expect(TokenKind::LBrace);
      std::vector<Value> values;
      values.push_back(expect_identifier("value").text);
      while (peek().kind == TokenKind::Comma) {
        next();
        values.push_back(expect_identifier("value").text);
      }
      expect(TokenKind::RBrace, {"','", "'}'"});
      return Condition::in(prop.text, std::move(values));
    }
    syntax_error(peek(), {"'='", "'!='", "'in'"});
  }

  std::vector<Token> toks_;
  std::string file_;
  std::size_t pos_ = 0;
  ParsedKb out_;
  bool have_header_ = false;
  bool have_weights_ = false;
  std::vector<bool> pattern_level_given_;
};

std::vector<Token> lex_or_throw(std::string_view text, const std::string& file) {
  std::vector<Token> tokens;
  detail::LexFailure failure{};
  if (!detail::tokenize(text, tokens, failure)) {
    throw KbError(ErrorCode::ParseError, SourceSpan{file, failure.line, failure.column, failure.length},
                  "syntax error: " + failure.message);
  }
  return tokens;
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

std::string format_number(double v, bool signed_form) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  std::string s(buf.data(), ptr);
  if (signed_form && !s.empty() && s.front() != '-') s.insert(s.begin(), '+');
  return s;
}

std::string join_values(const std::vector<Value>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += values[i];
  }
  return out;
}

}  // namespace

std::string to_string(const SourceSpan& span) {
  return span.file + ":" + std::to_string(span.line) + ":" + std::to_string(span.column);
}

KbError::KbError(ErrorCode code, SourceSpan span, std::string detail, std::vector<std::string> expected)
    : Error(code, format_error(span, detail, expected)),
      span_(std::move(span)),
      detail_(std::move(detail)),
      expected_(std::move(expected)) {}

const SourceSpan& SourceMap::find(const Location& loc) const {
  if (auto it = spans.find(loc); it != spans.end()) return it->second;
  if (auto it = spans.find(Location{loc.section, loc.index, ""}); it != spans.end()) return it->second;
  if (auto it = spans.find(Location{Section::Header, 0, ""}); it != spans.end()) return it->second;
  return fallback;
}

bool is_identifier(std::string_view text) noexcept {
  if (text.empty()) return false;
  char c = text.front();
  if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) return false;
  return std::all_of(text.begin() + 1, text.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-';
  });
}

bool is_reserved_word(std::string_view text) noexcept {
  return std::find(kReserved.begin(), kReserved.end(), text) != kReserved.end();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, "cannot read '" + path.string() + "'");
  return ss.str();
}

ParsedKb parse_kb_document(std::string_view text, const std::string& file) {
  return Parser(lex_or_throw(text, file), file).run();
}

KnowledgeBase parse_kb(std::string_view text, const std::string& file) {
  return parse_kb_document(text, file).kb;
}

ParsedKb load_kb_file(const std::filesystem::path& path) {
  return parse_kb_document(read_text_file(path), path.string());
}

std::string serialize_kb(const KnowledgeBase& kb) {
  auto report = validate(kb);
  if (!report.ok()) {
    throw Error(ErrorCode::InvalidKnowledgeBase, "cannot serialize invalid knowledge base: " +
                                                     report.violations.front().message);
  }
  std::ostringstream out;
  out << (kb.level == KbLevel::Control ? "control " : "sp ") << kb.id << '\n';
  if (!kb.description.empty()) out << "  description " << quote(kb.description) << '\n';

  for (const auto& p : kb.properties) {
    out << '\n' << "property " << p.id << ' ' << to_string(p.kind) << " {" << join_values(p.domain) << "}\n";
    if (!p.question_text.empty()) out << "  question " << quote(p.question_text) << '\n';
    if (!p.description.empty()) out << "  description " << quote(p.description) << '\n';
  }

  for (const auto& pat : kb.patterns) {
    out << '\n' << "pattern " << pat.id << ' ' << to_string(pat.level) << '\n';
    // Pattern properties in declaration order.
    for (const auto& p : kb.properties) {
      if (const Value* v = pat.value_of(p.id)) out << "  " << p.id << " = " << *v << '\n';
    }
    if (pat.child_kb) out << "  child " << quote(*pat.child_kb) << '\n';
    if (!pat.description.empty()) out << "  description " << quote(pat.description) << '\n';
  }

  for (const auto& c : kb.constraints) {
    out << '\n' << "constraint " << c.id << '\n';
    out << "  expr " << to_string(c.expr) << '\n';
    if (!c.message.empty()) out << "  message " << quote(c.message) << '\n';
  }

  for (const auto& f : kb.filters) {
    out << '\n' << "filter " << f.id << '\n';
    out << "  when " << to_string(f.guard) << '\n';
    out << "  require " << to_string(f.requirement) << '\n';
    if (!f.message.empty()) out << "  message " << quote(f.message) << '\n';
  }

  if (!kb.criteria.empty()) out << '\n';
  for (const auto& c : kb.criteria) {
    out << "criterion " << c.id << " from " << c.source_property << ' ' << to_string(c.polarity) << '\n';
  }

  if (!kb.base_weights.empty() || !kb.weight_rules.empty()) {
    out << "\nweights\n";
    if (!kb.base_weights.empty()) {
      out << "  base ";
      bool first = true;
      // Criteria order first, so the line reads like the criterion list.
      std::set<CriterionId> written;
      for (const auto& c : kb.criteria) {
        auto it = kb.base_weights.find(c.id);
        if (it == kb.base_weights.end()) continue;
        out << (first ? "" : ", ") << c.id << " = " << format_number(it->second, false);
        written.insert(c.id);
        first = false;
      }
      for (const auto& [crit, w] : kb.base_weights) {
        if (written.count(crit)) continue;
        out << (first ? "" : ", ") << crit << " = " << format_number(w, false);
        first = false;
      }
      out << '\n';
    }
    for (const auto& r : kb.weight_rules) {
      out << "  rule " << r.id << " when " << to_string(r.guard) << " then";
      bool first = true;
      for (const auto& [crit, delta] : r.deltas) {
        out << (first ? " " : ", ") << crit << ' ' << format_number(delta, true);
        first = false;
      }
      out << '\n';
    }
  }
  return out.str();
}

ParsedContext parse_context(std::string_view text, const std::string& file) {
  auto tokens = lex_or_throw(text, file);
  ParsedContext out;
  std::size_t i = 0;
  auto span_of = [&file](const Token& t) { return SourceSpan{file, t.line, t.column, t.length}; };
  auto fail = [&](const Token& t, std::vector<std::string> expected) {
    std::string found = t.kind == TokenKind::End ? "end of input"
                                                 : std::string(detail::describe(t.kind)) + " '" + t.text + "'";
    throw KbError(ErrorCode::ParseError, span_of(t), "syntax error: unexpected " + found, std::move(expected));
  };
  while (tokens[i].kind != TokenKind::End) {
    const Token& prop = tokens[i];
    if (prop.kind != TokenKind::Identifier) fail(prop, {"property id"});
    const Token& eq = tokens[i + 1];
    if (eq.kind != TokenKind::Equals) fail(eq, {"'='"});
    const Token& value = tokens[i + 2];
    if (value.kind != TokenKind::Identifier) fail(value, {"value"});
    if (out.context.contains(prop.text)) {
      throw KbError(ErrorCode::SemanticError, span_of(prop), "property '" + prop.text + "' assigned twice");
    }
    if (prop.line != value.line) fail(value, {"value on the same line"});
    out.context.set(prop.text, value.text);
    out.ordered.emplace_back(prop.text, value.text);
    out.property_spans[prop.text] = span_of(prop);
    out.value_spans[prop.text] = span_of(value);
    i += 3;
  }
  return out;
}

ParsedContext load_context_file(const std::filesystem::path& path) {
  return parse_context(read_text_file(path), path.string());
}

void check_context_against(const KnowledgeBase& kb, const ParsedContext& parsed) {
  for (const auto& [prop_id, value] : parsed.ordered) {
    const auto* prop = kb.find_property(prop_id);
    if (!prop) {
      throw KbError(ErrorCode::UnknownProperty, parsed.property_spans.at(prop_id),
                    "unknown context property '" + prop_id + "' for knowledge base '" + kb.id + "'");
    }
    if (prop->kind != PropertyKind::Context) {
      throw KbError(ErrorCode::UnknownProperty, parsed.property_spans.at(prop_id),
                    "'" + prop_id + "' is a pattern property, not a context property");
    }
    if (!prop->admits(value)) {
      throw KbError(ErrorCode::ValueOutOfDomain, parsed.value_spans.at(prop_id),
                    "value '" + value + "' is outside the domain of '" + prop_id + "' {" +
                        join_values(prop->domain) + "}");
    }
  }
}

std::string serialize_context(const std::vector<std::pair<PropertyId, Value>>& ordered) {
  std::string out;
  for (const auto& [p, v] : ordered) out += p + " = " + v + "\n";
  return out;
}

}  // namespace secrec
