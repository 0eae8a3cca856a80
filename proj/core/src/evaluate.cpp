#include "secrec/evaluate.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "secrec/dsl.hpp"
#include "secrec/error.hpp"
#include "secrec/maut.hpp"

namespace fs = std::filesystem;

namespace secrec {

const char* to_string(Expectation::Rule rule) noexcept {
  switch (rule) {
    case Expectation::Rule::TopSet: return "top_set";
    case Expectation::Rule::TopOneOf: return "top_one_of";
    case Expectation::Rule::Excluded: return "excluded";
    case Expectation::Rule::NeverTop: return "never_top";
  }
  return "?";
}

std::vector<Expectation> parse_manifest(std::string_view text, const std::string& file) {
  std::vector<Expectation> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    std::vector<std::string> parts;
    for (std::string w; words >> w;) parts.push_back(w);
    if (parts.empty()) continue;
    auto where = file + ":" + std::to_string(line_no);
    if (parts.size() < 3) {
      throw KbError(ErrorCode::ParseError, SourceSpan{file, line_no, 1, raw.size()},
                    "expectation needs a context, a rule and at least one pattern");
    }
    Expectation e;
    e.context = parts[0];
    e.line = line_no;
    const std::string& rule = parts[1];
    if (rule == "top_set") {
      e.rule = Expectation::Rule::TopSet;
    } else if (rule == "top_one_of") {
      e.rule = Expectation::Rule::TopOneOf;
    } else if (rule == "excluded") {
      e.rule = Expectation::Rule::Excluded;
    } else if (rule == "never_top") {
      e.rule = Expectation::Rule::NeverTop;
    } else {
      auto col = raw.find(rule);
      throw KbError(ErrorCode::ParseError, SourceSpan{file, line_no, col + 1, rule.size()},
                    "unknown rule '" + rule + "'", {"top_set", "top_one_of", "excluded", "never_top"});
    }
    e.patterns.assign(parts.begin() + 2, parts.end());
    out.push_back(std::move(e));
  }
  return out;
}

bool EvaluationReport::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

std::size_t EvaluationReport::failures() const {
  return static_cast<std::size_t>(std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.passed; }));
}

std::string EvaluationReport::to_text() const {
  std::ostringstream os;
  for (const auto& r : results) {
    os << (r.passed ? "PASS " : "FAIL ") << r.context << ' ' << to_string(r.expectation.rule);
    for (const auto& p : r.expectation.patterns) os << ' ' << p;
    if (!r.detail.empty()) os << "  -- " << r.detail;
    os << '\n';
  }
  os << (results.size() - failures()) << '/' << results.size() << " expectations passed\n";
  return os.str();
}

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : " ") + s;
  return out;
}

ExpectationResult check(const KnowledgeBase& kb, const std::string& name, const ContextAssignment& ctx,
                        const Expectation& e) {
  ExpectationResult r{e, name, false, ""};
  std::vector<PatternId> order;
  FeasibilityResult feas;
  try {
    Ranking ranking = rank(kb, ctx);
    for (const auto& sp : ranking.ranked) order.push_back(sp.pattern_id);
    feas = ranking.feasibility;
  } catch (const Error& err) {
    if (err.code() != ErrorCode::EmptyFeasibleSet) throw;
    feas = filter_patterns(kb, ctx);
  }
  switch (e.rule) {
    case Expectation::Rule::TopSet: {
      std::size_t k = e.patterns.size();
      std::vector<PatternId> top(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(k, order.size())));
      std::set<PatternId> want(e.patterns.begin(), e.patterns.end());
      std::set<PatternId> got(top.begin(), top.end());
      r.passed = want == got;
      r.detail = "top " + std::to_string(k) + ": " + (top.empty() ? "(none)" : join(top));
      break;
    }
    case Expectation::Rule::TopOneOf: {
      r.passed = !order.empty() &&
                 std::find(e.patterns.begin(), e.patterns.end(), order.front()) != e.patterns.end();
      r.detail = "rank 1: " + (order.empty() ? std::string("(none)") : order.front());
      break;
    }
    case Expectation::Rule::Excluded: {
      std::vector<PatternId> feasible_ones;
      for (const auto& p : e.patterns) {
        if (!feas.exclusions.count(p)) feasible_ones.push_back(p);
      }
      r.passed = feasible_ones.empty();
      if (!r.passed) r.detail = "still feasible: " + join(feasible_ones);
      break;
    }
    case Expectation::Rule::NeverTop: {
      r.passed = order.empty() ||
                 std::find(e.patterns.begin(), e.patterns.end(), order.front()) == e.patterns.end();
      r.detail = "rank 1: " + (order.empty() ? std::string("(none)") : order.front());
      break;
    }
  }
  return r;
}

}  // namespace

EvaluationReport evaluate_expectations(const KnowledgeBase& kb, const std::map<std::string, ContextAssignment>& contexts,
                                       const std::vector<Expectation>& expectations) {
  EvaluationReport report;
  for (const auto& e : expectations) {
    for (const auto& p : e.patterns) {
      if (!kb.find_pattern(p)) {
        throw Error(ErrorCode::InvalidRequest, "expectation on line " + std::to_string(e.line) +
                                                   " names unknown pattern '" + p + "'");
      }
    }
    if (e.context == "*") {
      for (const auto& [name, ctx] : contexts) report.results.push_back(check(kb, name, ctx, e));
      continue;
    }
    auto it = contexts.find(e.context);
    if (it == contexts.end()) {
      throw Error(ErrorCode::InvalidRequest, "expectation on line " + std::to_string(e.line) +
                                                 " names unknown context '" + e.context + "'");
    }
    report.results.push_back(check(kb, it->first, it->second, e));
  }
  return report;
}

std::map<std::string, ContextAssignment> load_suite_contexts(const KnowledgeBase& kb, const fs::path& suite_dir) {
  std::error_code ec;
  if (!fs::is_directory(suite_dir, ec)) {
    throw Error(ErrorCode::Io, "suite directory '" + suite_dir.string() + "' is not readable");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(suite_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ctx") files.push_back(entry.path());
  }
  if (files.empty()) throw Error(ErrorCode::InvalidRequest, "suite directory '" + suite_dir.string() + "' has no .ctx files");
  std::sort(files.begin(), files.end());
  std::map<std::string, ContextAssignment> contexts;
  for (const auto& f : files) {
    auto parsed = load_context_file(f);
    check_context_against(kb, parsed);
    contexts.emplace(f.stem().string(), parsed.context);
  }
  return contexts;
}

EvaluationReport evaluate_suite(const KnowledgeBase& kb, const fs::path& suite_dir) {
  auto contexts = load_suite_contexts(kb, suite_dir);
  fs::path manifest = suite_dir / kManifestFileName;
  if (!fs::exists(manifest)) {
    throw Error(ErrorCode::Io, "missing expectations manifest '" + manifest.string() + "'");
  }
  return evaluate_expectations(kb, contexts, parse_manifest(read_text_file(manifest), manifest.string()));
}

}  // namespace secrec
