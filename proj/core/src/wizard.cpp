#include "secrec/wizard.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>

#include "secrec/error.hpp"

namespace secrec {
namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool read_line(std::istream& in, std::ostream& out, const char* prompt, std::string& line) {
  out << prompt << std::flush;
  if (!std::getline(in, line)) {
    out << '\n';
    return false;
  }
  line = trim(line);
  return true;
}

/// 1-based option index, or 0 if `text` is not a number in range.
std::size_t option_number(const std::string& text, std::size_t count) {
  if (text.empty() || text.size() > 4) return 0;
  if (!std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c); })) return 0;
  std::size_t n = std::stoul(text);
  return n >= 1 && n <= count ? n : 0;
}

void print_conflict(std::ostream& out, const ConflictDiagnosis& diag) {
  out << "No pattern satisfies the current context.\n";
  if (!diag.conflict.empty()) {
    out << "Conflicting answers:";
    for (const auto& [p, v] : diag.conflict) out << ' ' << p << '=' << v;
    out << '\n';
  }
  for (const auto& [filter, msg] : diag.messages) {
    out << "  " << filter << (msg.empty() ? "" : ": " + msg) << '\n';
  }
  if (!diag.unconditional_filters.empty()) {
    out << "Filters that apply regardless of the context:";
    for (const auto& f : diag.unconditional_filters) out << ' ' << f;
    out << '\n';
  }
  out << "Retract one of the answers to continue (back, or retract <property>).\n";
}

class Wizard {
 public:
  Wizard(const SessionEngine& engine, const Assistant& assistant, std::istream& in, std::ostream& out)
      : engine_(engine), assistant_(assistant), in_(in), out_(out) {}

  Session run(const std::string& kb_id) {
    std::string requirement;
    if (!read_line(in_, out_, "Security requirement: ", requirement)) {
      return engine_.start("", kb_id);
    }
    Session s = engine_.start(requirement, kb_id);
    out_ << "Session " << s.id << " on knowledge base '" << kb_id << "'\n";
    if (s.state == SessionState::Conflicted) print_conflict(out_, *engine_.conflict(s));
    while (step(s)) {
    }
    return s;
  }

 private:
  // Returns false once the dialogue is over.
  bool step(Session& s) {
    switch (s.state) {
      case SessionState::Eliciting: return elicit(s);
      case SessionState::Conflicted: return resolve(s);
      case SessionState::Recommending:
      case SessionState::AwaitingSelection: return select(s);
      case SessionState::Done: return false;
    }
    return false;
  }

  // Commands valid while eliciting or conflicted. Returns true if handled.
  bool common_command(Session& s, const std::string& line) {
    if (line == "back") {
      if (s.answer_log.empty()) {
        out_ << "Nothing to retract.\n";
      } else {
        std::string prop = s.answer_log.back().property;
        engine_.retract(s, prop);
        out_ << "Retracted " << prop << ".\n";
      }
      return true;
    }
    if (line.rfind("retract ", 0) == 0) {
      engine_.retract(s, trim(line.substr(8)));
      out_ << "Retracted " << trim(line.substr(8)) << ".\n";
      return true;
    }
    if (!line.empty() && line[0] == '?') {
      std::string question = trim(line.substr(1));
      if (question.empty() && !read_line(in_, out_, "Ask the assistant: ", question)) {
        stopped_ = true;
        return true;
      }
      auto exchange = ask(engine_, s, assistant_, question);
      out_ << "Assistant: " << exchange.answer << '\n';
      return true;
    }
    return false;
  }

  bool elicit(Session& s) {
    auto q = engine_.next_question(s);
    if (!q) return true;
    auto kb = engine_.active_kb(s);
    out_ << '\n' << q->question_text << " [" << q->property_id << "]\n";
    for (std::size_t i = 0; i < q->options.size(); ++i) {
      out_ << "  " << (i + 1) << ") " << q->options[i] << "  (" << q->impact_preview[i].second << " feasible)\n";
    }
    std::string line;
    if (!read_line(in_, out_, "> ", line)) return false;
    if (line == "quit") return false;
    try {
      if (common_command(s, line)) return !stopped_;
      std::string value = line;
      if (auto n = option_number(line, q->options.size())) value = q->options[n - 1];
      auto outcome = engine_.answer(s, q->property_id, value);
      out_ << "Feasible patterns: " << outcome.feasible_count << '\n';
      if (outcome.conflict) print_conflict(out_, *outcome.conflict);
    } catch (const Error& e) {
      out_ << "error: " << e.what() << '\n';
    }
    return true;
  }

  bool resolve(Session& s) {
    std::string line;
    if (!read_line(in_, out_, "conflict> ", line)) return false;
    if (line == "quit") return false;
    try {
      if (common_command(s, line)) return !stopped_;
      // A bare property name retracts that answer.
      engine_.retract(s, line);
      out_ << "Retracted " << line << ".\n";
    } catch (const Error& e) {
      out_ << "error: " << e.what() << '\n';
    }
    if (s.state == SessionState::Conflicted) print_conflict(out_, *engine_.conflict(s));
    return true;
  }

  bool select(Session& s) {
    auto recs = engine_.recommendations(s);
    out_ << '\n' << recs.explanation.to_text();
    const auto& ranked = recs.ranking.ranked;
    std::string line;
    if (!read_line(in_, out_, "Select a pattern (rank or id): ", line)) return false;
    if (line == "quit") return false;
    std::string pattern = line;
    if (auto n = option_number(line, ranked.size())) pattern = ranked[n - 1].pattern_id;
    try {
      engine_.select_pattern(s, pattern);
    } catch (const Error& e) {
      out_ << "error: " << e.what() << '\n';
      return true;
    }
    out_ << "Selected " << pattern << ".\n";
    if (s.state == SessionState::Eliciting && s.stage == Stage::SDPStage) {
      out_ << "\nDesign stage: knowledge base '" << s.active_kb << "'\n";
      for (const auto& rec : s.answer_log) {
        if (rec.inherited) out_ << "  inherited " << rec.property << " = " << rec.value << '\n';
      }
    }
    return s.state != SessionState::Done;
  }

  const SessionEngine& engine_;
  const Assistant& assistant_;
  std::istream& in_;
  std::ostream& out_;
  bool stopped_ = false;
};

}  // namespace

Session run_wizard(const SessionEngine& engine, const Assistant& assistant, const std::string& kb_id, std::istream& in,
                   std::ostream& out) {
  return Wizard(engine, assistant, in, out).run(kb_id);
}

}  // namespace secrec
