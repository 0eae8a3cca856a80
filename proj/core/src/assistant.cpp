#include "secrec/assistant.hpp"

#include <cctype>
#include <cstdlib>
#include <set>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "secrec/condition.hpp"
#include "secrec/dsl.hpp"
#include "secrec/error.hpp"
#include "secrec/solver.hpp"

namespace secrec {
namespace {

using TokenSet = std::set<std::string>;

const std::set<std::string>& stopwords() {
  static const std::set<std::string> words = {
      "a",    "an",   "and",  "are",  "be",   "by",   "can",  "do",   "doe",  "does", "for",  "how",
      "i",    "in",   "is",   "it",   "mean", "of",   "on",   "or",   "the",  "that", "this", "to",
      "what", "when", "which", "who", "why",  "with", "we",   "our",  "my",   "me",   "you",  "there",
      "was",  "were", "will", "should", "would", "about", "it's", "its"};
  return words;
}

std::string normalize(std::string word) {
  static const std::set<std::string> exclusion = {"excluded", "exclude", "excludes", "exclusion", "filtered",
                                                  "infeasible", "removed", "eliminated", "ruled"};
  if (exclusion.count(word)) return "excluded";
  if (word.size() > 3 && word.back() == 's' && word[word.size() - 2] != 's') word.pop_back();
  return word;
}

TokenSet tokenize(std::string_view text) {
  TokenSet out;
  std::string word;
  auto flush = [&] {
    if (!word.empty() && !stopwords().count(word)) {
      std::string n = normalize(word);
      if (!stopwords().count(n)) out.insert(n);
    }
    word.clear();
  };
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

void merge(TokenSet& into, const TokenSet& from) { into.insert(from.begin(), from.end()); }

std::size_t overlap(const TokenSet& a, const TokenSet& b) {
  std::size_t n = 0;
  for (const auto& t : a) n += b.count(t);
  return n;
}

struct Candidate {
  std::size_t score = 0;
  std::string answer;
  std::vector<std::string> cited;
};

}  // namespace

const char* to_string(AssistantBackend backend) noexcept {
  return backend == AssistantBackend::Stub ? "stub" : "external";
}

AssistantConfig AssistantConfig::from_environment() {
  AssistantConfig cfg;
  if (const char* b = std::getenv("SECREC_ASSISTANT_BACKEND")) {
    cfg.backend = std::string_view(b) == "external" ? AssistantBackend::External : AssistantBackend::Stub;
  }
  if (const char* e = std::getenv("SECREC_ASSISTANT_ENDPOINT")) cfg.endpoint = e;
  if (const char* t = std::getenv("SECREC_ASSISTANT_TIMEOUT_SECONDS")) {
    char* end = nullptr;
    double v = std::strtod(t, &end);
    if (end != t && v > 0) cfg.timeout_seconds = v;
  }
  if (const char* k = std::getenv("SECREC_ASSISTANT_API_KEY")) cfg.api_key = k;
  return cfg;
}

AssistantExchange stub_answer(const KnowledgeBase& kb, const ContextAssignment& ctx, std::string_view question) {
  AssistantExchange ex;
  ex.question = std::string(question);
  ex.source = AssistantBackend::Stub;
  TokenSet q = tokenize(question);

  Candidate best;
  auto consider = [&](Candidate c) {
    if (c.score > best.score) best = std::move(c);
  };

  if (!q.empty()) {
    for (const auto& p : kb.properties) {
      TokenSet id = tokenize(p.id);
      TokenSet all = id;
      merge(all, tokenize(p.description));
      merge(all, tokenize(p.question_text));
      std::size_t score = overlap(q, all);
      if (score > 0 && overlap(id, q) == id.size()) ++score;
      consider({score, p.description.empty() ? p.question_text : p.description, {p.id}});
    }
    for (const auto& pat : kb.patterns) {
      TokenSet id = tokenize(pat.id);
      TokenSet all = id;
      merge(all, tokenize(pat.description));
      std::size_t score = overlap(q, all);
      if (score > 0 && overlap(id, q) == id.size()) ++score;
      consider({score, pat.description, {pat.id}});
    }
    for (const auto& f : kb.filters) {
      TokenSet all = tokenize(f.message);
      std::vector<std::string> cited{f.id};
      bool names_excluded = false;
      if (evaluate(f.guard, ctx) == Truth::True) {
        for (const auto& pat : kb.patterns) {
          if (evaluate(f.requirement, pat) == Truth::True) continue;
          TokenSet id = tokenize(pat.id);
          names_excluded = names_excluded || overlap(id, q) == id.size();
          merge(all, id);
          merge(all, tokenize(pat.description));
          cited.push_back(pat.id);
        }
        if (cited.size() > 1) all.insert("excluded");
      }
      std::size_t score = overlap(q, all);
      // "why is X excluded" is about the filter, not about X itself.
      if (names_excluded && q.count("excluded")) ++score;
      consider({score, f.message, std::move(cited)});
    }
  }

  if (best.score == 0 || best.answer.empty()) {
    ex.answer = std::string(kNoMatchAnswer);
    return ex;
  }
  ex.answer = best.answer;
  ex.cited_elements = best.cited;
  return ex;
}

AssistantExchange Assistant::ask(const KnowledgeBase& kb, const ContextAssignment& ctx,
                                 const std::string& question) const {
  if (config_.backend != AssistantBackend::External || config_.endpoint.empty()) {
    return stub_answer(kb, ctx, question);
  }
  try {
    std::string url = config_.endpoint;
    auto scheme_end = url.find("://");
    std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    auto path_start = url.find('/', host_start);
    std::string base = path_start == std::string::npos ? url : url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(base);
    auto secs = static_cast<time_t>(config_.timeout_seconds);
    auto usecs = static_cast<time_t>((config_.timeout_seconds - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

    nlohmann::json body = {{"question", question}, {"kb_excerpt", serialize_kb(kb)}, {"context", ctx.values}};
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res || res->status != 200) return stub_answer(kb, ctx, question);
    auto reply = nlohmann::json::parse(res->body);
    AssistantExchange ex;
    ex.question = question;
    ex.answer = reply.at("answer").get<std::string>();
    ex.source = AssistantBackend::External;
    if (reply.contains("cited_elements")) ex.cited_elements = reply.at("cited_elements").get<std::vector<std::string>>();
    if (ex.answer.empty()) return stub_answer(kb, ctx, question);
    return ex;
  } catch (const std::exception&) {
    return stub_answer(kb, ctx, question);
  }
}

void require_assistant_state(const Session& session) {
  if (session.state != SessionState::Eliciting && session.state != SessionState::Conflicted) {
    throw Error(ErrorCode::WrongState, std::string("the assistant is available while eliciting, not while ") +
                                           to_string(session.state));
  }
}

void record_exchange(Session& session, const AssistantExchange& exchange, std::string timestamp) {
  TranscriptEvent ev;
  ev.kind = TranscriptEvent::Kind::Assistant;
  ev.stage = session.stage;
  ev.timestamp = std::move(timestamp);
  ev.question = exchange.question;
  ev.answer = exchange.answer;
  ev.source = to_string(exchange.source);
  ev.cited = exchange.cited_elements;
  session.transcript.push_back(std::move(ev));
}

AssistantExchange ask(const SessionEngine& engine, Session& session, const Assistant& assistant,
                      const std::string& question) {
  require_assistant_state(session);
  auto kb = engine.active_kb(session);
  auto ex = assistant.ask(*kb, session.ctx, question);
  record_exchange(session, ex, engine.now());
  return ex;
}

}  // namespace secrec
