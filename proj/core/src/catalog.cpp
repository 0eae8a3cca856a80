#include "secrec/catalog.hpp"

#include <algorithm>

#include "secrec/dsl.hpp"
#include "secrec/error.hpp"
#include "secrec/validate.hpp"

namespace fs = std::filesystem;

namespace secrec {
namespace {

fs::path normalized(const fs::path& p) {
  std::error_code ec;
  fs::path out = fs::weakly_canonical(p, ec);
  return ec ? p.lexically_normal() : out;
}

}  // namespace

std::string KbCatalog::load_path(const fs::path& file) {
  fs::path key = normalized(file);
  if (auto it = by_path_.find(key); it != by_path_.end()) return it->second;

  ParsedKb parsed = load_kb_file(file);
  if (kbs_.count(parsed.kb.id)) {
    throw KbError(ErrorCode::SemanticError, parsed.source.find(Location{Section::Header, 0, ""}),
                  "knowledge base id '" + parsed.kb.id + "' is already loaded from another file");
  }
  std::string id = parsed.kb.id;
  auto kb = std::make_shared<const KnowledgeBase>(std::move(parsed.kb));
  kbs_.emplace(id, kb);
  by_path_.emplace(key, id);

  for (std::size_t i = 0; i < kb->patterns.size(); ++i) {
    const auto& pat = kb->patterns[i];
    if (!pat.child_kb) continue;
    fs::path child_file = key.parent_path() / *pat.child_kb;
    const SourceSpan& span = parsed.source.find(Location{Section::Patterns, i, "child"});
    if (!fs::exists(child_file)) {
      throw KbError(ErrorCode::SemanticError, span, "child knowledge base '" + child_file.string() + "' not found");
    }
    std::string child_id = load_path(child_file);
    if (kbs_.at(child_id)->level != KbLevel::Pattern) {
      throw KbError(ErrorCode::SemanticError, span,
                    "child knowledge base '" + child_id + "' must be a pattern-level ('sp') knowledge base");
    }
    children_[{id, pat.id}] = child_id;
  }
  return id;
}

KbCatalog KbCatalog::load_directory(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::Io, "knowledge base directory '" + dir.string() + "' is not readable");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".kb") files.push_back(entry.path());
  }
  if (ec) throw Error(ErrorCode::Io, "cannot list '" + dir.string() + "': " + ec.message());
  std::sort(files.begin(), files.end());
  KbCatalog catalog;
  for (const auto& f : files) catalog.load_path(f);
  return catalog;
}

KbCatalog KbCatalog::load_file(const fs::path& file) {
  KbCatalog catalog;
  catalog.load_path(file);
  return catalog;
}

void KbCatalog::add(KnowledgeBase kb) {
  auto report = validate(kb);
  if (!report.ok()) {
    throw Error(ErrorCode::InvalidKnowledgeBase,
                "knowledge base '" + kb.id + "' is invalid: " + report.violations.front().message);
  }
  std::string id = kb.id;
  kbs_[id] = std::make_shared<const KnowledgeBase>(std::move(kb));
}

std::shared_ptr<const KnowledgeBase> KbCatalog::find(const std::string& id) const {
  auto it = kbs_.find(id);
  return it == kbs_.end() ? nullptr : it->second;
}

std::shared_ptr<const KnowledgeBase> KbCatalog::get(const std::string& id) const {
  auto kb = find(id);
  if (!kb) throw Error(ErrorCode::UnknownKnowledgeBase, "unknown knowledge base '" + id + "'");
  return kb;
}

std::optional<std::string> KbCatalog::child_of(const std::string& kb_id, const PatternId& pattern) const {
  if (auto it = children_.find({kb_id, pattern}); it != children_.end()) return it->second;
  auto kb = find(kb_id);
  if (!kb) return std::nullopt;
  const auto* pat = kb->find_pattern(pattern);
  if (!pat || !pat->child_kb) return std::nullopt;
  std::string stem = fs::path(*pat->child_kb).stem().string();
  auto child = find(stem);
  if (!child || child->level != KbLevel::Pattern) return std::nullopt;
  return stem;
}

std::vector<std::string> KbCatalog::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, kb] : kbs_) out.push_back(id);
  return out;
}

std::optional<std::string> KbCatalog::id_for_file(const fs::path& file) const {
  auto it = by_path_.find(normalized(file));
  if (it == by_path_.end()) return std::nullopt;
  return it->second;
}

}  // namespace secrec
