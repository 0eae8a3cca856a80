#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "secrec/model.hpp"

namespace secrec {

/// Set of knowledge bases addressable by id, with SP -> child KB links
/// resolved. Populate it first, then share it read-only.
class KbCatalog {
 public:
  /// Loads every `*.kb` file in `dir` and any child KBs they reference.
  static KbCatalog load_directory(const std::filesystem::path& dir);
  /// Loads one KB file and, recursively, its children.
  static KbCatalog load_file(const std::filesystem::path& file);

  /// Registers an in-memory KB. Child references of in-memory KBs resolve by
  /// file stem ("password.kb" -> KB id "password").
  void add(KnowledgeBase kb);

  std::shared_ptr<const KnowledgeBase> find(const std::string& id) const;
  /// Throws Error(UnknownKnowledgeBase).
  std::shared_ptr<const KnowledgeBase> get(const std::string& id) const;

  std::optional<std::string> child_of(const std::string& kb_id, const PatternId& pattern) const;

  std::vector<std::string> ids() const;
  /// Id of the KB loaded from `file`, if any.
  std::optional<std::string> id_for_file(const std::filesystem::path& file) const;

 private:
  std::string load_path(const std::filesystem::path& file);

  std::map<std::string, std::shared_ptr<const KnowledgeBase>> kbs_;
  std::map<std::filesystem::path, std::string> by_path_;
  std::map<std::pair<std::string, PatternId>, std::string> children_;
};

}  // namespace secrec
