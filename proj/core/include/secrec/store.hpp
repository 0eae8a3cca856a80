#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "secrec/session.hpp"

namespace secrec {

/// Directory of `<session-id>.json` snapshots. Writes go to a temporary file
/// in the same directory and are renamed into place.
class SessionStore {
 public:
  /// Creates `root` if needed. Throws Error(Io) if it is not a usable directory.
  explicit SessionStore(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }

  void save(const Session& session) const;
  /// Throws UnknownSession, CorruptSnapshot (naming the file) or MigrationRequired.
  Session load(const std::string& id) const;
  bool contains(const std::string& id) const;
  std::vector<std::string> list() const;
  std::filesystem::path path_for(const std::string& id) const;

  /// Mutex serializing read-modify-write cycles on one session.
  std::mutex& session_mutex(const std::string& id);

 private:
  std::filesystem::path root_;
  std::mutex locks_guard_;
  std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

}  // namespace secrec
