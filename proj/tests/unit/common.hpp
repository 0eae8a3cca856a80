#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include <unistd.h>

#include "secrec/catalog.hpp"
#include "secrec/dsl.hpp"
#include "secrec/model.hpp"

namespace secrec::testing {

inline const std::filesystem::path kRoot = SECREC_SOURCE_DIR;

inline std::shared_ptr<const KbCatalog> shipped_catalog() {
  static auto catalog = std::make_shared<const KbCatalog>(KbCatalog::load_directory(kRoot / "kbs"));
  return catalog;
}

inline const KnowledgeBase& authn() { return *shipped_catalog()->get("authn"); }

inline ContextAssignment rc(int n) {
  return load_context_file(kRoot / "rcs" / ("rc" + std::to_string(n) + ".ctx")).context;
}

inline ContextAssignment ctx_of(std::initializer_list<std::pair<const PropertyId, Value>> values) {
  ContextAssignment c;
  for (const auto& [p, v] : values) c.set(p, v);
  return c;
}

/// Scratch directory removed on destruction.
struct TempDir {
  std::filesystem::path path;
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

inline TempDir::TempDir() {
  static int counter = 0;
  path = std::filesystem::temp_directory_path() /
         ("secrec-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path);
  std::filesystem::create_directories(path);
}

inline TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path, ec);
}

}  // namespace secrec::testing
