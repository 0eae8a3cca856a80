#include "secrec/store.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <sstream>
#include <thread>

#include "secrec/dsl.hpp"
#include "secrec/error.hpp"
#include "secrec/snapshot.hpp"

namespace fs = std::filesystem;

namespace secrec {
namespace {

bool valid_id(const std::string& id) {
  return !id.empty() && id.size() <= 128 && std::all_of(id.begin(), id.end(), [](unsigned char c) {
           return std::isalnum(c) || c == '-' || c == '_';
         });
}

constexpr const char* kSuffix = ".json";

}  // namespace

SessionStore::SessionStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (!fs::is_directory(root_)) {
    throw Error(ErrorCode::Io, "session store '" + root_.string() + "' is not a directory");
  }
}

fs::path SessionStore::path_for(const std::string& id) const {
  if (!valid_id(id)) throw Error(ErrorCode::UnknownSession, "unknown session '" + id + "'");
  return root_ / (id + kSuffix);
}

void SessionStore::save(const Session& session) const {
  static std::atomic<unsigned long> counter{0};
  fs::path target = path_for(session.id);
  std::ostringstream tmp_name;
  tmp_name << '.' << session.id << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id()) << '.'
           << counter++;
  fs::path tmp = root_ / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << serialize_snapshot(session);
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorCode::Io, "cannot write '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot replace '" + target.string() + "': " + ec.message());
  }
}

Session SessionStore::load(const std::string& id) const {
  fs::path path = path_for(id);
  if (!fs::exists(path)) throw Error(ErrorCode::UnknownSession, "unknown session '" + id + "'");
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptSnapshot, "cannot read snapshot '" + path.string() + "': " + e.what());
  }
  Session s = parse_snapshot(text, path.string());
  if (s.id != id) {
    throw Error(ErrorCode::CorruptSnapshot, "snapshot '" + path.string() + "' holds session '" + s.id + "'");
  }
  return s;
}

bool SessionStore::contains(const std::string& id) const { return valid_id(id) && fs::exists(path_for(id)); }

std::vector<std::string> SessionStore::list() const {
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(root_)) {
    const auto name = entry.path().filename().string();
    if (!entry.is_regular_file() || name.front() == '.' || entry.path().extension() != kSuffix) continue;
    ids.push_back(entry.path().stem().string());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::mutex& SessionStore::session_mutex(const std::string& id) {
  std::lock_guard lock(locks_guard_);
  auto& slot = locks_[id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

}  // namespace secrec
