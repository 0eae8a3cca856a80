#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "secrec/session.hpp"

namespace secrec {

inline constexpr int kSnapshotSchemaVersion = 1;

nlohmann::json session_to_json(const Session& session);

/// Throws Error(MigrationRequired) on a schema_version other than the current
/// one and Error(CorruptSnapshot) on anything malformed. `origin` names the
/// source (usually a file) in error messages.
Session session_from_json(const nlohmann::json& doc, const std::string& origin);

std::string serialize_snapshot(const Session& session);
Session parse_snapshot(std::string_view text, const std::string& origin);

}  // namespace secrec
