#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "iblt/schemes.hpp"
#include "iblt/verify.hpp"

namespace iblt {

inline constexpr int kConfigVersion = 1;
inline constexpr std::string_view kTableMagic = "IBLT1";

/// Scheme-config JSON. Throws UsageError on unknown fields, a missing or wrong
/// "version", or values of the wrong type.
SchemeParams params_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const SchemeParams& p);

SchemeParams parse_params(const std::string& text);
std::string serialize_params(const SchemeParams& p);

SchemeParams load_params(const std::filesystem::path& path);
void save_params(const std::filesystem::path& path, const SchemeParams& p);

/// Descriptor written next to a table file.
std::filesystem::path sidecar_path(const std::filesystem::path& table);

/// Table file: magic bytes, then the canonical serialization.
void save_table(const std::filesystem::path& path, const Table& table);
Table load_table(const std::filesystem::path& path, ConfigHandle config);

nlohmann::json report_to_json(const VerifyReport& r);
nlohmann::json bound_row_to_json(const BoundRow& row);

}  // namespace iblt
