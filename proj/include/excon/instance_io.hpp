#pragma once

#include "excon/instance.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace excon {

/// Sorted keys, "%.17g" floats. With indent < 0 the output is a single line;
/// this form is the input to report digests.
std::string canonical_dump(const nlohmann::json& value, int indent = -1);

nlohmann::json to_json(const Instance& instance);
/// Parses, drops zero-probability prizes, merges i.i.d. duplicates and
/// validates. Throws ParseError naming the offending field, or
/// ValidationError listing invariant violations.
Instance instance_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const Contract& contract);
nlohmann::json to_json(const LinearContract& contract);
/// Accepts either {"transfers": [[...], ...]} or {"alpha": x}.
Contract contract_from_json(const nlohmann::json& doc, const Instance& instance);

/// Throws IoError when the file cannot be read or written.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& instance, const std::filesystem::path& path);
Contract load_contract(const std::filesystem::path& path, const Instance& instance);

}  // namespace excon
