// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace irbench {

// Insertion-ordered JSON keeps field order fixed, which the byte-stable file
// formats rely on.
using ojson = nlohmann::ordered_json;

// Field accessors that throw ParseError naming the field on type mismatch
// or absence.
const ojson& field(const ojson& j, std::string_view key);
std::string get_string(const ojson& j, std::string_view key);
std::optional<std::string> get_opt_string(const ojson& j, std::string_view key);
std::int64_t get_int(const ojson& j, std::string_view key);
std::optional<std::int64_t> get_opt_int(const ojson& j, std::string_view key);
double get_double(const ojson& j, std::string_view key);
bool get_bool(const ojson& j, std::string_view key);
std::vector<std::string> get_strings(const ojson& j, std::string_view key);
std::map<std::string, std::string> get_string_map(const ojson& j, std::string_view key);
const ojson& get_array(const ojson& j, std::string_view key);

// Optional-field variants returning a default when the key is missing.
std::string string_or(const ojson& j, std::string_view key, std::string fallback);
std::int64_t int_or(const ojson& j, std::string_view key, std::int64_t fallback);
bool bool_or(const ojson& j, std::string_view key, bool fallback);

ojson string_map_to_json(const std::map<std::string, std::string>& m);

// Pretty-printed (2-space) with a trailing newline.
std::string dump_document(const ojson& j);
// Throws ParseError with the path in the message.
ojson parse_document(std::string_view text, std::string_view origin = "document");

std::string read_file(const std::filesystem::path& path);
// Writes to a temporary sibling and renames into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace irbench
