// SPDX-License-Identifier: Apache-2.0
#include "irbench/core/json.hpp"

#include <fstream>
#include <sstream>

#include "irbench/core/errors.hpp"

namespace irbench {
namespace {

ParseError type_error(std::string_view key, const char* expected) {
  return ParseError("field '" + std::string(key) + "' must be " + expected);
}

}  // namespace

const ojson& field(const ojson& j, std::string_view key) {
  if (!j.is_object()) throw ParseError("expected an object holding '" + std::string(key) + "'");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError("missing field '" + std::string(key) + "'");
  return *it;
}

std::string get_string(const ojson& j, std::string_view key) {
  const ojson& v = field(j, key);
  if (!v.is_string()) throw type_error(key, "a string");
  return v.get<std::string>();
}

std::optional<std::string> get_opt_string(const ojson& j, std::string_view key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get_string(j, key);
}

std::int64_t get_int(const ojson& j, std::string_view key) {
  const ojson& v = field(j, key);
  if (!v.is_number_integer()) throw type_error(key, "an integer");
  return v.get<std::int64_t>();
}

std::optional<std::int64_t> get_opt_int(const ojson& j, std::string_view key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get_int(j, key);
}

double get_double(const ojson& j, std::string_view key) {
  const ojson& v = field(j, key);
  if (!v.is_number()) throw type_error(key, "a number");
  return v.get<double>();
}

bool get_bool(const ojson& j, std::string_view key) {
  const ojson& v = field(j, key);
  if (!v.is_boolean()) throw type_error(key, "a boolean");
  return v.get<bool>();
}

std::vector<std::string> get_strings(const ojson& j, std::string_view key) {
  std::vector<std::string> out;
  for (const auto& v : get_array(j, key)) {
    if (!v.is_string()) throw type_error(key, "an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::map<std::string, std::string> get_string_map(const ojson& j, std::string_view key) {
  const ojson& v = field(j, key);
  if (!v.is_object()) throw type_error(key, "an object");
  std::map<std::string, std::string> out;
  for (const auto& [k, x] : v.items()) {
    if (!x.is_string()) throw type_error(std::string(key) + "." + k, "a string");
    out.emplace(k, x.get<std::string>());
  }
  return out;
}

const ojson& get_array(const ojson& j, std::string_view key) {
  const ojson& v = field(j, key);
  if (!v.is_array()) throw type_error(key, "an array");
  return v;
}

std::string string_or(const ojson& j, std::string_view key, std::string fallback) {
  return j.contains(key) ? get_string(j, key) : std::move(fallback);
}

std::int64_t int_or(const ojson& j, std::string_view key, std::int64_t fallback) {
  return j.contains(key) ? get_int(j, key) : fallback;
}

bool bool_or(const ojson& j, std::string_view key, bool fallback) {
  return j.contains(key) ? get_bool(j, key) : fallback;
}

ojson string_map_to_json(const std::map<std::string, std::string>& m) {
  ojson j = ojson::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

std::string dump_document(const ojson& j) { return j.dump(2) + "\n"; }

ojson parse_document(std::string_view text, std::string_view origin) {
  try {
    return ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string(origin) + ": " + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace irbench
