// SPDX-License-Identifier: Apache-2.0
#include "irbench/telemetry/jsonl.hpp"

#include <array>

#include "irbench/core/errors.hpp"

namespace irbench::telemetry {
namespace {

constexpr std::array<std::string_view, 10> kEventFields = {
    "event_id",  "event_time",    "event_source",       "event_name",        "region",
    "source_ip", "user_identity", "request_parameters", "response_elements", "error_code",
};
constexpr std::array<std::string_view, 4> kIdentityFields = {"kind", "arn", "account_id",
                                                             "access_key_id"};

template <typename T>
ojson nullable(const std::optional<T>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

ojson fields_to_json(const FieldMap& m) {
  ojson j = ojson::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

template <std::size_t N>
void require_exact_keys(const ojson& j, const std::array<std::string_view, N>& keys,
                        std::string_view what) {
  if (!j.is_object()) throw ParseError(std::string(what) + " must be an object");
  for (auto k : keys) {
    if (!j.contains(k)) throw ParseError(std::string(what) + ": missing field '" + std::string(k) + "'");
  }
  if (j.size() != keys.size()) throw ParseError(std::string(what) + ": unexpected extra fields");
}

std::string req_string(const ojson& j, std::string_view key) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw ParseError("field '" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}

std::optional<std::string> opt_string(const ojson& j, std::string_view key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_string()) throw ParseError("field '" + std::string(key) + "' must be a string or null");
  return v.get<std::string>();
}

FieldMap fields_from_json(const ojson& j, std::string_view key) {
  const auto& obj = j.at(key);
  if (!obj.is_object()) throw ParseError("field '" + std::string(key) + "' must be an object");
  FieldMap out;
  for (const auto& [k, v] : obj.items()) {
    if (!v.is_string()) throw ParseError("field '" + std::string(key) + "." + k + "' must be a string");
    out.emplace(k, v.get<std::string>());
  }
  return out;
}

}  // namespace

ojson event_to_json(const CloudEvent& e) {
  const auto& id = e.user_identity;
  ojson identity = ojson::object();
  identity["kind"] = std::string(to_string(id.kind));
  identity["arn"] = id.arn ? ojson(id.arn->render()) : ojson(nullptr);
  identity["account_id"] = nullable(id.account_id);
  identity["access_key_id"] = nullable(id.access_key_id);

  ojson j = ojson::object();
  j["event_id"] = e.event_id;
  j["event_time"] = format_rfc3339(e.event_time);
  j["event_source"] = e.event_source;
  j["event_name"] = e.event_name;
  j["region"] = e.region;
  j["source_ip"] = e.source_ip;
  j["user_identity"] = std::move(identity);
  j["request_parameters"] = fields_to_json(e.request_parameters);
  j["response_elements"] = fields_to_json(e.response_elements);
  j["error_code"] = nullable(e.error_code);
  return j;
}

CloudEvent event_from_json(const ojson& j) {
  require_exact_keys(j, kEventFields, "event");
  CloudEvent e;
  e.event_id = req_string(j, "event_id");
  if (e.event_id.empty()) throw ParseError("field 'event_id' must not be empty");
  e.event_time = parse_rfc3339(req_string(j, "event_time"));
  e.event_source = req_string(j, "event_source");
  e.event_name = req_string(j, "event_name");
  e.region = req_string(j, "region");
  e.source_ip = req_string(j, "source_ip");

  const auto& id = j.at("user_identity");
  require_exact_keys(id, kIdentityFields, "user_identity");
  e.user_identity.kind = identity_kind_from_string(req_string(id, "kind"));
  if (auto arn = opt_string(id, "arn")) e.user_identity.arn = Arn::parse(*arn);
  e.user_identity.account_id = opt_string(id, "account_id");
  e.user_identity.access_key_id = opt_string(id, "access_key_id");

  e.request_parameters = fields_from_json(j, "request_parameters");
  e.response_elements = fields_from_json(j, "response_elements");
  e.error_code = opt_string(j, "error_code");
  return e;
}

std::string serialize_log(const EventLog& log) {
  std::string out;
  for (const auto& e : log.events()) {
    out += event_to_json(e).dump();
    out += '\n';
  }
  return out;
}

EventLog parse_log(std::string_view text) {
  EventLog log;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    if (nl == std::string_view::npos) throw ParseError("record not newline-terminated", line_no);
    const std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl + 1);
    try {
      const ojson j = ojson::parse(line);
      log.append(event_from_json(j));
    } catch (const ParseError& err) {
      throw ParseError(err.what(), line_no);
    } catch (const ValidationError& err) {
      throw ParseError(err.what(), line_no);
    } catch (const nlohmann::json::exception& err) {
      throw ParseError(err.what(), line_no);
    }
  }
  return log;
}

}  // namespace irbench::telemetry
