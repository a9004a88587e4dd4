// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "irbench/telemetry/event_log.hpp"

namespace irbench::telemetry {

using ojson = nlohmann::ordered_json;

// Field names and order are fixed; absent optionals are written as null.
ojson event_to_json(const CloudEvent& e);
// Throws ParseError (without a line number) on schema violations.
CloudEvent event_from_json(const ojson& j);

// One compact JSON record per line, each terminated by '\n'.
std::string serialize_log(const EventLog& log);
// Throws ParseError carrying the 1-based line number of the first bad line.
EventLog parse_log(std::string_view text);

}  // namespace irbench::telemetry
