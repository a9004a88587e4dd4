// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace irbench {

// Milliseconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;
using DurationMs = std::int64_t;

inline constexpr DurationMs kSecond = 1000;
inline constexpr DurationMs kMinute = 60 * kSecond;
inline constexpr DurationMs kHour = 60 * kMinute;
inline constexpr DurationMs kDay = 24 * kHour;

// RFC 3339 with millisecond precision and a `Z` suffix, e.g.
// "2024-05-02T13:45:10.123Z".
std::string format_rfc3339(Timestamp t);

// Accepts exactly the format produced by format_rfc3339. Throws ParseError.
Timestamp parse_rfc3339(std::string_view text);

// "YYYY-MM-DD" of the UTC day containing t.
std::string format_date(Timestamp t);

}  // namespace irbench
