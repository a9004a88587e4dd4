// SPDX-License-Identifier: Apache-2.0
#include "irbench/core/time.hpp"

#include <chrono>
#include <cstdio>

#include "irbench/core/errors.hpp"

namespace irbench {
namespace {

using std::chrono::day;
using std::chrono::days;
using std::chrono::month;
using std::chrono::sys_days;
using std::chrono::year;
using std::chrono::year_month_day;

struct Civil {
  year_month_day date;
  std::int64_t ms_of_day;
};

Civil split(Timestamp t) {
  std::int64_t day_index = t / kDay;
  std::int64_t rem = t % kDay;
  if (rem < 0) {
    rem += kDay;
    --day_index;
  }
  return {year_month_day{sys_days{days{day_index}}}, rem};
}

int digits(std::string_view s, std::size_t pos, std::size_t n) {
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    const char c = s[i];
    if (c < '0' || c > '9') throw ParseError("bad timestamp '" + std::string(s) + "'");
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace

std::string format_rfc3339(Timestamp t) {
  const Civil c = split(t);
  const std::int64_t ms = c.ms_of_day;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ",
                static_cast<int>(c.date.year()),
                static_cast<unsigned>(c.date.month()),
                static_cast<unsigned>(c.date.day()),
                static_cast<int>(ms / kHour), static_cast<int>(ms % kHour / kMinute),
                static_cast<int>(ms % kMinute / kSecond),
                static_cast<int>(ms % kSecond));
  return buf;
}

std::string format_date(Timestamp t) {
  return format_rfc3339(t).substr(0, 10);
}

Timestamp parse_rfc3339(std::string_view s) {
  // YYYY-MM-DDTHH:MM:SS.mmmZ
  if (s.size() != 24 || s[4] != '-' || s[7] != '-' || s[10] != 'T' ||
      s[13] != ':' || s[16] != ':' || s[19] != '.' || s[23] != 'Z') {
    throw ParseError("bad timestamp '" + std::string(s) + "'");
  }
  const year_month_day ymd{year{digits(s, 0, 4)},
                           month{static_cast<unsigned>(digits(s, 5, 2))},
                           day{static_cast<unsigned>(digits(s, 8, 2))}};
  const int hh = digits(s, 11, 2), mm = digits(s, 14, 2), ss = digits(s, 17, 2);
  const int ms = digits(s, 20, 3);
  if (!ymd.ok() || hh > 23 || mm > 59 || ss > 59) {
    throw ParseError("timestamp out of range '" + std::string(s) + "'");
  }
  const std::int64_t day_index = sys_days{ymd}.time_since_epoch().count();
  return day_index * kDay + hh * kHour + mm * kMinute + ss * kSecond + ms;
}

}  // namespace irbench
