#include "evalrank/dates.hpp"

#include <charconv>

#include <fmt/format.h>

#include "evalrank/error.hpp"

namespace evalrank {

namespace {

using namespace std::chrono;

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

int to_int(std::string_view s) {
  int value = 0;
  std::from_chars(s.data(), s.data() + s.size(), value);
  return value;
}

[[noreturn]] void bad_token(std::string_view token) {
  throw Error(ErrorCode::SchemaError,
              fmt::format("invalid date token '{}' (expected YYYY, YYYY-MM-DD or YYYYs)", token));
}

}  // namespace

Date::Date(int y, unsigned m, unsigned d) {
  year_month_day ymd{year{y}, month{m}, day{d}};
  if (!ymd.ok()) {
    throw Error(ErrorCode::SchemaError, fmt::format("invalid calendar date {:04d}-{:02d}-{:02d}", y, m, d));
  }
  days_ = sys_days{ymd};
}

std::string Date::iso() const {
  year_month_day ymd{days_};
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
}

Date parse_date_token(std::string_view token, Bound bound) {
  if (token.size() == 4 && all_digits(token)) {
    const int y = to_int(token);
    return bound == Bound::Begin ? Date(y, 1, 1) : Date(y, 12, 31);
  }
  if (token.size() == 5 && token[4] == 's' && all_digits(token.substr(0, 4))) {
    const int y = to_int(token.substr(0, 4));
    if (y % 10 != 0) bad_token(token);
    return bound == Bound::Begin ? Date(y, 1, 1) : Date(y + 9, 12, 31);
  }
  if (token.size() == 10 && token[4] == '-' && token[7] == '-' && all_digits(token.substr(0, 4)) &&
      all_digits(token.substr(5, 2)) && all_digits(token.substr(8, 2))) {
    return Date(to_int(token.substr(0, 4)), static_cast<unsigned>(to_int(token.substr(5, 2))),
                static_cast<unsigned>(to_int(token.substr(8, 2))));
  }
  bad_token(token);
}

TimeInterval parse_interval(std::string_view begin_token, std::string_view end_token) {
  TimeInterval interval{parse_date_token(begin_token, Bound::Begin),
                        parse_date_token(end_token, Bound::End)};
  if (interval.end < interval.begin) {
    throw Error(ErrorCode::SchemaError,
                fmt::format("interval begins after it ends ({} > {})", interval.begin.iso(), interval.end.iso()));
  }
  return interval;
}

TimeInterval parse_timeframe(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) return parse_interval(text, text);
  return parse_interval(text.substr(0, colon), text.substr(colon + 1));
}

}  // namespace evalrank
