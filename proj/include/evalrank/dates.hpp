#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace evalrank {

// Calendar day, proleptic Gregorian, UTC.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}
  Date(int year, unsigned month, unsigned day);

  constexpr std::chrono::sys_days days() const { return days_; }
  std::string iso() const;

  friend constexpr auto operator<=>(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days days_{};
};

// Which end of a coarse token ("1940s", "1998") a date should snap to.
enum class Bound { Begin, End };

// Accepts "YYYY", "YYYY-MM-DD" and decade tokens "YYYYs" (YYYY divisible by
// 10). Throws Error{SchemaError} on anything else.
Date parse_date_token(std::string_view token, Bound bound);

// Closed interval [begin, end] at day precision.
struct TimeInterval {
  Date begin;
  Date end;

  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

// Builds [begin_token normalized low, end_token normalized high]; rejects
// begin > end with Error{SchemaError}.
TimeInterval parse_interval(std::string_view begin_token, std::string_view end_token);

// "1940s:2023", "1990", "2001-05-01:2003". A single token spans itself.
TimeInterval parse_timeframe(std::string_view text);

inline bool overlaps(const TimeInterval& a, const TimeInterval& b) {
  return a.begin <= b.end && b.begin <= a.end;
}

// a ends strictly before b begins.
inline bool precedes(const TimeInterval& a, const TimeInterval& b) { return a.end < b.begin; }

inline bool disjoint(const TimeInterval& a, const TimeInterval& b) { return !overlaps(a, b); }

}  // namespace evalrank
