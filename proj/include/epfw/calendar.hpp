#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace epfw {

// Calendar date without a time zone. All series in this project carry local
// wall-clock labels, so a plain date plus an hour index is the whole story.
class Date {
 public:
  Date() = default;
  Date(int year, unsigned month, unsigned day);

  // Parses "YYYY-MM-DD"; throws DataError on malformed or impossible dates.
  static Date parse(std::string_view text);
  static std::optional<Date> try_parse(std::string_view text);

  int year() const;
  unsigned month() const;
  unsigned day() const;

  // 1-based ordinal within the year (Jan 1 = 1).
  int day_of_year() const;
  // ISO-8601 week number, 1..53. Early January may belong to week 52/53 of
  // the previous ISO year; only the number is exposed.
  int iso_week() const;
  // ISO weekday, Monday = 1 .. Sunday = 7.
  int weekday_iso() const;

  bool is_first_of_month() const { return day() == 1; }
  Date first_of_month() const;

  Date plus_days(long n) const;
  // Shifts by whole months; a day past the target month's end clamps to the
  // last valid day (only first-of-month dates are shifted in practice).
  Date plus_months(int n) const;

  // Days since 1970-01-01.
  long serial() const { return days_.time_since_epoch().count(); }

  std::string to_string() const;

  friend long operator-(Date a, Date b) { return a.serial() - b.serial(); }
  auto operator<=>(const Date&) const = default;

 private:
  explicit Date(std::chrono::sys_days d) : days_(d) {}
  std::chrono::sys_days days_{};
};

// Whole months from a to b; both must be first-of-month dates.
int months_between(Date a, Date b);

// Inclusive day span.
struct DateRange {
  Date start;
  Date end;

  bool contains(Date d) const { return start <= d && d <= end; }
  long num_days() const { return end - start + 1; }
  long num_hours() const { return num_days() * 24; }
};

// Validates start <= end; throws ConfigError otherwise.
DateRange make_range(Date start, Date end);

// "2021Q3" -> the quarter's inclusive day span; throws ConfigError on
// malformed labels.
DateRange quarter_range(std::string_view label);
// First day of a quarter -> its label; throws ConfigError if the date is not
// a quarter start.
std::string quarter_label(Date start);

}  // namespace epfw
