#include "epfw/calendar.hpp"

#include <charconv>
#include <cstdio>

#include "epfw/errors.hpp"

namespace epfw {
namespace {

using std::chrono::days;
using std::chrono::sys_days;
using std::chrono::year_month_day;

bool parse_int(std::string_view text, int& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

Date::Date(int year, unsigned month, unsigned day) {
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                           std::chrono::day{day}};
  if (!ymd.ok()) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "invalid date %04d-%02u-%02u", year, month,
                  day);
    throw DataError(buf);
  }
  days_ = sys_days{ymd};
}

Date Date::parse(std::string_view text) {
  auto d = try_parse(text);
  if (!d) {
    throw DataError("cannot parse date '" + std::string(text) +
                    "' (expected YYYY-MM-DD)");
  }
  return *d;
}

std::optional<Date> Date::try_parse(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    return std::nullopt;
  }
  int y = 0;
  int m = 0;
  int d = 0;
  if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) ||
      !parse_int(text.substr(8, 2), d)) {
    return std::nullopt;
  }
  const year_month_day ymd{std::chrono::year{y},
                           std::chrono::month{static_cast<unsigned>(m)},
                           std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) {
    return std::nullopt;
  }
  return Date{sys_days{ymd}};
}

int Date::year() const {
  return static_cast<int>(year_month_day{days_}.year());
}

unsigned Date::month() const {
  return static_cast<unsigned>(year_month_day{days_}.month());
}

unsigned Date::day() const {
  return static_cast<unsigned>(year_month_day{days_}.day());
}

int Date::day_of_year() const {
  const year_month_day ymd{days_};
  const sys_days jan1{ymd.year() / std::chrono::January / 1};
  return static_cast<int>((days_ - jan1).count()) + 1;
}

int Date::iso_week() const {
  // The ISO week of a date is the week of its Thursday; week 1 holds the
  // year's first Thursday.
  const sys_days thursday = days_ + days{4 - weekday_iso()};
  const year_month_day ymd{thursday};
  const sys_days jan1{ymd.year() / std::chrono::January / 1};
  return 1 + static_cast<int>((thursday - jan1).count()) / 7;
}

int Date::weekday_iso() const {
  return static_cast<int>(std::chrono::weekday{days_}.iso_encoding());
}

Date Date::first_of_month() const {
  const year_month_day ymd{days_};
  return Date{sys_days{ymd.year() / ymd.month() / 1}};
}

Date Date::plus_days(long n) const { return Date{days_ + days{n}}; }

Date Date::plus_months(int n) const {
  year_month_day ymd{days_};
  ymd += std::chrono::months{n};
  if (!ymd.ok()) {
    ymd = ymd.year() / ymd.month() / std::chrono::last;
  }
  return Date{sys_days{ymd}};
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year(), month(), day());
  return buf;
}

int months_between(Date a, Date b) {
  if (!a.is_first_of_month() || !b.is_first_of_month()) {
    throw ConfigError("months_between requires first-of-month dates, got " +
                      a.to_string() + " and " + b.to_string());
  }
  return (b.year() - a.year()) * 12 +
         (static_cast<int>(b.month()) - static_cast<int>(a.month()));
}

DateRange make_range(Date start, Date end) {
  if (end < start) {
    throw ConfigError("date range end " + end.to_string() +
                      " precedes start " + start.to_string());
  }
  return DateRange{start, end};
}

DateRange quarter_range(std::string_view label) {
  int y = 0;
  int q = 0;
  if (label.size() != 6 || (label[4] != 'Q' && label[4] != 'q') ||
      !parse_int(label.substr(0, 4), y) || !parse_int(label.substr(5, 1), q) ||
      q < 1 || q > 4) {
    throw ConfigError("cannot parse quarter label '" + std::string(label) +
                      "' (expected e.g. 2021Q3)");
  }
  const Date start(y, static_cast<unsigned>(3 * (q - 1) + 1), 1);
  return DateRange{start, start.plus_months(3).plus_days(-1)};
}

std::string quarter_label(Date start) {
  if (start.day() != 1 || (start.month() - 1) % 3 != 0) {
    throw ConfigError(start.to_string() + " is not the start of a quarter");
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%04dQ%u", start.year(),
                (start.month() - 1) / 3 + 1);
  return buf;
}

}  // namespace epfw
