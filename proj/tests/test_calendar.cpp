#include "epfw/calendar.hpp"

#include <doctest.h>

#include "epfw/errors.hpp"

using namespace epfw;

TEST_CASE("date parse and format round-trip") {
  const Date d = Date::parse("2019-07-04");
  CHECK(d.year() == 2019);
  CHECK(d.month() == 7);
  CHECK(d.day() == 4);
  CHECK(d.to_string() == "2019-07-04");
  CHECK(Date::parse("2020-02-29").to_string() == "2020-02-29");
}

TEST_CASE("date parse rejects malformed and impossible input") {
  CHECK_THROWS_AS(Date::parse("2019-02-29"), DataError);
  CHECK_THROWS_AS(Date::parse("2019-13-01"), DataError);
  CHECK_THROWS_AS(Date::parse("2019-00-10"), DataError);
  CHECK_THROWS_AS(Date::parse("19-01-01"), DataError);
  CHECK_THROWS_AS(Date::parse("2019/01/01"), DataError);
  CHECK_THROWS_AS(Date::parse("2019-01-1"), DataError);
  CHECK_THROWS_AS(Date::parse(""), DataError);
  CHECK(!Date::try_parse("abcd-ef-gh").has_value());
  CHECK_THROWS_AS(Date(2019, 2, 29), DataError);
}

TEST_CASE("day ordinal handles leap years") {
  CHECK(Date(2019, 1, 1).day_of_year() == 1);
  CHECK(Date(2019, 3, 1).day_of_year() == 60);
  CHECK(Date(2020, 3, 1).day_of_year() == 61);
  CHECK(Date(2020, 12, 31).day_of_year() == 366);
  CHECK(Date(2019, 12, 31).day_of_year() == 365);
}

TEST_CASE("iso week numbers at year boundaries") {
  // 2018-01-01 was a Monday, so weeks align with the calendar that year.
  CHECK(Date(2018, 1, 1).iso_week() == 1);
  CHECK(Date(2018, 10, 1).iso_week() == 40);
  // 2021-01-01 (Friday) still belongs to week 53 of 2020.
  CHECK(Date(2021, 1, 1).iso_week() == 53);
  CHECK(Date(2020, 12, 31).iso_week() == 53);
  // 2019-12-30 (Monday) already belongs to week 1 of 2020.
  CHECK(Date(2019, 12, 30).iso_week() == 1);
  CHECK(Date(2021, 1, 4).iso_week() == 1);
}

TEST_CASE("iso weekday encoding") {
  CHECK(Date(2018, 10, 1).weekday_iso() == 1);   // Monday
  CHECK(Date(1970, 1, 1).weekday_iso() == 4);    // Thursday
  CHECK(Date(2021, 1, 3).weekday_iso() == 7);    // Sunday
}

TEST_CASE("day arithmetic and serial differences") {
  const Date d = Date(2020, 2, 28);
  CHECK(d.plus_days(1).to_string() == "2020-02-29");
  CHECK(d.plus_days(2).to_string() == "2020-03-01");
  CHECK(d.plus_days(-59).to_string() == "2019-12-31");
  CHECK(Date(2020, 3, 1) - Date(2020, 2, 1) == 29);
  CHECK(Date(2019, 3, 1) - Date(2019, 2, 1) == 28);
}

TEST_CASE("month arithmetic clamps to valid days") {
  CHECK(Date(2018, 11, 1).plus_months(14).to_string() == "2020-01-01");
  CHECK(Date(2020, 1, 31).plus_months(1).to_string() == "2020-02-29");
  CHECK(Date(2020, 10, 1).plus_months(-24).to_string() == "2018-10-01");
  CHECK(Date(2019, 12, 1).plus_months(1).to_string() == "2020-01-01");
}

TEST_CASE("months_between requires month starts") {
  CHECK(months_between(Date(2018, 11, 1), Date(2020, 1, 1)) == 14);
  CHECK(months_between(Date(2018, 11, 1), Date(2020, 4, 1)) == 17);
  CHECK(months_between(Date(2018, 11, 1), Date(2020, 7, 1)) == 20);
  CHECK(months_between(Date(2020, 1, 1), Date(2020, 1, 1)) == 0);
  CHECK_THROWS_AS(months_between(Date(2020, 1, 2), Date(2020, 3, 1)),
                  ConfigError);
}

TEST_CASE("date ranges") {
  const DateRange r = make_range(Date(2020, 1, 1), Date(2020, 3, 31));
  CHECK(r.num_days() == 91);
  CHECK(r.num_hours() == 2184);
  CHECK(r.contains(Date(2020, 2, 15)));
  CHECK(!r.contains(Date(2020, 4, 1)));
  CHECK_THROWS_AS(make_range(Date(2020, 1, 2), Date(2020, 1, 1)), ConfigError);
}

TEST_CASE("quarter labels") {
  const DateRange q1 = quarter_range("2020Q1");
  CHECK(q1.start.to_string() == "2020-01-01");
  CHECK(q1.end.to_string() == "2020-03-31");
  const DateRange q4 = quarter_range("2022Q4");
  CHECK(q4.start.to_string() == "2022-10-01");
  CHECK(q4.end.to_string() == "2022-12-31");
  CHECK(quarter_label(Date(2021, 7, 1)) == "2021Q3");
  CHECK_THROWS_AS(quarter_range("2020Q5"), ConfigError);
  CHECK_THROWS_AS(quarter_range("20Q1"), ConfigError);
  CHECK_THROWS_AS(quarter_range("2020-1"), ConfigError);
  CHECK_THROWS_AS(quarter_label(Date(2021, 2, 1)), ConfigError);
  CHECK_THROWS_AS(quarter_label(Date(2021, 7, 2)), ConfigError);
}
