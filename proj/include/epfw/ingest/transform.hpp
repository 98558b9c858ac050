#pragma once

#include <optional>
#include <vector>

#include "epfw/calendar.hpp"
#include "epfw/ingest/series.hpp"

namespace epfw::ingest {

// Local clock-change dates. Only the dates matter: the repair rule is
// positional on the day, not tied to a transition instant.
struct DstCalendar {
  std::vector<Date> spring_forward;  // 23-hour days
  std::vector<Date> fall_back;       // 25-hour days

  bool is_spring_forward(Date d) const;
  bool is_fall_back(Date d) const;
  bool is_transition(Date d) const;

  // Last-Sunday-of-March / last-Sunday-of-October rules for a year span
  // (the convention of the modeled region).
  static DstCalendar european(int first_year, int last_year);
};

// Quarter-hourly -> hourly by arithmetic mean. Every hour between the first
// and last covered hour must have 1-4 points; an empty hour is a gap that
// must be repaired upstream.
RawSeries resample_to_hourly(const RawSeries& series);

// Daily -> hourly by repeating each day's value 24 times. Days absent from
// the input (non-trading days) take the most recent prior value. The
// optional span widens or narrows the output; it may extend past the last
// trading day (trailing fill) but not before the first.
RawSeries broadcast_daily(const RawSeries& series,
                          std::optional<DateRange> span = std::nullopt);

// Fills interior gaps of at most max_gap_hours missing hours by linear
// interpolation between the bracketing observed values. Missing hours that
// fall on DST transition dates are exempt: they are neither counted against
// the limit nor filled (normalize_dst owns those days). Gaps beyond the
// limit raise DataError naming the series and the hour range.
RawSeries interpolate_gaps(const RawSeries& series, int max_gap_hours,
                           const DstCalendar& dst = {});

// Forces every covered day to exactly 24 points: a listed 25-hour day drops
// its last value, a listed 23-hour day repeats its 23rd value. Any other
// day-length deviation, or a deviation on an unlisted date, is an error.
RawSeries normalize_dst(const RawSeries& series, const DstCalendar& dst);

}  // namespace epfw::ingest
