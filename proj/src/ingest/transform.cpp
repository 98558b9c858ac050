#include "epfw/ingest/transform.hpp"

#include <algorithm>
#include <map>

#include "epfw/errors.hpp"

namespace epfw::ingest {
namespace {

LocalTimestamp hour_stamp(long hour_serial) {
  LocalTimestamp t;
  t.date = Date(1970, 1, 1).plus_days(hour_serial / 24 -
                                      (hour_serial % 24 < 0 ? 1 : 0));
  long h = hour_serial % 24;
  if (h < 0) {
    h += 24;
  }
  t.minute_of_day = static_cast<int>(h) * 60;
  return t;
}

void require_resolution(const RawSeries& series, Resolution expected,
                        const char* op) {
  if (series.resolution != expected) {
    throw DataError(std::string(op) + " requires a " +
                    resolution_name(expected) + " series, but '" +
                    series.name + "' is " +
                    resolution_name(series.resolution));
  }
}

}  // namespace

bool DstCalendar::is_spring_forward(Date d) const {
  return std::find(spring_forward.begin(), spring_forward.end(), d) !=
         spring_forward.end();
}

bool DstCalendar::is_fall_back(Date d) const {
  return std::find(fall_back.begin(), fall_back.end(), d) != fall_back.end();
}

bool DstCalendar::is_transition(Date d) const {
  return is_spring_forward(d) || is_fall_back(d);
}

DstCalendar DstCalendar::european(int first_year, int last_year) {
  auto last_sunday = [](int year, unsigned month) {
    Date d = Date(year, month, 1).plus_months(1).plus_days(-1);
    while (d.weekday_iso() != 7) {
      d = d.plus_days(-1);
    }
    return d;
  };
  DstCalendar calendar;
  for (int y = first_year; y <= last_year; ++y) {
    calendar.spring_forward.push_back(last_sunday(y, 3));
    calendar.fall_back.push_back(last_sunday(y, 10));
  }
  return calendar;
}

RawSeries resample_to_hourly(const RawSeries& series) {
  require_resolution(series, Resolution::quarter_hourly, "resample_to_hourly");
  if (series.stamps.empty()) {
    throw DataError("resample_to_hourly on empty series '" + series.name +
                    "'");
  }

  RawSeries out;
  out.name = series.name;
  out.unit = series.unit;
  out.resolution = Resolution::hourly;

  const long first = series.stamps.front().hour_serial();
  const long last = series.stamps.back().hour_serial();
  std::size_t i = 0;
  for (long slot = first; slot <= last; ++slot) {
    double sum = 0.0;
    int count = 0;
    while (i < series.size() && series.stamps[i].hour_serial() == slot) {
      sum += series.values[i];
      ++count;
      ++i;
    }
    const LocalTimestamp stamp = hour_stamp(slot);
    if (count == 0) {
      throw DataError("column '" + series.name + "': hour with no samples at " +
                      stamp.to_string() + "; repair the source data");
    }
    if (count > 4) {
      throw DataError("column '" + series.name + "': " +
                      std::to_string(count) + " samples in hour " +
                      stamp.to_string());
    }
    out.stamps.push_back(stamp);
    out.values.push_back(sum / count);
  }
  return out;
}

RawSeries broadcast_daily(const RawSeries& series,
                          std::optional<DateRange> span) {
  require_resolution(series, Resolution::daily, "broadcast_daily");
  if (series.stamps.empty()) {
    throw DataError("broadcast_daily on empty series '" + series.name + "'");
  }

  std::map<Date, double> by_day;
  for (std::size_t i = 0; i < series.size(); ++i) {
    by_day[series.stamps[i].date] = series.values[i];
  }

  const Date first_trading = by_day.begin()->first;
  const DateRange out_span =
      span ? *span : DateRange{first_trading, by_day.rbegin()->first};
  if (out_span.start < first_trading) {
    throw DataError("column '" + series.name + "': first covered day " +
                    out_span.start.to_string() +
                    " missing (nothing to fill from; data begins " +
                    first_trading.to_string() + ")");
  }

  RawSeries out;
  out.name = series.name;
  out.unit = series.unit;
  out.resolution = Resolution::hourly;
  out.stamps.reserve(static_cast<std::size_t>(out_span.num_hours()));
  out.values.reserve(static_cast<std::size_t>(out_span.num_hours()));

  // Seed the carry with the value in force on the first output day.
  auto it = by_day.upper_bound(out_span.start);
  double carry = std::prev(it)->second;
  for (Date d = out_span.start; d <= out_span.end; d = d.plus_days(1)) {
    const auto hit = by_day.find(d);
    if (hit != by_day.end()) {
      carry = hit->second;
    }
    for (int h = 0; h < 24; ++h) {
      out.stamps.push_back(LocalTimestamp{d, h * 60});
      out.values.push_back(carry);
    }
  }
  return out;
}

RawSeries interpolate_gaps(const RawSeries& series, int max_gap_hours,
                           const DstCalendar& dst) {
  require_resolution(series, Resolution::hourly, "interpolate_gaps");
  if (max_gap_hours < 0) {
    throw ConfigError("max_gap_hours must be nonnegative");
  }

  RawSeries out;
  out.name = series.name;
  out.unit = series.unit;
  out.resolution = Resolution::hourly;

  for (std::size_t i = 0; i < series.size(); ++i) {
    if (i > 0) {
      const long prev_slot = series.stamps[i - 1].hour_serial();
      const long next_slot = series.stamps[i].hour_serial();
      if (next_slot - prev_slot > 1) {
        // Transition-day slots are left for normalize_dst; only ordinary
        // missing hours count against the limit and get filled.
        long fillable = 0;
        for (long s = prev_slot + 1; s < next_slot; ++s) {
          if (!dst.is_transition(hour_stamp(s).date)) {
            ++fillable;
          }
        }
        if (fillable > max_gap_hours) {
          throw DataError(
              "column '" + series.name + "': gap of " +
              std::to_string(fillable) + " hours from " +
              hour_stamp(prev_slot + 1).to_string() + " to " +
              hour_stamp(next_slot - 1).to_string() + " exceeds the " +
              std::to_string(max_gap_hours) + "-hour limit");
        }
        const double v0 = series.values[i - 1];
        const double v1 = series.values[i];
        const double denom = static_cast<double>(next_slot - prev_slot);
        for (long s = prev_slot + 1; s < next_slot; ++s) {
          const LocalTimestamp stamp = hour_stamp(s);
          if (dst.is_transition(stamp.date)) {
            continue;
          }
          const double frac = static_cast<double>(s - prev_slot) / denom;
          out.stamps.push_back(stamp);
          out.values.push_back(v0 + (v1 - v0) * frac);
        }
      }
    }
    out.stamps.push_back(series.stamps[i]);
    out.values.push_back(series.values[i]);
  }
  return out;
}

RawSeries normalize_dst(const RawSeries& series, const DstCalendar& dst) {
  require_resolution(series, Resolution::hourly, "normalize_dst");
  if (series.stamps.empty()) {
    throw DataError("normalize_dst on empty series '" + series.name + "'");
  }

  RawSeries out;
  out.name = series.name;
  out.unit = series.unit;
  out.resolution = Resolution::hourly;

  std::size_t i = 0;
  while (i < series.size()) {
    const Date day = series.stamps[i].date;
    std::size_t j = i;
    while (j < series.size() && series.stamps[j].date == day) {
      ++j;
    }
    const std::size_t count = j - i;

    std::size_t emit = count;
    bool repeat_last = false;
    if (count == 25) {
      if (!dst.is_fall_back(day)) {
        throw DataError("column '" + series.name + "': day " +
                        day.to_string() +
                        " has 25 points but is not a configured fall-back "
                        "date");
      }
      emit = 24;  // the 25th value is dropped
    } else if (count == 23) {
      if (!dst.is_spring_forward(day)) {
        throw DataError("column '" + series.name + "': day " +
                        day.to_string() +
                        " has 23 points but is not a configured "
                        "spring-forward date");
      }
      repeat_last = true;
    } else if (count != 24) {
      throw DataError("column '" + series.name + "': day " + day.to_string() +
                      " has " + std::to_string(count) +
                      " points (expected 23, 24 or 25)");
    }

    // Hours are assigned positionally within the day, per the repair rule.
    for (std::size_t k = 0; k < emit; ++k) {
      out.stamps.push_back(LocalTimestamp{day, static_cast<int>(k) * 60});
      out.values.push_back(series.values[i + k]);
    }
    if (repeat_last) {
      out.stamps.push_back(LocalTimestamp{day, 23 * 60});
      out.values.push_back(series.values[i + count - 1]);
    }
    i = j;
  }
  return out;
}

}  // namespace epfw::ingest
