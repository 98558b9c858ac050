#include "epfw/ingest/synthetic.hpp"

#include <cmath>

#include "epfw/errors.hpp"
#include "epfw/rng.hpp"

namespace epfw::ingest {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Double-peaked intraday load shape in [-1, 1], morning and evening ramps.
double daily_shape(int hour) {
  const double h = static_cast<double>(hour);
  return 0.75 * std::sin(kTwoPi * (h - 8.5) / 24.0) +
         0.25 * std::sin(2.0 * kTwoPi * (h - 1.5) / 24.0);
}

double solar_shape(int hour, int day_of_year) {
  const double h = static_cast<double>(hour);
  const double bell = std::exp(-0.5 * std::pow((h - 13.0) / 3.2, 2.0));
  const double season =
      0.55 - 0.45 * std::cos(kTwoPi * (static_cast<double>(day_of_year) - 10.0) /
                             365.25);
  return bell * season;
}

}  // namespace

AlignedDataset generate_synthetic(const SyntheticRecipe& recipe,
                                  std::uint64_t seed) {
  const DateRange range = recipe.range;
  if (range.end < range.start) {
    throw DataError("synthetic recipe has an empty date range");
  }
  if (recipe.wind_ar < 0.0 || recipe.wind_ar >= 1.0) {
    throw ConfigError("wind_ar must lie in [0, 1)");
  }

  const std::vector<std::string> columns = {
      "dam_price",
      "eu_gas_price",
      "ie_demand",
      "ni_demand",
      "total_demand",
      "ie_generation",
      "ni_generation",
      "total_generation",
      "ie_wind_generation",
      "ni_wind_generation",
      "total_wind_generation",
      "ie_wind_availability",
      "ni_wind_availability",
      "ni_solar_generation",
      "snsp",
      "wind_speed_dublin_airport",
      "wind_speed_mace_head",
      "wind_speed_malin_head",
  };
  const long days = range.num_days();
  Matrix values(days * 24, static_cast<Index>(columns.size()));

  Rng rng(seed);
  double gas = recipe.gas_start;
  // Stationary starts so early windows look like later ones.
  double wind_dev = recipe.wind_sd * rng.normal();
  double demand_dev = recipe.demand_noise_sd * rng.normal();
  const double demand_ar = 0.8;

  Index row = 0;
  for (long d = 0; d < days; ++d) {
    const Date date = range.start.plus_days(d);
    const bool weekend = date.weekday_iso() >= 6;
    if (d > 0) {
      gas += recipe.gas_step_sd * rng.normal();
      if (gas < recipe.gas_min) {
        gas = 2.0 * recipe.gas_min - gas;  // reflect at the floor
      }
    }
    const double solar_weather = 0.35 + 0.65 * rng.uniform();

    for (int h = 0; h < 24; ++h, ++row) {
      demand_dev = demand_ar * demand_dev +
                   std::sqrt(1.0 - demand_ar * demand_ar) *
                       recipe.demand_noise_sd * rng.normal();
      wind_dev = recipe.wind_ar * wind_dev +
                 std::sqrt(1.0 - recipe.wind_ar * recipe.wind_ar) *
                     recipe.wind_sd * rng.normal();

      const double demand = recipe.demand_base +
                            recipe.demand_daily * daily_shape(h) -
                            (weekend ? recipe.demand_weekend_drop : 0.0) +
                            demand_dev;
      double wind = recipe.wind_mean + wind_dev;
      if (wind < 0.0) {
        wind = 0.0;
      }
      if (wind > recipe.wind_max) {
        wind = recipe.wind_max;
      }

      const double ie_share = 0.74 + 0.02 * rng.normal() * 0.1;
      const double wind_ie_share = 0.72 + 0.02 * rng.normal() * 0.1;
      const double gen_margin = 1.03 + 0.015 * rng.normal() * 0.5;
      const double solar =
          recipe.solar_peak * solar_shape(h, date.day_of_year()) *
          solar_weather;

      const double ie_demand = demand * ie_share;
      const double ni_demand = demand - ie_demand;
      const double generation = demand * std::max(gen_margin, 0.9);
      const double ie_generation = generation * ie_share;
      const double ni_generation = generation - ie_generation;
      const double ie_wind = wind * wind_ie_share;
      const double ni_wind = wind - ie_wind;
      const double avail_headroom = 1.0 + 0.18 * rng.uniform();
      const double snsp = 100.0 * (wind + solar + 250.0) /
                          (generation + 150.0);

      const double price =
          recipe.base_price + recipe.gas_coupling * gas +
          recipe.demand_coupling * (demand - recipe.demand_base) -
          recipe.wind_coupling * wind + recipe.price_daily * daily_shape(h) -
          (weekend ? recipe.price_weekly : -recipe.price_weekly * 2.0 / 5.0) +
          recipe.price_noise_sd * rng.normal();

      const double speed_base = 6.0 + 22.0 * (wind / recipe.wind_max);
      const double sp_dublin = std::max(0.5, speed_base + 1.5 * rng.normal());
      const double sp_mace = std::max(0.5, 1.12 * speed_base + 1.8 * rng.normal());
      const double sp_malin = std::max(0.5, 1.25 * speed_base + 1.7 * rng.normal());

      values(row, 0) = price;
      values(row, 1) = gas;
      values(row, 2) = ie_demand;
      values(row, 3) = ni_demand;
      values(row, 4) = demand;
      values(row, 5) = ie_generation;
      values(row, 6) = ni_generation;
      values(row, 7) = generation;
      values(row, 8) = ie_wind;
      values(row, 9) = ni_wind;
      values(row, 10) = wind;
      values(row, 11) = ie_wind * avail_headroom;
      values(row, 12) = ni_wind * avail_headroom;
      values(row, 13) = solar;
      values(row, 14) = snsp;
      values(row, 15) = sp_dublin;
      values(row, 16) = sp_mace;
      values(row, 17) = sp_malin;
    }
  }

  return AlignedDataset(range.start, columns, std::move(values));
}

}  // namespace epfw::ingest
