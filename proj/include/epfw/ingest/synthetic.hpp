#pragma once

#include <cstdint>

#include "epfw/calendar.hpp"
#include "epfw/ingest/dataset.hpp"

namespace epfw::ingest {

// Parameters of the generated market. The price is built as
//   base + gas_coupling * gas + demand_coupling * (demand - demand_base)
//        - wind_coupling * wind + daily/weekly shape + noise
// so the documented correlation signs (gas positive, wind negative) hold by
// construction. Setting the couplings and noise to zero leaves a purely
// periodic price.
struct SyntheticRecipe {
  DateRange range;

  double base_price = 18.0;        // EUR/MWh intercept
  double price_daily = 4.0;        // EUR/MWh direct daily shape amplitude
  double price_weekly = 1.5;       // EUR/MWh weekday/weekend shape
  double price_noise_sd = 2.0;     // EUR/MWh idiosyncratic noise

  double gas_start = 22.0;         // EUR/MWh-gas random-walk start
  double gas_step_sd = 0.9;        // daily step
  double gas_min = 8.0;            // reflecting floor
  double gas_coupling = 1.6;       // EUR/MWh price per EUR/MWh-gas

  double demand_base = 4200.0;     // MW
  double demand_daily = 1100.0;    // MW daily amplitude
  double demand_weekend_drop = 450.0;  // MW
  double demand_noise_sd = 60.0;   // MW AR(1) deviations
  double demand_coupling = 0.012;  // EUR/MWh price per MW

  double wind_mean = 1500.0;       // MW
  double wind_sd = 900.0;          // MW stationary deviation
  double wind_ar = 0.97;           // hourly AR(1) coefficient
  double wind_max = 4100.0;        // MW clamp
  double wind_coupling = 0.011;    // EUR/MWh price per MW (entered negatively)

  double solar_peak = 120.0;       // MW midsummer midday NI solar
};

// Deterministic for a fixed (recipe, seed); emits the full canonical column
// set used by the feature builder.
AlignedDataset generate_synthetic(const SyntheticRecipe& recipe,
                                  std::uint64_t seed);

}  // namespace epfw::ingest
