// Unit conversions and physical constants. Everything inside the library is
// linear SI (watts, meters, hertz, radians); dB and dBm appear only at I/O.
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace secsim {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;

/// Thermal noise floor at 290 K, dBm per hertz.
inline constexpr double kThermalFloorDbmPerHz = -174.0;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double ratio) {
  if (!(ratio > 0.0)) throw std::domain_error("linear_to_db: ratio must be positive");
  return 10.0 * std::log10(ratio);
}

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double watts_to_dbm(double watts) { return linear_to_db(watts) + 30.0; }

}  // namespace secsim
