#pragma once

#include <cmath>

#include "inac/geometry.hpp"

namespace inac {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return db_to_linear(dbm - 30.0); }
inline double watts_to_dbm(double w) { return linear_to_db(w) + 30.0; }

/// Thermal noise floor -174 dBm/Hz integrated over `bandwidth_hz`, in dBm.
inline double thermal_noise_dbm(double bandwidth_hz) { return -174.0 + 10.0 * std::log10(bandwidth_hz); }

struct PathlossExponents {
  double sat_ris = 2.0;
  double sat_user = 2.0;
  double ris_user = 2.2;
};

struct PhysicsParams {
  double carrier_frequency_hz = 1e9;
  double bandwidth_hz = 10e6;
  double rx_gain = 1.0;  // G_R, linear
  PathlossExponents exponents;
  double speed_of_light = kSpeedOfLight;

  double wavelength() const { return speed_of_light / carrier_frequency_hz; }
  double noise_power_w() const { return dbm_to_watts(thermal_noise_dbm(bandwidth_hz)); }
  void validate() const;
};

/// Shadowed-Rician parameters: 2b is the average multipath power, m the
/// Nakagami shape of the LoS amplitude and omega the average LoS power.
struct ShadowedRicianParams {
  double b = 0.279;
  double m = 2.0;
  double omega = 0.251;

  double mean_power() const { return omega + 2.0 * b; }
  void validate() const;
};

struct FadingParams {
  ShadowedRicianParams shadowed_rician;
  double ris_user_k_factor = 10.0;  // linear Rician K of RIS -> user links
  void validate() const;
};

}  // namespace inac
