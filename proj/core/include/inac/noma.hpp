#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "inac/scenario.hpp"

namespace inac {

struct ChannelRealization;

/// NO-INAC decodes communication first (navigation is interference), CO-INAC
/// decodes navigation first.
enum class InacMode { kNoInac, kCoInac };

const char* to_string(InacMode mode);
InacMode parse_mode(std::string_view text);

/// Superposition amplitudes s(t) = omega_N s_N(t) + omega_C s_C(t).
class PowerAllocation {
 public:
  /// Strict allocations require omega_N^2 + omega_C^2 = 1 (1e-9). With
  /// `paper_literal` the pair is used as given. Both require the ordering of
  /// the mode: omega_C >= omega_N for NO-INAC, omega_C <= omega_N for CO-INAC.
  PowerAllocation(double omega_c, double omega_n, InacMode mode, bool paper_literal = false);

  double omega_c() const { return omega_c_; }
  double omega_n() const { return omega_n_; }
  InacMode mode() const { return mode_; }
  bool paper_literal() const { return paper_literal_; }

 private:
  double omega_c_;
  double omega_n_;
  InacMode mode_;
  bool paper_literal_;
};

struct LinkBudget {
  double gain = 0.0;              // |h~_u|^2, linear
  double transmit_power_w = 0.0;  // p_i
  double noise_w = 0.0;           // sigma^2
};

struct SignalPair {
  double nav = 0.0;
  double comm = 0.0;
};

/// SINRs under NO-INAC. Throws ValidationError on a CO-INAC allocation.
SignalPair sinr_no_inac(const LinkBudget& budget, const PowerAllocation& alloc);
/// SINRs under CO-INAC. Throws ValidationError on a NO-INAC allocation.
SignalPair sinr_co_inac(const LinkBudget& budget, const PowerAllocation& alloc);
/// Dispatches on alloc.mode().
SignalPair sinr(const LinkBudget& budget, const PowerAllocation& alloc);

double rate(double sinr);
SignalPair rates(const SignalPair& sinrs);

/// Upper bound of the interference-limited signal's rate as p -> infinity:
/// log2(1 + omega_C^2/omega_N^2) for NO-INAC comm, log2(1 + omega_N^2/omega_C^2)
/// for CO-INAC nav.
double rate_ceiling(const PowerAllocation& alloc);

/// Rate targets in bits/s/Hz; zero disables a target. `snr` is an optional
/// floor on the received SNR g p / sigma^2 (linear, zero disables).
struct RateThresholds {
  double nav = 0.0;
  double comm = 0.0;
  double snr = 0.0;
};

struct MinPowerResult {
  bool feasible = false;
  double power_w = 0.0;      // valid when feasible
  double nav_power_w = 0.0;  // smallest p meeting the navigation target alone
  double comm_power_w = 0.0;
  double snr_power_w = 0.0;
  /// When infeasible: the power-ratio ceiling of the interference-limited
  /// signal and the SINR target it fails to exceed.
  double ceiling = 0.0;
  double target_sinr = 0.0;
};

/// Smallest transmit power that meets both rate targets under the mode's SIC
/// order. Infeasible exactly when the interference-limited signal's ceiling
/// omega ratio is <= its SINR target 2^R - 1.
MinPowerResult min_transmit_power(const RateThresholds& thresholds, double gain, const PowerAllocation& alloc,
                                  double noise_w);

struct UserRates {
  double nav = 0.0;
  double comm = 0.0;
  double nav_stderr = 0.0;
  double comm_stderr = 0.0;
  double mean_gain = 0.0;
};

struct ErgodicRates {
  UserRates outdoor;
  UserRates indoor;
  std::size_t trials = 0;
};

struct ErgodicOptions {
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::size_t workers = 0;  // 0: hardware concurrency
  std::optional<double> transmit_power_w;  // overrides the satellite's p_i
};

/// Monte Carlo ergodic rates for the outdoor (reflect side) and indoor
/// (transmit side) users served by `satellite`. Every trial redraws the
/// channels from stream (seed, trial) and co-phases both RIS layers, so the
/// per-trial gain is (sum_n beta |c_n| sqrt(L_Riu) + |h_iu| sqrt(L_iu))^2.
ErgodicRates ergodic_rate(const Scenario& scenario, const PowerAllocation& alloc, std::size_t satellite,
                          const ErgodicOptions& options);

/// Co-phased effective gains of the outdoor and indoor users for one channel
/// realization served by `satellite`.
struct PairGains {
  double outdoor = 0.0;
  double indoor = 0.0;
};
PairGains aligned_gains(const Scenario& scenario, const ChannelRealization& channels, std::size_t satellite);

}  // namespace inac
