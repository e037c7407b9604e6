#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inac/noma.hpp"
#include "inac/positioning.hpp"
#include "inac/result_table.hpp"
#include "inac/scenario.hpp"

namespace inac {

enum class ExperimentKind {
  kErrorVsPdop,
  kErrorVsNumSats,
  kPowerVsElements,
  kPdopVsDirectSats,
  kRateVsElements,
  kRateVsAllocFactor,
  kTradeoffVsDistance,
};

const char* to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view text);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kErrorVsPdop;
  std::string preset;  // name the spec came from, "" for custom specs
  std::vector<double> sweep;
  std::size_t trials = 500;
  std::uint64_t seed = 0;

  // Positioning
  double sigma_ure = 1.0;
  double epsilon = 0.1;
  std::size_t max_iterations = 2000;
  std::optional<double> ris_user_distance;  // m, applied to both users
  ViaRisRows npa_rows = ViaRisRows::kVirtualAnchor;
  /// Seed solves that have at least one direct anchor at the user's previous
  /// fix (its true position) instead of the solver default. Three direct
  /// ranges plus one RIS range near the user admit two exact roots; a
  /// tracking receiver keeps the one next to its last fix.
  bool warm_start = true;

  // Link
  std::size_t n_elements = 50;
  double omega_c = 0.8;
  double omega_n = 0.2;
  bool paper_literal = true;
  RateThresholds thresholds;
  std::optional<double> transmit_power_w;
  std::size_t cpa_trials = 200;

  Scenario scenario = default_scenario();
  std::string notes;

  bool raw = false;
  std::size_t workers = 0;
  std::function<void(std::size_t done, std::size_t total)> progress;

  void validate() const;
  /// Parameter block (everything that affects the numbers) as JSON.
  std::string parameters_json() const;
  std::uint64_t parameters_hash() const;
};

/// Names: fig3 .. fig9.
std::vector<std::string> preset_names();
ExperimentSpec preset(std::string_view name);

struct ExperimentResult {
  ResultTable table;
  std::optional<ResultTable> raw;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// INAC allocation for `mode` built from spec.omega_c and spec.omega_n:
/// the pair is swapped for CO-INAC so that the first-decoded signal always
/// carries the larger amplitude.
PowerAllocation allocation_for(const ExperimentSpec& spec, InacMode mode);

/// Point on a sphere of radius `orbit_radius` seen from `origin` at
/// `distance`, in the vertical plane through `origin`'s local north.
EcefPoint place_at_distance(const EcefPoint& origin, double orbit_radius, double distance, double azimuth_rad = 0.0);

std::string build_describe();

}  // namespace inac
