#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inac/geometry.hpp"
#include "inac/physics.hpp"
#include "inac/star_ris.hpp"

namespace inac {

struct SatelliteConfig {
  EcefPoint position;
  double transmit_power_w = 40.0;
  double transmit_gain = 1000.0;  // G_T, linear
  int antenna_count = 1;          // informational; the array collapses to G_T
};

enum class Placement { kOutdoorReflectSide, kIndoorTransmitSide };

struct UserConfig {
  std::string name;
  EcefPoint position;
  Placement placement = Placement::kOutdoorReflectSide;
  double clock_bias_s = 0.0;
};

struct StarRis {
  EcefPoint position;
  StarRisConfig config = StarRisConfig::uniform(50, 0.5, 0.5, false);
};

/// Satellite indices (0-based) a user sees directly (I_v) and only through
/// the STAR-RIS (I_n).
struct Visibility {
  std::vector<std::size_t> visible;
  std::vector<std::size_t> invisible;
};

struct Scenario {
  std::vector<SatelliteConfig> satellites;
  std::vector<UserConfig> users;
  StarRis ris;
  std::vector<Visibility> visibility;  // one entry per user
  PhysicsParams physics;
  FadingParams fading;

  /// Throws ValidationError naming the violated invariant.
  void validate() const;

  std::size_t user_index(std::string_view name) const;
  std::optional<std::size_t> find_user(Placement placement) const;
  bool is_visible(std::size_t user, std::size_t satellite) const;
};

/// The reference scenario: ten satellites, one STAR-RIS and an indoor and an
/// outdoor user at the tabulated ECEF coordinates. The outdoor user sees
/// satellites 1-3 directly; the indoor user sees none.
Scenario default_scenario();

/// Parses a scenario document. `satellites`, `users` and `ris` are required;
/// `physics` and `fading` default to the reference values. Without a
/// `visibility` section outdoor users see every satellite and indoor users
/// none. Satellite ids in `visibility` are 1-based.
Scenario load_scenario(std::string_view json_text);
Scenario load_scenario_file(const std::filesystem::path& path);

std::string scenario_to_json(const Scenario& scenario, int indent = 2);

/// Moves `user` along its current RIS->user direction so that it sits
/// `meters` away from the RIS.
Scenario with_ris_user_distance(Scenario scenario, std::size_t user, double meters);

/// Replaces the RIS element count keeping uniform amplitudes of element 0.
Scenario with_ris_elements(Scenario scenario, std::size_t n);

}  // namespace inac
