#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "inac/geometry.hpp"
#include "inac/rng.hpp"
#include "inac/scenario.hpp"

namespace inac {

enum class AnchorKind { kDirect, kViaRis };

/// Which satellite an observation comes from and whether it arrives directly
/// or through the STAR-RIS.
struct AnchorRef {
  AnchorKind kind = AnchorKind::kDirect;
  std::size_t satellite = 0;  // 0-based
  bool operator==(const AnchorRef&) const = default;
};

/// Parses "d1,d2,d3,r7": d = direct, r = via RIS, 1-based satellite numbers.
std::vector<AnchorRef> parse_anchors(std::string_view text);
std::string format_anchors(std::span<const AnchorRef> anchors);

/// Satellite-side range corrections. The simulator keeps them at zero
/// (no clock drift, no atmosphere); the fields exist so that corrected
/// pseudo-ranges are formed the same way a receiver would form them.
struct RangeCorrections {
  double satellite_clock_s = 0.0;
  double ionosphere_m = 0.0;
  double troposphere_m = 0.0;
  double other_m = 0.0;
};

/// `rho_c` is the corrected pseudo-range to `anchor_position`. For a via-RIS
/// observation the known satellite->RIS leg is one of the corrections, so the
/// raw measurement is rho_c + ris_leg_offset.
struct PseudorangeObs {
  AnchorRef anchor;
  EcefPoint anchor_position;    // satellite for direct, RIS for via-RIS (virtual anchor)
  double rho_c = 0.0;           // m
  double ris_leg_offset = 0.0;  // satellite->RIS distance for via-RIS, 0 for direct
  double sigma_ure = 0.0;
  RangeCorrections corrections;
};

/// Corrected pseudo-ranges for `user`: range to the anchor (the RIS->user leg
/// for via-RIS anchors) + c * clock bias + N(0, sigma_ure^2), one normal draw
/// per anchor in order.
/// Throws ValidationError on an empty anchor list or an unknown satellite.
std::vector<PseudorangeObs> simulate_pseudoranges(const Scenario& scenario, std::size_t user,
                                                  std::span<const AnchorRef> anchors, double sigma_ure,
                                                  RngStream& rng);

/// Row model for via-RIS observations. kVirtualAnchor is the exact
/// linearization (only the RIS->user leg depends on the user position).
/// kSatelliteLineOfSight uses the satellite's own line of sight, which is how
/// the PDoP of a via-RIS satellite is scored when geometric diversity of the
/// satellite itself is the selection criterion.
enum class ViaRisRows { kVirtualAnchor, kSatelliteLineOfSight };

struct DesignMatrix {
  std::vector<DesignRow> rows;
  double clock_column_scale = 1.0;
};

/// Stacks los_unit_row(anchor, estimate, clock_column_scale) for each
/// observation. Via-RIS rows use the RIS as anchor unless `satellite_rows`
/// is given, in which case `satellite_positions[sat]` is used.
DesignMatrix build_design_matrix(std::span<const PseudorangeObs> obs, const EcefPoint& estimate,
                                 double clock_column_scale = 1.0,
                                 ViaRisRows via_ris_rows = ViaRisRows::kVirtualAnchor,
                                 std::span<const SatelliteConfig> satellites = {});

/// sqrt(F11 + F22 + F33) with F = (A^T A)^-1. The normal matrix is
/// Jacobi-equilibrated before inversion, so the result does not depend on the
/// clock column scale. Throws PdopUndefined when fewer than four rows exist
/// or the normal matrix condition number exceeds 1e12.
double pdop(const DesignMatrix& design);

/// Condition number of the equilibrated normal matrix (infinity if singular).
double normal_condition(const DesignMatrix& design);

inline constexpr double kRankConditionLimit = 1e12;

struct SolverOptions {
  double epsilon = 0.1;  // m, stop once the correction norm falls below
  std::size_t max_iterations = 2000;
  /// Linearization seed. Unset: Earth center, or, when every observation
  /// shares a single anchor, that anchor nudged 1 mm toward the geocenter.
  std::optional<EcefPoint> initial_guess;
  /// Restart point used once if the residual norm grows for five
  /// consecutive iterations. Unset: the RIS position of the first via-RIS
  /// observation (nudged), or no restart without via-RIS observations.
  std::optional<EcefPoint> restart_guess;
  double clock_column_scale = 1.0;  // 1 (meters) or c (seconds) for reporting PDoP rows
};

struct PositionSolution {
  EcefPoint position;
  double clock_bias_m = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool degenerate = false;  // normal matrix rank-deficient, minimum-norm update used
  bool restarted = false;
  std::optional<double> pdop;  // at the final linearization point; empty when undefined
  double residual_norm = 0.0;
};

/// Iterated linearized least squares: x_{k+1} = x_k + (A^T A)^-1 A^T b with b
/// the measured minus predicted corrected pseudo-ranges, until the
/// correction norm < epsilon or max_iterations. Rank-deficient steps use
/// the minimum-norm solution with the clock unknown in seconds, which keeps
/// the unobservable position components at the linearization point.
PositionSolution lsm_solve(std::span<const PseudorangeObs> obs, const SolverOptions& options = {});

/// Default seed described in SolverOptions::initial_guess.
EcefPoint coarse_guess(std::span<const PseudorangeObs> obs);

double position_error(const PositionSolution& solution, const EcefPoint& truth);

}  // namespace inac
