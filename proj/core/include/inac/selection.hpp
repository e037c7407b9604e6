#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "inac/noma.hpp"
#include "inac/positioning.hpp"
#include "inac/scenario.hpp"

namespace inac {

struct CandidateScore {
  std::size_t satellite = 0;
  std::optional<double> score;  // empty when undefined (e.g. PdopUndefined)
};

struct SelectionResult {
  std::size_t selected = 0;
  double score = 0.0;
  std::vector<CandidateScore> per_candidate;
  bool tie_broken = false;
};

/// Relative tolerance under which two candidate scores count as a tie.
inline constexpr double kTieTolerance = 1e-9;

struct NpaOptions {
  double sigma_ure = 1.0;
  double epsilon = 0.1;
  std::size_t max_iterations = 2000;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  ViaRisRows score_rows = ViaRisRows::kVirtualAnchor;
  std::optional<EcefPoint> initial_guess;  // passed to lsm_solve
  /// Candidates; empty means the user's I_n.
  std::vector<std::size_t> candidates;
};

/// Navigation-prioritized selection. For each candidate v the anchor set
/// {direct(i) : i in I_v} + {via-RIS(v)} is simulated with noise drawn from
/// stream (seed, trial) (shared by all candidates), solved, and scored by the
/// PDoP at the converged estimate. Returns the minimum; ties go to the lowest
/// index. Throws NoFeasibleSelection when every PDoP is undefined.
SelectionResult npa_select(const Scenario& scenario, std::size_t user, const NpaOptions& options);

struct CpaOptions {
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  std::size_t workers = 0;
  std::optional<double> transmit_power_w;
  std::vector<std::size_t> candidates;  // empty: every satellite
};

/// Communication-prioritized selection: for each candidate INAC satellite the
/// ergodic communication rates of the outdoor (reflect) and indoor (transmit)
/// users are estimated with common random numbers across candidates, and the
/// satellite maximizing R_R + R_T is returned.
SelectionResult cpa_select(const Scenario& scenario, const PowerAllocation& alloc, const CpaOptions& options);

using CandidateScorer = std::function<std::optional<double>(std::size_t)>;

/// Uniform random pick. `scorer`, when given, fills in the reported score.
SelectionResult rsa_select(std::span<const std::size_t> candidates, RngStream& rng,
                           const CandidateScorer& scorer = {});

}  // namespace inac
