#include "inac/selection.hpp"

#include <cmath>
#include <string>

#include "inac/errors.hpp"

namespace inac {

namespace {

// Index of the smallest (or largest) defined score; ties within the relative
// tolerance go to the earliest candidate.
SelectionResult pick(std::vector<CandidateScore> scores, bool minimize, const char* what) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!scores[i].score) continue;
    if (!best) {
      best = i;
      continue;
    }
    const double a = *scores[i].score;
    const double b = *scores[*best].score;
    const double tol = kTieTolerance * std::max(std::abs(a), std::abs(b));
    if (minimize ? a < b - tol : a > b + tol) best = i;
  }
  if (!best) throw NoFeasibleSelection(std::string(what) + ": every candidate score is undefined");
  SelectionResult r;
  r.selected = scores[*best].satellite;
  r.score = *scores[*best].score;
  std::size_t ties = 0;
  for (const auto& c : scores)
    if (c.score && std::abs(*c.score - r.score) <= kTieTolerance * std::max(std::abs(*c.score), std::abs(r.score)))
      ++ties;
  r.tie_broken = ties > 1;
  r.per_candidate = std::move(scores);
  return r;
}

std::vector<std::size_t> check_candidates(const Scenario& scenario, std::vector<std::size_t> candidates) {
  for (std::size_t c : candidates)
    if (c >= scenario.satellites.size())
      throw ValidationError("candidate satellite " + std::to_string(c + 1) + " does not exist");
  if (candidates.empty()) throw NoFeasibleSelection("no candidate satellites");
  return candidates;
}

}  // namespace

SelectionResult npa_select(const Scenario& scenario, std::size_t user, const NpaOptions& options) {
  if (user >= scenario.users.size()) throw ValidationError("user index out of range");
  const auto& vis = scenario.visibility[user];
  const auto candidates =
      check_candidates(scenario, options.candidates.empty() ? vis.invisible : options.candidates);

  std::vector<CandidateScore> scores;
  for (std::size_t v : candidates) {
    std::vector<AnchorRef> anchors;
    for (std::size_t i : vis.visible) anchors.push_back({AnchorKind::kDirect, i});
    anchors.push_back({AnchorKind::kViaRis, v});
    // Same stream for every candidate: paired noise across the comparison.
    RngStream rng(options.seed, {options.trial});
    const auto obs = simulate_pseudoranges(scenario, user, anchors, options.sigma_ure, rng);
    SolverOptions so;
    so.epsilon = options.epsilon;
    so.max_iterations = options.max_iterations;
    so.initial_guess = options.initial_guess;
    const auto sol = lsm_solve(obs, so);
    CandidateScore cs{v, std::nullopt};
    if (!sol.degenerate) {
      try {
        cs.score = pdop(build_design_matrix(obs, sol.position, 1.0, options.score_rows, scenario.satellites));
      } catch (const PdopUndefined&) {
      } catch (const DegenerateGeometry&) {
      }
    }
    scores.push_back(cs);
  }
  return pick(std::move(scores), true, "NPA");
}

SelectionResult cpa_select(const Scenario& scenario, const PowerAllocation& alloc, const CpaOptions& options) {
  std::vector<std::size_t> candidates = options.candidates;
  if (candidates.empty())
    for (std::size_t i = 0; i < scenario.satellites.size(); ++i) candidates.push_back(i);
  candidates = check_candidates(scenario, std::move(candidates));

  ErgodicOptions eo;
  eo.trials = options.trials;
  eo.seed = options.seed;
  eo.workers = options.workers;
  eo.transmit_power_w = options.transmit_power_w;
  std::vector<CandidateScore> scores;
  for (std::size_t c : candidates) {
    const auto r = ergodic_rate(scenario, alloc, c, eo);
    scores.push_back({c, r.outdoor.comm + r.indoor.comm});
  }
  return pick(std::move(scores), false, "CPA");
}

SelectionResult rsa_select(std::span<const std::size_t> candidates, RngStream& rng, const CandidateScorer& scorer) {
  if (candidates.empty()) throw NoFeasibleSelection("RSA: no candidate satellites");
  SelectionResult r;
  r.selected = candidates[rng.index(candidates.size())];
  for (std::size_t c : candidates) {
    CandidateScore cs{c, scorer ? scorer(c) : std::nullopt};
    if (c == r.selected && cs.score) r.score = *cs.score;
    r.per_candidate.push_back(cs);
  }
  return r;
}

}  // namespace inac
