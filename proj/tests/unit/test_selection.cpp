#include <gtest/gtest.h>

#include <map>

#include "inac/errors.hpp"
#include "inac/noma.hpp"
#include "inac/rng.hpp"
#include "inac/scenario.hpp"
#include "inac/selection.hpp"

using namespace inac;

TEST(Npa, SatelliteRowsPickTheMinimumPdop) {
  const Scenario s = default_scenario();
  NpaOptions o;
  o.sigma_ure = 0.0;
  o.score_rows = ViaRisRows::kSatelliteLineOfSight;
  const auto r = npa_select(s, s.user_index("outdoor"), o);
  EXPECT_EQ(r.selected, 5u);
  EXPECT_NEAR(r.score, 2.4323, 1e-4);
  EXPECT_EQ(r.per_candidate.size(), 7u);
  for (const auto& c : r.per_candidate) {
    ASSERT_TRUE(c.score);
    EXPECT_GE(*c.score, r.score);
  }
  EXPECT_FALSE(r.tie_broken);
}

TEST(Npa, VirtualAnchorRowsTieAndTakeTheLowestIndex) {
  // Every via-RIS candidate linearizes at the same RIS position.
  const Scenario s = default_scenario();
  NpaOptions o;
  o.sigma_ure = 0.0;
  const auto r = npa_select(s, s.user_index("outdoor"), o);
  EXPECT_EQ(r.selected, 3u);
  EXPECT_TRUE(r.tie_broken);
}

TEST(Npa, DuplicatePositionsTie) {
  Scenario s = default_scenario();
  s.satellites[8].position = s.satellites[4].position;
  NpaOptions o;
  o.sigma_ure = 0.0;
  o.score_rows = ViaRisRows::kSatelliteLineOfSight;
  o.candidates = {8, 4};
  const auto r = npa_select(s, s.user_index("outdoor"), o);
  EXPECT_TRUE(r.tie_broken);
  EXPECT_EQ(r.selected, 8u);  // first listed candidate among equals
}

TEST(Npa, NoDefinedScoreThrows) {
  const Scenario s = default_scenario();
  NpaOptions o;
  o.sigma_ure = 0.0;
  // Indoor: no direct satellites, one via-RIS row, PDoP never exists.
  EXPECT_THROW(npa_select(s, s.user_index("indoor"), o), NoFeasibleSelection);
  o.candidates = {42};
  EXPECT_THROW(npa_select(s, s.user_index("outdoor"), o), ValidationError);
}

TEST(Npa, DeterministicForSeedAndTrial) {
  const Scenario s = default_scenario();
  NpaOptions o;
  o.seed = 77;
  o.trial = 3;
  o.score_rows = ViaRisRows::kSatelliteLineOfSight;
  const auto a = npa_select(s, 1, o);
  const auto b = npa_select(s, 1, o);
  EXPECT_EQ(a.selected, b.selected);
  EXPECT_EQ(a.score, b.score);
}

TEST(Rsa, UniformOverCandidates) {
  const std::vector<std::size_t> c{3, 4, 5, 6};
  std::map<std::size_t, int> counts;
  RngStream rng(12);
  for (int i = 0; i < 8000; ++i) ++counts[rsa_select(c, rng).selected];
  ASSERT_EQ(counts.size(), 4u);
  for (const auto& [k, n] : counts) EXPECT_NEAR(n, 2000, 200) << k;
  EXPECT_THROW(rsa_select(std::vector<std::size_t>{}, rng), NoFeasibleSelection);
}

TEST(Rsa, ScorerFillsScores) {
  const std::vector<std::size_t> c{1, 2};
  RngStream rng(1);
  const auto r = rsa_select(c, rng, [](std::size_t k) { return std::optional<double>(10.0 * k); });
  EXPECT_EQ(r.score, 10.0 * r.selected);
  EXPECT_EQ(r.per_candidate.size(), 2u);
}

TEST(Cpa, PicksTheLargestSumRate) {
  const Scenario s = with_ris_elements(default_scenario(), 8);
  const PowerAllocation a(0.8, 0.2, InacMode::kNoInac, true);
  CpaOptions o;
  o.trials = 16;
  o.seed = 4;
  o.candidates = {3, 4, 5};
  const auto r = cpa_select(s, a, o);
  for (const auto& c : r.per_candidate) {
    ASSERT_TRUE(c.score);
    EXPECT_LE(*c.score, r.score);
  }
  ErgodicOptions eo;
  eo.trials = 16;
  eo.seed = 4;
  const auto direct = ergodic_rate(s, a, r.selected, eo);
  EXPECT_DOUBLE_EQ(r.score, direct.outdoor.comm + direct.indoor.comm);
}

TEST(Cpa, DefaultsToEverySatellite) {
  const Scenario s = with_ris_elements(default_scenario(), 4);
  CpaOptions o;
  o.trials = 4;
  const auto r = cpa_select(s, PowerAllocation(0.8, 0.2, InacMode::kNoInac, true), o);
  EXPECT_EQ(r.per_candidate.size(), 10u);
}
