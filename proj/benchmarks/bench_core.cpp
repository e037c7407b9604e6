#include <benchmark/benchmark.h>

#include "inac/channel.hpp"
#include "inac/positioning.hpp"
#include "inac/rng.hpp"
#include "inac/scenario.hpp"
#include "inac/star_ris.hpp"

using namespace inac;

namespace {

std::vector<PseudorangeObs> observe(const Scenario& s, const std::string& anchors, double sigma) {
  RngStream rng(1);
  return simulate_pseudoranges(s, s.user_index("outdoor"), parse_anchors(anchors), sigma, rng);
}

void BM_LsmSolve(benchmark::State& state) {
  const Scenario s = default_scenario();
  const auto obs = observe(s, "d1,d2,d3,d4", 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(lsm_solve(obs));
}
BENCHMARK(BM_LsmSolve);

// Exactly determined 3 + 1 solve seeded at the previous fix.
void BM_LsmSolveWarm(benchmark::State& state) {
  const Scenario s = default_scenario();
  const auto obs = observe(s, "d1,d2,d3,r4", 1.0);
  SolverOptions o;
  o.initial_guess = s.users[s.user_index("outdoor")].position;
  for (auto _ : state) benchmark::DoNotOptimize(lsm_solve(obs, o));
}
BENCHMARK(BM_LsmSolveWarm);

void BM_Pdop(benchmark::State& state) {
  const Scenario s = default_scenario();
  const auto obs = observe(s, "d1,d2,d3,d4,r5,r6", 0.0);
  const auto design = build_design_matrix(obs, s.users[s.user_index("outdoor")].position);
  for (auto _ : state) benchmark::DoNotOptimize(pdop(design));
}
BENCHMARK(BM_Pdop);

void BM_RealizeChannels(benchmark::State& state) {
  const Scenario s = with_ris_elements(default_scenario(), static_cast<std::size_t>(state.range(0)));
  RngStream rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(realize_channels(s, rng));
}
BENCHMARK(BM_RealizeChannels)->Arg(16)->Arg(64)->Arg(256);

void BM_AlignPhases(benchmark::State& state) {
  const Scenario s = with_ris_elements(default_scenario(), static_cast<std::size_t>(state.range(0)));
  RngStream rng(3);
  const auto ch = realize_channels(s, rng);
  const auto cascade = build_cascade(ch.ris_to_user[s.user_index("outdoor")], ch.sat_to_ris[0]);
  for (auto _ : state) benchmark::DoNotOptimize(align_phases(cascade, 0.3));
}
BENCHMARK(BM_AlignPhases)->Arg(16)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
