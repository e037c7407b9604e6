#include "inac/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <json.hpp>

#include "inac/channel.hpp"
#include "inac/errors.hpp"
#include "inac/parallel.hpp"
#include "inac/rng.hpp"
#include "inac/selection.hpp"

#ifndef INAC_BUILD_DESCRIBE
#define INAC_BUILD_DESCRIBE "unknown"
#endif

namespace inac {

using nlohmann::json;

namespace {

struct KindName {
  ExperimentKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {ExperimentKind::kErrorVsPdop, "error_vs_pdop"},
    {ExperimentKind::kErrorVsNumSats, "error_vs_num_sats"},
    {ExperimentKind::kPowerVsElements, "power_vs_elements"},
    {ExperimentKind::kPdopVsDirectSats, "pdop_vs_direct_sats"},
    {ExperimentKind::kRateVsElements, "rate_vs_elements"},
    {ExperimentKind::kRateVsAllocFactor, "rate_vs_alloc_factor"},
    {ExperimentKind::kTradeoffVsDistance, "tradeoff_vs_distance"},
};

const char* rows_name(ViaRisRows r) {
  return r == ViaRisRows::kVirtualAnchor ? "virtual_anchor" : "satellite_los";
}

bool is_whole(double v) { return v >= 1.0 && std::floor(v) == v; }

}  // namespace

const char* to_string(ExperimentKind kind) {
  for (const auto& k : kKindNames)
    if (k.kind == kind) return k.name;
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view text) {
  for (const auto& k : kKindNames)
    if (text == k.name) return k.kind;
  throw ValidationError("unknown experiment kind '" + std::string(text) + "'");
}

std::string build_describe() { return INAC_BUILD_DESCRIBE; }

void ExperimentSpec::validate() const {
  if (trials < 1) throw ValidationError("experiment: trials must be >= 1");
  if (sweep.empty()) throw ValidationError("experiment: sweep must not be empty");
  for (double v : sweep)
    if (!std::isfinite(v)) throw ValidationError("experiment: sweep values must be finite");
  if (!(sigma_ure >= 0.0)) throw ValidationError("experiment: sigma_URE must be >= 0");
  if (!(epsilon > 0.0)) throw ValidationError("experiment: epsilon must be > 0");
  if (max_iterations < 1) throw ValidationError("experiment: max_iterations must be >= 1");
  if (n_elements < 1) throw ValidationError("experiment: N must be >= 1");
  if (cpa_trials < 1) throw ValidationError("experiment: CPA trials must be >= 1");
  if (ris_user_distance && !(*ris_user_distance > 0.0))
    throw ValidationError("experiment: RIS-user distance must be > 0");
  if (transmit_power_w && !(*transmit_power_w > 0.0))
    throw ValidationError("experiment: transmit power must be > 0");
  scenario.validate();

  const std::size_t sats = scenario.satellites.size();
  switch (kind) {
    case ExperimentKind::kErrorVsPdop:
      for (double v : sweep)
        if (!is_whole(v) || v < 3 || v >= static_cast<double>(sats))
          throw ValidationError("error_vs_pdop: sweep holds outdoor direct-anchor counts in [3, satellites)");
      break;
    case ExperimentKind::kErrorVsNumSats:
      for (double v : sweep)
        if (!is_whole(v) || v < 4 || v > static_cast<double>(sats))
          throw ValidationError("error_vs_num_sats: anchor counts must lie in [4, satellites]");
      break;
    case ExperimentKind::kPdopVsDirectSats:
      for (double v : sweep)
        if (!is_whole(v) || v >= static_cast<double>(sats))
          throw ValidationError("pdop_vs_direct_sats: direct counts must lie in [1, satellites)");
      break;
    case ExperimentKind::kPowerVsElements:
    case ExperimentKind::kRateVsElements:
      for (double v : sweep)
        if (!is_whole(v)) throw ValidationError("element sweeps must hold positive integers");
      break;
    case ExperimentKind::kRateVsAllocFactor:
      for (double v : sweep)
        if (!(v > 0.0 && v < 1.0) || v == 0.5)
          throw ValidationError("rate_vs_alloc_factor: omega_C must lie in (0, 1) and differ from 0.5");
      break;
    case ExperimentKind::kTradeoffVsDistance:
      for (double v : sweep)
        if (!(v > 0.0)) throw ValidationError("tradeoff_vs_distance: distances must be > 0");
      break;
  }
  if (kind != ExperimentKind::kRateVsAllocFactor) (void)allocation_for(*this, InacMode::kNoInac);
}

std::string ExperimentSpec::parameters_json() const {
  json j;
  j["kind"] = to_string(kind);
  j["preset"] = preset;
  j["sweep"] = sweep;
  j["trials"] = trials;
  j["seed"] = seed;
  j["sigma_ure_m"] = sigma_ure;
  j["epsilon_m"] = epsilon;
  j["max_iterations"] = max_iterations;
  j["ris_user_distance_m"] = ris_user_distance ? json(*ris_user_distance) : json(nullptr);
  j["npa_rows"] = rows_name(npa_rows);
  j["warm_start"] = warm_start;
  j["n_elements"] = n_elements;
  j["omega_c"] = omega_c;
  j["omega_n"] = omega_n;
  j["paper_literal"] = paper_literal;
  j["threshold_nav_bits"] = thresholds.nav;
  j["threshold_comm_bits"] = thresholds.comm;
  j["threshold_snr"] = thresholds.snr;
  j["transmit_power_w"] = transmit_power_w ? json(*transmit_power_w) : json(nullptr);
  j["cpa_trials"] = cpa_trials;
  j["scenario"] = json::parse(scenario_to_json(scenario, -1));
  return j.dump();
}

std::uint64_t ExperimentSpec::parameters_hash() const {
  // FNV-1a over the canonical parameter block.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : parameters_json()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::string> preset_names() { return {"fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"}; }

ExperimentSpec preset(std::string_view name) {
  ExperimentSpec s;
  s.preset = std::string(name);
  s.seed = kDefaultSeed;
  if (name == "fig3") {
    s.kind = ExperimentKind::kErrorVsPdop;
    s.sweep = {3};
    s.trials = 500;
    s.ris_user_distance = 10.0;
    s.notes =
        "geometries: every 3-satellite direct subset of the table plus one via-RIS satellite (the lowest index "
        "outside the subset) for the outdoor user; every 4-satellite via-RIS subset for the indoor user; "
        "users moved to 10 m from the RIS";
  } else if (name == "fig4") {
    s.kind = ExperimentKind::kErrorVsNumSats;
    s.sweep = {4, 5, 6, 7, 8, 9, 10};
    s.trials = 500;
    s.ris_user_distance = 5.0;
    s.npa_rows = ViaRisRows::kSatelliteLineOfSight;
    s.notes =
        "outdoor: k-1 direct satellites (1..k-1) plus one via-RIS satellite chosen by NPA or RSA from the rest; "
        "indoor: k via-RIS satellites, NPA takes the subset with the smallest satellite line-of-sight PDoP, "
        "RSA a uniform random subset; users 5 m from the RIS";
  } else if (name == "fig5") {
    s.kind = ExperimentKind::kPowerVsElements;
    s.sweep = {16, 32, 64, 128, 256};
    s.trials = 500;
    s.omega_c = 0.65;
    s.omega_n = 0.35;
    s.thresholds = {1.0, 2.0, 0.0};
    s.notes =
        "minimum power against the mean co-phased gain over the trials; INAC satellite chosen once by CPA among "
        "the outdoor user's non-visible satellites; CO-INAC uses the swapped pair";
  } else if (name == "fig6") {
    s.kind = ExperimentKind::kPdopVsDirectSats;
    s.sweep = {3, 4, 5, 6, 7, 8, 9};
    s.trials = 1;
    s.notes = "outdoor user at its true position; k direct satellites 1..k, with-RIS adds satellite k+1 via the RIS";
  } else if (name == "fig7") {
    s.kind = ExperimentKind::kRateVsElements;
    s.sweep = {16, 32, 64, 128, 256, 512};
    s.trials = 1000;
    s.omega_c = 0.8;
    s.omega_n = 0.2;
    s.notes = "INAC satellite chosen once by CPA among the outdoor user's non-visible satellites; CO-INAC uses the "
              "swapped pair";
  } else if (name == "fig8") {
    s.kind = ExperimentKind::kRateVsAllocFactor;
    for (int i = 1; i <= 19; ++i)
      if (i != 10) s.sweep.push_back(i * 0.05);
    s.trials = 1000;
    s.transmit_power_w = dbm_to_watts(46.0);
    s.notes = "omega_N = 1 - omega_C; CO-INAC below 0.5, NO-INAC above";
  } else if (name == "fig9") {
    s.kind = ExperimentKind::kTradeoffVsDistance;
    for (int i = 0; i <= 10; ++i) s.sweep.push_back(20.5e6 + 0.5e6 * i);
    s.trials = 500;
    s.omega_c = 0.8;
    s.omega_n = 0.2;
    s.notes =
        "satellites 1-3 direct to the outdoor user plus one INAC satellite on a sphere of the mean table orbit "
        "radius at the swept distance from the RIS (CO-INAC, swapped pair)";
  } else {
    throw ValidationError("unknown preset '" + std::string(name) + "' (expected fig3..fig9)");
  }
  return s;
}

PowerAllocation allocation_for(const ExperimentSpec& spec, InacMode mode) {
  const double hi = std::max(spec.omega_c, spec.omega_n);
  const double lo = std::min(spec.omega_c, spec.omega_n);
  return mode == InacMode::kNoInac ? PowerAllocation(hi, lo, mode, spec.paper_literal)
                                   : PowerAllocation(lo, hi, mode, spec.paper_literal);
}

EcefPoint place_at_distance(const EcefPoint& origin, double orbit_radius, double dist, double azimuth) {
  const double r0 = origin.norm();
  if (!(r0 > 0.0) || !(dist > 0.0) || !(orbit_radius > 0.0))
    throw ValidationError("place_at_distance: radii and distance must be > 0");
  const double sin_e = (orbit_radius * orbit_radius - r0 * r0 - dist * dist) / (2.0 * dist * r0);
  if (sin_e > 1.0 || sin_e < -1.0)
    throw ValidationError("place_at_distance: no point of that orbit radius lies at the requested distance");
  const EcefPoint up = geocentric_up(origin);
  EcefPoint north = EcefPoint{0, 0, 1} - up * up.z;
  if (!(north.norm() > 0.0)) north = {1, 0, 0};
  north = north * (1.0 / north.norm());
  const EcefPoint east{north.y * up.z - north.z * up.y, north.z * up.x - north.x * up.z,
                       north.x * up.y - north.y * up.x};
  const EcefPoint horizontal = north * std::cos(azimuth) + east * std::sin(azimuth);
  const double cos_e = std::sqrt(1.0 - sin_e * sin_e);
  return origin + (horizontal * cos_e + up * sin_e) * dist;
}

namespace {

// Stream-path tags keep the experiments' random numbers apart.
enum : std::uint64_t { kTagPositioning = 1, kTagSelection = 2, kTagChannels = 3, kTagCpa = 4 };

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  return RngStream(seed, path).key();
}

template <typename Fn>
void for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::optional<double> try_pdop(const DesignMatrix& d) {
  try {
    return pdop(d);
  } catch (const PdopUndefined&) {
    return std::nullopt;
  }
}

Cell opt_cell(const std::optional<double>& v) { return v ? Cell(*v) : Cell(std::monostate{}); }

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return s;
}

std::string id_list(const std::vector<std::size_t>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? " " : "") + std::to_string(ids[i] + 1);
  return s;
}

Scenario prepared_scenario(const ExperimentSpec& spec) {
  Scenario s = spec.scenario;
  if (spec.ris_user_distance)
    for (std::size_t u = 0; u < s.users.size(); ++u) s = with_ris_user_distance(std::move(s), u, *spec.ris_user_distance);
  return with_ris_elements(std::move(s), spec.n_elements);
}

std::size_t require_user(const Scenario& s, Placement p, const char* what) {
  const auto u = s.find_user(p);
  if (!u) throw ValidationError(std::string(what) + " needs an " +
                                (p == Placement::kOutdoorReflectSide ? "outdoor" : "indoor") + " user");
  return *u;
}

void report(const ExperimentSpec& spec, std::size_t done, std::size_t total) {
  if (spec.progress) spec.progress(done, total);
}

struct TrialOutcome {
  double error = 0.0;
  bool degenerate = false;
};

SolverOptions solver_options(const ExperimentSpec& spec, const Scenario& s, std::size_t user,
                             const std::vector<AnchorRef>& anchors) {
  SolverOptions so;
  so.epsilon = spec.epsilon;
  so.max_iterations = spec.max_iterations;
  const bool any_direct =
      std::any_of(anchors.begin(), anchors.end(), [](const AnchorRef& a) { return a.kind == AnchorKind::kDirect; });
  if (spec.warm_start && any_direct) so.initial_guess = s.users[user].position;
  return so;
}

TrialOutcome solve_trial(const Scenario& s, std::size_t user, const std::vector<AnchorRef>& anchors,
                         const ExperimentSpec& spec, RngStream& rng) {
  const auto obs = simulate_pseudoranges(s, user, anchors, spec.sigma_ure, rng);
  const SolverOptions so = solver_options(spec, s, user, anchors);
  const auto sol = lsm_solve(obs, so);
  return {position_error(sol, s.users[user].position), sol.degenerate};
}

// INAC satellite for the link experiments: CPA over the outdoor user's
// non-visible satellites (every satellite when there is no outdoor user).
std::size_t inac_satellite(const ExperimentSpec& spec, const Scenario& s) {
  CpaOptions co;
  co.trials = spec.cpa_trials;
  co.seed = derive_seed(spec.seed, {kTagCpa});
  co.workers = spec.workers;
  co.transmit_power_w = spec.transmit_power_w;
  if (const auto u = s.find_user(Placement::kOutdoorReflectSide)) co.candidates = s.visibility[*u].invisible;
  return cpa_select(s, allocation_for(spec, InacMode::kNoInac), co).selected;
}

std::vector<PairGains> trial_gains(const Scenario& s, std::size_t satellite, std::size_t trials,
                                   std::uint64_t seed, std::size_t workers) {
  std::vector<PairGains> g(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    RngStream rng(seed, {t});
    g[t] = aligned_gains(s, realize_channels(s, rng), satellite);
  });
  return g;
}

ExperimentResult run_error_vs_pdop(const ExperimentSpec& spec) {
  const Scenario s = prepared_scenario(spec);
  const std::size_t outdoor = require_user(s, Placement::kOutdoorReflectSide, "error_vs_pdop");
  const std::size_t indoor = require_user(s, Placement::kIndoorTransmitSide, "error_vs_pdop");
  const std::size_t ns = s.satellites.size();

  struct Geometry {
    std::size_t user;
    std::vector<AnchorRef> anchors;
    std::optional<double> pdop;
    std::optional<double> constellation_pdop;
  };
  std::vector<Geometry> geos;
  const auto add = [&](std::size_t user, std::vector<AnchorRef> anchors) {
    RngStream none(0);
    const auto obs = simulate_pseudoranges(s, user, anchors, 0.0, none);
    const EcefPoint truth = s.users[user].position;
    geos.push_back({user, anchors, try_pdop(build_design_matrix(obs, truth)),
                    try_pdop(build_design_matrix(obs, truth, 1.0, ViaRisRows::kSatelliteLineOfSight, s.satellites))});
  };
  for (double k : spec.sweep) {
    for_each_combination(ns, static_cast<std::size_t>(k), [&](const std::vector<std::size_t>& idx) {
      std::vector<AnchorRef> a;
      for (std::size_t i : idx) a.push_back({AnchorKind::kDirect, i});
      std::size_t via = 0;
      while (std::find(idx.begin(), idx.end(), via) != idx.end()) ++via;
      a.push_back({AnchorKind::kViaRis, via});
      add(outdoor, std::move(a));
    });
  }
  for_each_combination(ns, 4, [&](const std::vector<std::size_t>& idx) {
    std::vector<AnchorRef> a;
    for (std::size_t i : idx) a.push_back({AnchorKind::kViaRis, i});
    add(indoor, std::move(a));
  });

  const std::size_t t_count = spec.trials;
  ExperimentResult out;
  out.table.columns = {"geometry", "user", "anchors", "pdop", "constellation_pdop", "mean_error_m", "stderr_m",
                       "degenerate_fraction", "trials"};
  if (spec.raw) out.raw = ResultTable{{"geometry", "user", "trial", "error_m", "degenerate"}, {}, {}, 0.0};
  std::vector<TrialOutcome> res(t_count);
  for (std::size_t g = 0; g < geos.size(); ++g) {
    parallel_for(t_count, spec.workers, [&](std::size_t t) {
      RngStream rng(spec.seed, {kTagPositioning, g, t});
      res[t] = solve_trial(s, geos[g].user, geos[g].anchors, spec, rng);
    });
    std::vector<double> errs(t_count);
    std::size_t degenerate = 0;
    for (std::size_t t = 0; t < t_count; ++t) {
      errs[t] = res[t].error;
      degenerate += res[t].degenerate;
      if (out.raw)
        out.raw->add_row({static_cast<std::int64_t>(g), s.users[geos[g].user].name, static_cast<std::int64_t>(t),
                          res[t].error, static_cast<std::int64_t>(res[t].degenerate)});
    }
    const auto ms = mean_stderr(errs);
    out.table.add_row({static_cast<std::int64_t>(g), s.users[geos[g].user].name, format_anchors(geos[g].anchors),
                       opt_cell(geos[g].pdop), opt_cell(geos[g].constellation_pdop), ms.mean, ms.std_error,
                       static_cast<double>(degenerate) / static_cast<double>(t_count),
                       static_cast<std::int64_t>(t_count)});
    report(spec, g + 1, geos.size());
  }
  return out;
}

ExperimentResult run_error_vs_num_sats(const ExperimentSpec& spec) {
  const Scenario base = prepared_scenario(spec);
  const std::size_t outdoor = require_user(base, Placement::kOutdoorReflectSide, "error_vs_num_sats");
  const std::size_t indoor = require_user(base, Placement::kIndoorTransmitSide, "error_vs_num_sats");
  const std::size_t ns = base.satellites.size();
  const std::size_t t_count = spec.trials;

  ExperimentResult out;
  out.table.columns = {"user",     "anchor_count", "algorithm",           "mean_error_m", "stderr_m",
                       "mean_pdop", "pdop_rows",   "degenerate_fraction", "trials"};
  if (spec.raw)
    out.raw = ResultTable{{"user", "anchor_count", "algorithm", "trial", "selected", "pdop", "error_m"}, {}, {}, 0.0};

  struct Trial {
    TrialOutcome npa, rsa;
    std::optional<double> npa_pdop, rsa_pdop;
    std::string npa_sel, rsa_sel;
  };
  std::vector<Trial> res(t_count);
  const auto emit = [&](const std::string& user, std::size_t k, ViaRisRows rows) {
    for (const bool npa : {true, false}) {
      std::vector<double> errs(t_count), pd;
      std::size_t degenerate = 0;
      for (std::size_t t = 0; t < t_count; ++t) {
        const auto& o = npa ? res[t].npa : res[t].rsa;
        const auto& p = npa ? res[t].npa_pdop : res[t].rsa_pdop;
        errs[t] = o.error;
        degenerate += o.degenerate;
        if (p) pd.push_back(*p);
        if (out.raw)
          out.raw->add_row({user, static_cast<std::int64_t>(k), npa ? "npa" : "rsa", static_cast<std::int64_t>(t),
                            npa ? res[t].npa_sel : res[t].rsa_sel, opt_cell(p), o.error});
      }
      const auto ms = mean_stderr(errs);
      out.table.add_row({user, static_cast<std::int64_t>(k), npa ? "npa" : "rsa", ms.mean, ms.std_error,
                         pd.empty() ? Cell(std::monostate{}) : Cell(mean_stderr(pd).mean), rows_name(rows),
                         static_cast<double>(degenerate) / static_cast<double>(t_count),
                         static_cast<std::int64_t>(t_count)});
    }
  };

  const std::size_t cells = spec.sweep.size() * 2;
  std::size_t done = 0;
  for (std::size_t ki = 0; ki < spec.sweep.size(); ++ki) {
    const auto k = static_cast<std::size_t>(spec.sweep[ki]);

    // Outdoor: satellites 1..k-1 direct, one NLoS satellite through the RIS.
    Scenario s = base;
    s.visibility[outdoor].visible.clear();
    s.visibility[outdoor].invisible.clear();
    for (std::size_t i = 0; i < ns; ++i) (i + 1 < k ? s.visibility[outdoor].visible : s.visibility[outdoor].invisible).push_back(i);
    const auto& vis = s.visibility[outdoor];
    const std::uint64_t noise_seed = derive_seed(spec.seed, {kTagPositioning, k});
    parallel_for(t_count, spec.workers, [&](std::size_t t) {
      NpaOptions no;
      no.sigma_ure = spec.sigma_ure;
      no.epsilon = spec.epsilon;
      no.max_iterations = spec.max_iterations;
      no.seed = noise_seed;
      no.trial = t;
      no.score_rows = spec.npa_rows;
      if (spec.warm_start && !vis.visible.empty()) no.initial_guess = s.users[outdoor].position;
      const auto npa = npa_select(s, outdoor, no);
      RngStream pick(spec.seed, {kTagSelection, k, t});
      const auto rsa = rsa_select(vis.invisible, pick);
      for (const bool is_npa : {true, false}) {
        const std::size_t v = is_npa ? npa.selected : rsa.selected;
        std::vector<AnchorRef> anchors;
        for (std::size_t i : vis.visible) anchors.push_back({AnchorKind::kDirect, i});
        anchors.push_back({AnchorKind::kViaRis, v});
        RngStream rng(noise_seed, {t});
        const auto obs = simulate_pseudoranges(s, outdoor, anchors, spec.sigma_ure, rng);
        const SolverOptions so = solver_options(spec, s, outdoor, anchors);
        const auto sol = lsm_solve(obs, so);
        TrialOutcome o{position_error(sol, s.users[outdoor].position), sol.degenerate};
        std::optional<double> p;
        if (!sol.degenerate) p = try_pdop(build_design_matrix(obs, sol.position, 1.0, spec.npa_rows, s.satellites));
        (is_npa ? res[t].npa : res[t].rsa) = o;
        (is_npa ? res[t].npa_pdop : res[t].rsa_pdop) = p;
        (is_npa ? res[t].npa_sel : res[t].rsa_sel) = std::to_string(v + 1);
      }
    });
    emit(s.users[outdoor].name, k, spec.npa_rows);
    report(spec, ++done, cells);

    // Indoor: k satellites, all through the RIS.
    const EcefPoint truth = base.users[indoor].position;
    const auto subset_pdop = [&](const std::vector<std::size_t>& idx) {
      DesignMatrix d;
      for (std::size_t i : idx) d.rows.push_back(los_unit_row(base.satellites[i].position, truth));
      return try_pdop(d);
    };
    std::vector<std::size_t> best;
    std::optional<double> best_pdop;
    for_each_combination(ns, k, [&](const std::vector<std::size_t>& idx) {
      const auto p = subset_pdop(idx);
      if (p && (!best_pdop || *p < *best_pdop * (1.0 - kTieTolerance))) {
        best_pdop = p;
        best = idx;
      }
    });
    parallel_for(t_count, spec.workers, [&](std::size_t t) {
      RngStream pick(spec.seed, {kTagSelection, k, t, 1});
      std::vector<std::size_t> pool(ns);
      std::iota(pool.begin(), pool.end(), 0);
      for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + pick.index(ns - i)]);
      std::vector<std::size_t> random_subset(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
      std::sort(random_subset.begin(), random_subset.end());
      for (const bool is_npa : {true, false}) {
        const auto& subset = is_npa ? best : random_subset;
        std::vector<AnchorRef> anchors;
        for (std::size_t i : subset) anchors.push_back({AnchorKind::kViaRis, i});
        RngStream rng(noise_seed, {t, 1});
        (is_npa ? res[t].npa : res[t].rsa) = solve_trial(base, indoor, anchors, spec, rng);
        (is_npa ? res[t].npa_pdop : res[t].rsa_pdop) = is_npa ? best_pdop : subset_pdop(subset);
        (is_npa ? res[t].npa_sel : res[t].rsa_sel) = id_list(subset);
      }
    });
    emit(base.users[indoor].name, k, ViaRisRows::kSatelliteLineOfSight);
    report(spec, ++done, cells);
  }
  return out;
}

ExperimentResult run_power_vs_elements(const ExperimentSpec& spec) {
  const Scenario base = prepared_scenario(spec);
  const std::size_t sat = inac_satellite(spec, base);
  const double noise = base.physics.noise_power_w();
  const std::uint64_t seed = derive_seed(spec.seed, {kTagChannels});

  ExperimentResult out;
  out.table.columns = {"n_elements",   "user",     "mode",     "inac_satellite", "mean_gain",
                       "nav_power_w",  "comm_power_w", "power_w", "power_dbm", "feasible"};
  if (spec.raw) out.raw = ResultTable{{"n_elements", "trial", "outdoor_gain", "indoor_gain"}, {}, {}, 0.0};

  for (std::size_t ni = 0; ni < spec.sweep.size(); ++ni) {
    const auto n = static_cast<std::size_t>(spec.sweep[ni]);
    const Scenario s = with_ris_elements(base, n);
    const auto g = trial_gains(s, sat, spec.trials, seed, spec.workers);
    std::vector<double> go(g.size()), gi(g.size());
    for (std::size_t t = 0; t < g.size(); ++t) {
      go[t] = g[t].outdoor;
      gi[t] = g[t].indoor;
      if (out.raw) out.raw->add_row({static_cast<std::int64_t>(n), static_cast<std::int64_t>(t), go[t], gi[t]});
    }
    for (const Placement p : {Placement::kOutdoorReflectSide, Placement::kIndoorTransmitSide}) {
      const auto u = s.find_user(p);
      if (!u) continue;
      const double gain = mean_stderr(p == Placement::kOutdoorReflectSide ? go : gi).mean;
      for (const InacMode mode : {InacMode::kNoInac, InacMode::kCoInac}) {
        const auto r = min_transmit_power(spec.thresholds, gain, allocation_for(spec, mode), noise);
        const auto finite = [&](double w) { return r.feasible || std::isfinite(w) ? Cell(w) : Cell(std::monostate{}); };
        out.table.add_row({static_cast<std::int64_t>(n), s.users[*u].name, to_string(mode),
                           static_cast<std::int64_t>(sat + 1), gain, finite(r.nav_power_w), finite(r.comm_power_w),
                           r.feasible ? Cell(r.power_w) : Cell(std::monostate{}),
                           r.feasible ? Cell(watts_to_dbm(r.power_w)) : Cell(std::monostate{}),
                           static_cast<std::int64_t>(r.feasible)});
      }
    }
    report(spec, ni + 1, spec.sweep.size());
  }
  return out;
}

ExperimentResult run_pdop_vs_direct_sats(const ExperimentSpec& spec) {
  const Scenario s = prepared_scenario(spec);
  const std::size_t outdoor = require_user(s, Placement::kOutdoorReflectSide, "pdop_vs_direct_sats");
  const EcefPoint truth = s.users[outdoor].position;

  ExperimentResult out;
  out.table.columns = {"direct_count", "pdop_no_ris", "no_ris_defined", "pdop_with_ris", "with_ris_defined",
                       "via_ris_satellite", "pdop_with_ris_satellite_rows"};
  for (std::size_t ki = 0; ki < spec.sweep.size(); ++ki) {
    const auto k = static_cast<std::size_t>(spec.sweep[ki]);
    std::vector<AnchorRef> anchors;
    for (std::size_t i = 0; i < k; ++i) anchors.push_back({AnchorKind::kDirect, i});
    RngStream none(0);
    const auto direct = simulate_pseudoranges(s, outdoor, anchors, 0.0, none);
    const auto no_ris = try_pdop(build_design_matrix(direct, truth));
    anchors.push_back({AnchorKind::kViaRis, k});
    const auto with = simulate_pseudoranges(s, outdoor, anchors, 0.0, none);
    const auto with_ris = try_pdop(build_design_matrix(with, truth));
    const auto with_sat =
        try_pdop(build_design_matrix(with, truth, 1.0, ViaRisRows::kSatelliteLineOfSight, s.satellites));
    out.table.add_row({static_cast<std::int64_t>(k), opt_cell(no_ris), static_cast<std::int64_t>(no_ris.has_value()),
                       opt_cell(with_ris), static_cast<std::int64_t>(with_ris.has_value()),
                       static_cast<std::int64_t>(k + 1), opt_cell(with_sat)});
    report(spec, ki + 1, spec.sweep.size());
  }
  return out;
}

void add_rate_rows(ResultTable& table, std::vector<Cell> prefix, const Scenario& s, const ErgodicRates& r,
                   const PowerAllocation& alloc) {
  for (const Placement p : {Placement::kOutdoorReflectSide, Placement::kIndoorTransmitSide}) {
    const auto u = s.find_user(p);
    if (!u) continue;
    const UserRates& ur = p == Placement::kOutdoorReflectSide ? r.outdoor : r.indoor;
    std::vector<Cell> row = prefix;
    row.insert(row.end(), {s.users[*u].name, ur.comm, ur.comm_stderr, ur.nav, ur.nav_stderr, rate_ceiling(alloc),
                           ur.mean_gain});
    table.add_row(std::move(row));
  }
}

ExperimentResult run_rate_vs_elements(const ExperimentSpec& spec) {
  const Scenario base = prepared_scenario(spec);
  const std::size_t sat = inac_satellite(spec, base);
  ExperimentResult out;
  out.table.columns = {"n_elements", "mode",     "omega_c",     "omega_n",        "inac_satellite", "user",
                       "comm_rate",  "comm_stderr", "nav_rate", "nav_stderr", "rate_ceiling",   "mean_gain"};
  ErgodicOptions eo;
  eo.trials = spec.trials;
  eo.seed = derive_seed(spec.seed, {kTagChannels});
  eo.workers = spec.workers;
  eo.transmit_power_w = spec.transmit_power_w;
  for (std::size_t ni = 0; ni < spec.sweep.size(); ++ni) {
    const auto n = static_cast<std::size_t>(spec.sweep[ni]);
    const Scenario s = with_ris_elements(base, n);
    for (const InacMode mode : {InacMode::kNoInac, InacMode::kCoInac}) {
      const auto alloc = allocation_for(spec, mode);
      const auto r = ergodic_rate(s, alloc, sat, eo);
      add_rate_rows(out.table,
                    {static_cast<std::int64_t>(n), to_string(mode), alloc.omega_c(), alloc.omega_n(),
                     static_cast<std::int64_t>(sat + 1)},
                    s, r, alloc);
    }
    report(spec, ni + 1, spec.sweep.size());
  }
  return out;
}

ExperimentResult run_rate_vs_alloc_factor(const ExperimentSpec& spec) {
  const Scenario s = prepared_scenario(spec);
  const std::size_t sat = inac_satellite(spec, s);
  const double power = spec.transmit_power_w.value_or(s.satellites[sat].transmit_power_w);
  const double noise = s.physics.noise_power_w();
  // Gains do not depend on the allocation: draw them once and reuse.
  const auto g = trial_gains(s, sat, spec.trials, derive_seed(spec.seed, {kTagChannels}), spec.workers);

  ExperimentResult out;
  out.table.columns = {"omega_c",   "omega_n",     "mode",     "inac_satellite", "user",     "comm_rate",
                       "comm_stderr", "nav_rate", "nav_stderr", "rate_ceiling", "mean_gain"};
  for (std::size_t wi = 0; wi < spec.sweep.size(); ++wi) {
    const double wc = spec.sweep[wi];
    const InacMode mode = wc > 0.5 ? InacMode::kNoInac : InacMode::kCoInac;
    const PowerAllocation alloc(wc, 1.0 - wc, mode, spec.paper_literal);
    ErgodicRates r;
    r.trials = g.size();
    for (const bool outdoor : {true, false}) {
      std::vector<double> nav(g.size()), comm(g.size()), gain(g.size());
      for (std::size_t t = 0; t < g.size(); ++t) {
        gain[t] = outdoor ? g[t].outdoor : g[t].indoor;
        const auto rr = rates(sinr({gain[t], power, noise}, alloc));
        nav[t] = rr.nav;
        comm[t] = rr.comm;
      }
      const auto a = mean_stderr(nav);
      const auto b = mean_stderr(comm);
      (outdoor ? r.outdoor : r.indoor) = {a.mean, b.mean, a.std_error, b.std_error, mean_stderr(gain).mean};
    }
    add_rate_rows(out.table, {wc, alloc.omega_n(), to_string(mode), static_cast<std::int64_t>(sat + 1)}, s, r,
                  alloc);
    report(spec, wi + 1, spec.sweep.size());
  }
  return out;
}

ExperimentResult run_tradeoff_vs_distance(const ExperimentSpec& spec) {
  const Scenario prepared = prepared_scenario(spec);
  const std::size_t outdoor = require_user(prepared, Placement::kOutdoorReflectSide, "tradeoff_vs_distance");
  if (prepared.satellites.size() < 3) throw ValidationError("tradeoff_vs_distance needs three satellites");

  double orbit = 0.0;
  for (const auto& sat : prepared.satellites) orbit += sat.position.norm();
  orbit /= static_cast<double>(prepared.satellites.size());

  // Three navigation satellites seen directly plus one INAC satellite.
  Scenario base = prepared;
  base.satellites.resize(4);
  for (std::size_t u = 0; u < base.users.size(); ++u) {
    auto& v = base.visibility[u];
    v = {};
    if (u == outdoor)
      v = {{0, 1, 2}, {3}};
    else
      v.invisible = {0, 1, 2, 3};
  }
  const std::vector<AnchorRef> anchors = {
      {AnchorKind::kDirect, 0}, {AnchorKind::kDirect, 1}, {AnchorKind::kDirect, 2}, {AnchorKind::kViaRis, 3}};
  const auto alloc = allocation_for(spec, InacMode::kCoInac);

  ExperimentResult out;
  out.table.columns = {"distance_m", "elevation_deg", "pdop",      "pdop_satellite_rows", "mean_error_m",
                       "stderr_m",   "outdoor_comm_rate", "indoor_comm_rate", "mean_rate"};
  if (spec.raw) out.raw = ResultTable{{"distance_m", "trial", "error_m"}, {}, {}, 0.0};

  ErgodicOptions eo;
  eo.trials = spec.trials;
  eo.seed = derive_seed(spec.seed, {kTagChannels});
  eo.workers = spec.workers;
  eo.transmit_power_w = spec.transmit_power_w;
  const std::uint64_t noise_seed = derive_seed(spec.seed, {kTagPositioning});
  for (std::size_t di = 0; di < spec.sweep.size(); ++di) {
    const double d = spec.sweep[di];
    Scenario s = base;
    s.satellites[3].position = place_at_distance(s.ris.position, orbit, d);
    const EcefPoint truth = s.users[outdoor].position;
    RngStream none(0);
    const auto obs = simulate_pseudoranges(s, outdoor, anchors, 0.0, none);
    const auto pd = try_pdop(build_design_matrix(obs, truth));
    const auto pd_sat = try_pdop(build_design_matrix(obs, truth, 1.0, ViaRisRows::kSatelliteLineOfSight, s.satellites));

    std::vector<double> errs(spec.trials);
    parallel_for(spec.trials, spec.workers, [&](std::size_t t) {
      RngStream rng(noise_seed, {t});
      errs[t] = solve_trial(s, outdoor, anchors, spec, rng).error;
    });
    if (out.raw)
      for (std::size_t t = 0; t < errs.size(); ++t) out.raw->add_row({d, static_cast<std::int64_t>(t), errs[t]});
    const auto ms = mean_stderr(errs);
    const auto r = ergodic_rate(s, alloc, 3, eo);
    const bool has_indoor = s.find_user(Placement::kIndoorTransmitSide).has_value();
    const double mean_rate = has_indoor ? 0.5 * (r.outdoor.comm + r.indoor.comm) : r.outdoor.comm;
    out.table.add_row({d, elevation_angle(truth, s.satellites[3].position) * 180.0 / kPi, opt_cell(pd),
                       opt_cell(pd_sat), ms.mean, ms.std_error, r.outdoor.comm,
                       has_indoor ? Cell(r.indoor.comm) : Cell(std::monostate{}), mean_rate});
    report(spec, di + 1, spec.sweep.size());
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult out;
  switch (spec.kind) {
    case ExperimentKind::kErrorVsPdop: out = run_error_vs_pdop(spec); break;
    case ExperimentKind::kErrorVsNumSats: out = run_error_vs_num_sats(spec); break;
    case ExperimentKind::kPowerVsElements: out = run_power_vs_elements(spec); break;
    case ExperimentKind::kPdopVsDirectSats: out = run_pdop_vs_direct_sats(spec); break;
    case ExperimentKind::kRateVsElements: out = run_rate_vs_elements(spec); break;
    case ExperimentKind::kRateVsAllocFactor: out = run_rate_vs_alloc_factor(spec); break;
    case ExperimentKind::kTradeoffVsDistance: out = run_tradeoff_vs_distance(spec); break;
  }
  std::vector<std::pair<std::string, std::string>> meta = {
      {"seed", std::to_string(spec.seed)},
      {"preset", spec.preset.empty() ? "custom" : spec.preset},
      {"kind", to_string(spec.kind)},
      {"trials", std::to_string(spec.trials)},
      {"spec_hash", hex64(spec.parameters_hash())},
      {"build", build_describe()},
  };
  if (!spec.notes.empty()) meta.emplace_back("notes", spec.notes);
  out.table.metadata = meta;
  if (out.raw) {
    out.raw->metadata = meta;
    out.raw->metadata.emplace_back("table", "raw");
  }
  return out;
}

}  // namespace inac
