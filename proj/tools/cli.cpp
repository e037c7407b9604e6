#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "inac/channel.hpp"
#include "inac/errors.hpp"
#include "inac/experiments.hpp"
#include "inac/noma.hpp"
#include "inac/positioning.hpp"
#include "inac/result_table.hpp"
#include "inac/rng.hpp"
#include "inac/scenario.hpp"
#include "inac/selection.hpp"

namespace inac::cli {

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kInfeasible = 2;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 0;
  int verbosity = 0;
};

struct LinkFlags {
  std::string mode = "no-inac";
  double omega_c = 0.8;
  double omega_n = 0.2;
  bool paper_literal = false;
};

void add_link_flags(CLI::App* app, LinkFlags& f) {
  app->add_option("--mode", f.mode, "INAC mode: no-inac (navigation decoded last) or co-inac")
      ->check(CLI::IsMember({"no-inac", "co-inac"}))
      ->capture_default_str();
  app->add_option("--omega-c", f.omega_c, "communication amplitude factor omega_C (dimensionless)")
      ->capture_default_str();
  app->add_option("--omega-n", f.omega_n, "navigation amplitude factor omega_N (dimensionless)")
      ->capture_default_str();
  app->add_flag("--paper-literal", f.paper_literal,
                "use omega_C/omega_N as given instead of requiring omega_C^2 + omega_N^2 = 1");
}

PowerAllocation make_allocation(const LinkFlags& f) {
  return PowerAllocation(f.omega_c, f.omega_n, parse_mode(f.mode), f.paper_literal);
}

std::uint64_t effective_seed(const Globals& g) {
  if (g.seed) return *g.seed;
  if (const char* env = std::getenv("INAC_SEED"); env && *env) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(env, &used, 10);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != std::string(env).size()) throw ValidationError("INAC_SEED must be a non-negative integer");
    return v;
  }
  return kDefaultSeed;
}

Scenario load(const Globals& g) { return g.config.empty() ? default_scenario() : load_scenario_file(g.config); }

// Writes to `path`, or to `out` when the path is empty or "-".
void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path);
  f << text;
}

json number_or_null(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::size_t resolve_satellite(const Scenario& s, int one_based) {
  if (one_based < 1 || static_cast<std::size_t>(one_based) > s.satellites.size())
    throw ValidationError("--satellite must lie in 1.." + std::to_string(s.satellites.size()));
  return static_cast<std::size_t>(one_based - 1);
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"STAR-RIS assisted satellite navigation and communication simulator", "inac_sim"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "scenario JSON file (default: the built-in reference scenario)");
  app.add_option("--seed", g.seed, "master random seed (default: $INAC_SEED, else " + std::to_string(kDefaultSeed) + ")");
  app.add_option("--workers", g.workers, "worker threads for Monte Carlo fan-out (0: all cores)")->capture_default_str();
  app.add_flag("-v,--verbose", g.verbosity, "progress and timing on standard error");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo ergodic rates of the outdoor and indoor users");
  LinkFlags sim_link;
  add_link_flags(sim, sim_link);
  int sim_sat = 0;
  std::size_t sim_trials = 1000;
  std::optional<std::size_t> sim_elements;
  std::optional<double> sim_power_dbm;
  std::string sim_out;
  sim->add_option("--satellite", sim_sat, "INAC satellite, 1-based (default: CPA choice among all satellites)");
  sim->add_option("--trials", sim_trials, "channel realizations")->capture_default_str();
  sim->add_option("--elements", sim_elements, "STAR-RIS element count N (default: scenario value)");
  sim->add_option("--power-dbm", sim_power_dbm, "transmit power override, dBm");
  sim->add_option("--out", sim_out, "output file (.json); default standard output");

  // position
  auto* pos = app.add_subcommand("position", "Least-squares positioning from simulated pseudo-ranges");
  std::string pos_user = "outdoor";
  std::string pos_anchors;
  double pos_sigma = 1.0;
  double pos_eps = 0.1;
  std::size_t pos_iters = 2000;
  std::size_t pos_trials = 1;
  std::optional<double> pos_clock_m;
  bool pos_warm = false;
  std::string pos_out;
  pos->add_option("--user", pos_user, "user name from the scenario")->capture_default_str();
  pos->add_option("--anchors", pos_anchors,
                  "anchors such as d1,d2,d3,r7 (d: direct, r: via RIS, 1-based satellites); default: every "
                  "visible satellite direct plus the first non-visible one via the RIS");
  pos->add_option("--sigma-ure", pos_sigma, "pseudo-range noise standard deviation, m")->capture_default_str();
  pos->add_option("--epsilon", pos_eps, "convergence threshold on the correction norm, m")->capture_default_str();
  pos->add_option("--max-iters", pos_iters, "iteration cap")->capture_default_str();
  pos->add_option("--trials", pos_trials, "independent noise draws")->capture_default_str();
  pos->add_option("--clock-bias-m", pos_clock_m, "receiver clock bias override, m (c times seconds)");
  pos->add_flag("--warm-start", pos_warm, "seed the solver at the user's previous fix (its true position)");
  pos->add_option("--out", pos_out, "output file (.csv); default standard output");

  // select
  auto* sel = app.add_subcommand("select", "Satellite selection with NPA, CPA or RSA");
  std::string sel_algo = "npa";
  std::string sel_user = "outdoor";
  std::string sel_rows = "virtual";
  LinkFlags sel_link;
  std::size_t sel_trials = 200;
  double sel_sigma = 1.0;
  std::optional<double> sel_power_dbm;
  std::string sel_out;
  sel->add_option("--algo", sel_algo, "npa (min PDoP), cpa (max R_R + R_T) or rsa (uniform random)")
      ->check(CLI::IsMember({"npa", "cpa", "rsa"}))
      ->capture_default_str();
  sel->add_option("--user", sel_user, "user for NPA and RSA candidates")->capture_default_str();
  sel->add_option("--npa-rows", sel_rows,
                  "via-RIS PDoP rows for NPA scoring: virtual (RIS as anchor) or satellite (satellite line of sight)")
      ->check(CLI::IsMember({"virtual", "satellite"}))
      ->capture_default_str();
  add_link_flags(sel, sel_link);
  sel->add_option("--trials", sel_trials, "CPA channel realizations per candidate")->capture_default_str();
  sel->add_option("--sigma-ure", sel_sigma, "NPA pseudo-range noise standard deviation, m")->capture_default_str();
  sel->add_option("--power-dbm", sel_power_dbm, "CPA transmit power override, dBm");
  sel->add_option("--out", sel_out, "output file (.json); default standard output");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a figure preset and write its result table");
  std::string exp_preset;
  std::string exp_out;
  std::optional<std::size_t> exp_trials;
  std::vector<double> exp_sweep;
  std::optional<double> exp_sigma;
  std::optional<double> exp_power_dbm;
  std::optional<std::size_t> exp_elements;
  std::optional<std::size_t> exp_cpa_trials;
  bool exp_raw = false;
  bool exp_cold_start = false;
  std::string exp_raw_out;
  exp->add_option("--preset", exp_preset, "fig3 .. fig9")->required()->check(CLI::IsMember(preset_names()));
  exp->add_option("--out", exp_out, "output CSV file; default standard output");
  exp->add_option("--trials", exp_trials, "Monte Carlo trials per grid point (default: preset value)");
  exp->add_option("--sweep", exp_sweep, "replacement sweep grid (units depend on the preset)")->delimiter(',');
  exp->add_option("--sigma-ure", exp_sigma, "pseudo-range noise standard deviation, m");
  exp->add_option("--power-dbm", exp_power_dbm, "transmit power override, dBm");
  exp->add_option("--elements", exp_elements, "STAR-RIS element count N where not swept");
  exp->add_option("--cpa-trials", exp_cpa_trials, "realizations per candidate when choosing the INAC satellite");
  exp->add_flag("--cold-start", exp_cold_start, "seed every solve at the solver default instead of the previous fix");
  exp->add_flag("--raw", exp_raw, "also write per-trial rows (to --raw-out, or <out>.raw.csv)");
  exp->add_option("--raw-out", exp_raw_out, "per-trial CSV path");

  // scenario
  auto* scn = app.add_subcommand("scenario", "Scenario file utilities");
  scn->require_subcommand(1);
  auto* validate = scn->add_subcommand("validate", "Check a scenario file; exit 1 naming the violated invariant");
  std::string validate_file;
  validate->add_option("file", validate_file, "scenario JSON file")->required();
  auto* dump = scn->add_subcommand("dump", "Print the effective scenario (--config or the reference) as JSON");
  std::string dump_out;
  dump->add_option("--out", dump_out, "output file; default standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    // Subcommand help requests surface here as well.
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    err << "error: " << e.what() << "\n\n";
    const CLI::App* failing = &app;
    for (auto* sc : app.get_subcommands()) failing = sc;
    err << failing->help();
    return kInvalid;
  }

  try {
    if (*sim) {
      const std::uint64_t seed = effective_seed(g);
      err << "seed: " << seed << "\n";
      Scenario s = load(g);
      if (sim_elements) s = with_ris_elements(std::move(s), *sim_elements);
      const auto alloc = make_allocation(sim_link);
      std::optional<double> power;
      if (sim_power_dbm) power = dbm_to_watts(*sim_power_dbm);
      std::size_t sat = 0;
      if (sim_sat > 0) {
        sat = resolve_satellite(s, sim_sat);
      } else {
        CpaOptions co;
        co.trials = sim_trials;
        co.seed = seed;
        co.workers = g.workers;
        co.transmit_power_w = power;
        sat = cpa_select(s, alloc, co).selected;
      }
      ErgodicOptions eo;
      eo.trials = sim_trials;
      eo.seed = seed;
      eo.workers = g.workers;
      eo.transmit_power_w = power;
      const auto r = ergodic_rate(s, alloc, sat, eo);
      const auto user_json = [](const UserRates& u) {
        return json{{"nav_rate", u.nav},     {"nav_stderr", u.nav_stderr}, {"comm_rate", u.comm},
                    {"comm_stderr", u.comm_stderr}, {"mean_gain", u.mean_gain}};
      };
      json j{{"seed", seed},
             {"mode", to_string(alloc.mode())},
             {"omega_c", alloc.omega_c()},
             {"omega_n", alloc.omega_n()},
             {"satellite", sat + 1},
             {"n_elements", s.ris.config.size()},
             {"trials", r.trials},
             {"rate_ceiling", rate_ceiling(alloc)},
             {"outdoor", user_json(r.outdoor)},
             {"indoor", user_json(r.indoor)}};
      emit(sim_out, out, json_text(j));
      return kOk;
    }

    if (*pos) {
      const std::uint64_t seed = effective_seed(g);
      err << "seed: " << seed << "\n";
      Scenario s = load(g);
      const std::size_t user = s.user_index(pos_user);
      if (pos_clock_m) s.users[user].clock_bias_s = *pos_clock_m / s.physics.speed_of_light;
      std::vector<AnchorRef> anchors;
      if (!pos_anchors.empty()) {
        anchors = parse_anchors(pos_anchors);
      } else {
        for (std::size_t i : s.visibility[user].visible) anchors.push_back({AnchorKind::kDirect, i});
        if (!s.visibility[user].invisible.empty())
          anchors.push_back({AnchorKind::kViaRis, s.visibility[user].invisible.front()});
      }
      if (pos_trials < 1) throw ValidationError("--trials must be >= 1");
      ResultTable t;
      t.columns = {"trial", "est_x", "est_y", "est_z", "clock_m", "iters", "converged", "degenerate", "pdop",
                   "error_m"};
      t.metadata = {{"seed", std::to_string(seed)},
                    {"user", pos_user},
                    {"anchors", format_anchors(anchors)},
                    {"sigma_ure_m", format_double(pos_sigma)},
                    {"build", build_describe()}};
      bool flagged = false;
      std::string reason;
      for (std::size_t k = 0; k < pos_trials; ++k) {
        RngStream rng(seed, {k});
        const auto obs = simulate_pseudoranges(s, user, anchors, pos_sigma, rng);
        SolverOptions so;
        so.epsilon = pos_eps;
        so.max_iterations = pos_iters;
        if (pos_warm) so.initial_guess = s.users[user].position;
        const auto sol = lsm_solve(obs, so);
        if (!sol.pdop) {
          flagged = true;
          reason = obs.size() < 4 ? "PdopUndefined: fewer than 4 anchors"
                                  : "PdopUndefined: rank-deficient geometry (degenerate solve)";
        } else if (!sol.converged) {
          flagged = true;
          reason = "solver did not converge within --max-iters";
        }
        t.add_row({static_cast<std::int64_t>(k), sol.position.x, sol.position.y, sol.position.z, sol.clock_bias_m,
                   static_cast<std::int64_t>(sol.iterations), static_cast<std::int64_t>(sol.converged),
                   static_cast<std::int64_t>(sol.degenerate),
                   sol.pdop ? Cell(*sol.pdop) : Cell(std::monostate{}),
                   position_error(sol, s.users[user].position)});
      }
      emit(pos_out, out, to_csv(t));
      if (flagged) {
        err << reason << "\n";
        return kInfeasible;
      }
      return kOk;
    }

    if (*sel) {
      const std::uint64_t seed = effective_seed(g);
      err << "seed: " << seed << "\n";
      const Scenario s = load(g);
      SelectionResult r;
      json j;
      j["algorithm"] = sel_algo;
      try {
        if (sel_algo == "cpa") {
          CpaOptions co;
          co.trials = sel_trials;
          co.seed = seed;
          co.workers = g.workers;
          if (sel_power_dbm) co.transmit_power_w = dbm_to_watts(*sel_power_dbm);
          r = cpa_select(s, make_allocation(sel_link), co);
        } else {
          const std::size_t user = s.user_index(sel_user);
          NpaOptions no;
          no.sigma_ure = sel_sigma;
          no.seed = seed;
          no.score_rows = sel_rows == "satellite" ? ViaRisRows::kSatelliteLineOfSight : ViaRisRows::kVirtualAnchor;
          if (sel_algo == "npa") {
            r = npa_select(s, user, no);
          } else {
            RngStream rng(seed, {0});
            const auto& cands = s.visibility[user].invisible;
            r = rsa_select(cands, rng, [&](std::size_t v) -> std::optional<double> {
              NpaOptions one = no;
              one.candidates = {v};
              try {
                return npa_select(s, user, one).score;
              } catch (const NoFeasibleSelection&) {
                return std::nullopt;
              }
            });
          }
        }
      } catch (const NoFeasibleSelection& e) {
        j["error"] = e.what();
        emit(sel_out, out, json_text(j));
        err << e.what() << "\n";
        return kInfeasible;
      }
      j["selected"] = r.selected + 1;
      j["score"] = r.score;
      j["tie_broken"] = r.tie_broken;
      json per = json::array();
      for (const auto& c : r.per_candidate) per.push_back({{"satellite", c.satellite + 1}, {"score", number_or_null(c.score)}});
      j["per_candidate"] = per;
      j["seed"] = seed;
      emit(sel_out, out, json_text(j));
      return kOk;
    }

    if (*exp) {
      ExperimentSpec spec = preset(exp_preset);
      spec.seed = effective_seed(g);
      err << "seed: " << spec.seed << "\n";
      if (!g.config.empty()) spec.scenario = load_scenario_file(g.config);
      if (exp_trials) spec.trials = *exp_trials;
      if (!exp_sweep.empty()) spec.sweep = exp_sweep;
      if (exp_sigma) spec.sigma_ure = *exp_sigma;
      if (exp_power_dbm) spec.transmit_power_w = dbm_to_watts(*exp_power_dbm);
      if (exp_elements) spec.n_elements = *exp_elements;
      if (exp_cpa_trials) spec.cpa_trials = *exp_cpa_trials;
      if (exp_cold_start) spec.warm_start = false;
      spec.raw = exp_raw || !exp_raw_out.empty();
      spec.workers = g.workers;
      if (g.verbosity > 0)
        spec.progress = [&err](std::size_t done, std::size_t total) {
          err << "progress: " << done << "/" << total << "\n";
        };
      const auto start = std::chrono::steady_clock::now();
      auto result = run_experiment(spec);
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      result.table.wall_time_s = wall;
      emit(exp_out, out, to_csv(result.table));
      if (spec.raw) {
        if (!result.raw) {
          err << "note: preset " << exp_preset << " has no per-trial rows\n";
        } else {
          std::string raw_path = exp_raw_out;
          if (raw_path.empty()) {
            if (exp_out.empty() || exp_out == "-") throw ValidationError("--raw needs --out or --raw-out");
            raw_path = exp_out.size() > 4 && exp_out.compare(exp_out.size() - 4, 4, ".csv") == 0
                           ? exp_out.substr(0, exp_out.size() - 4) + ".raw.csv"
                           : exp_out + ".raw.csv";
          }
          emit(raw_path, out, to_csv(*result.raw));
        }
      }
      err << "wall time: " << std::fixed << std::setprecision(3) << wall << " s\n";
      return kOk;
    }

    if (*validate) {
      const Scenario s = load_scenario_file(validate_file);
      out << "ok: " << s.satellites.size() << " satellites, " << s.users.size() << " users, N = "
          << s.ris.config.size() << "\n";
      return kOk;
    }

    if (*dump) {
      emit(dump_out, out, scenario_to_json(load(g)) + "\n");
      return kOk;
    }
  } catch (const ValidationError& e) {
    err << "invalid: " << e.what() << "\n";
    return kInvalid;
  } catch (const NoFeasibleSelection& e) {
    err << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const DegenerateGeometry& e) {
    err << "degenerate: " << e.what() << "\n";
    return kInfeasible;
  } catch (const PdopUndefined& e) {
    err << "PdopUndefined: " << e.what() << "\n";
    return kInfeasible;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kOk;
}

}  // namespace inac::cli
