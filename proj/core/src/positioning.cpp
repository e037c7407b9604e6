#include "inac/positioning.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "inac/errors.hpp"

namespace inac {

std::vector<AnchorRef> parse_anchors(std::string_view text) {
  std::vector<AnchorRef> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string tok(text.substr(pos, comma - pos));
    pos = comma + 1;
    std::erase_if(tok, [](unsigned char c) { return std::isspace(c); });
    if (tok.size() < 2) throw ValidationError("bad anchor token '" + tok + "' (expected d<sat> or r<sat>)");
    AnchorRef a;
    const char k = static_cast<char>(std::tolower(static_cast<unsigned char>(tok[0])));
    if (k == 'd')
      a.kind = AnchorKind::kDirect;
    else if (k == 'r')
      a.kind = AnchorKind::kViaRis;
    else
      throw ValidationError("bad anchor token '" + tok + "' (expected d<sat> or r<sat>)");
    std::size_t used = 0;
    long long id = 0;
    try {
      id = std::stoll(tok.substr(1), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() - 1 || id < 1) throw ValidationError("bad satellite number in anchor '" + tok + "'");
    a.satellite = static_cast<std::size_t>(id - 1);
    out.push_back(a);
    if (comma == text.size()) break;
  }
  if (out.empty()) throw ValidationError("anchor list is empty");
  return out;
}

std::string format_anchors(std::span<const AnchorRef> anchors) {
  std::ostringstream os;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    if (i) os << ',';
    os << (anchors[i].kind == AnchorKind::kDirect ? 'd' : 'r') << anchors[i].satellite + 1;
  }
  return os.str();
}

std::vector<PseudorangeObs> simulate_pseudoranges(const Scenario& scenario, std::size_t user,
                                                  std::span<const AnchorRef> anchors, double sigma_ure,
                                                  RngStream& rng) {
  if (anchors.empty()) throw ValidationError("anchor list is empty");
  if (!(sigma_ure >= 0.0)) throw ValidationError("sigma_URE must be >= 0");
  if (user >= scenario.users.size()) throw ValidationError("user index out of range");
  const auto& u = scenario.users[user];
  const double clock_m = scenario.physics.speed_of_light * u.clock_bias_s;
  std::vector<PseudorangeObs> out;
  out.reserve(anchors.size());
  for (const auto& a : anchors) {
    if (a.satellite >= scenario.satellites.size())
      throw ValidationError("anchor refers to satellite " + std::to_string(a.satellite + 1) + " but the scenario has " +
                            std::to_string(scenario.satellites.size()));
    const EcefPoint sat = scenario.satellites[a.satellite].position;
    PseudorangeObs o;
    o.anchor = a;
    o.sigma_ure = sigma_ure;
    double geometric = 0.0;
    if (a.kind == AnchorKind::kDirect) {
      o.anchor_position = sat;
      geometric = distance(sat, u.position);
    } else {
      o.anchor_position = scenario.ris.position;
      o.ris_leg_offset = distance(sat, scenario.ris.position);
      geometric = distance(scenario.ris.position, u.position);
    }
    const double noise = sigma_ure * rng.normal();
    o.rho_c = geometric + clock_m + noise;
    out.push_back(o);
  }
  return out;
}

DesignMatrix build_design_matrix(std::span<const PseudorangeObs> obs, const EcefPoint& estimate,
                                 double clock_column_scale, ViaRisRows via_ris_rows,
                                 std::span<const SatelliteConfig> satellites) {
  DesignMatrix d;
  d.clock_column_scale = clock_column_scale;
  d.rows.reserve(obs.size());
  for (const auto& o : obs) {
    EcefPoint anchor = o.anchor_position;
    if (o.anchor.kind == AnchorKind::kViaRis && via_ris_rows == ViaRisRows::kSatelliteLineOfSight) {
      if (o.anchor.satellite >= satellites.size())
        throw ValidationError("satellite line-of-sight rows need the satellite positions");
      anchor = satellites[o.anchor.satellite].position;
    }
    d.rows.push_back(los_unit_row(anchor, estimate, clock_column_scale));
  }
  return d;
}

namespace {

struct Equilibrated {
  Eigen::Matrix4d normal;  // D N D
  Eigen::Vector4d scale;   // diagonal of D
};

Equilibrated equilibrate(const DesignMatrix& design) {
  Eigen::Matrix4d n = Eigen::Matrix4d::Zero();
  for (const auto& r : design.rows) {
    const Eigen::Vector4d v(r[0], r[1], r[2], r[3]);
    n += v * v.transpose();
  }
  Equilibrated e;
  for (int i = 0; i < 4; ++i) e.scale[i] = n(i, i) > 0.0 ? 1.0 / std::sqrt(n(i, i)) : 1.0;
  e.normal = e.scale.asDiagonal() * n * e.scale.asDiagonal();
  return e;
}

double condition_of(const Eigen::Matrix4d& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()[0];
  const double hi = es.eigenvalues()[3];
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

}  // namespace

double normal_condition(const DesignMatrix& design) {
  if (design.rows.size() < 4) return std::numeric_limits<double>::infinity();
  return condition_of(equilibrate(design).normal);
}

double pdop(const DesignMatrix& design) {
  if (design.rows.size() < 4)
    throw PdopUndefined("PDoP needs at least 4 observations, got " + std::to_string(design.rows.size()));
  const auto e = equilibrate(design);
  const double cond = condition_of(e.normal);
  if (!(cond <= kRankConditionLimit))
    throw PdopUndefined("normal matrix is rank deficient (condition number " + std::to_string(cond) + ")");
  const Eigen::Matrix4d inv = e.normal.ldlt().solve(Eigen::Matrix4d::Identity());
  const Eigen::Matrix4d f = e.scale.asDiagonal() * inv * e.scale.asDiagonal();
  return std::sqrt(f(0, 0) + f(1, 1) + f(2, 2));
}

EcefPoint coarse_guess(std::span<const PseudorangeObs> obs) {
  if (obs.empty()) return {};
  const EcefPoint first = obs.front().anchor_position;
  for (const auto& o : obs)
    if (!(o.anchor_position == first)) return {};
  const double r = first.norm();
  if (!(r > 0.0)) return {};
  return first - first * (1e-3 / r);
}

namespace {

struct Step {
  Eigen::Vector4d delta;  // position m, clock m
  bool degenerate = false;
};

Step solve_step(std::span<const PseudorangeObs> obs, const EcefPoint& x, double clock_m, double c,
                double* residual_norm) {
  const auto m = static_cast<Eigen::Index>(obs.size());
  Eigen::MatrixXd jac(m, 4);
  Eigen::VectorXd b(m);
  DesignMatrix design;
  design.rows.reserve(obs.size());
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& o = obs[static_cast<std::size_t>(i)];
    const DesignRow row = los_unit_row(o.anchor_position, x);
    design.rows.push_back(row);
    // d(|a - x| + clk)/d(x, clk) = (-los, 1).
    jac.row(i) << -row[0], -row[1], -row[2], 1.0;
    b[i] = o.rho_c - (distance(o.anchor_position, x) + clock_m);
  }
  *residual_norm = b.norm();

  Step s;
  const auto e = equilibrate(design);
  if (obs.size() >= 4 && condition_of(e.normal) <= kRankConditionLimit) {
    // jac = design * diag(-1,-1,-1,1); scale the normal equations the same way.
    const Eigen::Vector4d sign(-1.0, -1.0, -1.0, 1.0);
    const Eigen::Vector4d rhs = e.scale.asDiagonal() * (jac.transpose() * b);
    const Eigen::Matrix4d normal = sign.asDiagonal() * e.normal * sign.asDiagonal();
    s.delta = e.scale.asDiagonal() * normal.ldlt().solve(rhs);
    return s;
  }
  // Minimum-norm step with the clock carried in seconds: the unobservable
  // directions keep the linearization point and the clock absorbs the rest.
  s.degenerate = true;
  Eigen::MatrixXd js = jac;
  js.col(3) *= c;
  // The threshold must be set before compute(): the Z factor is built for
  // the rank seen at decomposition time.
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(js.rows(), js.cols());
  cod.setThreshold(1e-12);
  cod.compute(js);
  Eigen::Vector4d d = cod.solve(b);
  d[3] *= c;
  s.delta = d;
  return s;
}

}  // namespace

PositionSolution lsm_solve(std::span<const PseudorangeObs> obs, const SolverOptions& options) {
  if (obs.empty()) throw ValidationError("no observations to solve");
  if (!(options.epsilon > 0.0)) throw ValidationError("epsilon must be > 0");
  if (options.max_iterations < 1) throw ValidationError("max_iterations must be >= 1");

  std::optional<EcefPoint> restart = options.restart_guess;
  if (!restart) {
    for (const auto& o : obs) {
      if (o.anchor.kind == AnchorKind::kViaRis) {
        const EcefPoint a = o.anchor_position;
        restart = a - a * (1e-3 / a.norm());
        break;
      }
    }
  }

  PositionSolution sol;
  EcefPoint x = options.initial_guess.value_or(coarse_guess(obs));
  double clk = 0.0;
  double last_residual = std::numeric_limits<double>::infinity();
  int growth = 0;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    double residual = 0.0;
    const Step s = solve_step(obs, x, clk, kSpeedOfLight, &residual);
    sol.degenerate = s.degenerate;
    growth = residual > last_residual ? growth + 1 : 0;
    last_residual = residual;
    if (growth >= 5 && restart && !sol.restarted) {
      sol.restarted = true;
      x = *restart;
      clk = 0.0;
      growth = 0;
      last_residual = std::numeric_limits<double>::infinity();
      continue;
    }
    if (!s.delta.allFinite()) break;
    x = x + EcefPoint{s.delta[0], s.delta[1], s.delta[2]};
    clk += s.delta[3];
    sol.iterations = it + 1;
    if (s.delta.norm() < options.epsilon) {
      sol.converged = true;
      break;
    }
  }
  sol.position = x;
  sol.clock_bias_m = clk;

  Eigen::VectorXd b(static_cast<Eigen::Index>(obs.size()));
  for (std::size_t i = 0; i < obs.size(); ++i)
    b[static_cast<Eigen::Index>(i)] =
        obs[i].rho_c - (distance(obs[i].anchor_position, x) + clk);
  sol.residual_norm = b.norm();

  if (!sol.degenerate) {
    try {
      sol.pdop = pdop(build_design_matrix(obs, x, options.clock_column_scale));
    } catch (const PdopUndefined&) {
      sol.pdop.reset();
    } catch (const DegenerateGeometry&) {
      sol.pdop.reset();
    }
  }
  return sol;
}

double position_error(const PositionSolution& solution, const EcefPoint& truth) {
  return distance(solution.position, truth);
}

}  // namespace inac
