#include "inac/noma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "inac/channel.hpp"
#include "inac/errors.hpp"
#include "inac/parallel.hpp"
#include "inac/star_ris.hpp"

namespace inac {

const char* to_string(InacMode mode) { return mode == InacMode::kNoInac ? "no-inac" : "co-inac"; }

InacMode parse_mode(std::string_view text) {
  if (text == "no-inac" || text == "no_inac" || text == "NO_INAC") return InacMode::kNoInac;
  if (text == "co-inac" || text == "co_inac" || text == "CO_INAC") return InacMode::kCoInac;
  throw ValidationError("unknown INAC mode '" + std::string(text) + "' (expected no-inac or co-inac)");
}

PowerAllocation::PowerAllocation(double omega_c, double omega_n, InacMode mode, bool paper_literal)
    : omega_c_(omega_c), omega_n_(omega_n), mode_(mode), paper_literal_(paper_literal) {
  if (!std::isfinite(omega_c) || !std::isfinite(omega_n) || omega_c < 0.0 || omega_n < 0.0 || omega_c > 1.0 ||
      omega_n > 1.0)
    throw ValidationError("power allocation factors must lie in [0, 1]");
  if (!paper_literal && std::abs(omega_c * omega_c + omega_n * omega_n - 1.0) > 1e-9)
    throw ValidationError("power allocation must satisfy omega_N^2 + omega_C^2 = 1 (use paper-literal to relax)");
  // Equal factors are the boundary of both orders and stay allowed.
  if (mode == InacMode::kNoInac && omega_c < omega_n)
    throw ValidationError("NO-INAC requires omega_C >= omega_N");
  if (mode == InacMode::kCoInac && omega_c > omega_n)
    throw ValidationError("CO-INAC requires omega_C <= omega_N");
}

namespace {

void check_budget(const LinkBudget& b) {
  if (!(b.gain >= 0.0) || !(b.transmit_power_w >= 0.0) || !(b.noise_w > 0.0))
    throw ValidationError("link budget: gain and power must be >= 0 and noise > 0");
}

}  // namespace

SignalPair sinr_no_inac(const LinkBudget& b, const PowerAllocation& alloc) {
  if (alloc.mode() != InacMode::kNoInac) throw ValidationError("sinr_no_inac called with a CO-INAC allocation");
  check_budget(b);
  const double wc2 = alloc.omega_c() * alloc.omega_c();
  const double wn2 = alloc.omega_n() * alloc.omega_n();
  const double gp = b.gain * b.transmit_power_w;
  return {gp * wn2 / b.noise_w, gp * wc2 / (gp * wn2 + b.noise_w)};
}

SignalPair sinr_co_inac(const LinkBudget& b, const PowerAllocation& alloc) {
  if (alloc.mode() != InacMode::kCoInac) throw ValidationError("sinr_co_inac called with a NO-INAC allocation");
  check_budget(b);
  const double wc2 = alloc.omega_c() * alloc.omega_c();
  const double wn2 = alloc.omega_n() * alloc.omega_n();
  const double gp = b.gain * b.transmit_power_w;
  return {gp * wn2 / (gp * wc2 + b.noise_w), gp * wc2 / b.noise_w};
}

SignalPair sinr(const LinkBudget& b, const PowerAllocation& alloc) {
  return alloc.mode() == InacMode::kNoInac ? sinr_no_inac(b, alloc) : sinr_co_inac(b, alloc);
}

double rate(double s) {
  if (!(s >= 0.0)) throw ValidationError("SINR must be >= 0");
  return std::log2(1.0 + s);
}

SignalPair rates(const SignalPair& s) { return {rate(s.nav), rate(s.comm)}; }

double rate_ceiling(const PowerAllocation& alloc) {
  const double wc2 = alloc.omega_c() * alloc.omega_c();
  const double wn2 = alloc.omega_n() * alloc.omega_n();
  return alloc.mode() == InacMode::kNoInac ? std::log2(1.0 + wc2 / wn2) : std::log2(1.0 + wn2 / wc2);
}

MinPowerResult min_transmit_power(const RateThresholds& t, double gain, const PowerAllocation& alloc,
                                  double noise_w) {
  if (!(gain > 0.0)) throw ValidationError("minimum power needs a positive channel gain");
  if (!(noise_w > 0.0)) throw ValidationError("noise power must be > 0");
  if (!(t.nav >= 0.0) || !(t.comm >= 0.0) || !(t.snr >= 0.0))
    throw ValidationError("rate thresholds must be >= 0");

  const double wc2 = alloc.omega_c() * alloc.omega_c();
  const double wn2 = alloc.omega_n() * alloc.omega_n();
  const double g_nav = std::exp2(t.nav) - 1.0;
  const double g_comm = std::exp2(t.comm) - 1.0;

  MinPowerResult r;
  // The signal decoded first sees the other as interference; the second is
  // decoded after SIC and is noise limited.
  const bool no = alloc.mode() == InacMode::kNoInac;
  const double limited_target = no ? g_comm : g_nav;
  const double limited_share = no ? wc2 : wn2;
  const double other_share = no ? wn2 : wc2;
  const double free_target = no ? g_nav : g_comm;
  const double free_share = no ? wn2 : wc2;

  const double free_power = free_target > 0.0 ? free_target * noise_w / (gain * free_share) : 0.0;
  double limited_power = 0.0;
  if (limited_target > 0.0) {
    const double ceiling = limited_share / other_share;
    if (!(ceiling > limited_target)) {
      r.feasible = false;
      r.ceiling = ceiling;
      r.target_sinr = limited_target;
      (no ? r.nav_power_w : r.comm_power_w) = free_power;
      (no ? r.comm_power_w : r.nav_power_w) = std::numeric_limits<double>::infinity();
      r.snr_power_w = t.snr * noise_w / gain;
      r.power_w = std::numeric_limits<double>::infinity();
      return r;
    }
    limited_power = limited_target * noise_w / (gain * (limited_share - limited_target * other_share));
  }
  r.feasible = true;
  r.nav_power_w = no ? free_power : limited_power;
  r.comm_power_w = no ? limited_power : free_power;
  r.snr_power_w = t.snr * noise_w / gain;
  r.power_w = std::max({r.nav_power_w, r.comm_power_w, r.snr_power_w});
  return r;
}

namespace {

// (sum_n beta_n |c_n| sqrt(L_R) + |h| sqrt(L_d))^2 evaluated through the
// phase-alignment path so the gain is what a configured surface delivers.
double co_phased_gain(const CascadeChannel& cascade, const StarRisConfig& base, bool reflect, double ris_ls,
                      Complex direct, double direct_ls) {
  const double desired = direct == Complex{} ? 0.0 : std::arg(direct);
  auto theta = align_phases(cascade, desired);
  if (reflect) {
    const auto cfg = base.with_reflect_phases(std::move(theta));
    return effective_gain_reflect(cascade, cfg, ris_ls, direct, direct_ls);
  }
  const auto cfg = base.with_transmit_phases(std::move(theta));
  const auto coeffs = cfg.transmit_coefficients();
  Complex s{};
  for (std::size_t i = 0; i < coeffs.size(); ++i) s += coeffs[i] * cascade.entries[i];
  return std::norm(s * std::sqrt(ris_ls) + direct * std::sqrt(direct_ls));
}

}  // namespace

PairGains aligned_gains(const Scenario& scenario, const ChannelRealization& ch, std::size_t satellite) {
  if (satellite >= scenario.satellites.size()) throw ValidationError("satellite index out of range");
  PairGains out;
  for (const Placement p : {Placement::kOutdoorReflectSide, Placement::kIndoorTransmitSide}) {
    const auto u = scenario.find_user(p);
    if (!u) continue;
    const auto cascade = build_cascade(ch.ris_to_user[*u], ch.sat_to_ris[satellite]);
    const double g = co_phased_gain(cascade, scenario.ris.config, p == Placement::kOutdoorReflectSide,
                                    ch.ris_large_scale[satellite][*u], ch.direct[satellite][*u],
                                    ch.direct_large_scale[satellite][*u]);
    (p == Placement::kOutdoorReflectSide ? out.outdoor : out.indoor) = g;
  }
  return out;
}

ErgodicRates ergodic_rate(const Scenario& scenario, const PowerAllocation& alloc, std::size_t satellite,
                          const ErgodicOptions& options) {
  if (options.trials < 1) throw ValidationError("ergodic rate needs at least one trial");
  if (satellite >= scenario.satellites.size()) throw ValidationError("satellite index out of range");
  const double power = options.transmit_power_w.value_or(scenario.satellites[satellite].transmit_power_w);
  const double noise = scenario.physics.noise_power_w();
  const std::size_t n = options.trials;

  std::vector<double> on(n), oc(n), og(n), in(n), ic(n), ig(n);
  parallel_for(n, options.workers, [&](std::size_t t) {
    RngStream rng(options.seed, {t});
    const auto ch = realize_channels(scenario, rng);
    const auto g = aligned_gains(scenario, ch, satellite);
    const auto ro = rates(sinr({g.outdoor, power, noise}, alloc));
    const auto ri = rates(sinr({g.indoor, power, noise}, alloc));
    on[t] = ro.nav;
    oc[t] = ro.comm;
    og[t] = g.outdoor;
    in[t] = ri.nav;
    ic[t] = ri.comm;
    ig[t] = g.indoor;
  });

  const auto summarize = [](const std::vector<double>& nav, const std::vector<double>& comm,
                            const std::vector<double>& gain) {
    const auto a = mean_stderr(nav);
    const auto b = mean_stderr(comm);
    return UserRates{a.mean, b.mean, a.std_error, b.std_error, mean_stderr(gain).mean};
  };
  return {summarize(on, oc, og), summarize(in, ic, ig), n};
}

}  // namespace inac
