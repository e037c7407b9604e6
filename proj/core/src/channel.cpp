#include "inac/channel.hpp"

#include <cmath>
#include <limits>

#include "inac/errors.hpp"

namespace inac {

void PhysicsParams::validate() const {
  if (!(carrier_frequency_hz > 0.0)) throw ValidationError("physics: carrier frequency must be > 0");
  if (!(bandwidth_hz > 0.0)) throw ValidationError("physics: bandwidth must be > 0");
  if (!(rx_gain > 0.0)) throw ValidationError("physics: receive gain must be > 0");
  if (!(speed_of_light > 0.0)) throw ValidationError("physics: speed of light must be > 0");
  if (!(exponents.sat_ris > 0.0) || !(exponents.sat_user > 0.0) || !(exponents.ris_user > 0.0))
    throw ValidationError("physics: path-loss exponents must be > 0");
}

void ShadowedRicianParams::validate() const {
  if (!(b >= 0.0)) throw ValidationError("fading: shadowed-Rician b must be >= 0");
  if (!(m >= 0.5)) throw ValidationError("fading: shadowed-Rician m must be >= 0.5");
  if (!(omega >= 0.0)) throw ValidationError("fading: shadowed-Rician omega must be >= 0");
  if (!(mean_power() > 0.0)) throw ValidationError("fading: shadowed-Rician mean power must be > 0");
}

void FadingParams::validate() const {
  shadowed_rician.validate();
  if (!(ris_user_k_factor >= 0.0)) throw ValidationError("fading: Rician K factor must be >= 0");
}

double large_scale_direct(double tx_gain, double wavelength, double d, double exponent) {
  if (!(d > 0.0)) throw ValidationError("large-scale gain: distance must be > 0");
  return tx_gain * std::pow(wavelength / (4.0 * kPi), exponent) * std::pow(d, -exponent);
}

double large_scale_ris(double tx_gain, double rx_gain, double wavelength, double d_sat_ris, double d_ris_user,
                       const PathlossExponents& exponents) {
  return large_scale_direct(tx_gain, wavelength, d_sat_ris, exponents.sat_ris) *
         large_scale_direct(rx_gain, wavelength, d_ris_user, exponents.ris_user);
}

Complex sample_shadowed_rician(const ShadowedRicianParams& params, RngStream& rng) {
  const double amplitude = params.omega > 0.0 ? std::sqrt(rng.gamma(params.m, params.omega / params.m)) : 0.0;
  const double phase = kTwoPi * rng.uniform();
  const double sd = std::sqrt(params.b);
  const double re = rng.normal(0.0, sd);
  const double im = rng.normal(0.0, sd);
  return std::polar(amplitude, phase) + Complex(re, im);
}

Complex sample_rician(double k_factor, RngStream& rng) {
  if (std::isinf(k_factor)) return {1.0, 0.0};
  const double los = std::sqrt(k_factor / (k_factor + 1.0));
  const double sd = std::sqrt(0.5 / (k_factor + 1.0));
  const double re = rng.normal(0.0, sd);
  const double im = rng.normal(0.0, sd);
  return {los + re, im};
}

void fill_large_scale(const Scenario& s, ChannelRealization& out) {
  const std::size_t ns = s.satellites.size();
  const std::size_t nu = s.users.size();
  const double lambda = s.physics.wavelength();
  out.direct_large_scale.assign(ns, std::vector<double>(nu, 0.0));
  out.ris_large_scale.assign(ns, std::vector<double>(nu, 0.0));
  for (std::size_t i = 0; i < ns; ++i) {
    const auto& sat = s.satellites[i];
    const double d_sr = distance(sat.position, s.ris.position);
    for (std::size_t u = 0; u < nu; ++u) {
      const double d_su = distance(sat.position, s.users[u].position);
      const double d_ru = distance(s.ris.position, s.users[u].position);
      out.direct_large_scale[i][u] = large_scale_direct(sat.transmit_gain * s.physics.rx_gain, lambda, d_su,
                                                        s.physics.exponents.sat_user);
      out.ris_large_scale[i][u] =
          large_scale_ris(sat.transmit_gain, s.physics.rx_gain, lambda, d_sr, d_ru, s.physics.exponents);
    }
  }
}

ChannelRealization realize_channels(const Scenario& s, RngStream& rng) {
  ChannelRealization out;
  fill_large_scale(s, out);
  const std::size_t ns = s.satellites.size();
  const std::size_t nu = s.users.size();
  const std::size_t n = s.ris.config.size();

  out.direct.assign(ns, std::vector<Complex>(nu));
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t u = 0; u < nu; ++u) {
      // Drawn even when blocked so visibility changes do not shift the stream.
      const Complex h = sample_shadowed_rician(s.fading.shadowed_rician, rng);
      out.direct[i][u] = s.is_visible(u, i) ? h : Complex{};
    }
  }
  out.sat_to_ris.assign(ns, ComplexVector(n));
  out.ris_to_user.assign(nu, ComplexVector(n));
  for (std::size_t e = 0; e < n; ++e) {
    for (std::size_t i = 0; i < ns; ++i) out.sat_to_ris[i][e] = sample_shadowed_rician(s.fading.shadowed_rician, rng);
    for (std::size_t u = 0; u < nu; ++u) out.ris_to_user[u][e] = sample_rician(s.fading.ris_user_k_factor, rng);
  }
  return out;
}

}  // namespace inac
