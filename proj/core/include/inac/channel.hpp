#pragma once

#include <complex>
#include <vector>

#include "inac/physics.hpp"
#include "inac/rng.hpp"
#include "inac/scenario.hpp"
#include "inac/star_ris.hpp"

namespace inac {

/// G_T (lambda / 4 pi)^exponent d^-exponent. With exponent 2 this is the
/// free-space satellite->user loss. Throws ValidationError when d <= 0.
double large_scale_direct(double tx_gain, double wavelength, double d, double exponent);

/// Satellite -> RIS -> user loss: product of the two per-segment factors,
/// the first carrying G_T and the second G_R.
double large_scale_ris(double tx_gain, double rx_gain, double wavelength, double d_sat_ris, double d_ris_user,
                       const PathlossExponents& exponents);

/// A e^{j phi} + w with A ~ Nakagami(m, omega), phi ~ U[0, 2 pi) and
/// w ~ CN(0, 2b). E|h|^2 = omega + 2b.
Complex sample_shadowed_rician(const ShadowedRicianParams& params, RngStream& rng);

/// sqrt(K/(K+1)) + CN(0, 1/(K+1)); unit mean-square gain. Infinite K gives
/// the pure line-of-sight gain 1.
Complex sample_rician(double k_factor, RngStream& rng);

/// One draw of every small-scale gain in a scenario together with the
/// large-scale gains implied by its geometry.
struct ChannelRealization {
  // [satellite][user]; exactly zero when the satellite is not in I_v.
  std::vector<std::vector<Complex>> direct;
  // [satellite] -> N gains satellite -> RIS element.
  std::vector<ComplexVector> sat_to_ris;
  // [user] -> N gains RIS element -> user.
  std::vector<ComplexVector> ris_to_user;
  std::vector<std::vector<double>> direct_large_scale;  // L_iu
  std::vector<std::vector<double>> ris_large_scale;     // L_Riu
};

/// Large-scale gains only (deterministic).
void fill_large_scale(const Scenario& scenario, ChannelRealization& out);

/// Draw order is fixed: all direct gains (satellite-major), then for each
/// RIS element every satellite->RIS gain followed by every RIS->user gain.
/// A realization with N elements is therefore a prefix of one with more.
ChannelRealization realize_channels(const Scenario& scenario, RngStream& rng);

}  // namespace inac
