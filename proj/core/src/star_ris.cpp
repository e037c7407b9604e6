#include "inac/star_ris.hpp"

#include <cmath>
#include <string>

#include "inac/errors.hpp"
#include "inac/geometry.hpp"

namespace inac {

double wrap_phase(double radians) {
  if (!std::isfinite(radians)) throw ValidationError("phase must be finite");
  double w = std::fmod(radians, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  // fmod of a value just below a multiple of 2 pi can round up to 2 pi.
  if (w >= kTwoPi) w = 0.0;
  return w;
}

namespace {

std::vector<double> wrapped(std::vector<double> v) {
  for (double& x : v) x = wrap_phase(x);
  return v;
}

}  // namespace

StarRisConfig::StarRisConfig(std::vector<double> beta_reflect, std::vector<double> beta_transmit,
                             std::vector<double> theta_reflect, std::vector<double> theta_transmit,
                             bool energy_conserving)
    : beta_reflect_(std::move(beta_reflect)),
      beta_transmit_(std::move(beta_transmit)),
      theta_reflect_(std::move(theta_reflect)),
      theta_transmit_(std::move(theta_transmit)),
      energy_conserving_(energy_conserving) {
  const std::size_t n = beta_reflect_.size();
  if (beta_transmit_.size() != n || theta_reflect_.size() != n || theta_transmit_.size() != n)
    throw ValidationError("STAR-RIS profile vectors must all have length N");
  theta_reflect_ = wrapped(std::move(theta_reflect_));
  theta_transmit_ = wrapped(std::move(theta_transmit_));
  validate();
}

StarRisConfig StarRisConfig::uniform(std::size_t n, double beta_reflect, double beta_transmit,
                                     bool energy_conserving) {
  if (energy_conserving) {
    const double norm = std::hypot(beta_reflect, beta_transmit);
    if (!(norm > 0.0)) throw ValidationError("STAR-RIS amplitudes must not both be zero");
    beta_reflect /= norm;
    beta_transmit /= norm;
  }
  return StarRisConfig(std::vector<double>(n, beta_reflect), std::vector<double>(n, beta_transmit),
                       std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), energy_conserving);
}

StarRisConfig StarRisConfig::with_reflect_phases(std::vector<double> theta) const {
  return StarRisConfig(beta_reflect_, beta_transmit_, std::move(theta), theta_transmit_, energy_conserving_);
}

StarRisConfig StarRisConfig::with_transmit_phases(std::vector<double> theta) const {
  return StarRisConfig(beta_reflect_, beta_transmit_, theta_reflect_, std::move(theta), energy_conserving_);
}

void StarRisConfig::validate() const {
  for (std::size_t i = 0; i < size(); ++i) {
    const double br = beta_reflect_[i];
    const double bt = beta_transmit_[i];
    if (!(br > 0.0 && br <= 1.0) || !(bt > 0.0 && bt <= 1.0))
      throw ValidationError("STAR-RIS element " + std::to_string(i) + ": amplitudes must lie in (0, 1]");
    if (energy_conserving_ && std::abs(br * br + bt * bt - 1.0) > 1e-12)
      throw ValidationError("STAR-RIS element " + std::to_string(i) +
                            ": beta_R^2 + beta_T^2 must equal 1 for an energy-conserving profile");
  }
}

ComplexVector StarRisConfig::reflect_coefficients() const {
  ComplexVector out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = std::polar(beta_reflect_[i], theta_reflect_[i]);
  return out;
}

ComplexVector StarRisConfig::transmit_coefficients() const {
  ComplexVector out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = std::polar(beta_transmit_[i], theta_transmit_[i]);
  return out;
}

CascadeChannel build_cascade(std::span<const Complex> ris_to_user, std::span<const Complex> sat_to_ris) {
  if (ris_to_user.size() != sat_to_ris.size())
    throw ValidationError("cascade: RIS->user and satellite->RIS vectors differ in length");
  CascadeChannel c;
  c.entries.resize(ris_to_user.size());
  for (std::size_t i = 0; i < c.entries.size(); ++i) c.entries[i] = ris_to_user[i] * sat_to_ris[i];
  return c;
}

std::vector<double> align_phases(const CascadeChannel& cascade, double desired_phase) {
  std::vector<double> theta(cascade.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const Complex c = cascade.entries[i];
    theta[i] = wrap_phase(c == Complex{} ? desired_phase : desired_phase - std::arg(c));
  }
  return theta;
}

namespace {

Complex ris_sum(const CascadeChannel& cascade, const ComplexVector& coeffs) {
  if (coeffs.size() != cascade.size()) throw ValidationError("STAR-RIS size does not match the cascade");
  Complex s{};
  for (std::size_t i = 0; i < coeffs.size(); ++i) s += coeffs[i] * cascade.entries[i];
  return s;
}

}  // namespace

double effective_gain_reflect(const CascadeChannel& cascade, const StarRisConfig& config, double ris_large_scale,
                              Complex direct_small_scale, double direct_large_scale) {
  const Complex total = ris_sum(cascade, config.reflect_coefficients()) * std::sqrt(ris_large_scale) +
                        direct_small_scale * std::sqrt(direct_large_scale);
  return std::norm(total);
}

double effective_gain_transmit(const CascadeChannel& cascade, const StarRisConfig& config, double ris_large_scale) {
  return std::norm(ris_sum(cascade, config.transmit_coefficients()) * std::sqrt(ris_large_scale));
}

}  // namespace inac
