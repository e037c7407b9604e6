#pragma once

#include <complex>
#include <span>
#include <vector>

namespace inac {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Wraps an angle into [0, 2*pi).
double wrap_phase(double radians);

/// Per-element amplitude and phase profile of a STAR-RIS for its reflection
/// (outdoor side) and transmission (indoor side) layers.
///
/// Amplitudes lie in (0, 1] and phases are stored wrapped to [0, 2*pi).
/// With `energy_conserving` set, every element satisfies
/// beta_R^2 + beta_T^2 = 1 to 1e-12 and violating profiles are rejected.
/// Without it the amplitudes are applied as given, which is how the
/// reference simulation setup uses beta = 0.5 on both sides.
class StarRisConfig {
 public:
  StarRisConfig(std::vector<double> beta_reflect, std::vector<double> beta_transmit,
                std::vector<double> theta_reflect, std::vector<double> theta_transmit,
                bool energy_conserving);

  /// Same amplitude on every element, zero phases. When `energy_conserving`
  /// is set the pair is renormalized onto the unit circle
  /// (0.5, 0.5) -> (sqrt(0.5), sqrt(0.5)).
  static StarRisConfig uniform(std::size_t n, double beta_reflect, double beta_transmit,
                               bool energy_conserving);

  StarRisConfig with_reflect_phases(std::vector<double> theta) const;
  StarRisConfig with_transmit_phases(std::vector<double> theta) const;

  std::size_t size() const { return beta_reflect_.size(); }
  bool energy_conserving() const { return energy_conserving_; }
  std::span<const double> beta_reflect() const { return beta_reflect_; }
  std::span<const double> beta_transmit() const { return beta_transmit_; }
  std::span<const double> theta_reflect() const { return theta_reflect_; }
  std::span<const double> theta_transmit() const { return theta_transmit_; }

  /// Diagonal of Psi_R / Psi_T: beta_n * exp(j theta_n).
  ComplexVector reflect_coefficients() const;
  ComplexVector transmit_coefficients() const;

 private:
  void validate() const;

  std::vector<double> beta_reflect_;
  std::vector<double> beta_transmit_;
  std::vector<double> theta_reflect_;
  std::vector<double> theta_transmit_;
  bool energy_conserving_;
};

/// Per-element product of the RIS->user and satellite->RIS gains.
struct CascadeChannel {
  ComplexVector entries;
  std::size_t size() const { return entries.size(); }
};

CascadeChannel build_cascade(std::span<const Complex> ris_to_user, std::span<const Complex> sat_to_ris);

/// Phases theta_d - arg(entry_n), wrapped. Applying them co-phases every
/// term of the RIS sum at `desired_phase`. Zero entries get `desired_phase`.
std::vector<double> align_phases(const CascadeChannel& cascade, double desired_phase);

/// |sum_n beta_R,n e^{j theta_R,n} c_n sqrt(L_Riu) + h_iu sqrt(L_iu)|^2.
/// With h_iu = 0 this is the reflect-only gain.
double effective_gain_reflect(const CascadeChannel& cascade, const StarRisConfig& config, double ris_large_scale,
                              Complex direct_small_scale = {}, double direct_large_scale = 0.0);

/// |sum_n beta_T,n e^{j theta_T,n} c_n sqrt(L_Riu)|^2 (indoor side, no direct path).
double effective_gain_transmit(const CascadeChannel& cascade, const StarRisConfig& config, double ris_large_scale);

}  // namespace inac
