#pragma once

#include <Eigen/Core>

#include "ksdyn/spectrum.hpp"

namespace ksdyn {

/// Initial phase-space volume as a fraction of the bounded region S,
/// i.e. dv0 = hbar/S, the inverse of the quasiclassical parameter S/hbar.
/// Spreading saturates when the evolved volume reaches 1.
class VolumeElement {
 public:
  explicit VolumeElement(double dv0);

  double dv0() const { return dv0_; }

  static constexpr double kSaturation = 1.0;

 private:
  double dv0_;
};

/// Contraction exponent of the conditionally invariant measure at a given
/// time: mu(T(A)) = exp(-gamma_escape) * mu(A). Distinct from the pole
/// widths despite the shared letter.
struct EscapeFactor {
  double gamma_escape = 0.0;
  double time = 0.0;
};

/// Max-shifted log-sum-exp; never overflows for finite input.
double log_sum_exp(const Eigen::ArrayXd& x);

/// ln of the evolved volume,
///   log dv0 - log N + LSE({2*gamma_i*t/hbar}).
/// Exact at t = 0 (returns log dv0).
double log_volume(const PoleSpectrum& s, const VolumeElement& v, double t);

/// Evolved volume (1/N) * dv0 * sum_i exp(2*gamma_i*t/hbar), computed
/// through log_volume. Returns dv0 exactly at t = 0. Throws
/// VolumeRangeError when the result would overflow or underflow to zero;
/// the error carries the log value.
double evolve_volume(const PoleSpectrum& s, const VolumeElement& v, double t);

/// gamma = -log((1/N) sum_i exp(2*gamma_i*t/hbar)). Independent of any
/// volume element.
EscapeFactor escape_factor(const PoleSpectrum& s, double t);

}  // namespace ksdyn
