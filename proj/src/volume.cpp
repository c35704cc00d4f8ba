#include "ksdyn/volume.hpp"

#include <cmath>
#include <limits>

namespace ksdyn {

VolumeElement::VolumeElement(double dv0) : dv0_(dv0) {
  if (!(std::isfinite(dv0) && dv0 > 0.0 && dv0 <= 1.0)) {
    throw InvalidVolume("initial volume must lie in (0, 1], got " +
                        std::to_string(dv0));
  }
}

double log_sum_exp(const Eigen::ArrayXd& x) {
  const double m = x.maxCoeff();
  return m + std::log((x - m).exp().sum());
}

double log_volume(const PoleSpectrum& s, const VolumeElement& v, double t) {
  if (t == 0.0) return std::log(v.dv0());
  const double c = 2.0 * t / s.units().hbar;
  const double lse = log_sum_exp((s.gammas() * c).eval());
  return std::log(v.dv0()) - std::log(static_cast<double>(s.size())) + lse;
}

double evolve_volume(const PoleSpectrum& s, const VolumeElement& v, double t) {
  if (t == 0.0) return v.dv0();
  const double lv = log_volume(s, v, t);
  static const double kLogMax = std::log(std::numeric_limits<double>::max());
  if (lv >= kLogMax) throw VolumeRangeError(lv);
  const double out = std::exp(lv);
  if (out == 0.0) throw VolumeRangeError(lv);
  return out;
}

EscapeFactor escape_factor(const PoleSpectrum& s, double t) {
  const double c = 2.0 * t / s.units().hbar;
  const double lse = log_sum_exp((s.gammas() * c).eval());
  return EscapeFactor{std::log(static_cast<double>(s.size())) - lse, t};
}

}  // namespace ksdyn
