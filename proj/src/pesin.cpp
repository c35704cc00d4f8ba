#include "ksdyn/pesin.hpp"

#include <cmath>
#include <stdexcept>

#include "ksdyn/volume.hpp"

namespace ksdyn {

double ks_entropy_from_time(const KsSolution& sol, const VolumeElement& v) {
  if (!(sol.t0 > 0.0)) {
    throw std::domain_error(
        "KS-entropy undefined at t0 = 0 (initial volume already spread)");
  }
  return std::log(1.0 / v.dv0()) / sol.t0;
}

double tau_ks(double h_ks) {
  if (!(h_ks > 0.0)) {
    throw std::domain_error("KS-time undefined for non-positive entropy");
  }
  return 1.0 / h_ks;
}

double lyapunov_sum_at(const PoleSpectrum& s, const KsSolution& sol) {
  if (!(sol.t0 > 0.0)) {
    throw std::domain_error("Lyapunov sum undefined at t0 = 0");
  }
  const double c = 2.0 * sol.t0 / s.units().hbar;
  const double lse = log_sum_exp((s.gammas() * c).eval());
  return (lse - std::log(static_cast<double>(s.size()))) / sol.t0;
}

PerModeExponents per_mode_exponent(double h_ks, int n_bath,
                                   const UnitSystem& units) {
  if (n_bath < 1) {
    throw std::invalid_argument(
        "per_mode_exponent: bath size must be at least 1");
  }
  if (!(h_ks >= 0.0)) {
    throw std::invalid_argument("per_mode_exponent: entropy must be >= 0");
  }
  PerModeExponents out;
  out.sigma_prime = h_ks / static_cast<double>(n_bath);
  out.sigma_original = -out.sigma_prime;
  out.alpha = out.sigma_prime * (units.hbar / units.gamma0);
  return out;
}

LifetimeTable lifetimes(double alpha, int n_bath, const UnitSystem& units) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("lifetimes: alpha must be positive");
  }
  if (n_bath < 1) {
    throw std::invalid_argument("lifetimes: bath size must be at least 1");
  }
  LifetimeTable table;
  table.alpha = alpha;
  table.decaying = true;
  table.rows.reserve(static_cast<size_t>(n_bath));
  const double rate0 = units.gamma0 / units.hbar;
  for (int n = 1; n <= n_bath; ++n) {
    LifetimeRow row;
    row.level = n;
    row.lambda = (static_cast<double>(n) * alpha) * rate0;
    row.lifetime = 1.0 / row.lambda;
    table.rows.push_back(row);
  }
  return table;
}

double generalized_pesin_residual(const PoleSpectrum& s, const KsSolution& sol,
                                  double alpha) {
  if (s.size() < 2) {
    throw std::invalid_argument(
        "generalized_pesin_residual: spectrum needs a bath (>= 2 poles)");
  }
  const int n_bath = static_cast<int>(s.size()) - 1;
  const double h = lyapunov_sum_at(s, sol);
  const double alpha_sc = per_mode_exponent(h, n_bath, s.units()).alpha;
  if (alpha_sc > 0.0 && std::isfinite(alpha_sc)) {
    // ratio form: the self-consistent coupling cancels exactly
    return h * (1.0 - alpha / alpha_sc);
  }
  return h - alpha * (static_cast<double>(n_bath) *
                      (s.units().gamma0 / s.units().hbar));
}

PesinReport make_pesin_report(const KsSolution& sol, const VolumeElement& v,
                              int n_bath, const UnitSystem& units,
                              bool reversed) {
  const double h_rate = ks_entropy_from_time(sol, v);  // 1/time
  const PerModeExponents pm = per_mode_exponent(h_rate, n_bath, units);
  const double t_relax = units.relaxation_time();

  PesinReport rep;
  rep.h_ks = h_rate * t_relax;  // gamma0/hbar units
  rep.lyap_sum = rep.h_ks;      // Pesin identity holds by construction
  rep.tau_ks = tau_ks(rep.h_ks);
  rep.sigma_per_mode = pm.sigma_prime * t_relax;
  rep.sigma_original = -rep.sigma_per_mode;
  rep.alpha = pm.alpha;
  rep.n_bath = n_bath;
  rep.reversed = reversed;
  return rep;
}

}  // namespace ksdyn
