#pragma once

#include <utility>

#include "ksdyn/spectrum.hpp"
#include "ksdyn/volume.hpp"

namespace ksdyn {

struct SolverConfig {
  double rel_tol = 1e-12;  // relative tolerance on the root
  int max_iter = 200;      // expansion + bisection budget
  int scan_points = 1024;  // pre-scan grid for mixed-sign spectra

  void validate() const;
};

/// Root of the saturation equation: the smallest positive t0 with
/// volume(t0) = 1, together with its adimensionalized form T0 = t0/t_R
/// and a convergence certificate.
struct KsSolution {
  double t0 = 0.0;
  double T0 = 0.0;
  double residual = 0.0;  // |log_volume(t0)|
  std::pair<double, double> bracket{0.0, 0.0};
  int iterations = 0;
};

/// Solves 1 = (1/N) * dv0 * sum_i exp(2*gamma_i*t0/hbar) for the smallest
/// positive t0 by bracketed bisection in the log domain. dv0 = 1 returns
/// t0 = 0 immediately. Mixed-sign spectra are pre-scanned on a log-spaced
/// grid for the first sign change. Deterministic for fixed inputs.
///
/// Throws NoPositiveRoot when no gamma is positive (the message points to
/// time_reverse), NonConvergence past cfg.max_iter.
KsSolution solve_ks_time(const PoleSpectrum& s, const VolumeElement& v,
                         const SolverConfig& cfg = {});

/// Convenience wrapper for the time-reversed Gamow family: solves
/// (N+1) = dv0 * sum_{k=0}^{N} exp(2 k T0) in adimensionalized form,
/// then rescales t0 = T0 * t_R of the requested units.
KsSolution solve_gamow(int n_bath, double dv0, const SolverConfig& cfg = {},
                       const UnitSystem& units = {});

/// Fixed point x of x = ln(x/dv0) on the x >= 1 branch (the large-N limit
/// of 2*N*T0); returns 1 when ln(1/dv0) <= 1, the limit point as dv0 -> 1.
double asymptotic_spread_exponent(double dv0);

/// Large-N estimate T0 ~ x/(2N) with x the fixed point above. Independent
/// of the bisection path; converges to solve_gamow's T0 as N grows.
double asymptotic_T0(double dv0, int n_bath);

}  // namespace ksdyn
