#pragma once

#include <vector>

#include "ksdyn/solver.hpp"

namespace ksdyn {

/// Equal-contribution decomposition of the entropy over n_bath modes.
/// sigma_prime / sigma_original are rates (1/time); alpha is the
/// dimensionless coupling sigma_prime * hbar / gamma0.
struct PerModeExponents {
  double sigma_prime = 0.0;
  double sigma_original = 0.0;
  double alpha = 0.0;
};

/// Summary of the dynamical quantities at a solved root, adimensionalized
/// to gamma0/hbar units. h_ks and lyap_sum are the same number by
/// construction (Pesin identity); `reversed` marks whether the report
/// describes the time-reversed (expanding) system.
struct PesinReport {
  double h_ks = 0.0;
  double lyap_sum = 0.0;
  double tau_ks = 0.0;  // 1/h_ks, in units of t_R
  double sigma_per_mode = 0.0;
  double sigma_original = 0.0;
  double alpha = 0.0;
  int n_bath = 0;
  bool reversed = false;
};

struct LifetimeRow {
  int level = 0;
  double lambda = 0.0;    // decay-rate magnitude n*alpha*gamma0/hbar
  double lifetime = 0.0;  // 1/lambda = hbar/(n*alpha*gamma0)
};

/// Per-level Lyapunov rates and lifetimes; rates are stored as magnitudes
/// with `decaying` carrying the sign convention of the original system.
struct LifetimeTable {
  double alpha = 1.0;
  bool decaying = true;
  std::vector<LifetimeRow> rows;
};

/// h_KS = ln(1/dv0) / t0 (physical rate, 1/time). The reciprocal is the
/// KS-time tau_KS = 1/h_KS. Throws std::domain_error when t0 = 0
/// (dv0 = 1 leaves the entropy undefined).
double ks_entropy_from_time(const KsSolution& sol, const VolumeElement& v);

/// tau_KS = 1/h_KS.
double tau_ks(double h_ks);

/// Sum of positive Lyapunov exponents read off the pole spectrum at the
/// root: (1/t0) * log((1/N) sum_i exp(2*gamma_i*t0/hbar)). Analytically
/// identical to ks_entropy_from_time when sol solves s.
double lyapunov_sum_at(const PoleSpectrum& s, const KsSolution& sol);

/// sigma_prime = h_ks/n_bath, sigma_original = -sigma_prime,
/// alpha = sigma_prime * hbar/gamma0. h_ks is a physical rate.
PerModeExponents per_mode_exponent(double h_ks, int n_bath,
                                   const UnitSystem& units = {});

/// Rows n = 1..n_bath with lambda_n = n*alpha*gamma0/hbar and
/// t_n = 1/lambda_n; alpha = 1 reduces to t_n = t_R/n.
LifetimeTable lifetimes(double alpha, int n_bath, const UnitSystem& units = {});

/// H_KS = h_ks - alpha * N * gamma0/hbar with N = s.size()-1 bath modes and
/// h_ks = lyapunov_sum_at(s, sol). Exactly zero when alpha is the
/// self-consistent coupling obtained from per_mode_exponent on the same sum.
double generalized_pesin_residual(const PoleSpectrum& s, const KsSolution& sol,
                                  double alpha);

PesinReport make_pesin_report(const KsSolution& sol, const VolumeElement& v,
                              int n_bath, const UnitSystem& units,
                              bool reversed);

}  // namespace ksdyn
