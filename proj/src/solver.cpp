#include "ksdyn/solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ksdyn {

void SolverConfig::validate() const {
  if (!(std::isfinite(rel_tol) && rel_tol > 0.0)) {
    throw std::invalid_argument("SolverConfig: rel_tol must be positive");
  }
  if (max_iter < 1) {
    throw std::invalid_argument("SolverConfig: max_iter must be at least 1");
  }
  if (scan_points < 2) {
    throw std::invalid_argument("SolverConfig: scan_points must be at least 2");
  }
}

namespace {

std::string bracket_text(double lo, double hi) {
  return "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
}

}  // namespace

KsSolution solve_ks_time(const PoleSpectrum& s, const VolumeElement& v,
                         const SolverConfig& cfg) {
  cfg.validate();
  const double dv0 = v.dv0();
  if (dv0 == 1.0) {
    // Already spread: the saturation equation holds identically at t = 0.
    return KsSolution{};
  }
  if (!has_positive_width(s)) {
    throw NoPositiveRoot(
        "every pole width is non-positive, the volume only contracts and "
        "never reaches saturation; solve the time-reversed spectrum "
        "(time_reverse) instead");
  }

  const double t_relax = s.units().relaxation_time();
  auto f = [&](double t) { return log_volume(s, v, t); };

  int iterations = 0;
  auto spend = [&](double lo, double hi) {
    if (++iterations > cfg.max_iter) {
      throw NonConvergence("KS-time solve exceeded " +
                               std::to_string(cfg.max_iter) +
                               " iterations, bracket " + bracket_text(lo, hi),
                           lo, hi);
    }
  };

  // Geometric expansion of the upper bound; f(0) = log dv0 < 0.
  double lo = 0.0;
  double hi = cfg.rel_tol * t_relax;
  while (true) {
    spend(lo, hi);
    if (f(hi) > 0.0) break;
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) {
      throw NonConvergence("saturation time exceeds the representable range",
                           lo, hi);
    }
  }

  const bool mixed = (s.gammas() > 0.0).any() && (s.gammas() < 0.0).any();
  if (mixed) {
    // First sign change on a log-spaced grid defines "the" KS-time as the
    // smallest positive root.
    const double t_start = std::min(cfg.rel_tol * t_relax, hi);
    const double log_lo = std::log(t_start);
    const double log_hi = std::log(hi);
    const int m = cfg.scan_points;
    double prev = 0.0;
    for (int i = 0; i < m; ++i) {
      const double t_i =
          (i == m - 1) ? hi
                       : std::exp(log_lo + (log_hi - log_lo) * i / (m - 1));
      if (f(t_i) >= 0.0) {
        lo = prev;
        hi = t_i;
        break;
      }
      prev = t_i;
    }
  }

  // Bisection; unconditionally convergent on the enclosing interval.
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;  // no representable midpoint left
    if ((hi - lo) <= cfg.rel_tol * mid) break;
    spend(lo, hi);
    const double fm = f(mid);
    if (fm > 0.0) {
      hi = mid;
    } else if (fm < 0.0) {
      lo = mid;
    } else {
      lo = hi = mid;
      break;
    }
  }

  KsSolution sol;
  sol.t0 = 0.5 * (lo + hi);
  if (!(sol.t0 >= lo && sol.t0 <= hi)) sol.t0 = hi;
  sol.T0 = sol.t0 / t_relax;
  sol.residual = std::abs(f(sol.t0));
  sol.bracket = {lo, hi};
  sol.iterations = iterations;
  return sol;
}

KsSolution solve_gamow(int n_bath, double dv0, const SolverConfig& cfg,
                       const UnitSystem& units) {
  // Solve in T0 directly (gamma0/hbar = 1), then rescale.
  const UnitSystem natural{};
  const PoleSpectrum reversed = time_reverse(gamow_spectrum(n_bath, natural));
  KsSolution sol = solve_ks_time(reversed, VolumeElement(dv0), cfg);
  const double t_relax = units.relaxation_time();
  sol.t0 = sol.T0 * t_relax;
  sol.bracket.first *= t_relax;
  sol.bracket.second *= t_relax;
  return sol;
}

double asymptotic_spread_exponent(double dv0) {
  if (!(std::isfinite(dv0) && dv0 > 0.0 && dv0 < 1.0)) {
    throw std::invalid_argument(
        "asymptotic_spread_exponent: dv0 must lie in (0, 1)");
  }
  const double c = std::log(1.0 / dv0);
  // x - ln x >= 1 for x > 0, with the minimum at x = 1.
  if (c <= 1.0) return 1.0;
  const double eps = std::numeric_limits<double>::epsilon();
  double x = std::max(c, 1.5);
  for (int i = 0; i < 200000; ++i) {
    const double next = c + std::log(x);
    if (std::abs(next - x) <= 4.0 * eps * next) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

double asymptotic_T0(double dv0, int n_bath) {
  if (n_bath < 1) {
    throw std::invalid_argument("asymptotic_T0: bath size must be at least 1");
  }
  return asymptotic_spread_exponent(dv0) / (2.0 * n_bath);
}

}  // namespace ksdyn
