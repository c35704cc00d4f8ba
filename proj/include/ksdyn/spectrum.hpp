#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <vector>

#include "ksdyn/errors.hpp"

namespace ksdyn {

/// Action and width scales fixing the relaxation time t_R = hbar/gamma0.
/// Defaults are natural units (hbar = gamma0 = 1), in which every time is
/// measured in units of t_R and every rate in gamma0/hbar.
struct UnitSystem {
  double hbar = 1.0;
  double gamma0 = 1.0;

  UnitSystem() = default;
  UnitSystem(double hbar_in, double gamma0_in);

  /// t_R = hbar / gamma0.
  double relaxation_time() const { return hbar / gamma0; }
};

/// One complex eigenvalue E = hbar*omega + i*gamma.
/// Negative gamma means decay; -gamma > 0 is the resonance width.
struct Pole {
  double omega = 0.0;
  double gamma = 0.0;
};

/// Ordered set of complex eigenvalues of a non-Hermitian Hamiltonian,
/// stored as coefficient arrays. The index of a pole is stable across
/// every transformation in this library.
class PoleSpectrum {
 public:
  PoleSpectrum(Eigen::ArrayXd omegas, Eigen::ArrayXd gammas,
               UnitSystem units = {});
  PoleSpectrum(const std::vector<Pole>& poles, UnitSystem units = {});

  Eigen::Index size() const { return gammas_.size(); }
  Pole pole(Eigen::Index k) const;

  const Eigen::ArrayXd& omegas() const { return omegas_; }
  const Eigen::ArrayXd& gammas() const { return gammas_; }
  const UnitSystem& units() const { return units_; }

 private:
  Eigen::ArrayXd omegas_;
  Eigen::ArrayXd gammas_;
  UnitSystem units_;
};

/// Pole spectrum of a single oscillator coupled to a bath of n_bath
/// noninteracting oscillators: N+1 poles z_k = k*(hbar*omega0 - i*gamma0),
/// k = 0..n_bath. Widths are emitted in the original (decaying) sign
/// convention gamma_k = -k*gamma0; apply time_reverse for the expanding
/// counterpart.
PoleSpectrum gamow_spectrum(int n_bath, const UnitSystem& units = {},
                            double omega0 = 1.0);

/// t -> -t, which for complex eigenvalues is gamma_k -> -gamma_k.
/// Involution: applying it twice reproduces the input bit for bit.
PoleSpectrum time_reverse(const PoleSpectrum& s);

/// True iff at least one gamma is strictly positive (a volume element
/// can spread, so the saturation equation has a root).
bool has_positive_width(const PoleSpectrum& s);

// Plain-text spectrum files: one "omega gamma" pair per line, '#' starts a
// comment, an optional comment carries "hbar=<v> gamma0=<v>" (defaults 1, 1).
PoleSpectrum load_spectrum(std::istream& in);
PoleSpectrum load_spectrum_file(const std::string& path);
void save_spectrum(const PoleSpectrum& s, std::ostream& out);
void save_spectrum_file(const PoleSpectrum& s, const std::string& path);

}  // namespace ksdyn
