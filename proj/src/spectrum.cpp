#include "ksdyn/spectrum.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ksdyn {

namespace {

void require_finite_positive(double x, const char* name) {
  if (!(std::isfinite(x) && x > 0.0)) {
    throw std::invalid_argument(std::string(name) +
                                " must be finite and positive");
  }
}

}  // namespace

UnitSystem::UnitSystem(double hbar_in, double gamma0_in)
    : hbar(hbar_in), gamma0(gamma0_in) {
  require_finite_positive(hbar, "hbar");
  require_finite_positive(gamma0, "gamma0");
}

PoleSpectrum::PoleSpectrum(Eigen::ArrayXd omegas, Eigen::ArrayXd gammas,
                           UnitSystem units)
    : omegas_(std::move(omegas)), gammas_(std::move(gammas)), units_(units) {
  if (omegas_.size() != gammas_.size()) {
    throw std::invalid_argument("omega/gamma arrays differ in length");
  }
  if (gammas_.size() < 1) {
    throw std::invalid_argument("a spectrum needs at least one pole");
  }
  if (!omegas_.allFinite() || !gammas_.allFinite()) {
    throw std::invalid_argument("pole fields must be finite");
  }
}

PoleSpectrum::PoleSpectrum(const std::vector<Pole>& poles, UnitSystem units)
    : omegas_(poles.size()), gammas_(poles.size()), units_(units) {
  if (poles.empty()) {
    throw std::invalid_argument("a spectrum needs at least one pole");
  }
  for (Eigen::Index k = 0; k < omegas_.size(); ++k) {
    omegas_[k] = poles[static_cast<size_t>(k)].omega;
    gammas_[k] = poles[static_cast<size_t>(k)].gamma;
  }
  if (!omegas_.allFinite() || !gammas_.allFinite()) {
    throw std::invalid_argument("pole fields must be finite");
  }
}

Pole PoleSpectrum::pole(Eigen::Index k) const {
  if (k < 0 || k >= size()) {
    throw std::out_of_range("pole index out of range");
  }
  return Pole{omegas_[k], gammas_[k]};
}

PoleSpectrum gamow_spectrum(int n_bath, const UnitSystem& units,
                            double omega0) {
  if (n_bath < 1) {
    throw std::invalid_argument(
        "gamow_spectrum: bath size must be at least 1 (a single level has "
        "no bath)");
  }
  if (!std::isfinite(omega0)) {
    throw std::invalid_argument("gamow_spectrum: omega0 must be finite");
  }
  Eigen::ArrayXd omegas(n_bath + 1);
  Eigen::ArrayXd gammas(n_bath + 1);
  for (int k = 0; k <= n_bath; ++k) {
    // integer multiples, no accumulation error
    omegas[k] = static_cast<double>(k) * omega0;
    gammas[k] = -(static_cast<double>(k) * units.gamma0);
  }
  return PoleSpectrum(std::move(omegas), std::move(gammas), units);
}

PoleSpectrum time_reverse(const PoleSpectrum& s) {
  return PoleSpectrum(s.omegas(), (-s.gammas()).eval(), s.units());
}

bool has_positive_width(const PoleSpectrum& s) {
  return (s.gammas() > 0.0).any();
}

namespace {

// Pulls "name=<v>" out of a comment line, if present.
bool parse_header_value(const std::string& line, const std::string& name,
                        double* out, int line_no) {
  const std::string key = name + "=";
  const auto pos = line.find(key);
  if (pos == std::string::npos) return false;
  const std::string rest = line.substr(pos + key.size());
  try {
    size_t used = 0;
    *out = std::stod(rest, &used);
  } catch (const std::exception&) {
    throw SpectrumFormatError("line " + std::to_string(line_no) +
                              ": cannot parse " + name + " value");
  }
  return true;
}

}  // namespace

PoleSpectrum load_spectrum(std::istream& in) {
  double hbar = 1.0;
  double gamma0 = 1.0;
  std::vector<Pole> poles;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      parse_header_value(line, "hbar", &hbar, line_no);
      parse_header_value(line, "gamma0", &gamma0, line_no);
      continue;
    }
    std::istringstream row(line.substr(first));
    Pole p;
    std::string extra;
    if (!(row >> p.omega >> p.gamma)) {
      throw SpectrumFormatError("line " + std::to_string(line_no) +
                                ": expected two floats \"omega gamma\"");
    }
    if (row >> extra) {
      throw SpectrumFormatError("line " + std::to_string(line_no) +
                                ": trailing content \"" + extra + "\"");
    }
    poles.push_back(p);
  }
  if (poles.empty()) {
    throw SpectrumFormatError("spectrum file holds no poles");
  }
  return PoleSpectrum(poles, UnitSystem(hbar, gamma0));
}

PoleSpectrum load_spectrum_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SpectrumFormatError("cannot open spectrum file: " + path);
  }
  try {
    return load_spectrum(in);
  } catch (const SpectrumFormatError& e) {
    throw SpectrumFormatError(path + ": " + e.what());
  }
}

void save_spectrum(const PoleSpectrum& s, std::ostream& out) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "# hbar=%.17g gamma0=%.17g\n",
                s.units().hbar, s.units().gamma0);
  out << buf;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", s.omegas()[k],
                  s.gammas()[k]);
    out << buf;
  }
}

void save_spectrum_file(const PoleSpectrum& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw SpectrumFormatError("cannot open spectrum file for writing: " +
                              path);
  }
  save_spectrum(s, out);
  if (!out) {
    throw SpectrumFormatError("write failed: " + path);
  }
}

}  // namespace ksdyn
