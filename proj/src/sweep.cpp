#include "ksdyn/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace ksdyn {

void SweepGrid::validate() const {
  if (n_values.empty() || dv_values.empty()) {
    throw std::invalid_argument("SweepGrid: value lists must be non-empty");
  }
  for (size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 1) {
      throw std::invalid_argument("SweepGrid: every n must be at least 1");
    }
    if (i > 0 && n_values[i] <= n_values[i - 1]) {
      throw std::invalid_argument("SweepGrid: n values must strictly increase");
    }
  }
  for (double dv : dv_values) {
    if (!(std::isfinite(dv) && dv > 0.0 && dv < 1.0)) {
      throw std::invalid_argument("SweepGrid: every dv must lie in (0, 1)");
    }
  }
  solver.validate();
}

namespace {

SweepCell solve_cell(int n, double dv, const SolverConfig& cfg) {
  SweepCell cell;
  cell.n = n;
  cell.dv = dv;
  try {
    const KsSolution sol = solve_gamow(n, dv, cfg);
    const PesinReport rep =
        make_pesin_report(sol, VolumeElement(dv), n, UnitSystem{}, true);
    cell.T0 = sol.T0;
    cell.h_ks = rep.h_ks;
    cell.sigma_prime = rep.sigma_per_mode;
    cell.alpha = rep.alpha;
    cell.status = "ok";
  } catch (const NoPositiveRoot&) {
    cell.status = "no-positive-root";
  } catch (const NonConvergence&) {
    cell.status = "non-convergence";
  } catch (const InvalidVolume&) {
    cell.status = "invalid-volume";
  }
  return cell;
}

FitResult finish_fit(double slope, double intercept, double stderr_slope,
                     double sse, double sst) {
  FitResult fit;
  fit.slope = slope;
  fit.intercept = intercept;
  fit.slope_stderr = stderr_slope;
  double r2 = (sst > 0.0) ? 1.0 - sse / sst : 1.0;
  fit.r_squared = std::clamp(r2, 0.0, 1.0);
  return fit;
}

void require_fittable(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 2) {
    throw std::invalid_argument("fit needs at least two points");
  }
  const double x0 = pts.front().first;
  const bool distinct =
      std::any_of(pts.begin(), pts.end(),
                  [&](const auto& p) { return p.first != x0; });
  if (!distinct) {
    throw std::invalid_argument("fit needs at least two distinct N values");
  }
}

}  // namespace

FitResult fit_hks(const std::vector<std::pair<double, double>>& points) {
  require_fittable(points);
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  Eigen::ArrayXd x(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x[i] = points[static_cast<size_t>(i)].first;
    y[i] = points[static_cast<size_t>(i)].second;
  }
  const double xm = x.mean();
  const double ym = y.mean();
  const Eigen::ArrayXd dx = x - xm;
  const Eigen::ArrayXd dy = y - ym;
  const double sxx = (dx * dx).sum();
  const double slope = (dx * dy).sum() / sxx;
  const double intercept = ym - slope * xm;
  const Eigen::ArrayXd resid = y - (intercept + slope * x);
  const double sse = (resid * resid).sum();
  const double sst = (dy * dy).sum();
  const double stderr_slope =
      (n > 2) ? std::sqrt(sse / (static_cast<double>(n - 2) * sxx)) : 0.0;
  return finish_fit(slope, intercept, stderr_slope, sse, sst);
}

FitResult fit_hks_through_origin(
    const std::vector<std::pair<double, double>>& points) {
  require_fittable(points);
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  Eigen::ArrayXd x(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x[i] = points[static_cast<size_t>(i)].first;
    y[i] = points[static_cast<size_t>(i)].second;
  }
  const double sxx = (x * x).sum();
  const double slope = (x * y).sum() / sxx;
  const Eigen::ArrayXd resid = y - slope * x;
  const double sse = (resid * resid).sum();
  const double syy = (y * y).sum();
  const double stderr_slope =
      (n > 1) ? std::sqrt(sse / (static_cast<double>(n - 1) * sxx)) : 0.0;
  // uncentered R^2 for the no-intercept model
  return finish_fit(slope, 0.0, stderr_slope, sse, syy);
}

SweepResult run_sweep(const SweepGrid& grid, int threads) {
  grid.validate();
  SweepResult out;
  out.grid = grid;

  const size_t n_dv = grid.dv_values.size();
  const size_t total = grid.n_values.size() * n_dv;
  out.cells.resize(total);

  auto compute = [&](size_t idx) {
    const int n = grid.n_values[idx / n_dv];
    const double dv = grid.dv_values[idx % n_dv];
    out.cells[idx] = solve_cell(n, dv, grid.solver);
  };

  if (threads <= 1) {
    for (size_t i = 0; i < total; ++i) compute(i);
  } else {
    // cells are independent; slots are disjoint, emission order is fixed
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
        compute(i);
      }
    };
    std::vector<std::thread> pool;
    const int count = std::min<int>(threads, static_cast<int>(total));
    pool.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  out.fits.reserve(n_dv);
  for (size_t j = 0; j < n_dv; ++j) {
    ColumnFit col;
    col.dv = grid.dv_values[j];
    std::vector<std::pair<double, double>> pts;
    for (size_t i = 0; i < grid.n_values.size(); ++i) {
      const SweepCell& cell = out.cells[i * n_dv + j];
      if (cell.ok()) pts.emplace_back(static_cast<double>(cell.n), cell.h_ks);
    }
    col.points = static_cast<int>(pts.size());
    try {
      col.free_fit = fit_hks(pts);
      col.origin_fit = fit_hks_through_origin(pts);
      col.ok = true;
      col.note = "ok";
    } catch (const std::invalid_argument&) {
      col.ok = false;
      col.note = "insufficient-points";
    }
    out.fits.push_back(std::move(col));
  }

  double sum = 0.0;
  int fitted = 0;
  for (const ColumnFit& col : out.fits) {
    if (col.ok) {
      sum += col.free_fit.slope;
      ++fitted;
    }
  }
  if (fitted > 0) {
    out.aggregate_alpha_mean = sum / fitted;
    double spread = 0.0;
    for (const ColumnFit& col : out.fits) {
      if (col.ok) {
        spread = std::max(spread,
                          std::abs(col.free_fit.slope - out.aggregate_alpha_mean));
      }
    }
    out.aggregate_alpha_spread = spread;
  }
  return out;
}

// ---- golden table ----

const std::vector<GoldenCell>& table1_golden() {
  static const std::vector<GoldenCell> kTable = {
      {5, 1e-3, "0.85", false},     {5, 1e-6, "1.56", false},
      {5, 1e-9, "0.0313", true},    {5, 1e-12, "0.0313", true},
      {10, 1e-3, "0.438", false},   {10, 1e-6, "0.799", false},
      {10, 1e-9, "1.15", false},    {10, 1e-12, "1.5", false},
      {30, 1e-3, "0.15", false},    {30, 1e-6, "0.287", false},
      {30, 1e-9, "0.393", false},   {30, 1e-12, "0.511", false},
      {60, 1e-3, "0.0837", false},  {60, 1e-6, "0.146", false},
      {60, 1e-9, "0.198", false},   {60, 1e-12, "0.257", false},
      {100, 1e-3, "0.0544", false}, {100, 1e-6, "0.0828", false},
      {100, 1e-9, "0.119", false},  {100, 1e-12, "0.154", false},
      {1000, 1e-3, "0.0045", false},  {1000, 1e-6, "0.0083", false},
      {1000, 1e-9, "0.0112", false},  {1000, 1e-12, "0.0155", false},
      {3000, 1e-3, "0.0015", false},  {3000, 1e-6, "0.0027", false},
      {3000, 1e-9, "0.004", false},   {3000, 1e-12, "0.0051", false},
      {7000, 1e-3, "0.0006", false},  {7000, 1e-6, "0.0012", false},
      {7000, 1e-9, "0.0017", false},  {7000, 1e-12, "0.0022", false},
      {10000, 1e-3, "0.0004", false}, {10000, 1e-6, "0.0008", false},
      {10000, 1e-9, "0.0012", false}, {10000, 1e-12, "0.0015", false},
  };
  return kTable;
}

namespace {

// Rounding half-width of a printed decimal: half a unit in the last place.
double printed_half_width(const char* printed) {
  const std::string s(printed);
  const auto dot = s.find('.');
  const int decimals =
      (dot == std::string::npos) ? 0 : static_cast<int>(s.size() - dot - 1);
  return 0.5 * std::pow(10.0, -decimals);
}

const SweepCell* find_cell(const SweepResult& result, int n, double dv) {
  for (const SweepCell& cell : result.cells) {
    if (cell.n == n && std::abs(cell.dv - dv) <= 1e-12 * dv) return &cell;
  }
  return nullptr;
}

}  // namespace

Table1Comparison compare_table1(const SweepResult& result) {
  Table1Comparison cmp;
  double dev_sum = 0.0;
  for (const GoldenCell& gold : table1_golden()) {
    Table1Cell cell;
    cell.n = gold.n;
    cell.dv = gold.dv;
    cell.printed = gold.printed;
    cell.golden = std::atof(gold.printed);
    cell.half_width = printed_half_width(gold.printed);
    cell.tolerance = cell.half_width + 0.01 * cell.golden;

    const SweepCell* solved = find_cell(result, gold.n, gold.dv);
    if (solved == nullptr || !solved->ok()) {
      cell.state = Table1Cell::State::Missing;
      ++cmp.missing;
      cmp.cells.push_back(cell);
      continue;
    }
    cell.computed = solved->T0;
    cell.abs_dev = std::abs(cell.computed - cell.golden);
    cell.rel_dev = cell.abs_dev / cell.golden;
    if (gold.excluded) {
      cell.state = Table1Cell::State::Excluded;
      ++cmp.excluded;
    } else {
      cell.state = Table1Cell::State::Included;
      cell.pass = cell.abs_dev <= cell.tolerance;
      ++cmp.included;
      if (cell.pass) {
        ++cmp.passed;
      } else {
        ++cmp.failed;
      }
      cmp.max_rel_dev = std::max(cmp.max_rel_dev, cell.rel_dev);
      dev_sum += cell.rel_dev;
    }
    cmp.cells.push_back(cell);
  }
  cmp.mean_rel_dev = (cmp.included > 0) ? dev_sum / cmp.included : 0.0;
  return cmp;
}

// ---- formatting ----

std::string format_sci(double x, int significant, bool trim) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return trim ? "0" : "0e0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", significant - 1, x);
  const std::string s(buf);
  const auto epos = s.find('e');
  std::string mantissa = s.substr(0, epos);
  const int exponent = std::atoi(s.c_str() + epos + 1);
  if (trim && mantissa.find('.') != std::string::npos) {
    while (!mantissa.empty() && mantissa.back() == '0') mantissa.pop_back();
    if (!mantissa.empty() && mantissa.back() == '.') mantissa.pop_back();
  }
  return mantissa + "e" + std::to_string(exponent);
}

std::string format_dv(double dv) { return format_sci(dv, 12, true); }

namespace {

constexpr int kCsvDigits = 12;

std::string format_value(double x) { return format_sci(x, kCsvDigits, false); }

void emit_csv(const SweepResult& r, std::ostream& out) {
  out << "# ksdyn sweep\n";
  out << "# units: hbar=1 gamma0=1\n";
  out << "# solver: rel_tol=" << format_sci(r.grid.solver.rel_tol, 6, true)
      << " max_iter=" << r.grid.solver.max_iter
      << " scan_points=" << r.grid.solver.scan_points << "\n";
  out << "# grid: n=";
  for (size_t i = 0; i < r.grid.n_values.size(); ++i) {
    out << (i ? "," : "") << r.grid.n_values[i];
  }
  out << " dv=";
  for (size_t i = 0; i < r.grid.dv_values.size(); ++i) {
    out << (i ? "," : "") << format_dv(r.grid.dv_values[i]);
  }
  out << "\n";
  out << "N,dV,T0,h_ks_per_gamma0,sigma_prime,alpha,status\n";
  for (const SweepCell& c : r.cells) {
    out << c.n << ',' << format_dv(c.dv) << ',' << format_value(c.T0) << ','
        << format_value(c.h_ks) << ',' << format_value(c.sigma_prime) << ','
        << format_value(c.alpha) << ',' << c.status << "\n";
  }
}

void emit_fit_kv(const ColumnFit& col, std::ostream& out) {
  const std::string key = "fit." + format_dv(col.dv);
  out << key << ".points = " << col.points << "\n";
  out << key << ".status = " << col.note << "\n";
  if (!col.ok) return;
  out << key << ".slope = " << format_value(col.free_fit.slope) << "\n";
  out << key << ".intercept = " << format_value(col.free_fit.intercept)
      << "\n";
  out << key << ".slope_stderr = " << format_value(col.free_fit.slope_stderr)
      << "\n";
  out << key << ".r_squared = " << format_value(col.free_fit.r_squared)
      << "\n";
  out << key << ".origin_slope = " << format_value(col.origin_fit.slope)
      << "\n";
  out << key
      << ".origin_slope_stderr = " << format_value(col.origin_fit.slope_stderr)
      << "\n";
  out << key << ".origin_r_squared = " << format_value(col.origin_fit.r_squared)
      << "\n";
}

void emit_kv(const SweepResult& r, std::ostream& out) {
  out << "sweep.cells = " << r.cells.size() << "\n";
  out << "sweep.n_count = " << r.grid.n_values.size() << "\n";
  out << "sweep.dv_count = " << r.grid.dv_values.size() << "\n";
  for (const SweepCell& c : r.cells) {
    const std::string key =
        "cell." + std::to_string(c.n) + "." + format_dv(c.dv);
    out << key << ".T0 = " << format_value(c.T0) << "\n";
    out << key << ".h_ks = " << format_value(c.h_ks) << "\n";
    out << key << ".sigma_prime = " << format_value(c.sigma_prime) << "\n";
    out << key << ".alpha = " << format_value(c.alpha) << "\n";
    out << key << ".status = " << c.status << "\n";
  }
  for (const ColumnFit& col : r.fits) emit_fit_kv(col, out);
  out << "aggregate.alpha_mean = " << format_value(r.aggregate_alpha_mean)
      << "\n";
  out << "aggregate.alpha_spread = " << format_value(r.aggregate_alpha_spread)
      << "\n";
}

}  // namespace

std::optional<EmitFormat> parse_emit_format(std::string_view name) {
  if (name == "csv") return EmitFormat::Csv;
  if (name == "kv") return EmitFormat::Kv;
  return std::nullopt;
}

void emit(const SweepResult& result, EmitFormat format, std::ostream& out) {
  switch (format) {
    case EmitFormat::Csv:
      emit_csv(result, out);
      return;
    case EmitFormat::Kv:
      emit_kv(result, out);
      return;
  }
  throw std::invalid_argument("unknown emit format");
}

void emit_file(const SweepResult& result, EmitFormat format,
               const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  emit(result, format, out);
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

void write_table1_report(const Table1Comparison& cmp, std::ostream& out) {
  out << "table1 golden comparison\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "%6s %8s %16s %10s %12s %12s  %s\n", "N",
                "dV", "computed", "golden", "tolerance", "rel_dev", "status");
  out << buf;
  for (const Table1Cell& c : cmp.cells) {
    const char* status = "pass";
    if (c.state == Table1Cell::State::Excluded) {
      status = "excluded";
    } else if (c.state == Table1Cell::State::Missing) {
      status = "missing";
    } else if (!c.pass) {
      status = "FAIL";
    }
    std::snprintf(buf, sizeof buf, "%6d %8s %16s %10s %12s %12s  %s\n", c.n,
                  format_dv(c.dv).c_str(),
                  format_sci(c.computed, 10, false).c_str(), c.printed,
                  format_sci(c.tolerance, 3, true).c_str(),
                  format_sci(c.rel_dev, 3, true).c_str(), status);
    out << buf;
  }
  out << "included " << cmp.included << "  passed " << cmp.passed
      << "  failed " << cmp.failed << "  excluded " << cmp.excluded
      << "  missing " << cmp.missing << "\n";
  out << "max_rel_dev " << format_sci(cmp.max_rel_dev, 4, true)
      << "  mean_rel_dev " << format_sci(cmp.mean_rel_dev, 4, true) << "\n";
  out << "overall " << (cmp.all_pass() ? "PASS" : "FAIL") << "\n";
}

}  // namespace ksdyn
