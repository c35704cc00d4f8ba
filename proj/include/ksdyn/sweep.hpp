#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ksdyn/pesin.hpp"

namespace ksdyn {

/// Grid of (bath size, initial volume) cells, solved in natural units.
struct SweepGrid {
  std::vector<int> n_values = {5, 10, 30, 60, 100, 1000, 3000, 7000, 10000};
  std::vector<double> dv_values = {1e-3, 1e-6, 1e-9, 1e-12};
  SolverConfig solver{};

  void validate() const;
};

struct SweepCell {
  int n = 0;
  double dv = 0.0;
  double T0 = std::numeric_limits<double>::quiet_NaN();
  double h_ks = std::numeric_limits<double>::quiet_NaN();
  double sigma_prime = std::numeric_limits<double>::quiet_NaN();
  double alpha = std::numeric_limits<double>::quiet_NaN();
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 0.0;
};

/// Per-dV-column linear law h_ks(N); both the free-intercept and the
/// through-origin fit are kept.
struct ColumnFit {
  double dv = 0.0;
  bool ok = false;
  std::string note;  // "ok" or "insufficient-points"
  int points = 0;
  FitResult free_fit{};
  FitResult origin_fit{};
};

struct SweepResult {
  SweepGrid grid;
  std::vector<SweepCell> cells;  // grid order: n-major, then dv
  std::vector<ColumnFit> fits;   // one per dv column
  double aggregate_alpha_mean = std::numeric_limits<double>::quiet_NaN();
  double aggregate_alpha_spread = std::numeric_limits<double>::quiet_NaN();
};

/// Solves every grid cell (optionally on several threads; the emitted
/// result is byte-identical either way), then fits h_ks against N per dv
/// column. Per-cell solver failures are flagged in the cell status and do
/// not abort the sweep.
SweepResult run_sweep(const SweepGrid& grid, int threads = 1);

/// Ordinary least squares of h against N with free intercept. Throws
/// std::invalid_argument for fewer than two points or all-equal N.
FitResult fit_hks(const std::vector<std::pair<double, double>>& points);

/// Least squares constrained through the origin.
FitResult fit_hks_through_origin(
    const std::vector<std::pair<double, double>>& points);

// ---- golden-table comparison ----

struct GoldenCell {
  int n;
  double dv;
  const char* printed;  // value as published; half-width derives from it
  bool excluded;        // presumed-typo cells kept out of the comparison
};

/// Published adimensionalized KS-times of the time-reversed Gamow family.
const std::vector<GoldenCell>& table1_golden();

struct Table1Cell {
  enum class State { Included, Excluded, Missing };

  int n = 0;
  double dv = 0.0;
  double computed = std::numeric_limits<double>::quiet_NaN();
  double golden = 0.0;
  const char* printed = "";
  double half_width = 0.0;
  double tolerance = 0.0;  // half_width + 1% of golden
  double abs_dev = 0.0;
  double rel_dev = 0.0;
  State state = State::Included;
  bool pass = false;
};

struct Table1Comparison {
  std::vector<Table1Cell> cells;
  int included = 0;
  int passed = 0;
  int failed = 0;
  int excluded = 0;
  int missing = 0;
  double max_rel_dev = 0.0;   // over included cells
  double mean_rel_dev = 0.0;  // over included cells

  bool all_pass() const { return failed == 0 && missing == 0; }
};

Table1Comparison compare_table1(const SweepResult& result);
void write_table1_report(const Table1Comparison& cmp, std::ostream& out);

// ---- serialization ----

enum class EmitFormat { Csv, Kv };

std::optional<EmitFormat> parse_emit_format(std::string_view name);

/// CSV schema: N,dV,T0,h_ks_per_gamma0,sigma_prime,alpha,status with a
/// '#'-prefixed config header. Kv: flat "key = value" document including
/// the fits. Both are byte-stable for identical inputs.
void emit(const SweepResult& result, EmitFormat format, std::ostream& out);
void emit_file(const SweepResult& result, EmitFormat format,
               const std::string& path);

/// Scientific notation with a compact exponent ("4.38382161593e-1");
/// trim drops trailing zeros in the mantissa ("1e-3").
std::string format_sci(double x, int significant, bool trim);

/// Compact rendering used for dV keys and columns.
std::string format_dv(double dv);

}  // namespace ksdyn
