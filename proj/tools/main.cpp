// ksdyn command-line front end.
//
// Subcommands:
//   solve      KS-time and entropy report for one spectrum
//   sweep      (N, dV) grid of time-reversed Gamow systems, CSV/kv output
//   table1     sweep over the reference grid and compare against the
//              embedded golden values
//   lifetimes  per-level Lyapunov rates and lifetimes
//   escape     contraction exponent of the conditionally invariant measure

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "ksdyn/pesin.hpp"
#include "ksdyn/solver.hpp"
#include "ksdyn/spectrum.hpp"
#include "ksdyn/sweep.hpp"
#include "ksdyn/volume.hpp"

namespace {

using ksdyn::EmitFormat;

struct OutputTarget {
  std::ofstream file;
  std::ostream* stream = &std::cout;
};

// "-" (default) -> stdout.
OutputTarget open_output(const std::string& path) {
  OutputTarget out;
  if (path.empty() || path == "-") return out;
  out.file.open(path);
  if (!out.file) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  out.stream = &out.file;
  return out;
}

std::string fmt(double x) { return ksdyn::format_sci(x, 12, false); }

struct CommonSolveArgs {
  std::string spectrum_path;
  int gamow_n = 0;
  bool reverse = false;
  double hbar = 1.0;
  double gamma0 = 1.0;

  bool has_gamow = false;
  bool has_spectrum = false;
};

ksdyn::PoleSpectrum build_spectrum(const CommonSolveArgs& a) {
  if (a.has_gamow == a.has_spectrum) {
    throw CLI::ValidationError(
        "spectrum", "give exactly one of --gamow N or --spectrum FILE");
  }
  ksdyn::PoleSpectrum s =
      a.has_gamow
          ? ksdyn::gamow_spectrum(a.gamow_n,
                                  ksdyn::UnitSystem(a.hbar, a.gamma0))
          : ksdyn::load_spectrum_file(a.spectrum_path);
  if (a.reverse) s = ksdyn::time_reverse(s);
  return s;
}

void print_solution_kv(const ksdyn::PoleSpectrum& s, const ksdyn::KsSolution& sol,
                       double dv0, const ksdyn::PesinReport* rep,
                       std::ostream& out) {
  const ksdyn::UnitSystem& u = s.units();
  out << "spectrum.poles = " << s.size() << "\n";
  out << "spectrum.dv0 = " << ksdyn::format_dv(dv0) << "\n";
  out << "units.hbar = " << fmt(u.hbar) << "\n";
  out << "units.gamma0 = " << fmt(u.gamma0) << "\n";
  out << "units.t_R = " << fmt(u.relaxation_time()) << "\n";
  out << "solver.t0 = " << fmt(sol.t0) << "\n";
  out << "solver.T0 = " << fmt(sol.T0) << "\n";
  out << "solver.residual = " << fmt(sol.residual) << "\n";
  out << "solver.iterations = " << sol.iterations << "\n";
  out << "solver.bracket_lo = " << fmt(sol.bracket.first) << "\n";
  out << "solver.bracket_hi = " << fmt(sol.bracket.second) << "\n";
  if (sol.t0 > 0.0) {
    const double h_rate =
        ksdyn::ks_entropy_from_time(sol, ksdyn::VolumeElement(dv0));
    out << "entropy.h_ks_per_gamma0 = " << fmt(h_rate * u.relaxation_time())
        << "\n";
    out << "entropy.h_ks_rate = " << fmt(h_rate) << "\n";
    out << "entropy.tau_ks = " << fmt(ksdyn::tau_ks(h_rate)) << "\n";
  }
  if (rep != nullptr) {
    out << "pesin.reversed = " << (rep->reversed ? "true" : "false") << "\n";
    out << "pesin.n_bath = " << rep->n_bath << "\n";
    out << "pesin.lyap_sum = " << fmt(rep->lyap_sum) << "\n";
    out << "pesin.sigma_prime = " << fmt(rep->sigma_per_mode) << "\n";
    out << "pesin.sigma_original = " << fmt(rep->sigma_original) << "\n";
    out << "pesin.alpha = " << fmt(rep->alpha) << "\n";
  }
}

void print_solution_csv(const ksdyn::KsSolution& sol, double dv0, int n,
                        const ksdyn::PesinReport* rep, std::ostream& out) {
  out << "N,dV,T0,h_ks_per_gamma0,sigma_prime,alpha,status\n";
  out << n << ',' << ksdyn::format_dv(dv0) << ',' << fmt(sol.T0) << ','
      << fmt(rep ? rep->h_ks : std::numeric_limits<double>::quiet_NaN()) << ','
      << fmt(rep ? rep->sigma_per_mode
                 : std::numeric_limits<double>::quiet_NaN())
      << ','
      << fmt(rep ? rep->alpha : std::numeric_limits<double>::quiet_NaN())
      << ",ok\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ksdyn: phase-space spreading times, KS-entropy and Lyapunov "
      "exponents from complex pole spectra"};
  app.require_subcommand(1);

  const std::map<std::string, EmitFormat> format_map{
      {"csv", EmitFormat::Csv}, {"kv", EmitFormat::Kv}};

  // ---- solve ----
  auto* solve = app.add_subcommand(
      "solve", "solve the saturation equation for one spectrum");
  auto solve_args = std::make_shared<CommonSolveArgs>();
  auto solve_dv = std::make_shared<double>(1e-3);
  auto solve_cfg = std::make_shared<ksdyn::SolverConfig>();
  auto solve_out = std::make_shared<std::string>("-");
  auto solve_fmt = std::make_shared<EmitFormat>(EmitFormat::Kv);
  {
    auto* g = solve->add_option("--gamow", solve_args->gamow_n,
                                "bath size N; solves the time-reversed "
                                "(expanding) Gamow system");
    auto* sp = solve->add_option("--spectrum", solve_args->spectrum_path,
                                 "spectrum file (one \"omega gamma\" per line)");
    g->excludes(sp);
    solve->add_flag("--reverse", solve_args->reverse,
                    "time-reverse the spectrum before solving");
    solve->add_option("--dv", *solve_dv, "initial volume in (0, 1]")
        ->required();
    solve->add_option("--hbar", solve_args->hbar, "action unit (with --gamow)");
    solve->add_option("--gamma0", solve_args->gamma0,
                      "width unit (with --gamow)");
    solve->add_option("--tol", solve_cfg->rel_tol, "relative tolerance on t0");
    solve->add_option("--max-iter", solve_cfg->max_iter, "iteration cap");
    solve->add_option("--scan-points", solve_cfg->scan_points,
                      "mixed-sign pre-scan grid size");
    solve->add_option("--out", *solve_out, "output path, '-' for stdout");
    solve->add_option("--format", *solve_fmt, "kv or csv")
        ->transform(CLI::CheckedTransformer(format_map, CLI::ignore_case));
    solve_args->has_gamow = false;
    solve->callback([solve, g, sp, solve_args, solve_dv, solve_cfg, solve_out,
                     solve_fmt] {
      solve_args->has_gamow = g->count() > 0;
      solve_args->has_spectrum = sp->count() > 0;
      OutputTarget out = open_output(*solve_out);
      if (solve_args->has_gamow && !solve_args->reverse) {
        // the decaying Gamow spectrum has no root; solve its reversal
        const ksdyn::UnitSystem units(solve_args->hbar, solve_args->gamma0);
        const ksdyn::KsSolution sol = ksdyn::solve_gamow(
            solve_args->gamow_n, *solve_dv, *solve_cfg, units);
        ksdyn::PesinReport rep;
        const bool trivial = (sol.t0 == 0.0);
        if (!trivial) {
          rep = ksdyn::make_pesin_report(sol, ksdyn::VolumeElement(*solve_dv),
                                         solve_args->gamow_n, units, true);
        }
        const ksdyn::PoleSpectrum s =
            ksdyn::time_reverse(ksdyn::gamow_spectrum(solve_args->gamow_n, units));
        if (*solve_fmt == EmitFormat::Kv) {
          print_solution_kv(s, sol, *solve_dv, trivial ? nullptr : &rep,
                            *out.stream);
        } else {
          print_solution_csv(sol, *solve_dv, solve_args->gamow_n,
                             trivial ? nullptr : &rep, *out.stream);
        }
        return;
      }
      const ksdyn::PoleSpectrum s = build_spectrum(*solve_args);
      const ksdyn::KsSolution sol =
          ksdyn::solve_ks_time(s, ksdyn::VolumeElement(*solve_dv), *solve_cfg);
      if (*solve_fmt == EmitFormat::Kv) {
        print_solution_kv(s, sol, *solve_dv, nullptr, *out.stream);
      } else {
        print_solution_csv(sol, *solve_dv, static_cast<int>(s.size()), nullptr,
                           *out.stream);
      }
    });
  }

  // ---- sweep ----
  auto* sweep = app.add_subcommand(
      "sweep", "solve an (N, dV) grid of time-reversed Gamow systems");
  auto sweep_grid = std::make_shared<ksdyn::SweepGrid>();
  auto sweep_threads = std::make_shared<int>(1);
  auto sweep_out = std::make_shared<std::string>("-");
  auto sweep_fmt = std::make_shared<EmitFormat>(EmitFormat::Csv);
  {
    sweep->add_option("--n", sweep_grid->n_values, "bath sizes")
        ->delimiter(',');
    sweep->add_option("--dv", sweep_grid->dv_values, "initial volumes")
        ->delimiter(',');
    sweep->add_option("--tol", sweep_grid->solver.rel_tol,
                      "relative tolerance on T0");
    sweep->add_option("--max-iter", sweep_grid->solver.max_iter,
                      "iteration cap");
    sweep->add_option("--scan-points", sweep_grid->solver.scan_points,
                      "mixed-sign pre-scan grid size");
    sweep->add_option("--threads", *sweep_threads,
                      "worker threads (output is identical for any count)");
    sweep->add_option("--out", *sweep_out, "output path, '-' for stdout");
    sweep->add_option("--format", *sweep_fmt, "csv or kv")
        ->transform(CLI::CheckedTransformer(format_map, CLI::ignore_case));
    sweep->callback([sweep_grid, sweep_threads, sweep_out, sweep_fmt] {
      const ksdyn::SweepResult result =
          ksdyn::run_sweep(*sweep_grid, *sweep_threads);
      OutputTarget out = open_output(*sweep_out);
      ksdyn::emit(result, *sweep_fmt, *out.stream);
    });
  }

  // ---- table1 ----
  auto* table1 = app.add_subcommand(
      "table1", "reference-grid sweep compared against the embedded golden "
                "KS-times; exits nonzero when an included cell deviates "
                "beyond tolerance");
  auto t1_grid = std::make_shared<ksdyn::SweepGrid>();
  auto t1_threads = std::make_shared<int>(1);
  auto t1_out = std::make_shared<std::string>("-");
  auto t1_csv = std::make_shared<std::string>();
  auto t1_fail = std::make_shared<bool>(false);
  {
    table1->add_option("--tol", t1_grid->solver.rel_tol,
                       "relative tolerance on T0");
    table1->add_option("--threads", *t1_threads, "worker threads");
    table1->add_option("--out", *t1_out, "report path, '-' for stdout");
    table1->add_option("--csv", *t1_csv, "also write the sweep CSV here");
    table1->callback([t1_grid, t1_threads, t1_out, t1_csv, t1_fail] {
      const ksdyn::SweepResult result = ksdyn::run_sweep(*t1_grid, *t1_threads);
      if (!t1_csv->empty()) {
        ksdyn::emit_file(result, EmitFormat::Csv, *t1_csv);
      }
      const ksdyn::Table1Comparison cmp = ksdyn::compare_table1(result);
      OutputTarget out = open_output(*t1_out);
      ksdyn::write_table1_report(cmp, *out.stream);
      *t1_fail = !cmp.all_pass();
    });
  }

  // ---- lifetimes ----
  auto* life = app.add_subcommand(
      "lifetimes", "per-level Lyapunov rates and resonance lifetimes");
  auto life_n = std::make_shared<int>(0);
  auto life_alpha = std::make_shared<double>(1.0);
  auto life_units = std::make_shared<std::pair<double, double>>(1.0, 1.0);
  auto life_out = std::make_shared<std::string>("-");
  auto life_fmt = std::make_shared<EmitFormat>(EmitFormat::Kv);
  {
    life->add_option("--n", *life_n, "number of levels")->required();
    life->add_option("--alpha", *life_alpha, "coupling constant");
    life->add_option("--hbar", life_units->first, "action unit");
    life->add_option("--gamma0", life_units->second, "width unit");
    life->add_option("--out", *life_out, "output path, '-' for stdout");
    life->add_option("--format", *life_fmt, "kv or csv")
        ->transform(CLI::CheckedTransformer(format_map, CLI::ignore_case));
    life->callback([life_n, life_alpha, life_units, life_out, life_fmt] {
      const ksdyn::UnitSystem units(life_units->first, life_units->second);
      const ksdyn::LifetimeTable table =
          ksdyn::lifetimes(*life_alpha, *life_n, units);
      OutputTarget out = open_output(*life_out);
      if (*life_fmt == EmitFormat::Csv) {
        *out.stream << "n,lambda,lifetime\n";
        for (const auto& row : table.rows) {
          *out.stream << row.level << ',' << fmt(row.lambda) << ','
                      << fmt(row.lifetime) << "\n";
        }
      } else {
        *out.stream << "lifetimes.alpha = " << fmt(table.alpha) << "\n";
        *out.stream << "lifetimes.levels = " << table.rows.size() << "\n";
        for (const auto& row : table.rows) {
          *out.stream << "lifetime." << row.level
                      << ".lambda = " << fmt(row.lambda) << "\n";
          *out.stream << "lifetime." << row.level
                      << ".t = " << fmt(row.lifetime) << "\n";
        }
      }
    });
  }

  // ---- escape ----
  auto* escape = app.add_subcommand(
      "escape", "contraction exponent of the conditionally invariant measure");
  auto esc_args = std::make_shared<CommonSolveArgs>();
  auto esc_t = std::make_shared<double>(1.0);
  auto esc_out = std::make_shared<std::string>("-");
  {
    auto* g = escape->add_option("--gamow", esc_args->gamow_n,
                                 "bath size N (original, decaying spectrum)");
    auto* sp =
        escape->add_option("--spectrum", esc_args->spectrum_path,
                           "spectrum file (one \"omega gamma\" per line)");
    g->excludes(sp);
    escape->add_flag("--reverse", esc_args->reverse,
                     "time-reverse the spectrum first");
    escape->add_option("--t", *esc_t, "evaluation time");
    escape->add_option("--hbar", esc_args->hbar, "action unit (with --gamow)");
    escape->add_option("--gamma0", esc_args->gamma0,
                       "width unit (with --gamow)");
    escape->add_option("--out", *esc_out, "output path, '-' for stdout");
    escape->callback([escape, g, sp, esc_args, esc_t, esc_out] {
      esc_args->has_gamow = g->count() > 0;
      esc_args->has_spectrum = sp->count() > 0;
      const ksdyn::PoleSpectrum s = build_spectrum(*esc_args);
      const ksdyn::EscapeFactor ef = ksdyn::escape_factor(s, *esc_t);
      OutputTarget out = open_output(*esc_out);
      *out.stream << "escape.gamma = " << fmt(ef.gamma_escape) << "\n";
      *out.stream << "escape.time = " << fmt(ef.time) << "\n";
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ksdyn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  if (*t1_fail) return 1;
  return 0;
}
