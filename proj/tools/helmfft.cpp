// helmfft: command-line driver for the FFT Helmholtz solvers.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "helmfft/bench.hpp"

using namespace helmfft;

namespace {

constexpr int kSuiteFailure = 1;
constexpr int kConfigError = 2;

struct Flags {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  std::vector<std::size_t> grid;
  std::vector<double> eta, omega;
  std::vector<int> field;
  double tol = 0.0;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "INI run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--tol", f.tol, "solver tolerance");
}

RunConfig resolve(const Flags& f, ExperimentKind kind, CLI::App* cmd) {
  auto given = [cmd](const char* name) {
    const auto* o = cmd->get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };
  RunConfig cfg;
  if (!f.config.empty()) cfg = load_config(f.config, cfg);
  cfg.kind = kind;
  if (given("--out")) cfg.out = f.out;
  if (given("--seed")) cfg.seed = f.seed;
  if (given("--omega")) cfg.omegas = f.omega;
  if (given("--field")) cfg.fields = f.field;
  if (given("--tol")) {
    if (kind == ExperimentKind::stekloff) cfg.eig_tol = f.tol;
    else cfg.gmres_tol = f.tol;
  }
  if (given("--eta")) cfg.etas = f.eta;
  if (given("--grid")) {
    if (kind == ExperimentKind::stekloff) {
      cfg.eig_grid = f.grid.front();
      if (f.grid.size() > 1) cfg.check_grid = f.grid[1];
    } else {
      cfg.grids = f.grid;
    }
  }
  cfg.validate();
  return cfg;
}

int cmd_solve(const RunConfig& cfg) {
  const auto cases = cfg.cases();
  const GmresOptions opt{cfg.gmres_tol, cfg.restart, cfg.max_iter};
  for (int field : cfg.fields)
    for (const auto& [w, n] : cases) {
      const auto pc = run_precond_case(field, w, n, opt);
      std::printf("field %d  omega/2pi %g  n %zu  k_ref %.6g%s  iterations %zu  residual %.3e  %s  %.3f s\n",
                  field, w, n, pc.k_ref, pc.nudged ? " (nudged)" : "", pc.report.iterations,
                  pc.report.relative_residual, pc.report.converged ? "converged" : "NOT converged",
                  pc.report.wall_time);
      const auto stem = cfg.out / ("solution_field" + std::to_string(field) + "_w" + format_number(w) + "_n" +
                                   std::to_string(n));
      ExportMeta meta;
      meta.h = {pc.h, pc.h};
      meta.k_ref = pc.k_ref;
      export_field(Array::from(pc.solution), stem.string() + ".f64", ExportFormat::raw, meta);
      export_field(Array::from(pc.solution), stem.string() + ".pgm", ExportFormat::pgm, meta);
    }
  return 0;
}

int cmd_precond(const RunConfig& cfg) {
  const auto table = run_precond_bench(cfg);
  std::printf("%-6s %-10s %-7s %-10s %-6s %s\n", "field", "omega/2pi", "n", "iterations", "conv", "seconds");
  for (const auto& pc : table.cases)
    std::printf("%-6d %-10g %-7zu %-10zu %-6s %.3f\n", pc.field, pc.omega_over_2pi, pc.n, pc.report.iterations,
                pc.report.converged ? "yes" : "no", pc.report.wall_time);
  std::printf("wrote %s and %s\n", table.csv.c_str(), table.timings.c_str());
  return 0;
}

int cmd_stekloff(const RunConfig& cfg) {
  const auto table = run_stekloff(cfg);
  for (const auto* rows : {&table.rows, &table.check})
    for (const auto& r : *rows) {
      std::printf("eta %-4g n %-4zu %s", r.eta, r.n, r.converged ? "" : "[not converged] ");
      for (double v : r.values) std::printf(" %9.5f", v);
      std::printf("   (%zu applications, %.2f s)\n", r.applications, r.seconds);
    }
  std::printf("wrote %s and %s\n", table.csv.c_str(), table.convergence.c_str());
  return 0;
}

int cmd_verify(std::uint64_t seed, std::size_t offset) {
  const auto rep = run_verify({seed, offset});
  for (const auto& s : rep.suites)
    std::printf("%-16s %s  %s\n", s.name.c_str(), s.passed ? "PASS" : "FAIL", s.detail.c_str());
  return rep.passed() ? 0 : kSuiteFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FFT-based Helmholtz solvers, preconditioned GMRES benchmarks and Stekloff eigenvalues"};
  app.require_subcommand(1);

  Flags f;
  auto* solve = app.add_subcommand("solve", "variable wave number solve for one or more (omega, n)");
  auto* bench = app.add_subcommand("precond-bench", "preconditioned GMRES iteration table");
  auto* stek = app.add_subcommand("stekloff", "smallest Stekloff eigenvalues");
  auto* verify = app.add_subcommand("verify", "dense-oracle verification suites");
  auto* exp = app.add_subcommand("export", "write a velocity, wave number or solution field");

  for (auto* cmd : {solve, bench, exp}) {
    add_common(cmd, f);
    cmd->add_option("--grid", f.grid, "interior points per axis")->delimiter(',');
    cmd->add_option("--omega", f.omega, "omega / 2 pi values")->delimiter(',');
    cmd->add_option("--field", f.field, "velocity field id (1 or 2)")->delimiter(',');
  }
  add_common(stek, f);
  stek->add_option("--grid", f.grid, "grid size, optionally followed by the cross-check size")->delimiter(',');
  stek->add_option("--eta", f.eta, "eta values")->delimiter(',');

  std::size_t offset = 0;
  verify->add_option("--seed", f.seed, "random seed");
  verify->add_option("--restriction-offset", offset, "inject a shifted restriction (mutation check)")
      ->group("");

  std::string quantity = "k", format = "pgm", path;
  exp->add_option("--quantity", quantity, "c, k or solution")->check(CLI::IsMember({"c", "k", "solution"}));
  exp->add_option("--format", format, "csv, raw or pgm")->check(CLI::IsMember({"csv", "raw", "pgm"}));
  exp->add_option("--path", path, "output file (default: <out>/<quantity>.<ext>)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*solve) return cmd_solve(resolve(f, ExperimentKind::solve, solve));
    if (*bench) return cmd_precond(resolve(f, ExperimentKind::precond_bench, bench));
    if (*stek) return cmd_stekloff(resolve(f, ExperimentKind::stekloff, stek));
    if (*verify) return cmd_verify(verify->count("--seed") ? f.seed : RunConfig{}.seed, offset);
    if (*exp) {
      const RunConfig cfg = resolve(f, ExperimentKind::solve, exp);
      const int field = cfg.fields.front();
      const std::size_t n = cfg.grids.front();
      const double w = cfg.omegas.front();
      const double h = 1.0 / static_cast<double>(n + 1);
      ExportMeta meta;
      meta.h = {h, h};
      Array a;
      if (quantity == "solution") {
        const auto pc = run_precond_case(field, w, n, {cfg.gmres_tol, cfg.restart, cfg.max_iter});
        std::printf("%zu iterations, residual %.3e\n", pc.report.iterations, pc.report.relative_residual);
        meta.k_ref = pc.k_ref;
        a = Array::from(pc.solution);
      } else {
        a = Array::from(wave_number_field(field, w, n));
        if (quantity == "c") {
          const VelocityField c(field);
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
              a.values[i * n + j] = c(static_cast<double>(i + 1) * h, static_cast<double>(j + 1) * h);
        }
      }
      const auto fmt = parse_format(format);
      const std::string ext = fmt == ExportFormat::raw ? "f64" : format;
      const std::filesystem::path target = path.empty() ? cfg.out / (quantity + "." + ext) : std::filesystem::path(path);
      export_field(a, target, fmt, meta);
      std::printf("wrote %s\n", target.c_str());
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSuiteFailure;
  }
  return 0;
}
