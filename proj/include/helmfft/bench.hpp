// Experiment drivers behind the command-line tool: preconditioned GMRES
// benchmarks, Stekloff eigenvalue tables, the verification suite and
// field export.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "helmfft/grid.hpp"
#include "helmfft/krylov.hpp"
#include "helmfft/tensor.hpp"

namespace helmfft {

/// Invalid or inconsistent run configuration (exit status 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wave speed on the unit square.
///   id 1: c = 4/3 [1 - 0.5 exp(-0.5 (x1 - 0.5)^2)]
///   id 2: c = 4/3 [1 - 0.5 exp(-0.5 ((x1 - 0.5)^2 + (x2 - 0.5)^2))]
///   id 0: c = 4/3 everywhere (synthetic check case)
struct VelocityField {
  int id = 1;
  explicit VelocityField(int field_id);
  [[nodiscard]] double operator()(double x1, double x2) const;
  [[nodiscard]] std::string formula() const;
  /// Composite trapezoid average over [0,1]^2 on the (n+2)^2 grid nodes.
  [[nodiscard]] double mean(std::size_t n) const;
};

enum class ExperimentKind { solve, precond_bench, stekloff, verify };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_kind(const std::string& name);

struct RunConfig {
  ExperimentKind kind = ExperimentKind::precond_bench;
  std::uint64_t seed = 20190711;
  std::filesystem::path out = "results";

  // precond-bench and solve
  std::vector<double> omegas{0.8, 1.6, 3.2, 6.4};  // omega / 2 pi
  std::vector<std::size_t> grids{50, 100, 200, 400};
  std::vector<int> fields{1, 2};
  double gmres_tol = 1e-6;
  std::size_t restart = 50;
  std::size_t max_iter = 1000;
  bool snapshots = true;

  // stekloff
  std::vector<double> etas{0.5, 1.0, 2.0, 4.0};
  std::size_t eig_grid = 64;
  std::size_t check_grid = 32;
  double eig_tol = 1e-10;
  std::size_t how_many = 6;
  std::size_t max_subspace = 60;

  /// Throws ConfigError on any violated invariant.
  void validate() const;
  /// (omega/2pi, n) pairs: equal-length lists are zipped, a single grid is
  /// used for every omega.
  [[nodiscard]] std::vector<std::pair<double, std::size_t>> cases() const;
  /// Canonical text form; the config hash is its FNV-1a digest.
  [[nodiscard]] std::string canonical() const;
  [[nodiscard]] std::string hash() const;
};

/// Reads an INI file ([run], [precond-bench], [stekloff] sections). Keys not
/// present keep their defaults. Throws ConfigError on parse or value errors.
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

// ---------------------------------------------------------------- precond

struct PrecondCase {
  int field = 1;
  double omega_over_2pi = 0.0;
  std::size_t n = 0;
  double h = 0.0;
  double k_ref = 0.0;
  bool nudged = false;  // k_ref moved off a resonance
  SolveReport report;
  Field k_field, solution;
};

/// k = omega / c(x) at the interior nodes of the n x n Dirichlet grid.
Field wave_number_field(int field, double omega_over_2pi, std::size_t n);

/// One preconditioned GMRES solve of A(k(x)) u = h^2 with the exact
/// constant-k_ref inverse as right preconditioner, k = omega / c.
PrecondCase run_precond_case(int field, double omega_over_2pi, std::size_t n, const GmresOptions& options);

struct PrecondTable {
  std::vector<PrecondCase> cases;
  std::filesystem::path csv, timings;
};

/// Runs every (field, omega, n) case, writes precond.csv (deterministic),
/// precond_timings.csv and, when enabled, k/solution snapshots.
PrecondTable run_precond_bench(const RunConfig& config);

// --------------------------------------------------------------- stekloff

struct StekloffRow {
  double eta = 0.0;
  std::size_t n = 0;
  double h = 0.0;
  /// Stekloff values eig(S_h)/h, ascending in magnitude.
  std::vector<double> values;
  std::vector<double> residuals;
  std::size_t applications = 0;
  bool converged = false;
  double seconds = 0.0;
};

/// Smallest-magnitude Stekloff values on the all-Neumann grid of size n by
/// Krylov iteration on T_h with residuals checked on S_h.
StekloffRow stekloff_values(double eta, std::size_t n, const EigOptions& options);

struct StekloffTable {
  std::vector<StekloffRow> rows;   // config grid
  std::vector<StekloffRow> check;  // cross-check grid
  std::filesystem::path csv, convergence;
};

StekloffTable run_stekloff(const RunConfig& config);

// ----------------------------------------------------------------- verify

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 20190711;
  std::size_t restriction_offset = 0;  // nonzero injects a faulty restriction
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  [[nodiscard]] bool passed() const;
};

/// Exactness, symbol, tensor identity, inverse pair, resonance probe and
/// DFT suites against dense oracles.
VerifyReport run_verify(const VerifyOptions& options = {});

// ----------------------------------------------------------------- export

enum class ExportFormat { csv, raw, pgm };

ExportFormat parse_format(const std::string& name);

struct ExportMeta {
  std::vector<double> h;  // spacing per axis
  std::optional<double> k_min, k_max, k_ref;
};

/// Writes `values` (row-major, given shape) to `path`.
///   csv: one row per line along the last axis; real data as plain numbers,
///        complex data as a+bi.
///   raw: little-endian f64 pairs (re, im) plus `path`.json with the shape,
///        spacing, k summary and value range.
///   pgm: 16-bit binary P5 of |value| scaled linearly to 0..65535 (2D only).
/// I/O failures throw std::runtime_error naming the path.
void export_field(const Array& values, const std::filesystem::path& path, ExportFormat format,
                  const ExportMeta& meta = {});

/// Reads a raw export back using its JSON sidecar.
Array import_raw(const std::filesystem::path& path);

/// Shortest round-trip decimal form of x.
std::string format_number(double x);

}  // namespace helmfft
