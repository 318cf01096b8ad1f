#include "helmfft/bench.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "helmfft/dense.hpp"
#include "helmfft/dft.hpp"
#include "helmfft/helmholtz.hpp"
#include "helmfft/operators.hpp"

namespace helmfft {

namespace fs = std::filesystem;

// ------------------------------------------------------------- utilities

std::string format_number(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream os(path, mode);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return os;
}

void check_written(std::ofstream& os, const fs::path& path) {
  os.flush();
  if (!os) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

template <class T>
std::string join(const std::vector<T>& xs, const char* sep = ";") {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    if constexpr (std::is_floating_point_v<T>)
      out += format_number(xs[i]);
    else
      out += std::to_string(xs[i]);
  }
  return out;
}

}  // namespace

// -------------------------------------------------------- velocity field

VelocityField::VelocityField(int field_id) : id(field_id) {
  if (id < 0 || id > 2) throw ConfigError("velocity field id must be 1 or 2 (0 = constant), got " + std::to_string(id));
}

double VelocityField::operator()(double x1, double x2) const {
  constexpr double c0 = 4.0 / 3.0;
  switch (id) {
    case 1: return c0 * (1.0 - 0.5 * std::exp(-0.5 * (x1 - 0.5) * (x1 - 0.5)));
    case 2: return c0 * (1.0 - 0.5 * std::exp(-0.5 * ((x1 - 0.5) * (x1 - 0.5) + (x2 - 0.5) * (x2 - 0.5))));
    default: return c0;
  }
}

std::string VelocityField::formula() const {
  switch (id) {
    case 1: return "4/3*(1-0.5*exp(-0.5*(x1-0.5)^2))";
    case 2: return "4/3*(1-0.5*exp(-0.5*((x1-0.5)^2+(x2-0.5)^2)))";
    default: return "4/3";
  }
}

double VelocityField::mean(std::size_t n) const {
  const double h = 1.0 / static_cast<double>(n + 1);
  double sum = 0.0;
  for (std::size_t i = 0; i <= n + 1; ++i) {
    const double wi = (i == 0 || i == n + 1) ? 0.5 : 1.0;
    for (std::size_t j = 0; j <= n + 1; ++j) {
      const double wj = (j == 0 || j == n + 1) ? 0.5 : 1.0;
      sum += wi * wj * (*this)(static_cast<double>(i) * h, static_cast<double>(j) * h);
    }
  }
  return sum * h * h;
}

// ---------------------------------------------------------------- config

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::solve: return "solve";
    case ExperimentKind::precond_bench: return "precond-bench";
    case ExperimentKind::stekloff: return "stekloff";
    case ExperimentKind::verify: return "verify";
  }
  return "?";
}

ExperimentKind parse_kind(const std::string& name) {
  if (name == "solve") return ExperimentKind::solve;
  if (name == "precond-bench") return ExperimentKind::precond_bench;
  if (name == "stekloff" || name == "stekloff-eig") return ExperimentKind::stekloff;
  if (name == "verify") return ExperimentKind::verify;
  throw ConfigError("unknown experiment kind '" + name + "'");
}

void RunConfig::validate() const {
  auto tol_ok = [](double t) { return t > 0.0 && t < 1.0; };
  for (auto n : grids)
    if (n < 2) throw ConfigError("grid sizes must be >= 2");
  if (eig_grid < 2 || check_grid < 2) throw ConfigError("grid sizes must be >= 2");
  if (!tol_ok(gmres_tol) || !tol_ok(eig_tol)) throw ConfigError("tolerances must lie in (0, 1)");
  for (int f : fields) (void)VelocityField(f);
  for (double w : omegas)
    if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("omega values must be positive");
  for (double e : etas)
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("eta values must be positive");
  if (restart == 0 || max_iter == 0) throw ConfigError("restart and max_iter must be positive");
  if (how_many == 0 || how_many >= max_subspace) throw ConfigError("need 0 < how_many < max_subspace");
  if (kind == ExperimentKind::precond_bench || kind == ExperimentKind::solve) {
    if (omegas.empty() || grids.empty() || fields.empty()) throw ConfigError("omega, grid and field lists must be nonempty");
    (void)cases();
  }
  if (kind == ExperimentKind::stekloff && etas.empty()) throw ConfigError("eta list must be nonempty");
}

std::vector<std::pair<double, std::size_t>> RunConfig::cases() const {
  std::vector<std::pair<double, std::size_t>> out;
  if (grids.size() == omegas.size()) {
    for (std::size_t i = 0; i < grids.size(); ++i) out.emplace_back(omegas[i], grids[i]);
  } else if (grids.size() == 1) {
    for (double w : omegas) out.emplace_back(w, grids.front());
  } else {
    throw ConfigError("grid list must have one entry or one per omega");
  }
  return out;
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os << "kind=" << to_string(kind) << "\nseed=" << seed << "\nomega=" << join(omegas)
     << "\ngrid=" << join(grids) << "\nfield=" << join(fields) << "\ngmres_tol=" << format_number(gmres_tol)
     << "\nrestart=" << restart << "\nmax_iter=" << max_iter << "\neta=" << join(etas)
     << "\neig_grid=" << eig_grid << "\ncheck_grid=" << check_grid << "\neig_tol=" << format_number(eig_tol)
     << "\nhow_many=" << how_many << "\nmax_subspace=" << max_subspace << "\n";
  return os.str();
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical())));
  return buf;
}

namespace {

template <class T>
T parse_scalar(const std::string& key, const std::string& text) {
  std::string s = boost::algorithm::trim_copy(text);
  T value{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), value);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw ConfigError("bad value '" + s + "' for key '" + key + "'");
  return value;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, text, boost::algorithm::is_any_of(","));
  std::vector<T> out;
  for (const auto& p : parts) {
    if (boost::algorithm::trim_copy(p).empty()) continue;
    out.push_back(parse_scalar<T>(key, p));
  }
  if (out.empty()) throw ConfigError("empty list for key '" + key + "'");
  return out;
}

bool parse_bool(const std::string& key, std::string s) {
  boost::algorithm::to_lower(s);
  boost::algorithm::trim(s);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("bad boolean '" + s + "' for key '" + key + "'");
}

}  // namespace

RunConfig load_config(const fs::path& path, RunConfig cfg) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("cannot read config '" + path.string() + "': " + e.message());
  }
  static const std::vector<std::string> known{"run", "precond-bench", "stekloff"};
  for (const auto& [section, body] : tree) {
    if (std::find(known.begin(), known.end(), section) == known.end())
      throw ConfigError("unknown section [" + section + "] in '" + path.string() + "'");
    for (const auto& [key, node] : body) {
      const std::string v = node.data();
      const std::string where = section + "." + key;
      if (section == "run") {
        if (key == "kind") cfg.kind = parse_kind(boost::algorithm::trim_copy(v));
        else if (key == "seed") cfg.seed = parse_scalar<std::uint64_t>(where, v);
        else if (key == "out") cfg.out = boost::algorithm::trim_copy(v);
        else throw ConfigError("unknown key '" + where + "'");
      } else if (section == "precond-bench") {
        if (key == "omega") cfg.omegas = parse_list<double>(where, v);
        else if (key == "grid") cfg.grids = parse_list<std::size_t>(where, v);
        else if (key == "field") cfg.fields = parse_list<int>(where, v);
        else if (key == "tol") cfg.gmres_tol = parse_scalar<double>(where, v);
        else if (key == "restart") cfg.restart = parse_scalar<std::size_t>(where, v);
        else if (key == "max_iter") cfg.max_iter = parse_scalar<std::size_t>(where, v);
        else if (key == "snapshots") cfg.snapshots = parse_bool(where, v);
        else throw ConfigError("unknown key '" + where + "'");
      } else {
        if (key == "eta") cfg.etas = parse_list<double>(where, v);
        else if (key == "grid") cfg.eig_grid = parse_scalar<std::size_t>(where, v);
        else if (key == "check_grid") cfg.check_grid = parse_scalar<std::size_t>(where, v);
        else if (key == "tol") cfg.eig_tol = parse_scalar<double>(where, v);
        else if (key == "how_many") cfg.how_many = parse_scalar<std::size_t>(where, v);
        else if (key == "max_subspace") cfg.max_subspace = parse_scalar<std::size_t>(where, v);
        else throw ConfigError("unknown key '" + where + "'");
      }
    }
  }
  cfg.validate();
  return cfg;
}

// --------------------------------------------------------------- precond

Field wave_number_field(int field, double omega_over_2pi, std::size_t n) {
  const VelocityField c(field);
  const Grid grid = Grid::dirichlet(2, n);
  const double h = grid.reference_spacing();
  const double omega = 2.0 * std::numbers::pi * omega_over_2pi;
  cvec k(grid.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      k[i * n + j] = omega / c(static_cast<double>(i + 1) * h, static_cast<double>(j + 1) * h);
  return Field(grid, std::move(k));
}

PrecondCase run_precond_case(int field, double omega_over_2pi, std::size_t n, const GmresOptions& options) {
  const VelocityField c(field);
  const Grid grid = Grid::dirichlet(2, n);
  const double h = grid.reference_spacing();
  const double omega = 2.0 * std::numbers::pi * omega_over_2pi;

  PrecondCase pc;
  pc.field = field;
  pc.omega_over_2pi = omega_over_2pi;
  pc.n = n;
  pc.h = h;
  pc.k_field = wave_number_field(field, omega_over_2pi, n);

  pc.k_ref = omega / c.mean(n);
  std::shared_ptr<const LinearOperator> precond;
  for (int attempt = 0; !precond; ++attempt) {
    try {
      precond = std::make_shared<const LinearOperator>(make_constant_inverse(grid, pc.k_ref));
    } catch (const ResonanceError&) {
      if (attempt >= 20) throw;
      pc.k_ref *= 1.005;
      pc.nudged = true;
    }
  }
  const auto A = make_helmholtz_operator(pc.k_field);
  const cvec rhs(grid.size(), h * h);
  auto result = gmres(A, rhs, options, precond.get());
  pc.report = std::move(result.report);
  pc.solution = Field(grid, std::move(result.x));
  return pc;
}

namespace {

std::string snapshot_stem(const PrecondCase& pc) {
  return "field" + std::to_string(pc.field) + "_w" + format_number(pc.omega_over_2pi) + "_n" + std::to_string(pc.n);
}

void write_snapshots(const PrecondCase& pc, const fs::path& dir) {
  ExportMeta meta;
  meta.h = {pc.h, pc.h};
  double kmin = 1e300, kmax = 0.0;
  for (const auto& v : pc.k_field.values()) {
    kmin = std::min(kmin, v.real());
    kmax = std::max(kmax, v.real());
  }
  meta.k_min = kmin;
  meta.k_max = kmax;
  meta.k_ref = pc.k_ref;
  const auto stem = dir / "snapshots" / snapshot_stem(pc);
  const Array k = Array::from(pc.k_field), u = Array::from(pc.solution);
  export_field(k, stem.string() + "_k.pgm", ExportFormat::pgm, meta);
  export_field(k, stem.string() + "_k.f64", ExportFormat::raw, meta);
  export_field(u, stem.string() + "_u.pgm", ExportFormat::pgm, meta);
  export_field(u, stem.string() + "_u.f64", ExportFormat::raw, meta);
}

}  // namespace

PrecondTable run_precond_bench(const RunConfig& config) {
  config.validate();
  PrecondTable table;
  const GmresOptions opt{config.gmres_tol, config.restart, config.max_iter};
  for (int field : config.fields)
    for (const auto& [w, n] : config.cases()) {
      table.cases.push_back(run_precond_case(field, w, n, opt));
      if (config.snapshots) write_snapshots(table.cases.back(), config.out);
    }

  const std::string hash = config.hash();
  table.csv = config.out / "precond.csv";
  table.timings = config.out / "precond_timings.csv";
  {
    auto os = open_out(table.csv);
    os << "config_hash,field,velocity,omega_over_2pi,n,unknowns,h,k_ref,k_ref_nudged,iterations,restarts,"
          "relative_residual,converged\n";
    for (const auto& pc : table.cases)
      os << hash << ',' << pc.field << ",\"" << VelocityField(pc.field).formula() << "\","
         << format_number(pc.omega_over_2pi) << ',' << pc.n << ',' << pc.n * pc.n << ',' << format_number(pc.h)
         << ',' << format_number(pc.k_ref) << ',' << (pc.nudged ? 1 : 0) << ',' << pc.report.iterations << ','
         << pc.report.restarts << ',' << format_number(pc.report.relative_residual) << ','
         << (pc.report.converged ? 1 : 0) << '\n';
    check_written(os, table.csv);
  }
  {
    auto os = open_out(table.timings);
    os << "config_hash,field,omega_over_2pi,n,iterations,seconds\n";
    for (const auto& pc : table.cases)
      os << hash << ',' << pc.field << ',' << format_number(pc.omega_over_2pi) << ',' << pc.n << ','
         << pc.report.iterations << ',' << format_number(pc.report.wall_time) << '\n';
    check_written(os, table.timings);
  }
  return table;
}

// -------------------------------------------------------------- stekloff

StekloffRow stekloff_values(double eta, std::size_t n, const EigOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const Grid grid = boundary_map_grid(2, n);
  const NtdOperator T(grid, eta);
  const DtnOperator S(grid, eta);
  const EigenReport rep = reciprocal_eigs(T.handle(), S.handle(), options);

  StekloffRow row;
  row.eta = eta;
  row.n = n;
  row.h = grid.reference_spacing();
  // S_h acts on the h^2-scaled system, so its eigenvalues are h times the
  // Stekloff values of the continuous problem.
  for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
    row.values.push_back(rep.eigenvalues[i].real() / row.h);
    row.residuals.push_back(rep.residuals[i]);
  }
  row.applications = rep.iterations;
  row.converged = rep.converged >= options.how_many;
  row.seconds = seconds_since(t0);
  return row;
}

StekloffTable run_stekloff(const RunConfig& config) {
  config.validate();
  EigOptions opt;
  opt.how_many = config.how_many;
  opt.max_subspace = config.max_subspace;
  opt.tol = config.eig_tol;
  opt.seed = config.seed;

  StekloffTable table;
  for (double eta : config.etas) {
    table.rows.push_back(stekloff_values(eta, config.eig_grid, opt));
    table.check.push_back(stekloff_values(eta, config.check_grid, opt));
  }

  const std::string hash = config.hash();
  table.csv = config.out / "stekloff.csv";
  table.convergence = config.out / "stekloff_convergence.csv";
  {
    auto os = open_out(table.csv);
    os << "config_hash,eta,n,h,converged";
    for (std::size_t i = 1; i <= config.how_many; ++i) os << ",lambda" << i;
    os << ",max_residual\n";
    for (const auto* rows : {&table.rows, &table.check})
      for (const auto& r : *rows) {
        os << hash << ',' << format_number(r.eta) << ',' << r.n << ',' << format_number(r.h) << ','
           << (r.converged ? 1 : 0);
        for (std::size_t i = 0; i < config.how_many; ++i)
          os << ',' << (i < r.values.size() ? format_number(r.values[i]) : std::string("nan"));
        const double mr = r.residuals.empty() ? 0.0 : *std::max_element(r.residuals.begin(), r.residuals.end());
        os << ',' << format_number(mr) << '\n';
      }
    check_written(os, table.csv);
  }
  {
    auto os = open_out(table.convergence);
    os << "config_hash,eta,index,n_coarse,n_fine,lambda_coarse,lambda_fine,relative_change\n";
    for (std::size_t e = 0; e < table.rows.size(); ++e) {
      const auto& fine = table.rows[e];
      const auto& coarse = table.check[e];
      for (std::size_t i = 0; i < std::min(fine.values.size(), coarse.values.size()); ++i)
        os << hash << ',' << format_number(fine.eta) << ',' << i + 1 << ',' << coarse.n << ',' << fine.n << ','
           << format_number(coarse.values[i]) << ',' << format_number(fine.values[i]) << ','
           << format_number(std::abs(fine.values[i] - coarse.values[i]) / std::abs(fine.values[i])) << '\n';
    }
    check_written(os, table.convergence);
  }
  return table;
}

// ---------------------------------------------------------------- verify

bool VerifyReport::passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed; });
}

namespace {

cvec random_cvec(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  cvec v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

SuiteResult suite(std::string name, double worst, double tol) {
  std::ostringstream os;
  os << "worst " << worst << " (limit " << tol << ")";
  return {std::move(name), worst <= tol, os.str()};
}

SuiteResult verify_exactness(std::mt19937_64& rng, std::size_t offset) {
  std::uniform_real_distribution<double> ku(0.0, 6.0);
  double worst = 0.0;
  for (std::size_t d = 1; d <= 3; ++d)
    for (std::size_t n = 3; n <= 6; ++n) {
      const Grid g = Grid::dirichlet(d, n);
      for (int draw = 0; draw < 3; ++draw) {
        const double k = ku(rng);
        const Field f(g, random_cvec(g.size(), rng));
        Eigen::VectorXcd ref;
        try {
          ref = assemble_dense(g, k, DenseVariant::dirichlet).partialPivLu().solve(to_eigen(f.values()));
          const Field u = solve_dirichlet({g, k, f}, offset);
          worst = std::max(worst, relative_error(u.values(), from_eigen(ref)));
        } catch (const ResonanceError&) {
        }
      }
    }
  return suite("exactness", worst, 1e-10);
}

SuiteResult verify_symbol() {
  double worst = 0.0;
  for (std::size_t N : {4u, 6u, 10u, 14u})
    for (double k : {0.0, 0.5, 2.0}) {
      const double h = 2.0 / static_cast<double>(N);
      const Grid g({AxisSpec{N / 2 - 1, h, Boundary::dirichlet, Boundary::dirichlet}});
      const DenseMatrix AP = assemble_dense(g, k, DenseVariant::periodic);
      const std::vector<std::size_t> len{N};
      const auto s = periodic_symbol(len, k, h);
      // Column j of F A^P F^{-1}.
      for (std::size_t j = 0; j < N; ++j) {
        cvec e(N, 0.0);
        e[j] = 1.0;
        const cvec col = dft_forward(from_eigen(AP * to_eigen(dft_inverse(e))));
        for (std::size_t i = 0; i < N; ++i)
          worst = std::max(worst, std::abs(col[i] - (i == j ? s.diagonal[i] : cplx{})));
      }
    }
  return suite("symbol", worst, 1e-10);
}

SuiteResult verify_tensor_identity(std::size_t offset) {
  double worst = 0.0;
  for (std::size_t d = 1; d <= 2; ++d)
    for (std::size_t n = 1; n <= 6; ++n)
      for (double k : {0.0, 1.3}) {
        const Grid g = Grid::dirichlet(d, n);
        const DenseMatrix AD = assemble_dense(g, k, DenseVariant::dirichlet);
        const DenseMatrix AP = assemble_dense(g, k, DenseVariant::periodic);
        auto plan = ExtensionPlan::odd(g);
        for (auto& a : plan.axes) a.restriction_offset = offset;
        // Column j of R A^P E through the library's extension and restriction.
        for (std::size_t j = 0; j < g.size(); ++j) {
          Field e(g);
          e[j] = 1.0;
          const Array ext = extend_field(e, plan);
          const Array col(ext.shape, from_eigen(AP * to_eigen(ext.values)));
          const Array r = restrict_field(col, plan);
          for (std::size_t i = 0; i < g.size(); ++i)
            worst = std::max(worst, std::abs(r.values[i] - AD(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
        }
      }
  return suite("tensor-identity", worst, 1e-14);
}

SuiteResult verify_inverse_pair(std::mt19937_64& rng) {
  double worst = 0.0;
  for (std::size_t n : {8u, 16u})
    for (double eta : {0.5, 1.0, 2.0, 4.0}) {
      const Grid g = boundary_map_grid(2, n);
      const NtdOperator T(g, eta);
      const DtnOperator S(g, eta);
      for (int r = 0; r < 10; ++r) {
        const cvec mu = random_cvec(T.partition().boundary().size(), rng);
        worst = std::max(worst, relative_error(S.apply(T.apply(mu)), mu));
      }
    }
  return suite("inverse-pair", worst, 1e-9);
}

SuiteResult verify_resonance() {
  const Grid g = Grid::dirichlet(1, 7);
  const double h = g.reference_spacing();
  const double k = 2.0 * std::sin(std::numbers::pi / 16.0) / h;
  const Field f(g, cvec(g.size(), 1.0));
  SuiteResult s{"resonance-probe", false, ""};
  try {
    (void)solve_dirichlet({g, k, f});
    s.detail = "resonant k solved without error";
    return s;
  } catch (const ResonanceError& e) {
    s.detail = std::string("expected: ") + e.what();
  }
  try {
    (void)solve_dirichlet({g, k + 1e-3, f});
    s.passed = true;
  } catch (const ResonanceError&) {
    s.detail += "; perturbed k still resonant";
  }
  return s;
}

SuiteResult verify_dft(std::mt19937_64& rng) {
  double worst = 0.0;
  for (std::size_t n : {2u, 7u, 12u, 31u, 64u, 97u, 210u, 257u, 500u}) {
    const cvec x = random_cvec(n, rng);
    const cvec y = dft_forward(x);
    for (std::size_t j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (std::size_t m = 0; m < n; ++m)
        acc += x[m] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>((j * m) % n) / static_cast<double>(n));
      worst = std::max(worst, std::abs(acc - y[j]) / norm2(x));
    }
    worst = std::max(worst, relative_error(dft_inverse(y), x));
  }
  return suite("dft", worst, 1e-12);
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& options) {
  std::mt19937_64 rng(options.seed);
  VerifyReport rep;
  rep.suites.push_back(verify_exactness(rng, options.restriction_offset));
  rep.suites.push_back(verify_symbol());
  rep.suites.push_back(verify_tensor_identity(options.restriction_offset));
  rep.suites.push_back(verify_inverse_pair(rng));
  rep.suites.push_back(verify_resonance());
  rep.suites.push_back(verify_dft(rng));
  return rep;
}

// ---------------------------------------------------------------- export

ExportFormat parse_format(const std::string& name) {
  if (name == "csv") return ExportFormat::csv;
  if (name == "raw" || name == "raw-f64" || name == "f64") return ExportFormat::raw;
  if (name == "pgm") return ExportFormat::pgm;
  throw ConfigError("unknown export format '" + name + "'");
}

namespace {

std::string format_cell(cplx v, bool complex_data) {
  if (!complex_data) return format_number(v.real());
  std::string s = format_number(v.real());
  const std::string im = format_number(v.imag());
  s += (im.front() == '-' ? "" : "+") + im + "i";
  return s;
}

void put_le(std::ostream& os, double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  os.write(bytes, 8);
}

double get_le(std::istream& is) {
  unsigned char bytes[8] = {};
  is.read(reinterpret_cast<char*>(bytes), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

fs::path sidecar(const fs::path& path) { return fs::path(path.string() + ".json"); }

}  // namespace

void export_field(const Array& values, const fs::path& path, ExportFormat format, const ExportMeta& meta) {
  if (values.shape.empty() || product(values.shape) != values.values.size())
    throw std::invalid_argument("export_field: shape does not match the data");
  switch (format) {
    case ExportFormat::csv: {
      const bool complex_data =
          std::any_of(values.values.begin(), values.values.end(), [](cplx v) { return v.imag() != 0.0; });
      const std::size_t line = values.shape.back();
      auto os = open_out(path);
      for (std::size_t i = 0; i < values.values.size(); ++i) {
        os << format_cell(values.values[i], complex_data);
        os << ((i + 1) % line == 0 ? '\n' : ',');
      }
      check_written(os, path);
      return;
    }
    case ExportFormat::raw: {
      auto os = open_out(path, std::ios::out | std::ios::binary);
      double lo = 1e300, hi = 0.0;
      for (const auto& v : values.values) {
        put_le(os, v.real());
        put_le(os, v.imag());
        lo = std::min(lo, std::abs(v));
        hi = std::max(hi, std::abs(v));
      }
      check_written(os, path);
      nlohmann::json j;
      j["shape"] = values.shape;
      j["layout"] = "row-major, last axis fastest";
      j["dtype"] = "complex128 as interleaved little-endian float64 (re, im)";
      j["h"] = meta.h;
      j["abs_min"] = lo;
      j["abs_max"] = hi;
      if (meta.k_min || meta.k_max || meta.k_ref) {
        nlohmann::json k;
        if (meta.k_min) k["min"] = *meta.k_min;
        if (meta.k_max) k["max"] = *meta.k_max;
        if (meta.k_ref) k["ref"] = *meta.k_ref;
        j["k"] = k;
      }
      const auto side = sidecar(path);
      auto js = open_out(side);
      js << j.dump(2) << '\n';
      check_written(js, side);
      return;
    }
    case ExportFormat::pgm: {
      if (values.shape.size() > 2) throw std::invalid_argument("export_field: PGM needs 1D or 2D data");
      const std::size_t rows = values.shape.size() == 2 ? values.shape[0] : 1;
      const std::size_t cols = values.shape.back();
      double lo = 1e300, hi = 0.0;
      for (const auto& v : values.values) {
        lo = std::min(lo, std::abs(v));
        hi = std::max(hi, std::abs(v));
      }
      auto os = open_out(path, std::ios::out | std::ios::binary);
      os << "P5\n" << cols << ' ' << rows << "\n65535\n";
      for (const auto& v : values.values) {
        const double t = hi > lo ? (std::abs(v) - lo) / (hi - lo) : 0.0;
        const auto level = static_cast<std::uint16_t>(std::lround(t * 65535.0));
        const char bytes[2] = {static_cast<char>(level >> 8), static_cast<char>(level & 0xff)};
        os.write(bytes, 2);
      }
      check_written(os, path);
      return;
    }
  }
}

Array import_raw(const fs::path& path) {
  const auto side = sidecar(path);
  std::ifstream js(side);
  if (!js) throw std::runtime_error("cannot open '" + side.string() + "'");
  nlohmann::json j;
  try {
    js >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("bad sidecar '" + side.string() + "': " + e.what());
  }
  Array a(j.at("shape").get<std::vector<std::size_t>>());
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path.string() + "'");
  for (auto& v : a.values) {
    const double re = get_le(is);
    const double im = get_le(is);
    v = {re, im};
  }
  if (!is) throw std::runtime_error("'" + path.string() + "' is shorter than its sidecar says");
  return a;
}

}  // namespace helmfft
