// Release gate: one PASS/FAIL line per acceptance criterion. Tolerances and
// reference values are fixed here; the exit status is nonzero if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "helmfft/bench.hpp"
#include "helmfft/dense.hpp"
#include "helmfft/dft.hpp"
#include "helmfft/helmholtz.hpp"
#include "helmfft/operators.hpp"
#include "oracles.hpp"

using namespace helmfft;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int failures = 0;

void run(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("criterion %2d %s  %-20s %s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), t);
  std::fflush(stdout);
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Smallest |symbol| over excitable modes relative to the largest.
double resonance_margin(const Grid& g, double k) {
  std::vector<std::size_t> period;
  std::vector<double> h;
  std::vector<std::vector<bool>> active;
  for (const auto& ax : g.axes()) {
    const auto r = AxisReflection::for_axis(ax);
    period.push_back(r.period);
    h.push_back(ax.h);
    active.push_back(r.active);
  }
  const auto s = periodic_symbol(period, k, h, active);
  double lo = 1e300, hi = 0.0;
  for (std::size_t f = 0; f < s.diagonal.size(); ++f) {
    hi = std::max(hi, std::abs(s.diagonal[f]));
    if (s.is_active(f)) lo = std::min(lo, std::abs(s.diagonal[f]));
  }
  return lo / hi;
}

Outcome exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<std::size_t> nd(3, 6);
  std::uniform_real_distribution<double> kd(0.0, 8.0);
  const std::pair<Boundary, Boundary> pairs[4] = {{Boundary::dirichlet, Boundary::dirichlet},
                                                  {Boundary::dirichlet, Boundary::neumann},
                                                  {Boundary::neumann, Boundary::dirichlet},
                                                  {Boundary::neumann, Boundary::neumann}};
  double worst = 0.0;
  std::size_t solves = 0, combos = 0;
  for (std::size_t d = 1; d <= 3; ++d) {
    std::size_t ncombo = 1;
    for (std::size_t a = 0; a < d; ++a) ncombo *= 4;
    for (std::size_t combo = 0; combo < ncombo; ++combo, ++combos)
      for (int draw = 0; draw < 20; ++draw) {
        std::vector<std::pair<Boundary, Boundary>> bcs;
        std::vector<std::size_t> ns;
        for (std::size_t a = 0, c = combo; a < d; ++a, c /= 4) {
          bcs.push_back(pairs[c % 4]);
          ns.push_back(nd(rng));
        }
        const Grid g = Grid::box(ns, bcs);
        double k = kd(rng);
        while (resonance_margin(g, k) < 1e-3) k = kd(rng);
        const Field f(g, oracle::random_vector(g.size(), rng));
        const auto A = assemble_dense(g, k, g.all_dirichlet() ? DenseVariant::dirichlet : DenseVariant::full_robin);
        const cvec ref = oracle::unvec(A.partialPivLu().solve(oracle::vec(f.data())));
        const Field u = g.all_dirichlet() ? solve_dirichlet({g, k, f}) : solve_neumann({g, k, f});
        worst = std::max(worst, oracle::rel(u.data(), ref));
        ++solves;
      }
  }
  const double t = elapsed(t0);
  return {worst <= 1e-10 && t < 30.0,
          fmt("worst relative error %.2e over %zu solves, %zu BC combinations (limit 1e-10, < 30 s)", worst, solves, combos)};
}

Outcome symbol() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (std::size_t N : {4u, 6u, 10u, 14u})
    for (double k : {0.0, 0.5, 2.0}) {
      const double h = 2.0 / static_cast<double>(N);
      const Grid g({AxisSpec{N / 2 - 1, h, Boundary::dirichlet, Boundary::dirichlet}});
      const oracle::Mat F = oracle::dft_matrix(N);
      const oracle::Mat D = F * assemble_dense(g, k, DenseVariant::periodic) * F.inverse();
      const std::vector<std::size_t> len{N};
      const auto s = periodic_symbol(len, k, h);
      oracle::Mat diff = D;
      for (std::size_t l = 0; l < N; ++l) diff(l, l) -= s.diagonal[l];
      worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
  const double t = elapsed(t0);
  return {worst <= 1e-10 && t < 5.0, fmt("max |F A^P F^-1 - D^P| = %.2e (limit 1e-10, < 5 s)", worst)};
}

Outcome tensor_identity() {
  double worst = 0.0;
  for (std::size_t d = 1; d <= 2; ++d)
    for (std::size_t n = 1; n <= 6; ++n)
      for (double k : {0.0, 0.7, 2.5, 5.0}) {
        const Grid g = Grid::dirichlet(d, n);
        const auto N = static_cast<Eigen::Index>(2 * n + 2), m = static_cast<Eigen::Index>(n);
        oracle::Mat E = oracle::Mat::Zero(N, m), R = oracle::Mat::Zero(m, N);
        for (Eigen::Index j = 0; j < m; ++j) {
          E(j, j) = 1.0;
          E(N - 2 - j, j) = -1.0;
          R(j, j) = 1.0;
        }
        const oracle::Mat Ed = d == 1 ? E : oracle::kron(E, E);
        const oracle::Mat Rd = d == 1 ? R : oracle::kron(R, R);
        const oracle::Mat diff =
            Rd * assemble_dense(g, k, DenseVariant::periodic) * Ed - assemble_dense(g, k, DenseVariant::dirichlet);
        worst = std::max(worst, diff.cwiseAbs().maxCoeff());
      }
  return {worst <= 1e-14, fmt("max |R A^P E - A^D| = %.2e (limit 1e-14)", worst)};
}

Outcome inverse_pair() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(104);
  double worst = 0.0;
  for (std::size_t n : {8u, 16u})
    for (double eta : {0.5, 1.0, 2.0, 4.0}) {
      const Grid g = boundary_map_grid(2, n);
      const NtdOperator T(g, eta);
      const DtnOperator S(g, eta);
      for (int r = 0; r < 10; ++r) {
        const cvec mu = oracle::random_vector(T.partition().boundary().size(), rng);
        worst = std::max(worst, oracle::rel(S.apply(T.apply(mu)), mu));
      }
    }
  const double t = elapsed(t0);
  return {worst <= 1e-9 && t < 30.0, fmt("max |S T mu - mu|/|mu| = %.2e (limit 1e-9, < 30 s)", worst)};
}

Outcome table2() {
  const auto t0 = std::chrono::steady_clock::now();
  const double etas[4] = {0.5, 1.0, 2.0, 4.0};
  const double reference[4][6] = {{0.2132, 0.2158, 0.5561, 0.8910, 0.8910, 2.6103},
                                  {0.2162, 0.2190, 0.5832, 1.0003, 1.0003, 4.1828},
                                  {0.2302, 0.2327, 0.7548, 2.4831, 2.4831, -2.6194},
                                  {0.4909, 0.4909, 0.6099, 0.7888, 1.5170, 1.5170}};
  EigOptions opt;
  opt.how_many = 6;
  double worst_ref = 0.0, worst_grid = 0.0, worst_sextuple = 0.0;
  bool converged = true;
  std::string values;
  double double_gap = 0.0, double_err = 0.0;
  for (int e = 0; e < 4; ++e) {
    const auto fine = stekloff_values(etas[e], 64, opt);
    const auto coarse = stekloff_values(etas[e], 32, opt);
    converged = converged && fine.converged && coarse.converged && fine.values.size() == 6;
    std::vector<double> ref(reference[e], reference[e] + 6);
    std::sort(ref.begin(), ref.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    values += fmt(" eta=%g:", etas[e]);
    for (std::size_t i = 0; i < fine.values.size() && i < 6; ++i) {
      const double rel = std::abs(std::abs(fine.values[i]) - std::abs(ref[i])) / std::abs(ref[i]);
      worst_ref = std::max(worst_ref, rel);
      if (e == 0) worst_sextuple = std::max(worst_sextuple, rel);
      worst_grid = std::max(worst_grid, std::abs(fine.values[i] - coarse.values[i]) / std::abs(fine.values[i]));
      values += fmt(" %.4f", fine.values[i]);
    }
    if (e == 3 && fine.values.size() >= 2) {
      double_gap = std::abs(std::abs(fine.values[0]) - std::abs(fine.values[1]));
      double_err = std::abs(std::abs(fine.values[0]) - 0.4909) / 0.4909;
    }
  }
  const double t = elapsed(t0);
  const bool pass = converged && worst_ref <= 0.02 && worst_grid < 0.02 && double_gap <= 1e-6 * 0.4909 &&
                    double_err <= 0.02 && t < 300.0;
  return {pass, fmt("max rel. deviation from reference |lambda| %.3g (eta=0.5 sextuple %.3g, eta=4 double %.3g, "
                    "limit 0.02); n=32->64 change %.2e (limit 0.02); n=64 values:",
                    worst_ref, worst_sextuple, double_err, worst_grid) + values};
}

Outcome small_grid_eigs() {
  const auto t0 = std::chrono::steady_clock::now();
  EigOptions opt;
  opt.how_many = 6;
  double worst = 0.0;
  for (double eta : {0.5, 1.0, 2.0, 4.0}) {
    const auto row = stekloff_values(eta, 8, opt);
    if (row.values.size() != 6) return {false, fmt("only %zu pairs at eta=%g", row.values.size(), eta)};
    const Grid g = boundary_map_grid(2, 8);
    const BlockPartition part(g);
    const auto A = assemble_dense(g, eta, DenseVariant::full_robin);
    Eigen::ComplexEigenSolver<oracle::Mat> es(oracle::schur_complement(A, part.interior(), part.boundary()));
    std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
    for (std::size_t i = 0; i < 6; ++i) worst = std::max(worst, std::abs(row.values[i] * row.h - ev[i]));
  }
  const double t = elapsed(t0);
  return {worst <= 1e-6 && t < 60.0, fmt("max |lambda_arnoldi - lambda_dense| = %.2e (limit 1e-6, < 60 s)", worst)};
}

Outcome table1() {
  const auto t0 = std::chrono::steady_clock::now();
  const double omegas[4] = {0.8, 1.6, 3.2, 6.4};
  const std::size_t grids[4] = {50, 100, 200, 400};
  const std::size_t reference[2][4] = {{4, 5, 6, 13}, {4, 5, 6, 10}};
  std::string detail;
  bool pass = true;
  for (int field = 1; field <= 2; ++field) {
    detail += fmt(" field %d:", field);
    for (int r = 0; r < 4; ++r) {
      const auto pc = run_precond_case(field, omegas[r], grids[r], {1e-6, 50, 1000});
      const auto it = pc.report.iterations;
      const auto ref = reference[field - 1][r];
      const bool ok = pc.report.converged && (it > ref ? it - ref : ref - it) <= 3;
      pass = pass && ok;
      detail += fmt(" %zu(%zu)%s[%.2fs]", it, ref, ok ? "" : "!", pc.report.wall_time);
    }
  }
  const double t = elapsed(t0);
  return {pass && t < 600.0, "iterations(reference), budget +-3:" + detail};
}

Outcome dft() {
  std::mt19937_64 rng(108);
  std::vector<std::size_t> lengths{2, 3, 5, 7, 97, 127, 211, 251, 257, 401, 499, 509, 512};
  std::uniform_int_distribution<std::size_t> ud(2, 512);
  while (lengths.size() < 50) lengths.push_back(ud(rng));
  double worst = 0.0;
  for (std::size_t n : lengths) {
    const cvec x = oracle::random_vector(n, rng);
    worst = std::max(worst, max_abs_diff(dft_forward(x), oracle::naive_dft(x)) / norm2(x));
  }
  double worst_rt = 0.0;
  for (std::size_t n : {2u, 17u, 100u, 1000u, 1021u, 2048u, 4099u, 6000u, 8191u, 8192u}) {
    const cvec x = oracle::random_vector(n, rng);
    worst_rt = std::max(worst_rt, relative_error(dft_inverse(dft_forward(x)), x));
  }
  return {worst <= 1e-12 && worst_rt <= 1e-12,
          fmt("naive agreement %.2e over 50 lengths, round trip %.2e up to N=8192 (limit 1e-12)", worst, worst_rt)};
}

Outcome resonance() {
  std::string detail;
  bool pass = true;
  for (std::size_t n : {7u, 15u, 31u}) {
    const Grid g = Grid::dirichlet(1, n);
    const double h = g.reference_spacing();
    const double N = 2.0 * static_cast<double>(n + 1);
    const double k = 2.0 * std::sin(std::numbers::pi / N) / h;
    const Field f(g, cvec(g.size(), 1.0));
    bool raised = false;
    try {
      (void)solve_dirichlet({g, k, f});
    } catch (const ResonanceError&) {
      raised = true;
    }
    bool solved = true;
    for (double dk : {-1e-3, 1e-3}) {
      try {
        const Field u = solve_dirichlet({g, k + dk, f});
        const auto A = assemble_dense(g, k + dk, DenseVariant::dirichlet);
        // Normwise backward error; the forward error is inflated by cond(A) ~ 1/dk.
        const Eigen::VectorXcd x = oracle::vec(u.data()), b = oracle::vec(f.data());
        const double be = (A * x - b).norm() / (A.norm() * x.norm() + b.norm());
        solved = solved && be <= 1e-12;
      } catch (const ResonanceError&) {
        solved = false;
      }
    }
    pass = pass && raised && solved;
    detail += fmt(" n=%zu: %s/%s", n, raised ? "raised" : "NOT raised", solved ? "perturbed solves" : "perturbed fails");
  }
  return {pass, detail};
}

Outcome complexity() {
  auto time_solve = [](std::size_t n) {
    const Grid g = Grid::dirichlet(2, n);
    const Field f(g, cvec(g.size(), 1.0));
    (void)solve_dirichlet({g, 10.0, f});
    double best = 1e30;
    for (int r = 0; r < 3; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      (void)solve_dirichlet({g, 10.0, f});
      best = std::min(best, elapsed(t0));
    }
    return best;
  };
  const double t256 = time_solve(256), t512 = time_solve(512);
  return {t512 <= 5.0 * t256, fmt("t(512) = %.3f s, t(256) = %.3f s, ratio %.2f (limit 5)", t512, t256, t512 / t256)};
}

}  // namespace

int main() {
  run(1, "exactness", exactness);
  run(2, "symbol", symbol);
  run(3, "tensor-identity", tensor_identity);
  run(4, "inverse-pair", inverse_pair);
  run(5, "stekloff-table", table2);
  run(6, "small-grid-eigs", small_grid_eigs);
  run(7, "gmres-table", table1);
  run(8, "dft-engine", dft);
  run(9, "resonance", resonance);
  run(10, "complexity", complexity);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
