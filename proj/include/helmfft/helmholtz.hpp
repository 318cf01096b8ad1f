// Exact FFT solvers for the constant-coefficient discrete Helmholtz operator.
#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "helmfft/extension.hpp"
#include "helmfft/grid.hpp"
#include "helmfft/tensor.hpp"

namespace helmfft {

/// k^2 h^2 coincides with an eigenvalue of the operator being inverted.
class ResonanceError : public std::runtime_error {
 public:
  ResonanceError(std::vector<std::size_t> mode, cplx value);
  /// 0-based DFT index per axis of the offending mode.
  [[nodiscard]] const std::vector<std::size_t>& mode() const noexcept { return mode_; }
  [[nodiscard]] cplx value() const noexcept { return value_; }

 private:
  std::vector<std::size_t> mode_;
  cplx value_;
};

inline constexpr double kResonanceTolerance = 1e-12;

/// Diagonal of F_d A^P F_d^{-1} on a periodic grid:
///   d_l = sum_a (h_ref/h_a)^2 4 sin^2(pi l_a / N_a) - k^2 h_ref^2.
struct PeriodicSymbol {
  std::vector<std::size_t> lengths;
  std::vector<std::vector<double>> axis_terms;
  cplx shift;
  cvec diagonal;
  /// Modes that extended data can excite; empty means all.
  std::vector<std::vector<bool>> active;
  /// Flat indices of active entries with |d| < tolerance.
  std::vector<std::size_t> flagged;
  double tolerance = 0.0;

  [[nodiscard]] bool is_active(std::size_t flat) const;
  [[nodiscard]] std::vector<std::size_t> mode(std::size_t flat) const;
};

PeriodicSymbol periodic_symbol(std::span<const std::size_t> lengths, cplx k, double h);
PeriodicSymbol periodic_symbol(std::span<const std::size_t> lengths, cplx k,
                               std::span<const double> spacing,
                               std::vector<std::vector<bool>> active = {});

/// v = F^{-1} D^{-1} F g. Inactive modes are projected out. Throws
/// ResonanceError on the first flagged entry.
Array solve_periodic(const Array& g, const PeriodicSymbol& symbol);

enum class Side { lo, hi };

/// Neumann flux on one face, row-major over the remaining axes' unknowns.
struct FaceData {
  std::size_t axis = 0;
  Side side = Side::hi;
  cvec values;
};

/// Scaled right-hand side of the full-robin system:
///   F = h^2 W f + sum over faces of (h_ref^2 / h_a) W_others g.
/// In 1D with a Neumann end this is (h^2 f_1, ..., h^2 f_n, h^2 f_{n+1}/2 + h g).
Field assemble_rhs(const Grid& grid, const Field& source, std::span<const FaceData> flux = {});

struct HelmholtzProblem {
  Grid grid;
  cplx k = 0.0;
  Field rhs;  // scaled right-hand side F

  HelmholtzProblem(Grid g, cplx wave_number, Field f);
};

/// u = R_d (A^P)^{-1} E_d f on an all-Dirichlet grid, composed from the
/// odd extension, the periodic solve and the restriction.
Field solve_dirichlet(const HelmholtzProblem& problem, std::size_t restriction_offset = 0);

/// Problems with at least one Neumann face (Neumann data enters through rhs).
Field solve_neumann(const HelmholtzProblem& problem);

/// Any per-axis combination of Dirichlet/Neumann ends.
Field solve_mixed(const HelmholtzProblem& problem);

/// Reusable exact inverse of the full-robin operator for one (grid, k).
///
/// Per axis the data is reflected onto its periodic extension (odd at
/// Dirichlet ends, even at Neumann ends), divided by the symbol in Fourier
/// space and gathered back. Immutable after construction; solve() is safe
/// to call concurrently.
class HelmholtzSolver {
 public:
  HelmholtzSolver(Grid grid, cplx k);

  [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
  [[nodiscard]] cplx wave_number() const noexcept { return k_; }
  [[nodiscard]] const std::vector<std::size_t>& period_shape() const noexcept { return period_; }

  [[nodiscard]] cvec solve(std::span<const cplx> rhs) const;
  [[nodiscard]] Field solve(const Field& rhs) const;

 private:
  Grid grid_;
  cplx k_;
  std::vector<AxisReflection> reflections_;
  std::vector<std::size_t> period_;
  cvec inverse_symbol_;
};

/// Matrix-free application of the full-robin operator
///   sum_a (h_ref/h_a)^2 T_a ⊗ W_others - h_ref^2 k(x)^2 W.
cvec apply_helmholtz(const Grid& grid, std::span<const cplx> u, cplx k);
cvec apply_helmholtz(const Grid& grid, std::span<const cplx> u, std::span<const cplx> k_field);

}  // namespace helmfft
