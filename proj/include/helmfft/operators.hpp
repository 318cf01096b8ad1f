// Matrix-free operator handles: Helmholtz actions and boundary maps.
#pragma once

#include <functional>
#include <memory>
#include <string>

#include "helmfft/grid.hpp"
#include "helmfft/helmholtz.hpp"

namespace helmfft {

/// Linear map C^cols -> C^rows given by an apply procedure.
class LinearOperator {
 public:
  using ApplyFn = std::function<void(std::span<const cplx> in, std::span<cplx> out)>;

  LinearOperator(std::size_t rows, std::size_t cols, ApplyFn fn, std::string tag);

  static LinearOperator identity(std::size_t n);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }
  [[nodiscard]] const std::string& tag() const noexcept { return tag_; }

  /// Throws std::invalid_argument when the lengths do not match the shape.
  void apply(std::span<const cplx> in, std::span<cplx> out) const;
  [[nodiscard]] cvec operator()(std::span<const cplx> in) const;

 private:
  std::size_t rows_, cols_;
  ApplyFn fn_;
  std::string tag_;
};

/// this ∘ rhs
LinearOperator compose(const LinearOperator& lhs, const LinearOperator& rhs);

/// Interior / boundary split of a grid's unknowns.
///
/// Boundary nodes are the unknowns on Neumann faces. They are ordered face by
/// face (axis 0 low, axis 0 high, axis 1 low, ...), row-major within a face;
/// an edge or corner node belongs to the first face in that order. Interior
/// nodes keep row-major order, which is the order of grid.interior().
class BlockPartition {
 public:
  explicit BlockPartition(const Grid& grid);

  [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
  [[nodiscard]] const std::vector<std::size_t>& interior() const noexcept { return interior_; }
  [[nodiscard]] const std::vector<std::size_t>& boundary() const noexcept { return boundary_; }

  [[nodiscard]] cvec scatter_boundary(std::span<const cplx> b) const;
  [[nodiscard]] cvec gather_boundary(std::span<const cplx> full) const;
  [[nodiscard]] cvec scatter_interior(std::span<const cplx> in) const;
  [[nodiscard]] cvec gather_interior(std::span<const cplx> full) const;

 private:
  Grid grid_;
  std::vector<std::size_t> interior_, boundary_;
};

/// Box grid for boundary maps: Neumann faces everywhere, n interior nodes
/// per axis, h = 1/(n+1).
Grid boundary_map_grid(std::size_t dim, std::size_t n);

/// Discrete Neumann-to-Dirichlet map T_h mu = [0 I] A^{-1} [0; mu]: one FFT
/// solve of the all-Neumann problem per application.
class NtdOperator {
 public:
  NtdOperator(const Grid& grid, double eta);
  [[nodiscard]] cvec apply(std::span<const cplx> mu) const;
  [[nodiscard]] const BlockPartition& partition() const noexcept { return partition_; }
  [[nodiscard]] LinearOperator handle() const;

 private:
  BlockPartition partition_;
  std::shared_ptr<const HelmholtzSolver> solver_;
};

/// Discrete Dirichlet-to-Neumann map S_h f = (A_BB - A_BI A_II^{-1} A_IB) f,
/// with A_II^{-1} from the FFT Dirichlet solver on the interior grid.
class DtnOperator {
 public:
  DtnOperator(const Grid& grid, double eta);
  [[nodiscard]] cvec apply(std::span<const cplx> f) const;
  [[nodiscard]] const BlockPartition& partition() const noexcept { return partition_; }
  [[nodiscard]] LinearOperator handle() const;

 private:
  BlockPartition partition_;
  double eta_;
  std::shared_ptr<const HelmholtzSolver> interior_solver_;
};

cvec apply_ntd(const Grid& grid, std::span<const cplx> mu, double eta);
cvec apply_dtn(const Grid& grid, std::span<const cplx> f, double eta);

/// (T_d - h^2 diag(k(x)^2)) u.
Field apply_variable_helmholtz(const Field& u, const Field& k_field);

LinearOperator make_helmholtz_operator(const Field& k_field);
/// Exact inverse at constant k_ref (the FFT solver) as an operator handle.
LinearOperator make_constant_inverse(const Grid& grid, double k_ref);
/// v -> A(k(x)) B(k_ref) v with B the exact constant-k inverse.
LinearOperator make_preconditioned_operator(const Field& k_field, double k_ref);

}  // namespace helmfft
