// Restarted GMRES and a Krylov-Schur eigensolver for matrix-free operators.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "helmfft/operators.hpp"

namespace helmfft {

struct SolveReport {
  std::size_t iterations = 0;  // operator applications inside the Arnoldi cycles
  double relative_residual = 0.0;
  double wall_time = 0.0;  // seconds
  bool converged = false;
  std::size_t restarts = 0;
  /// Least-squares residual estimate / ||b|| after every iteration.
  std::vector<double> residual_history;
};

struct GmresOptions {
  double tol = 1e-6;
  std::size_t restart = 50;
  std::size_t max_iter = 1000;
};

struct GmresResult {
  cvec x;
  SolveReport report;
};

/// Solves op x = rhs. With a right preconditioner M the iteration runs on
/// op M y = rhs and returns x = M y, so the monitored residual is the true
/// residual of the original system. Non-convergence is reported, not thrown.
GmresResult gmres(const LinearOperator& op, std::span<const cplx> rhs, const GmresOptions& options = {},
                  const LinearOperator* right_preconditioner = nullptr);

enum class Which { largest_magnitude, smallest_magnitude };

struct EigOptions {
  std::size_t how_many = 6;
  Which which = Which::largest_magnitude;
  double tol = 1e-10;
  std::size_t max_subspace = 60;
  std::size_t max_restarts = 300;
  std::uint64_t seed = 20190711;
  bool want_vectors = false;
};

struct EigenReport {
  cvec eigenvalues;              // sorted by magnitude, ascending for smallest, descending for largest
  std::vector<double> residuals; // ||Op v - lambda v|| / ||v||
  std::size_t iterations = 0;    // operator applications
  std::size_t restarts = 0;
  std::size_t converged = 0;     // pairs passing the residual test
  std::vector<cvec> eigenvectors;
};

/// Krylov decomposition A V_k = V_{k+1} H with orthonormal V; H is
/// (k+1) x k, upper Hessenberg until the first restart.
class KrylovDecomposition {
 public:
  KrylovDecomposition(std::size_t n, cvec start);

  /// Grows the basis to `size` columns. Every new vector is also made
  /// orthogonal to `locked` (an orthonormal set), i.e. the decomposition is
  /// for (I - Q Q^*) A on the complement of span(Q).
  void expand(const LinearOperator& op, std::size_t size, const std::vector<cvec>& locked,
              std::mt19937_64& rng);

  /// Keeps the span of V_k U (U orthonormal k x p) with H = T and the new
  /// last row c U; v_k becomes the new continuation vector.
  void restart(const Eigen::MatrixXcd& U, const Eigen::MatrixXcd& T);

  [[nodiscard]] std::size_t size() const noexcept { return k_; }
  [[nodiscard]] const std::vector<cvec>& basis() const noexcept { return V_; }
  [[nodiscard]] Eigen::MatrixXcd projected() const;  // k x k
  [[nodiscard]] Eigen::RowVectorXcd last_row() const;
  [[nodiscard]] const Eigen::MatrixXcd& hessenberg() const noexcept { return H_; }
  [[nodiscard]] std::size_t applications() const noexcept { return applications_; }

 private:
  std::size_t n_, k_ = 0;
  std::vector<cvec> V_;     // k+1 vectors
  Eigen::MatrixXcd H_;      // (k+1) x k
  std::size_t applications_ = 0;
};

/// Frobenius norm of A V_k - V_{k+1} H (zero up to rounding).
double arnoldi_relation_residual(const LinearOperator& op, const KrylovDecomposition& kd);

/// Wanted eigenvalues of op by restarted Arnoldi (Krylov-Schur). Converged
/// pairs are locked and the search repeated from a fresh random vector in
/// their orthogonal complement until the wanted set stops changing, which
/// also picks up further copies of repeated eigenvalues. Only pairs whose
/// residual passes the tolerance are counted as converged.
EigenReport arnoldi_eigs(const LinearOperator& op, const EigOptions& options = {});

/// Smallest-magnitude eigenvalues of `target` as reciprocals of the
/// largest-magnitude eigenvalues of `inverse` (= target^{-1}). Residuals are
/// evaluated on `target` itself.
EigenReport reciprocal_eigs(const LinearOperator& inverse, const LinearOperator& target,
                            const EigOptions& options = {});

/// Moves the eigenvalues for which `first(a, b)` holds towards the top-left of
/// an upper-triangular complex Schur form T = U^* A U (unitary swaps).
void sort_schur(Eigen::MatrixXcd& T, Eigen::MatrixXcd& U,
                const std::function<bool(cplx, cplx)>& first);

}  // namespace helmfft
