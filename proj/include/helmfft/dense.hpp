// Explicit finite-difference matrices for small-instance verification.
#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "helmfft/grid.hpp"

namespace helmfft {

using DenseMatrix = Eigen::MatrixXcd;

enum class DenseVariant {
  dirichlet,           ///< A^D on an all-Dirichlet grid
  periodic,            ///< A^P on the reflection period of every axis
  neumann_extended,    ///< A^e: Dirichlet operator on the evenly reflected box
  full_robin,          ///< symmetric system on all unknowns, half weights on Neumann nodes
};

inline constexpr std::size_t kDenseCap = 20000;

/// Shape of the grid the given variant lives on.
std::vector<std::size_t> dense_shape(const Grid& grid, DenseVariant variant);

/// Assembles the variant's matrix, scaled by h_ref^2 (h_ref = spacing of
/// axis 0):  sum_a (h_ref/h_a)^2 T_a ⊗ W_others - k^2 h_ref^2 W.
/// W carries 1/2 per Neumann end node; T has the reflected end row
/// (1, -1) there, so a one-sided Neumann row reads -u_n + (1 - k^2h^2/2) u_{n+1}.
DenseMatrix assemble_dense(const Grid& grid, cplx k, DenseVariant variant,
                           std::size_t cap = kDenseCap);

/// Variable wave number; only the dirichlet and full_robin variants.
DenseMatrix assemble_dense(const Grid& grid, const Field& k_field, DenseVariant variant,
                           std::size_t cap = kDenseCap);

/// Dense vector helpers.
Eigen::VectorXcd to_eigen(std::span<const cplx> v);
cvec from_eigen(const Eigen::VectorXcd& v);

}  // namespace helmfft
