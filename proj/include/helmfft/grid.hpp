// Box grids and complex fields over them.
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace helmfft {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

enum class Boundary { dirichlet, neumann };

/// One axis of a box grid. `n` counts the interior nodes x_j = j*h, j = 1..n;
/// a Neumann end adds the boundary node at that end as an extra unknown.
struct AxisSpec {
  std::size_t n = 1;
  double h = 0.5;
  Boundary lo = Boundary::dirichlet;
  Boundary hi = Boundary::dirichlet;

  /// Unknowns on this axis: n, n+1 or n+2.
  [[nodiscard]] std::size_t unknowns() const noexcept {
    return n + (lo == Boundary::neumann ? 1 : 0) + (hi == Boundary::neumann ? 1 : 0);
  }
  /// Grid position (x / h) of unknown `i`.
  [[nodiscard]] std::size_t position(std::size_t i) const noexcept {
    return lo == Boundary::neumann ? i : i + 1;
  }
  [[nodiscard]] bool operator==(const AxisSpec&) const = default;
};

/// Tensor-product grid on a d-dimensional box, d in {1,2,3}.
///
/// Unknowns are stored row-major with the last axis fastest. The discrete
/// operators built on a grid are scaled by the square of the reference
/// spacing, which is the spacing of axis 0.
class Grid {
 public:
  Grid() = default;
  explicit Grid(std::vector<AxisSpec> axes);

  /// Unit box (0,1)^dim with n interior nodes per axis and h = 1/(n+1).
  static Grid uniform(std::size_t dim, std::size_t n, Boundary lo = Boundary::dirichlet,
                      Boundary hi = Boundary::dirichlet);
  static Grid dirichlet(std::size_t dim, std::size_t n) { return uniform(dim, n); }
  static Grid neumann(std::size_t dim, std::size_t n) {
    return uniform(dim, n, Boundary::neumann, Boundary::neumann);
  }
  /// Unit box with per-axis interior counts and per-axis BC pairs.
  static Grid box(std::span<const std::size_t> n_per_axis,
                  std::span<const std::pair<Boundary, Boundary>> bcs);

  [[nodiscard]] std::size_t dim() const noexcept { return axes_.size(); }
  [[nodiscard]] const AxisSpec& axis(std::size_t a) const { return axes_.at(a); }
  [[nodiscard]] const std::vector<AxisSpec>& axes() const noexcept { return axes_; }
  [[nodiscard]] std::vector<std::size_t> shape() const;
  [[nodiscard]] std::vector<std::size_t> strides() const;
  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] double reference_spacing() const { return axes_.front().h; }

  [[nodiscard]] bool all_dirichlet() const noexcept;
  [[nodiscard]] bool any_neumann() const noexcept { return !all_dirichlet(); }

  /// Same box with Dirichlet conditions on every face and the same n.
  [[nodiscard]] Grid interior() const;

  [[nodiscard]] std::string describe() const;
  [[nodiscard]] bool operator==(const Grid&) const = default;

 private:
  std::vector<AxisSpec> axes_;
  std::size_t size_ = 0;
};

/// Complex values over the unknowns of a grid.
class Field {
 public:
  Field() = default;
  explicit Field(Grid grid);  // zero-filled
  Field(Grid grid, cvec values);

  [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
  [[nodiscard]] std::span<const cplx> values() const noexcept { return values_; }
  [[nodiscard]] std::span<cplx> values() noexcept { return values_; }
  [[nodiscard]] cvec& data() noexcept { return values_; }
  [[nodiscard]] const cvec& data() const noexcept { return values_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  cplx& operator[](std::size_t i) { return values_[i]; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }

 private:
  Grid grid_;
  cvec values_;
};

/// Multi-index helpers over a row-major shape.
std::size_t flat_index(std::span<const std::size_t> index, std::span<const std::size_t> strides);
void unflatten(std::size_t flat, std::span<const std::size_t> shape, std::span<std::size_t> index);
std::size_t product(std::span<const std::size_t> shape);

double norm2(std::span<const cplx> v);
double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b);
/// ||a - b|| / ||b||; returns ||a|| when b is zero.
double relative_error(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace helmfft
