#include "helmfft/dense.hpp"

#include <stdexcept>

#include "helmfft/extension.hpp"

namespace helmfft {

namespace {

// Per-axis 1D description of the operator on some shape.
struct Axis1d {
  std::size_t len = 0;
  bool periodic = false;
  bool neumann_lo = false, neumann_hi = false;
  double coeff = 1.0;
};

double weight(const Axis1d& ax, std::size_t i) {
  if ((i == 0 && ax.neumann_lo) || (i + 1 == ax.len && ax.neumann_hi)) return 0.5;
  return 1.0;
}

DenseMatrix assemble(std::span<const Axis1d> axes, const std::function<cplx(std::size_t)>& shift,
                     std::size_t cap) {
  std::vector<std::size_t> shape;
  for (const auto& a : axes) shape.push_back(a.len);
  const std::size_t total = product(shape);
  if (total > cap)
    throw std::length_error("dense assembly of " + std::to_string(total) +
                            " unknowns exceeds the cap of " + std::to_string(cap));
  std::vector<std::size_t> strides(shape.size(), 1);
  for (std::size_t a = shape.size(); a-- > 1;) strides[a - 1] = strides[a] * shape[a];

  DenseMatrix A = DenseMatrix::Zero(static_cast<Eigen::Index>(total),
                                    static_cast<Eigen::Index>(total));
  std::vector<std::size_t> idx(shape.size());
  for (std::size_t row = 0; row < total; ++row) {
    unflatten(row, shape, idx);
    double wall = 1.0;
    for (std::size_t a = 0; a < axes.size(); ++a) wall *= weight(axes[a], idx[a]);
    const auto r = static_cast<Eigen::Index>(row);
    A(r, r) -= shift(row) * wall;

    for (std::size_t a = 0; a < axes.size(); ++a) {
      const auto& ax = axes[a];
      // Row of W_a G_a with G_a the reflected (ghost-point) stencil.
      const double w = ax.coeff * wall;
      const std::size_t i = idx[a];
      auto add = [&](std::ptrdiff_t j, double v) {
        const auto col = static_cast<std::ptrdiff_t>(row) +
                         (j - static_cast<std::ptrdiff_t>(i)) *
                             static_cast<std::ptrdiff_t>(strides[a]);
        A(r, static_cast<Eigen::Index>(col)) += v;
      };
      if (ax.periodic) {
        const auto L = static_cast<std::ptrdiff_t>(ax.len);
        const auto ii = static_cast<std::ptrdiff_t>(i);
        add(ii, 2.0 * w);
        add((ii + 1) % L, -w);
        add((ii + L - 1) % L, -w);
        continue;
      }
      const bool at_lo = i == 0, at_hi = i + 1 == ax.len;
      if (!at_lo) {
        add(static_cast<std::ptrdiff_t>(i) - 1, -w * (at_hi && ax.neumann_hi ? 2.0 : 1.0));
      }
      if (!at_hi) {
        add(static_cast<std::ptrdiff_t>(i) + 1, -w * (at_lo && ax.neumann_lo ? 2.0 : 1.0));
      }
      add(static_cast<std::ptrdiff_t>(i), 2.0 * w);
    }
  }
  return A;
}

std::vector<Axis1d> axes_for(const Grid& grid, DenseVariant variant) {
  const double href = grid.reference_spacing();
  std::vector<Axis1d> axes;
  for (const auto& ax : grid.axes()) {
    Axis1d a;
    a.coeff = (href / ax.h) * (href / ax.h);
    const bool dd = ax.lo == Boundary::dirichlet && ax.hi == Boundary::dirichlet;
    switch (variant) {
      case DenseVariant::dirichlet:
        if (!dd) throw std::invalid_argument("dirichlet variant needs an all-Dirichlet grid");
        a.len = ax.n;
        break;
      case DenseVariant::periodic:
        a.len = AxisReflection::for_axis(ax).period;
        a.periodic = true;
        break;
      case DenseVariant::neumann_extended:
        if (dd)
          a.len = ax.n;
        else if (ax.lo == Boundary::dirichlet && ax.hi == Boundary::neumann)
          a.len = 2 * ax.n + 1;
        else
          throw std::invalid_argument("neumann_extended supports a single Neumann end at x = 1");
        break;
      case DenseVariant::full_robin:
        a.len = ax.unknowns();
        a.neumann_lo = ax.lo == Boundary::neumann;
        a.neumann_hi = ax.hi == Boundary::neumann;
        break;
    }
    axes.push_back(a);
  }
  return axes;
}

}  // namespace

std::vector<std::size_t> dense_shape(const Grid& grid, DenseVariant variant) {
  std::vector<std::size_t> s;
  for (const auto& a : axes_for(grid, variant)) s.push_back(a.len);
  return s;
}

DenseMatrix assemble_dense(const Grid& grid, cplx k, DenseVariant variant, std::size_t cap) {
  const auto axes = axes_for(grid, variant);
  const double href = grid.reference_spacing();
  const cplx shift = k * k * href * href;
  return assemble(axes, [shift](std::size_t) { return shift; }, cap);
}

DenseMatrix assemble_dense(const Grid& grid, const Field& k_field, DenseVariant variant,
                           std::size_t cap) {
  if (variant != DenseVariant::dirichlet && variant != DenseVariant::full_robin)
    throw std::invalid_argument("variable wave number needs the dirichlet or full_robin variant");
  if (k_field.grid().shape() != grid.shape())
    throw std::invalid_argument("wave-number field does not match the grid");
  const auto axes = axes_for(grid, variant);
  const double h2 = grid.reference_spacing() * grid.reference_spacing();
  return assemble(
      axes, [&](std::size_t i) { return k_field[i] * k_field[i] * h2; }, cap);
}

Eigen::VectorXcd to_eigen(std::span<const cplx> v) {
  Eigen::VectorXcd e(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) e(static_cast<Eigen::Index>(i)) = v[i];
  return e;
}

cvec from_eigen(const Eigen::VectorXcd& v) { return cvec(v.data(), v.data() + v.size()); }

}  // namespace helmfft
