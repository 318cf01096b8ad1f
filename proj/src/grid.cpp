#include "helmfft/grid.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace helmfft {

Grid::Grid(std::vector<AxisSpec> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > 3)
    throw std::invalid_argument("grid dimension must be 1, 2 or 3");
  size_ = 1;
  for (const auto& ax : axes_) {
    if (ax.n < 1) throw std::invalid_argument("grid axis needs at least one interior node");
    if (!(ax.h > 0.0) || !std::isfinite(ax.h))
      throw std::invalid_argument("grid spacing must be positive");
    size_ *= ax.unknowns();
  }
}

Grid Grid::uniform(std::size_t dim, std::size_t n, Boundary lo, Boundary hi) {
  std::vector<AxisSpec> axes(dim, AxisSpec{n, 1.0 / static_cast<double>(n + 1), lo, hi});
  return Grid(std::move(axes));
}

Grid Grid::box(std::span<const std::size_t> n_per_axis,
               std::span<const std::pair<Boundary, Boundary>> bcs) {
  if (n_per_axis.size() != bcs.size())
    throw std::invalid_argument("one BC pair per axis is required");
  std::vector<AxisSpec> axes;
  for (std::size_t a = 0; a < n_per_axis.size(); ++a)
    axes.push_back({n_per_axis[a], 1.0 / static_cast<double>(n_per_axis[a] + 1), bcs[a].first,
                    bcs[a].second});
  return Grid(std::move(axes));
}

std::vector<std::size_t> Grid::shape() const {
  std::vector<std::size_t> s;
  s.reserve(axes_.size());
  for (const auto& ax : axes_) s.push_back(ax.unknowns());
  return s;
}

std::vector<std::size_t> Grid::strides() const {
  std::vector<std::size_t> s(axes_.size(), 1);
  for (std::size_t a = axes_.size(); a-- > 1;) s[a - 1] = s[a] * axes_[a].unknowns();
  return s;
}

bool Grid::all_dirichlet() const noexcept {
  for (const auto& ax : axes_)
    if (ax.lo != Boundary::dirichlet || ax.hi != Boundary::dirichlet) return false;
  return true;
}

Grid Grid::interior() const {
  auto axes = axes_;
  for (auto& ax : axes) ax.lo = ax.hi = Boundary::dirichlet;
  return Grid(std::move(axes));
}

std::string Grid::describe() const {
  std::ostringstream os;
  for (std::size_t a = 0; a < axes_.size(); ++a) {
    const auto& ax = axes_[a];
    if (a) os << 'x';
    os << ax.n << (ax.lo == Boundary::dirichlet ? 'D' : 'N')
       << (ax.hi == Boundary::dirichlet ? 'D' : 'N');
  }
  return os.str();
}

Field::Field(Grid grid) : grid_(std::move(grid)), values_(grid_.size()) {}

Field::Field(Grid grid, cvec values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("field length " + std::to_string(values_.size()) +
                                " does not match grid size " + std::to_string(grid_.size()));
  for (const auto& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("field values must be finite");
}

std::size_t flat_index(std::span<const std::size_t> index, std::span<const std::size_t> strides) {
  std::size_t f = 0;
  for (std::size_t a = 0; a < index.size(); ++a) f += index[a] * strides[a];
  return f;
}

void unflatten(std::size_t flat, std::span<const std::size_t> shape, std::span<std::size_t> index) {
  for (std::size_t a = shape.size(); a-- > 0;) {
    index[a] = flat % shape[a];
    flat /= shape[a];
  }
}

std::size_t product(std::span<const std::size_t> shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

double norm2(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw std::invalid_argument("length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double relative_error(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw std::invalid_argument("length mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace helmfft
