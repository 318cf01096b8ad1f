#include "helmfft/operators.hpp"

#include <stdexcept>

namespace helmfft {

LinearOperator::LinearOperator(std::size_t rows, std::size_t cols, ApplyFn fn, std::string tag)
    : rows_(rows), cols_(cols), fn_(std::move(fn)), tag_(std::move(tag)) {
  if (!fn_) throw std::invalid_argument("LinearOperator needs an apply procedure");
}

LinearOperator LinearOperator::identity(std::size_t n) {
  return LinearOperator(
      n, n, [](std::span<const cplx> x, std::span<cplx> y) { std::copy(x.begin(), x.end(), y.begin()); },
      "identity");
}

void LinearOperator::apply(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != cols_ || out.size() != rows_)
    throw std::invalid_argument("operator '" + tag_ + "' is " + std::to_string(rows_) + "x" +
                                std::to_string(cols_) + ", got input " + std::to_string(in.size()) +
                                " and output " + std::to_string(out.size()));
  fn_(in, out);
}

cvec LinearOperator::operator()(std::span<const cplx> in) const {
  cvec out(rows_);
  apply(in, out);
  return out;
}

LinearOperator compose(const LinearOperator& lhs, const LinearOperator& rhs) {
  if (lhs.cols() != rhs.rows()) throw std::invalid_argument("compose: inner dimensions differ");
  return LinearOperator(
      lhs.rows(), rhs.cols(),
      [lhs, rhs](std::span<const cplx> x, std::span<cplx> y) {
        const cvec t = rhs(x);
        lhs.apply(t, y);
      },
      lhs.tag() + " * " + rhs.tag());
}

BlockPartition::BlockPartition(const Grid& grid) : grid_(grid) {
  const auto shape = grid.shape();
  const std::size_t d = shape.size();
  std::vector<std::size_t> idx(d);
  std::vector<bool> taken(grid.size(), false);

  auto on_face = [&](std::size_t a, Side side) {
    const auto& ax = grid.axis(a);
    if (side == Side::lo) return ax.lo == Boundary::neumann && idx[a] == 0;
    return ax.hi == Boundary::neumann && idx[a] + 1 == shape[a];
  };
  for (std::size_t a = 0; a < d; ++a) {
    for (Side side : {Side::lo, Side::hi}) {
      for (std::size_t f = 0; f < grid.size(); ++f) {
        if (taken[f]) continue;
        unflatten(f, shape, idx);
        if (on_face(a, side)) {
          boundary_.push_back(f);
          taken[f] = true;
        }
      }
    }
  }
  for (std::size_t f = 0; f < grid.size(); ++f)
    if (!taken[f]) interior_.push_back(f);
}

cvec BlockPartition::scatter_boundary(std::span<const cplx> b) const {
  if (b.size() != boundary_.size()) throw std::invalid_argument("boundary vector length mismatch");
  cvec full(grid_.size());
  for (std::size_t i = 0; i < b.size(); ++i) full[boundary_[i]] = b[i];
  return full;
}

cvec BlockPartition::gather_boundary(std::span<const cplx> full) const {
  if (full.size() != grid_.size()) throw std::invalid_argument("grid vector length mismatch");
  cvec b(boundary_.size());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = full[boundary_[i]];
  return b;
}

cvec BlockPartition::scatter_interior(std::span<const cplx> in) const {
  if (in.size() != interior_.size()) throw std::invalid_argument("interior vector length mismatch");
  cvec full(grid_.size());
  for (std::size_t i = 0; i < in.size(); ++i) full[interior_[i]] = in[i];
  return full;
}

cvec BlockPartition::gather_interior(std::span<const cplx> full) const {
  if (full.size() != grid_.size()) throw std::invalid_argument("grid vector length mismatch");
  cvec v(interior_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = full[interior_[i]];
  return v;
}

Grid boundary_map_grid(std::size_t dim, std::size_t n) { return Grid::neumann(dim, n); }

NtdOperator::NtdOperator(const Grid& grid, double eta)
    : partition_(grid), solver_(std::make_shared<const HelmholtzSolver>(grid, eta)) {}

cvec NtdOperator::apply(std::span<const cplx> mu) const {
  return partition_.gather_boundary(solver_->solve(partition_.scatter_boundary(mu)));
}

LinearOperator NtdOperator::handle() const {
  const std::size_t nb = partition_.boundary().size();
  auto self = std::make_shared<const NtdOperator>(*this);
  return LinearOperator(
      nb, nb,
      [self](std::span<const cplx> x, std::span<cplx> y) {
        const auto r = self->apply(x);
        std::copy(r.begin(), r.end(), y.begin());
      },
      "ntd");
}

DtnOperator::DtnOperator(const Grid& grid, double eta)
    : partition_(grid), eta_(eta),
      interior_solver_(std::make_shared<const HelmholtzSolver>(grid.interior(), eta)) {}

cvec DtnOperator::apply(std::span<const cplx> f) const {
  const Grid& grid = partition_.grid();
  // A_IB f is the interior part of A applied to the boundary data.
  cvec w = partition_.scatter_boundary(f);
  const cvec aw = apply_helmholtz(grid, w, eta_);
  cvec wi = interior_solver_->solve(partition_.gather_interior(aw));
  for (std::size_t i = 0; i < wi.size(); ++i) w[partition_.interior()[i]] = -wi[i];
  // Boundary rows of A [ -A_II^{-1} A_IB f ; f ].
  return partition_.gather_boundary(apply_helmholtz(grid, w, eta_));
}

LinearOperator DtnOperator::handle() const {
  const std::size_t nb = partition_.boundary().size();
  auto self = std::make_shared<const DtnOperator>(*this);
  return LinearOperator(
      nb, nb,
      [self](std::span<const cplx> x, std::span<cplx> y) {
        const auto r = self->apply(x);
        std::copy(r.begin(), r.end(), y.begin());
      },
      "dtn");
}

cvec apply_ntd(const Grid& grid, std::span<const cplx> mu, double eta) {
  return NtdOperator(grid, eta).apply(mu);
}

cvec apply_dtn(const Grid& grid, std::span<const cplx> f, double eta) {
  return DtnOperator(grid, eta).apply(f);
}

Field apply_variable_helmholtz(const Field& u, const Field& k_field) {
  if (u.grid().shape() != k_field.grid().shape())
    throw std::invalid_argument("apply_variable_helmholtz: shape mismatch");
  return Field(u.grid(), apply_helmholtz(u.grid(), u.values(), k_field.values()));
}

LinearOperator make_helmholtz_operator(const Field& k_field) {
  auto k = std::make_shared<const Field>(k_field);
  const std::size_t n = k_field.size();
  return LinearOperator(
      n, n,
      [k](std::span<const cplx> x, std::span<cplx> y) {
        const auto r = apply_helmholtz(k->grid(), x, k->values());
        std::copy(r.begin(), r.end(), y.begin());
      },
      "helmholtz(k(x))");
}

LinearOperator make_constant_inverse(const Grid& grid, double k_ref) {
  auto solver = std::make_shared<const HelmholtzSolver>(grid, k_ref);
  return LinearOperator(
      grid.size(), grid.size(),
      [solver](std::span<const cplx> x, std::span<cplx> y) {
        const auto r = solver->solve(x);
        std::copy(r.begin(), r.end(), y.begin());
      },
      "fft-inverse(k_ref)");
}

LinearOperator make_preconditioned_operator(const Field& k_field, double k_ref) {
  return compose(make_helmholtz_operator(k_field), make_constant_inverse(k_field.grid(), k_ref));
}

}  // namespace helmfft
