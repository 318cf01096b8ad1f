#include "helmfft/helmholtz.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "helmfft/dft.hpp"

namespace helmfft {

namespace {

std::string describe_mode(const std::vector<std::size_t>& mode, cplx value) {
  std::ostringstream os;
  os << "resonance: symbol entry " << value << " at mode (";
  for (std::size_t a = 0; a < mode.size(); ++a) os << (a ? ", " : "") << "axis " << a << ": l=" << mode[a];
  os << ") is numerically zero";
  return os.str();
}

std::vector<double> spacings(const Grid& grid) {
  std::vector<double> h;
  for (const auto& ax : grid.axes()) h.push_back(ax.h);
  return h;
}

double end_weight(const AxisSpec& ax, std::size_t i) {
  if ((i == 0 && ax.lo == Boundary::neumann) || (i + 1 == ax.unknowns() && ax.hi == Boundary::neumann))
    return 0.5;
  return 1.0;
}

// Product of per-axis end weights at every node.
std::vector<double> node_weights(const Grid& grid) {
  const auto shape = grid.shape();
  std::vector<double> w(grid.size(), 1.0);
  std::vector<std::size_t> idx(shape.size());
  for (std::size_t f = 0; f < w.size(); ++f) {
    unflatten(f, shape, idx);
    for (std::size_t a = 0; a < shape.size(); ++a) w[f] *= end_weight(grid.axis(a), idx[a]);
  }
  return w;
}

template <class ShiftFn>
cvec apply_impl(const Grid& grid, std::span<const cplx> u, ShiftFn shift) {
  if (u.size() != grid.size()) throw std::invalid_argument("apply_helmholtz: length mismatch");
  const auto shape = grid.shape();
  const auto strides = grid.strides();
  const double href = grid.reference_spacing();
  cvec out(u.size());
  for (std::size_t f = 0; f < u.size(); ++f) out[f] = -shift(f) * u[f];

  for (std::size_t a = 0; a < shape.size(); ++a) {
    const auto& ax = grid.axis(a);
    const double c = (href / ax.h) * (href / ax.h);
    const std::size_t len = shape[a], st = strides[a];
    const bool nlo = ax.lo == Boundary::neumann, nhi = ax.hi == Boundary::neumann;
    std::size_t outer = 1;
    for (std::size_t b = 0; b < a; ++b) outer *= shape[b];
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t in = 0; in < st; ++in) {
        const std::size_t base = o * len * st + in;
        for (std::size_t i = 0; i < len; ++i) {
          const std::size_t p = base + i * st;
          cplx g = 2.0 * u[p];
          if (i > 0) g -= (i + 1 == len && nhi ? 2.0 : 1.0) * u[p - st];
          if (i + 1 < len) g -= (i == 0 && nlo ? 2.0 : 1.0) * u[p + st];
          out[p] += c * g;
        }
      }
    }
  }
  const auto w = node_weights(grid);
  for (std::size_t f = 0; f < out.size(); ++f) out[f] *= w[f];
  return out;
}

}  // namespace

ResonanceError::ResonanceError(std::vector<std::size_t> mode, cplx value)
    : std::runtime_error(describe_mode(mode, value)), mode_(std::move(mode)), value_(value) {}

bool PeriodicSymbol::is_active(std::size_t flat) const {
  if (active.empty()) return true;
  const auto m = mode(flat);
  for (std::size_t a = 0; a < m.size(); ++a)
    if (!active[a][m[a]]) return false;
  return true;
}

std::vector<std::size_t> PeriodicSymbol::mode(std::size_t flat) const {
  std::vector<std::size_t> m(lengths.size());
  unflatten(flat, lengths, m);
  return m;
}

PeriodicSymbol periodic_symbol(std::span<const std::size_t> lengths, cplx k, double h) {
  std::vector<double> spacing(lengths.size(), h);
  return periodic_symbol(lengths, k, spacing);
}

PeriodicSymbol periodic_symbol(std::span<const std::size_t> lengths, cplx k,
                               std::span<const double> spacing,
                               std::vector<std::vector<bool>> active) {
  if (lengths.empty() || spacing.size() != lengths.size())
    throw std::invalid_argument("periodic_symbol: one spacing per axis is required");
  for (auto n : lengths)
    if (n < 2) throw std::invalid_argument("periodic_symbol: period must be at least 2");
  if (!active.empty()) {
    if (active.size() != lengths.size()) throw std::invalid_argument("periodic_symbol: mask rank");
    for (std::size_t a = 0; a < lengths.size(); ++a)
      if (active[a].size() != lengths[a]) throw std::invalid_argument("periodic_symbol: mask length");
  }

  PeriodicSymbol s;
  s.lengths.assign(lengths.begin(), lengths.end());
  s.active = std::move(active);
  const double href = spacing[0];
  s.shift = k * k * href * href;
  for (std::size_t a = 0; a < lengths.size(); ++a) {
    const double c = (href / spacing[a]) * (href / spacing[a]);
    std::vector<double> t(lengths[a]);
    for (std::size_t l = 0; l < lengths[a]; ++l) {
      const double sn = std::sin(std::numbers::pi * static_cast<double>(l) / static_cast<double>(lengths[a]));
      t[l] = c * 4.0 * sn * sn;
    }
    s.axis_terms.push_back(std::move(t));
  }

  const std::size_t total = product(s.lengths);
  s.diagonal.resize(total);
  std::vector<std::size_t> m(lengths.size());
  double dmax = 0.0;
  for (std::size_t f = 0; f < total; ++f) {
    unflatten(f, s.lengths, m);
    double sum = 0.0;
    for (std::size_t a = 0; a < m.size(); ++a) sum += s.axis_terms[a][m[a]];
    s.diagonal[f] = sum - s.shift;
    dmax = std::max(dmax, std::abs(s.diagonal[f]));
  }
  s.tolerance = kResonanceTolerance * dmax;
  for (std::size_t f = 0; f < total; ++f)
    if (std::abs(s.diagonal[f]) < s.tolerance && s.is_active(f)) s.flagged.push_back(f);
  return s;
}

Array solve_periodic(const Array& g, const PeriodicSymbol& symbol) {
  if (g.shape != symbol.lengths) throw std::invalid_argument("solve_periodic: shape mismatch");
  if (!symbol.flagged.empty())
    throw ResonanceError(symbol.mode(symbol.flagged.front()), symbol.diagonal[symbol.flagged.front()]);
  Array v = g;
  dft_all_axes(v.values, v.shape, Direction::forward);
  for (std::size_t f = 0; f < v.values.size(); ++f)
    v.values[f] = symbol.is_active(f) ? v.values[f] / symbol.diagonal[f] : cplx{};
  dft_all_axes(v.values, v.shape, Direction::inverse);
  return v;
}

Field assemble_rhs(const Grid& grid, const Field& source, std::span<const FaceData> flux) {
  if (source.grid().shape() != grid.shape())
    throw std::invalid_argument("assemble_rhs: source does not match the grid");
  const double href = grid.reference_spacing();
  const auto w = node_weights(grid);
  cvec F(grid.size());
  for (std::size_t f = 0; f < F.size(); ++f) F[f] = href * href * w[f] * source[f];

  const auto shape = grid.shape();
  const auto strides = grid.strides();
  for (const auto& face : flux) {
    if (face.axis >= grid.dim()) throw std::invalid_argument("assemble_rhs: face axis out of range");
    const auto& ax = grid.axis(face.axis);
    const Boundary bc = face.side == Side::lo ? ax.lo : ax.hi;
    if (bc != Boundary::neumann)
      throw std::invalid_argument("assemble_rhs: flux given on a Dirichlet face");
    std::vector<std::size_t> face_shape;
    for (std::size_t a = 0; a < shape.size(); ++a)
      if (a != face.axis) face_shape.push_back(shape[a]);
    if (face.values.size() != product(face_shape))
      throw std::invalid_argument("assemble_rhs: face data has the wrong length");
    const std::size_t fixed = face.side == Side::lo ? 0 : shape[face.axis] - 1;
    std::vector<std::size_t> fidx(face_shape.size()), idx(shape.size());
    for (std::size_t j = 0; j < face.values.size(); ++j) {
      unflatten(j, face_shape, fidx);
      for (std::size_t a = 0, b = 0; a < shape.size(); ++a) idx[a] = a == face.axis ? fixed : fidx[b++];
      const std::size_t node = flat_index(idx, strides);
      // W_others = W / W_axis with W_axis = 1/2 on this face.
      F[node] += href * href / ax.h * (2.0 * w[node]) * face.values[j];
    }
  }
  return Field(grid, std::move(F));
}

HelmholtzProblem::HelmholtzProblem(Grid g, cplx wave_number, Field f)
    : grid(std::move(g)), k(wave_number), rhs(std::move(f)) {
  if (rhs.grid().shape() != grid.shape())
    throw std::invalid_argument("Helmholtz problem: right-hand side does not match the grid");
  if (k.real() < 0.0) throw std::invalid_argument("Helmholtz problem: wave number must be >= 0");
}

Field solve_dirichlet(const HelmholtzProblem& problem, std::size_t restriction_offset) {
  const Grid& grid = problem.grid;
  if (!grid.all_dirichlet()) throw std::invalid_argument("solve_dirichlet: grid has Neumann faces");
  auto plan = ExtensionPlan::odd(grid);
  for (auto& ax : plan.axes) ax.restriction_offset = restriction_offset;

  std::vector<std::vector<bool>> active;
  for (const auto& ax : plan.axes) {
    std::vector<bool> m(ax.target, true);
    m[0] = m[ax.target / 2] = false;  // absent from odd sequences
    active.push_back(std::move(m));
  }
  const auto symbol = periodic_symbol(plan.target_shape(), problem.k, spacings(grid), std::move(active));
  const Array g = extend_field(problem.rhs, plan);
  const Array v = solve_periodic(g, symbol);
  return restrict_field(v, plan, grid);
}

Field solve_neumann(const HelmholtzProblem& problem) {
  if (!problem.grid.any_neumann()) throw std::invalid_argument("solve_neumann: no Neumann face");
  return solve_mixed(problem);
}

Field solve_mixed(const HelmholtzProblem& problem) {
  return HelmholtzSolver(problem.grid, problem.k).solve(problem.rhs);
}

HelmholtzSolver::HelmholtzSolver(Grid grid, cplx k) : grid_(std::move(grid)), k_(k) {
  std::vector<std::vector<bool>> active;
  for (const auto& ax : grid_.axes()) {
    reflections_.push_back(AxisReflection::for_axis(ax));
    period_.push_back(reflections_.back().period);
    active.push_back(reflections_.back().active);
  }
  auto symbol = periodic_symbol(period_, k_, spacings(grid_), std::move(active));
  if (!symbol.flagged.empty())
    throw ResonanceError(symbol.mode(symbol.flagged.front()), symbol.diagonal[symbol.flagged.front()]);
  // Inactive modes are never excited by reflected data; zero them.
  inverse_symbol_.resize(symbol.diagonal.size());
  for (std::size_t f = 0; f < inverse_symbol_.size(); ++f)
    inverse_symbol_[f] = symbol.is_active(f) ? 1.0 / symbol.diagonal[f] : cplx{};
}

cvec HelmholtzSolver::solve(std::span<const cplx> rhs) const {
  if (rhs.size() != grid_.size()) throw std::invalid_argument("HelmholtzSolver: rhs length mismatch");
  // Divide by the node weights: the reflected rows are the unweighted ones.
  const auto w = node_weights(grid_);
  Array cur(grid_.shape());
  for (std::size_t f = 0; f < rhs.size(); ++f) cur.values[f] = rhs[f] / w[f];

  for (std::size_t a = 0; a < reflections_.size(); ++a) {
    const auto& r = reflections_[a];
    cur = apply_along_axis(cur, a, r.period, [&r](std::span<const cplx> x, std::span<cplx> y) {
      for (std::size_t q = 0; q < r.period; ++q)
        y[q] = r.source[q] < 0 ? cplx{} : static_cast<double>(r.sign[q]) * x[static_cast<std::size_t>(r.source[q])];
    });
  }
  dft_all_axes(cur.values, cur.shape, Direction::forward);
  for (std::size_t f = 0; f < cur.values.size(); ++f) cur.values[f] *= inverse_symbol_[f];
  dft_all_axes(cur.values, cur.shape, Direction::inverse);

  for (std::size_t a = 0; a < reflections_.size(); ++a) {
    const auto& r = reflections_[a];
    cur = apply_along_axis(cur, a, r.gather.size(), [&r](std::span<const cplx> x, std::span<cplx> y) {
      for (std::size_t i = 0; i < r.gather.size(); ++i) y[i] = x[r.gather[i]];
    });
  }
  return std::move(cur.values);
}

Field HelmholtzSolver::solve(const Field& rhs) const {
  if (rhs.grid().shape() != grid_.shape()) throw std::invalid_argument("HelmholtzSolver: grid mismatch");
  return Field(grid_, solve(rhs.values()));
}

cvec apply_helmholtz(const Grid& grid, std::span<const cplx> u, cplx k) {
  const double h = grid.reference_spacing();
  const cplx shift = k * k * h * h;
  return apply_impl(grid, u, [shift](std::size_t) { return shift; });
}

cvec apply_helmholtz(const Grid& grid, std::span<const cplx> u, std::span<const cplx> k_field) {
  if (k_field.size() != grid.size()) throw std::invalid_argument("apply_helmholtz: k-field length mismatch");
  const double h2 = grid.reference_spacing() * grid.reference_spacing();
  return apply_impl(grid, u, [&](std::size_t f) { return k_field[f] * k_field[f] * h2; });
}

}  // namespace helmfft
