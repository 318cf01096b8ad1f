#include "helmfft/extension.hpp"

#include <stdexcept>

namespace helmfft {

cvec extend_odd_1d(std::span<const cplx> f) {
  const std::size_t n = f.size();
  if (n == 0) throw std::invalid_argument("extend_odd_1d: empty input");
  const std::size_t N = 2 * n + 2;
  cvec g(N, 0.0);
  for (std::size_t j = 1; j <= n; ++j) g[j - 1] = f[j - 1];
  for (std::size_t j = n + 2; j <= 2 * n + 1; ++j) g[j - 1] = -f[N - j - 1];
  return g;
}

cvec extend_even_1d(std::span<const cplx> f) {
  if (f.size() < 2) throw std::invalid_argument("extend_even_1d: need at least two entries");
  const std::size_t n = f.size() - 1;
  const std::size_t M = 2 * n + 1;
  cvec g(M);
  for (std::size_t j = 1; j <= n; ++j) g[j - 1] = f[j - 1];
  g[n] = 2.0 * f[n];
  for (std::size_t j = n + 2; j <= M; ++j) g[j - 1] = f[M - j];
  return g;
}

cvec restrict_1d(std::span<const cplx> v, std::size_t n, std::size_t offset) {
  if (v.size() < n + offset) throw std::invalid_argument("restrict_1d: vector shorter than n");
  return cvec(v.begin() + static_cast<std::ptrdiff_t>(offset),
              v.begin() + static_cast<std::ptrdiff_t>(offset + n));
}

ExtensionPlan ExtensionPlan::odd(const Grid& grid) {
  if (!grid.all_dirichlet()) throw std::invalid_argument("odd extension needs Dirichlet axes");
  return odd(grid.shape());
}

ExtensionPlan ExtensionPlan::odd(std::span<const std::size_t> shape) {
  ExtensionPlan p;
  for (auto n : shape) p.axes.push_back({ExtensionKind::odd, n, 2 * n + 2, 0});
  return p;
}

ExtensionPlan ExtensionPlan::even(const Grid& grid) {
  ExtensionPlan p;
  for (const auto& ax : grid.axes()) {
    const auto m = ax.unknowns();
    if (ax.lo == Boundary::dirichlet && ax.hi == Boundary::neumann)
      p.axes.push_back({ExtensionKind::even, m, 2 * m - 1, 0});
    else if (ax.lo == Boundary::dirichlet && ax.hi == Boundary::dirichlet)
      p.axes.push_back({ExtensionKind::none, m, m, 0});
    else
      throw std::invalid_argument("even extension supports a single Neumann end at x = 1");
  }
  return p;
}

std::vector<std::size_t> ExtensionPlan::source_shape() const {
  std::vector<std::size_t> s;
  for (const auto& a : axes) s.push_back(a.source);
  return s;
}

std::vector<std::size_t> ExtensionPlan::target_shape() const {
  std::vector<std::size_t> s;
  for (const auto& a : axes) s.push_back(a.target);
  return s;
}

Array extend_field(const Array& f, const ExtensionPlan& plan) {
  if (f.shape != plan.source_shape())
    throw std::invalid_argument("extend_field: field shape does not match plan");
  Array cur = f;
  for (std::size_t a = 0; a < plan.axes.size(); ++a) {
    const auto& ax = plan.axes[a];
    switch (ax.kind) {
      case ExtensionKind::none:
        break;
      case ExtensionKind::odd:
        cur = apply_along_axis(cur, a, ax.target, [](std::span<const cplx> x, std::span<cplx> y) {
          const auto g = extend_odd_1d(x);
          std::copy(g.begin(), g.end(), y.begin());
        });
        break;
      case ExtensionKind::even:
        cur = apply_along_axis(cur, a, ax.target, [](std::span<const cplx> x, std::span<cplx> y) {
          const auto g = extend_even_1d(x);
          std::copy(g.begin(), g.end(), y.begin());
        });
        break;
    }
  }
  return cur;
}

Array extend_field(const Field& f, const ExtensionPlan& plan) {
  return extend_field(Array::from(f), plan);
}

Array restrict_field(const Array& v, const ExtensionPlan& plan) {
  if (v.shape != plan.target_shape())
    throw std::invalid_argument("restrict_field: array shape does not match plan");
  Array cur = v;
  for (std::size_t a = 0; a < plan.axes.size(); ++a) {
    const auto& ax = plan.axes[a];
    if (ax.kind == ExtensionKind::none && ax.restriction_offset == 0) continue;
    cur = apply_along_axis(cur, a, ax.source, [&](std::span<const cplx> x, std::span<cplx> y) {
      const auto w = restrict_1d(x, ax.source, ax.restriction_offset);
      std::copy(w.begin(), w.end(), y.begin());
    });
  }
  return cur;
}

Field restrict_field(const Array& v, const ExtensionPlan& plan, const Grid& target) {
  auto r = restrict_field(v, plan);
  if (r.shape != target.shape()) throw std::invalid_argument("restrict_field: target grid mismatch");
  return Field(target, std::move(r.values));
}

AxisReflection AxisReflection::for_axis(const AxisSpec& axis) {
  const bool lo_odd = axis.lo == Boundary::dirichlet;
  const bool hi_odd = axis.hi == Boundary::dirichlet;
  const auto L = static_cast<std::ptrdiff_t>(axis.n + 1);  // position of the x = 1 end
  AxisReflection r;
  r.period = static_cast<std::size_t>(lo_odd == hi_odd ? 2 * L : 4 * L);
  r.source.assign(r.period, -1);
  r.sign.assign(r.period, 0);
  const std::ptrdiff_t first = lo_odd ? 1 : 0;

  for (std::size_t q = 0; q < r.period; ++q) {
    auto p = static_cast<std::ptrdiff_t>(q);
    int s = 1;
    while (p < 0 || p > L) {
      if (p > L) {
        p = 2 * L - p;
        s *= hi_odd ? -1 : 1;
      } else {
        p = -p;
        s *= lo_odd ? -1 : 1;
      }
    }
    if ((p == 0 && lo_odd) || (p == L && hi_odd)) continue;
    r.source[q] = p - first;
    r.sign[q] = static_cast<signed char>(s);
  }

  r.gather.resize(axis.unknowns());
  for (std::size_t i = 0; i < r.gather.size(); ++i) r.gather[i] = axis.position(i);

  r.active.assign(r.period, true);
  if (lo_odd && hi_odd) {
    r.active[0] = false;
    r.active[r.period / 2] = false;
  } else if (lo_odd != hi_odd) {
    for (std::size_t l = 0; l < r.period; l += 2) r.active[l] = false;
  }
  return r;
}

}  // namespace helmfft
