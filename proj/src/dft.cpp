#include "helmfft/dft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace helmfft {

namespace {

// exp(-2 pi i e / n) with the exponent reduced first.
cplx root(std::size_t e, std::size_t n) {
  e %= n;
  return std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(n));
}

std::vector<std::size_t> factorize(std::size_t n) {
  std::vector<std::size_t> f;
  while (n % 4 == 0) {
    f.push_back(4);
    n /= 4;
  }
  for (std::size_t p : {2u, 3u, 5u}) {
    while (n % p == 0) {
      f.push_back(p);
      n /= p;
    }
  }
  for (std::size_t p = 7; p * p <= n; p += 2) {
    while (n % p == 0) {
      f.push_back(p);
      n /= p;
    }
  }
  if (n > 1) f.push_back(n);
  return f;
}

}  // namespace

struct DftPlan::Bluestein {
  std::size_t m;                       // power-of-two convolution length
  std::shared_ptr<const DftPlan> inner;
  cvec chirp;                          // exp(i pi t^2 / n)
  cvec kernel_hat;                     // forward DFT of the wrapped chirp
};

DftPlan::DftPlan(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("DFT length must be positive");
  radices_ = factorize(n);
  bool direct = true;
  for (auto r : radices_)
    if (r > kMaxDirectRadix) direct = false;

  if (direct) {
    std::size_t len = n;
    for (auto r : radices_) {
      Stage s{r, len / r, {}, {}};
      s.twiddle.resize(s.m * r);
      for (std::size_t p = 0; p < s.m; ++p)
        for (std::size_t k = 0; k < r; ++k) s.twiddle[p * r + k] = root(p * k, len);
      if (r > 5) {
        s.roots.resize(r * r);
        for (std::size_t j = 0; j < r; ++j)
          for (std::size_t k = 0; k < r; ++k) s.roots[j * r + k] = root(j * k, r);
      }
      stages_.push_back(std::move(s));
      len /= r;
    }
    return;
  }

  auto b = std::make_unique<Bluestein>();
  b->m = 1;
  while (b->m < 2 * n - 1) b->m <<= 1;
  b->inner = dft_plan(b->m);
  b->chirp.resize(n);
  const std::size_t two_n = 2 * n;
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t e = static_cast<std::size_t>((static_cast<unsigned __int128>(t) * t) % two_n);
    b->chirp[t] = std::polar(1.0, std::numbers::pi * static_cast<double>(e) / static_cast<double>(n));
  }
  cvec kern(b->m, 0.0);
  kern[0] = b->chirp[0];
  for (std::size_t t = 1; t < n; ++t) kern[t] = kern[b->m - t] = b->chirp[t];
  b->kernel_hat.resize(b->m);
  b->inner->execute(kern, b->kernel_hat, Direction::forward);
  bluestein_ = std::move(b);
}

DftPlan::~DftPlan() = default;

std::size_t DftPlan::scratch_size() const noexcept {
  return bluestein_ ? 2 * bluestein_->m + bluestein_->inner->scratch_size() : n_;
}

void DftPlan::execute(std::span<const cplx> in, std::span<cplx> out, Direction dir) const {
  cvec scratch(scratch_size());
  execute(in, out, dir, scratch);
}

void DftPlan::execute(std::span<const cplx> in, std::span<cplx> out, Direction dir,
                      std::span<cplx> scratch) const {
  if (in.size() != n_ || out.size() != n_) throw std::invalid_argument("DFT length mismatch");
  if (scratch.size() < scratch_size()) throw std::invalid_argument("DFT scratch too small");
  const bool inverse = dir == Direction::inverse;

  if (bluestein_) {
    const auto& b = *bluestein_;
    std::span<cplx> a = scratch.subspan(0, b.m);
    std::span<cplx> ah = scratch.subspan(b.m, b.m);
    std::span<cplx> inner_scratch = scratch.subspan(2 * b.m);
    std::fill(a.begin(), a.end(), cplx{});
    for (std::size_t t = 0; t < n_; ++t) {
      const cplx x = inverse ? std::conj(in[t]) : in[t];
      a[t] = x * std::conj(b.chirp[t]);
    }
    b.inner->execute(a, ah, Direction::forward, inner_scratch);
    for (std::size_t i = 0; i < b.m; ++i) ah[i] *= b.kernel_hat[i];
    b.inner->execute(ah, a, Direction::inverse, inner_scratch);
    for (std::size_t k = 0; k < n_; ++k) {
      const cplx y = a[k] * std::conj(b.chirp[k]);
      out[k] = inverse ? std::conj(y) / static_cast<double>(n_) : y;
    }
    return;
  }

  // Stockham ping-pongs between `out` and scratch; the result lands in `out`
  // when the stage count is even, otherwise it is copied back.
  cplx* x = out.data();
  cplx* y = scratch.data();
  if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
  if (inverse)
    for (std::size_t i = 0; i < n_; ++i) x[i] = std::conj(x[i]);
  stockham(x, y, inverse);
  if (stages_.size() % 2 == 1) std::copy(y, y + n_, x);
  if (inverse) {
    const double s = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = std::conj(x[i]) * s;
  }
}

namespace {

// Radix-R butterfly of the transform sum_j a_j w_R^{jk}, hand-unrolled for
// the common radices.
template <std::size_t R>
inline void butterfly(const cplx* a, cplx* out) {
  if constexpr (R == 2) {
    out[0] = a[0] + a[1];
    out[1] = a[0] - a[1];
  } else if constexpr (R == 3) {
    constexpr double d = -0.86602540378443864676;  // -sqrt(3)/2
    const cplx t1 = a[1] + a[2];
    const cplx t2 = a[0] - 0.5 * t1;
    const cplx t3 = cplx(0.0, d) * (a[1] - a[2]);
    out[0] = a[0] + t1;
    out[1] = t2 + t3;
    out[2] = t2 - t3;
  } else if constexpr (R == 4) {
    const cplx t0 = a[0] + a[2], t1 = a[0] - a[2];
    const cplx t2 = a[1] + a[3];
    const cplx d = a[1] - a[3];
    const cplx t3(d.imag(), -d.real());  // -i d
    out[0] = t0 + t2;
    out[1] = t1 + t3;
    out[2] = t0 - t2;
    out[3] = t1 - t3;
  } else if constexpr (R == 5) {
    constexpr double c1 = 0.30901699437494742410, c2 = -0.80901699437494742410;
    constexpr double s1 = 0.95105651629515357212, s2 = 0.58778525229247312917;
    const cplx b1 = a[1] + a[4], b2 = a[2] + a[3];
    const cplx d1 = a[1] - a[4], d2 = a[2] - a[3];
    const cplx r1 = a[0] + c1 * b1 + c2 * b2;
    const cplx r2 = a[0] + c2 * b1 + c1 * b2;
    const cplx i1 = cplx(0.0, -1.0) * (s1 * d1 + s2 * d2);
    const cplx i2 = cplx(0.0, -1.0) * (s2 * d1 - s1 * d2);
    out[0] = a[0] + b1 + b2;
    out[1] = r1 + i1;
    out[2] = r2 + i2;
    out[3] = r2 - i2;
    out[4] = r1 - i1;
  }
}

// One decimation-in-frequency stage of length len = R m at stride s:
//   y[q + s(R p + k)] = w_len^{pk} sum_j x[q + s(p + j m)] w_R^{jk}.
template <std::size_t R>
void stage(const cplx* x, cplx* y, std::size_t m, std::size_t s, const cplx* twiddle) {
  cplx a[R], b[R];
  for (std::size_t p = 0; p < m; ++p) {
    const cplx* tw = twiddle + p * R;
    const cplx* src = x + s * p;
    cplx* dst = y + s * R * p;
    for (std::size_t q = 0; q < s; ++q) {
      for (std::size_t j = 0; j < R; ++j) a[j] = src[q + s * j * m];
      butterfly<R>(a, b);
      dst[q] = b[0];
      for (std::size_t k = 1; k < R; ++k) dst[q + k * s] = b[k] * tw[k];
    }
  }
}

void stage_generic(const cplx* x, cplx* y, std::size_t r, std::size_t m, std::size_t s,
                   const cplx* twiddle, const cplx* roots) {
  cplx a[DftPlan::kMaxDirectRadix];
  for (std::size_t p = 0; p < m; ++p) {
    const cplx* tw = twiddle + p * r;
    for (std::size_t q = 0; q < s; ++q) {
      for (std::size_t j = 0; j < r; ++j) a[j] = x[q + s * (p + j * m)];
      cplx* dst = y + q + s * r * p;
      for (std::size_t k = 0; k < r; ++k) {
        cplx acc = 0.0;
        const cplx* w = roots + k * r;
        for (std::size_t j = 0; j < r; ++j) acc += a[j] * w[j];
        dst[k * s] = acc * tw[k];
      }
    }
  }
}

}  // namespace

void DftPlan::stockham(cplx* x, cplx* y, bool) const {
  std::size_t s = 1;
  for (const auto& st : stages_) {
    const cplx* tw = st.twiddle.data();
    switch (st.radix) {
      case 2: stage<2>(x, y, st.m, s, tw); break;
      case 3: stage<3>(x, y, st.m, s, tw); break;
      case 4: stage<4>(x, y, st.m, s, tw); break;
      case 5: stage<5>(x, y, st.m, s, tw); break;
      default: stage_generic(x, y, st.radix, st.m, s, tw, st.roots.data());
    }
    std::swap(x, y);
    s *= st.radix;
  }
}

std::shared_ptr<const DftPlan> dft_plan(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const DftPlan>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  // Built outside the lock: Bluestein plans request their inner plan.
  auto plan = std::make_shared<const DftPlan>(n);
  std::lock_guard lock(mutex);
  return cache.try_emplace(n, std::move(plan)).first->second;
}

cvec dft_forward(std::span<const cplx> x) {
  if (x.empty()) throw std::invalid_argument("dft_forward: empty input");
  cvec y(x.size());
  dft_plan(x.size())->execute(x, y, Direction::forward);
  return y;
}

cvec dft_inverse(std::span<const cplx> y) {
  if (y.empty()) throw std::invalid_argument("dft_inverse: empty input");
  cvec x(y.size());
  dft_plan(y.size())->execute(y, x, Direction::inverse);
  return x;
}

void dft_axis(std::span<cplx> data, std::span<const std::size_t> shape, std::size_t axis,
              Direction dir) {
  if (axis >= shape.size()) throw std::out_of_range("dft_axis: axis out of range");
  if (data.size() != product(shape)) throw std::invalid_argument("dft_axis: shape mismatch");
  const std::size_t len = shape[axis];
  std::size_t outer = 1, inner = 1;
  for (std::size_t a = 0; a < axis; ++a) outer *= shape[a];
  for (std::size_t a = axis + 1; a < shape.size(); ++a) inner *= shape[a];
  const auto plan = dft_plan(len);
  cvec scratch(plan->scratch_size());

  if (inner == 1) {
    for (std::size_t o = 0; o < outer; ++o) {
      std::span<cplx> line = data.subspan(o * len, len);
      plan->execute(line, line, dir, scratch);
    }
    return;
  }
  // Strided lines are gathered in blocks so that reads stay contiguous.
  constexpr std::size_t kBlock = 16;
  cvec buf(kBlock * len);
  for (std::size_t o = 0; o < outer; ++o) {
    cplx* base = data.data() + o * len * inner;
    for (std::size_t i0 = 0; i0 < inner; i0 += kBlock) {
      const std::size_t nb = std::min(kBlock, inner - i0);
      for (std::size_t j = 0; j < len; ++j)
        for (std::size_t b = 0; b < nb; ++b) buf[b * len + j] = base[j * inner + i0 + b];
      for (std::size_t b = 0; b < nb; ++b) {
        std::span<cplx> line(buf.data() + b * len, len);
        plan->execute(line, line, dir, scratch);
      }
      for (std::size_t j = 0; j < len; ++j)
        for (std::size_t b = 0; b < nb; ++b) base[j * inner + i0 + b] = buf[b * len + j];
    }
  }
}

void dft_all_axes(std::span<cplx> data, std::span<const std::size_t> shape, Direction dir) {
  for (std::size_t a = 0; a < shape.size(); ++a) dft_axis(data, shape, a, dir);
}

}  // namespace helmfft
