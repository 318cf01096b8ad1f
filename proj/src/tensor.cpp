#include "helmfft/tensor.hpp"

#include <stdexcept>

namespace helmfft {

Array::Array(std::vector<std::size_t> s) : shape(std::move(s)), values(product(shape)) {}

Array::Array(std::vector<std::size_t> s, cvec v) : shape(std::move(s)), values(std::move(v)) {
  if (values.size() != product(shape)) throw std::invalid_argument("array shape/value mismatch");
}

Array Array::from(const Field& f) {
  return Array(f.grid().shape(), cvec(f.values().begin(), f.values().end()));
}

std::vector<std::size_t> Array::strides() const {
  std::vector<std::size_t> s(shape.size(), 1);
  for (std::size_t a = shape.size(); a-- > 1;) s[a - 1] = s[a] * shape[a];
  return s;
}

namespace {

// Line iteration: lines along `axis` are indexed by (outer, inner) where
// outer runs over the axes before `axis` and inner over the axes after it.
struct LineLayout {
  std::size_t outer = 1, inner = 1;
};

LineLayout layout(std::span<const std::size_t> shape, std::size_t axis) {
  if (axis >= shape.size()) throw std::out_of_range("axis out of range");
  LineLayout l;
  for (std::size_t a = 0; a < axis; ++a) l.outer *= shape[a];
  for (std::size_t a = axis + 1; a < shape.size(); ++a) l.inner *= shape[a];
  return l;
}

}  // namespace

Array apply_along_axis(const Array& in, std::size_t axis, std::size_t out_len, const LineMap& fn) {
  const auto l = layout(in.shape, axis);
  const std::size_t in_len = in.shape[axis];
  auto out_shape = in.shape;
  out_shape[axis] = out_len;
  Array out(std::move(out_shape));

  cvec a(in_len), b(out_len);
  for (std::size_t o = 0; o < l.outer; ++o) {
    const cplx* src = in.values.data() + o * in_len * l.inner;
    cplx* dst = out.values.data() + o * out_len * l.inner;
    for (std::size_t i = 0; i < l.inner; ++i) {
      for (std::size_t j = 0; j < in_len; ++j) a[j] = src[j * l.inner + i];
      fn(a, b);
      for (std::size_t j = 0; j < out_len; ++j) dst[j * l.inner + i] = b[j];
    }
  }
  return out;
}

void transform_along_axis(std::span<cplx> data, std::span<const std::size_t> shape,
                          std::size_t axis, const LineMap& fn) {
  const auto l = layout(shape, axis);
  const std::size_t len = shape[axis];
  if (data.size() != l.outer * l.inner * len) throw std::invalid_argument("shape mismatch");
  cvec a(len), b(len);
  for (std::size_t o = 0; o < l.outer; ++o) {
    cplx* base = data.data() + o * len * l.inner;
    if (l.inner == 1) {
      std::span<cplx> line(base, len);
      fn(line, b);
      std::copy(b.begin(), b.end(), base);
      continue;
    }
    for (std::size_t i = 0; i < l.inner; ++i) {
      for (std::size_t j = 0; j < len; ++j) a[j] = base[j * l.inner + i];
      fn(a, b);
      for (std::size_t j = 0; j < len; ++j) base[j * l.inner + i] = b[j];
    }
  }
}

Array apply_matrix_along_axis(const Array& in, std::size_t axis, std::span<const cplx> m,
                              std::size_t rows, std::size_t cols) {
  if (in.shape.at(axis) != cols || m.size() != rows * cols)
    throw std::invalid_argument("matrix does not match axis length");
  return apply_along_axis(in, axis, rows, [&](std::span<const cplx> x, std::span<cplx> y) {
    for (std::size_t r = 0; r < rows; ++r) {
      cplx s = 0.0;
      for (std::size_t c = 0; c < cols; ++c) s += m[r * cols + c] * x[c];
      y[r] = s;
    }
  });
}

}  // namespace helmfft
