// Dense row-major tensors and per-axis (tensor-product) operator application.
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "helmfft/grid.hpp"

namespace helmfft {

/// Row-major complex array of arbitrary shape; the last axis is fastest.
struct Array {
  std::vector<std::size_t> shape;
  cvec values;

  Array() = default;
  explicit Array(std::vector<std::size_t> s);
  Array(std::vector<std::size_t> s, cvec v);
  static Array from(const Field& f);

  [[nodiscard]] std::size_t dim() const noexcept { return shape.size(); }
  [[nodiscard]] std::vector<std::size_t> strides() const;
};

/// Maps one line (all entries along `axis` with the other indices fixed) of
/// the input to one line of the output.
using LineMap = std::function<void(std::span<const cplx> in, std::span<cplx> out)>;

/// Applies `fn` to every line along `axis`; the output has length `out_len`
/// on that axis and the input's extents elsewhere.
Array apply_along_axis(const Array& in, std::size_t axis, std::size_t out_len, const LineMap& fn);

/// In-place variant for length-preserving maps.
void transform_along_axis(std::span<cplx> data, std::span<const std::size_t> shape,
                          std::size_t axis, const LineMap& fn);

/// Multiplies every line along `axis` by the dense row-major matrix `m`
/// (rows x cols), i.e. applies I ⊗ M ⊗ I.
Array apply_matrix_along_axis(const Array& in, std::size_t axis, std::span<const cplx> m,
                              std::size_t rows, std::size_t cols);

}  // namespace helmfft
