// Discrete Fourier transforms of arbitrary length.
//
// Forward: y_j = sum_m w^{j m} x_m with w = exp(-2 pi i / N), unnormalized.
// Inverse: x = (1/N) conj(F) y.
#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "helmfft/grid.hpp"

namespace helmfft {

enum class Direction { forward, inverse };

/// Precomputed transform of one length. Smooth lengths use a mixed-radix
/// Stockham FFT (radix 4, 2, 3, 5 and direct small-prime butterflies);
/// lengths with a prime factor above kMaxDirectRadix use Bluestein's
/// chirp-z reduction to a power-of-two convolution.
class DftPlan {
 public:
  static constexpr std::size_t kMaxDirectRadix = 31;

  explicit DftPlan(std::size_t n);
  ~DftPlan();
  DftPlan(const DftPlan&) = delete;
  DftPlan& operator=(const DftPlan&) = delete;

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] bool uses_bluestein() const noexcept { return bluestein_ != nullptr; }
  [[nodiscard]] const std::vector<std::size_t>& radices() const noexcept { return radices_; }

  /// `in` and `out` may alias. `scratch` needs scratch_size() entries.
  void execute(std::span<const cplx> in, std::span<cplx> out, Direction dir) const;
  void execute(std::span<const cplx> in, std::span<cplx> out, Direction dir,
               std::span<cplx> scratch) const;
  [[nodiscard]] std::size_t scratch_size() const noexcept;

 private:
  struct Stage {
    std::size_t radix, m;   // sub-length m = n_stage / radix
    cvec twiddle;           // w_{n_stage}^{p k}, p < m, k < radix
    cvec roots;             // w_radix^{jk} for the direct butterfly
  };
  struct Bluestein;

  void stockham(cplx* x, cplx* y, bool inverse) const;

  std::size_t n_;
  std::vector<std::size_t> radices_;
  std::vector<Stage> stages_;
  std::unique_ptr<Bluestein> bluestein_;
};

/// Shared, immutable plan for length n; plans are built once and cached.
std::shared_ptr<const DftPlan> dft_plan(std::size_t n);

cvec dft_forward(std::span<const cplx> x);
cvec dft_inverse(std::span<const cplx> y);

/// Transforms every line along `axis` of a row-major array in place.
void dft_axis(std::span<cplx> data, std::span<const std::size_t> shape, std::size_t axis,
              Direction dir);

/// All axes in sequence: F_d = F ⊗ ... ⊗ F (or its inverse).
void dft_all_axes(std::span<cplx> data, std::span<const std::size_t> shape, Direction dir);

}  // namespace helmfft
