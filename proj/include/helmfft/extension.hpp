// Odd/even extensions onto periodic grids and the matching restrictions.
//
// Vectors use the 1-based index convention j = 1..N of the periodic grid,
// stored at array offset j-1; the periodic point j = N coincides with x = 0.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "helmfft/grid.hpp"
#include "helmfft/tensor.hpp"

namespace helmfft {

/// g = E f, length 2n+2: (f_1..f_n, 0, -f_n..-f_1, 0).
cvec extend_odd_1d(std::span<const cplx> f);

/// Even reflection of F (length n+1) about its last entry, length 2n+1:
/// (F_1..F_n, 2 F_{n+1}, F_n..F_1). The doubled centre is the right-hand
/// side weight of the reflected Neumann row.
cvec extend_even_1d(std::span<const cplx> f);

/// R = (I_n | 0): the first n entries of v. `offset` shifts the window
/// (offset 1 gives w_j = v_{j+1}); only offset 0 inverts the extensions.
cvec restrict_1d(std::span<const cplx> v, std::size_t n, std::size_t offset = 0);

enum class ExtensionKind { none, odd, even };

struct AxisExtension {
  ExtensionKind kind = ExtensionKind::none;
  std::size_t source = 0;
  std::size_t target = 0;
  std::size_t restriction_offset = 0;
};

/// Per-axis extension choices; applied as E_1 ⊗ ... ⊗ E_d.
struct ExtensionPlan {
  std::vector<AxisExtension> axes;

  /// Odd extension on every axis of an all-Dirichlet grid.
  static ExtensionPlan odd(const Grid& grid);
  /// Even extension on axes with a single Neumann end at `hi`, none elsewhere.
  static ExtensionPlan even(const Grid& grid);
  /// Odd extension on every axis of an array with the given shape.
  static ExtensionPlan odd(std::span<const std::size_t> shape);

  [[nodiscard]] std::vector<std::size_t> source_shape() const;
  [[nodiscard]] std::vector<std::size_t> target_shape() const;
};

/// Tensor-product extension. Throws when the plan does not fit the array.
Array extend_field(const Array& f, const ExtensionPlan& plan);
Array extend_field(const Field& f, const ExtensionPlan& plan);

/// Tensor-product restriction back to the plan's source shape (prefix per
/// axis). Exact left inverse of extend_field for odd and none kinds; for an
/// even axis it drops the mirrored half without undoing the doubled centre.
Array restrict_field(const Array& v, const ExtensionPlan& plan);
Field restrict_field(const Array& v, const ExtensionPlan& plan, const Grid& target);

/// Signed reflection of one grid axis onto its periodic extension.
///
/// Periodic point p (x = p h, p = 0..period-1) carries sign * u[source] or 0.
/// Dirichlet ends reflect oddly, Neumann ends evenly:
///   DD -> period 2(n+1), NN -> 2(n+1), mixed -> 4(n+1).
/// Only modes in `active` can be excited by extended data; the others are
/// structurally zero (e.g. l = 0 and l = N/2 for the odd extension).
struct AxisReflection {
  std::size_t period = 0;
  std::vector<std::ptrdiff_t> source;  // -1 where the extension vanishes
  std::vector<signed char> sign;
  std::vector<std::size_t> gather;     // unknown i -> periodic point
  std::vector<bool> active;

  static AxisReflection for_axis(const AxisSpec& axis);
};

}  // namespace helmfft
