// Independent reference implementations used only by the tests.
#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "helmfft/grid.hpp"

namespace oracle {

using helmfft::cplx;
using helmfft::cvec;
using Mat = Eigen::MatrixXcd;

inline cvec random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  cvec v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

inline cvec random_real(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  cvec v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

/// O(N^2) DFT with long double accumulation and exactly reduced phases.
inline cvec naive_dft(const cvec& x, bool inverse = false) {
  const std::size_t n = x.size();
  cvec y(n);
  const long double sgn = inverse ? 1.0L : -1.0L;
  for (std::size_t j = 0; j < n; ++j) {
    std::complex<long double> acc = 0.0L;
    for (std::size_t m = 0; m < n; ++m) {
      const std::size_t p = (j * m) % n;
      const long double ang = sgn * 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(p) /
                              static_cast<long double>(n);
      acc += std::complex<long double>(std::cos(ang), std::sin(ang)) *
             std::complex<long double>(x[m].real(), x[m].imag());
    }
    if (inverse) acc /= static_cast<long double>(n);
    y[j] = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
  }
  return y;
}

inline Mat dft_matrix(std::size_t n) {
  Mat F(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t m = 0; m < n; ++m)
      F(j, m) = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>((j * m) % n) / static_cast<double>(n));
  return F;
}

inline Mat kron(const Mat& a, const Mat& b) { return Eigen::kroneckerProduct(a, b).eval(); }

inline Mat kron_all(const std::vector<Mat>& ms) {
  Mat out = ms.front();
  for (std::size_t i = 1; i < ms.size(); ++i) out = kron(out, ms[i]);
  return out;
}

/// tridiag(-1, 2, -1) of order n.
inline Mat tridiag(std::size_t n) {
  Mat t = Mat::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    t(i, i) = 2.0;
    if (i > 0) t(i, i - 1) = -1.0;
    if (i + 1 < n) t(i, i + 1) = -1.0;
  }
  return t;
}

inline Mat circulant(std::size_t n) {
  Mat t = Mat::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    t(i, i) += 2.0;
    t(i, (i + 1) % n) -= 1.0;
    t(i, (i + n - 1) % n) -= 1.0;
  }
  return t;
}

/// Symmetric 1D pieces of one axis: stiffness with (1, -1) rows at Neumann
/// ends and the mass diagonal with 1/2 there.
struct AxisPieces {
  Mat T, W;
};

inline AxisPieces axis_pieces(const helmfft::AxisSpec& ax) {
  const std::size_t m = ax.unknowns();
  AxisPieces p{tridiag(m), Mat::Identity(m, m)};
  if (ax.lo == helmfft::Boundary::neumann) {
    p.T(0, 0) = 1.0;
    p.W(0, 0) = 0.5;
  }
  if (ax.hi == helmfft::Boundary::neumann) {
    p.T(m - 1, m - 1) = 1.0;
    p.W(m - 1, m - 1) = 0.5;
  }
  return p;
}

/// sum_a (h0/h_a)^2 W ⊗ .. T_a .. ⊗ W - k^2 h0^2 W⊗..⊗W, built by Kronecker products.
inline Mat helmholtz_kron(const helmfft::Grid& grid, cplx k) {
  const double h0 = grid.reference_spacing();
  std::vector<AxisPieces> pieces;
  for (const auto& ax : grid.axes()) pieces.push_back(axis_pieces(ax));
  std::vector<Mat> ws;
  for (const auto& p : pieces) ws.push_back(p.W);
  Mat A = -k * k * h0 * h0 * kron_all(ws);
  for (std::size_t a = 0; a < pieces.size(); ++a) {
    std::vector<Mat> f = ws;
    f[a] = pieces[a].T;
    const double c = std::pow(h0 / grid.axis(a).h, 2);
    A += c * kron_all(f);
  }
  return A;
}

inline Eigen::VectorXcd vec(const cvec& v) {
  return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline cvec unvec(const Eigen::VectorXcd& v) { return {v.data(), v.data() + v.size()}; }

inline double rel(const cvec& a, const cvec& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

/// Dense Schur complement A_BB - A_BI A_II^{-1} A_IB for index sets I, B.
inline Mat schur_complement(const Mat& A, const std::vector<std::size_t>& I,
                            const std::vector<std::size_t>& B) {
  auto block = [&](const std::vector<std::size_t>& r, const std::vector<std::size_t>& c) {
    Mat m(r.size(), c.size());
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j) m(i, j) = A(r[i], c[j]);
    return m;
  };
  const Mat AII = block(I, I), AIB = block(I, B), ABI = block(B, I), ABB = block(B, B);
  return ABB - ABI * AII.partialPivLu().solve(AIB);
}

}  // namespace oracle
