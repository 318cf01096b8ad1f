#include <doctest.h>

#include "helmfft/dense.hpp"
#include "helmfft/operators.hpp"
#include "oracles.hpp"

using namespace helmfft;

namespace {

struct DenseMaps {
  oracle::Mat T, S;
};

DenseMaps dense_maps(const Grid& g, double eta) {
  const BlockPartition part(g);
  const oracle::Mat A = oracle::helmholtz_kron(g, eta);
  const oracle::Mat Ainv = A.inverse();
  const auto& B = part.boundary();
  oracle::Mat T(B.size(), B.size());
  for (std::size_t i = 0; i < B.size(); ++i)
    for (std::size_t j = 0; j < B.size(); ++j) T(i, j) = Ainv(B[i], B[j]);
  return {T, oracle::schur_complement(A, part.interior(), B)};
}

cvec apply_dense(const oracle::Mat& M, const cvec& x) { return oracle::unvec(M * oracle::vec(x)); }

}  // namespace

TEST_CASE("linear operator contract") {
  const auto I = LinearOperator::identity(3);
  CHECK(I(cvec{1, 2, 3}) == cvec{1, 2, 3});
  CHECK_THROWS_AS(I(cvec{1, 2}), std::invalid_argument);
  cvec out(2);
  CHECK_THROWS_AS(I.apply(cvec{1, 2, 3}, out), std::invalid_argument);
  const LinearOperator twice(3, 3, [](std::span<const cplx> x, std::span<cplx> y) {
    for (std::size_t i = 0; i < 3; ++i) y[i] = 2.0 * x[i];
  }, "twice");
  CHECK(compose(twice, twice)(cvec{1, 0, 0}) == cvec{4, 0, 0});
  CHECK_THROWS(compose(twice, LinearOperator::identity(2)));
}

TEST_CASE("block partition") {
  for (std::size_t d = 1; d <= 3; ++d) {
    const Grid g = boundary_map_grid(d, 3);
    const BlockPartition p(g);
    std::size_t interior = 1;
    for (std::size_t a = 0; a < d; ++a) interior *= 3;
    CHECK(p.interior().size() == interior);
    CHECK(p.boundary().size() == g.size() - interior);
    std::vector<int> seen(g.size(), 0);
    for (auto i : p.interior()) ++seen[i];
    for (auto b : p.boundary()) ++seen[b];
    CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
  }
  // 2D, n = 1: 3x3 grid; faces x0 = 0 (3 nodes), x0 = 1 (3), x1 = 0 (1), x1 = 1 (1).
  const BlockPartition p(boundary_map_grid(2, 1));
  CHECK(p.boundary() == std::vector<std::size_t>{0, 1, 2, 6, 7, 8, 3, 5});
  CHECK(p.interior() == std::vector<std::size_t>{4});
}

TEST_CASE("NtD and DtN against dense block formulas") {
  std::mt19937_64 rng(30);
  for (std::size_t d = 1; d <= 2; ++d)
    for (std::size_t n : {2u, 6u})
      for (double eta : {0.5, 1.0, 2.0, 4.0}) {
        const Grid g = boundary_map_grid(d, n);
        const auto dm = dense_maps(g, eta);
        const NtdOperator T(g, eta);
        const DtnOperator S(g, eta);
        const cvec mu = oracle::random_vector(T.partition().boundary().size(), rng);
        CHECK(oracle::rel(T.apply(mu), apply_dense(dm.T, mu)) <= 1e-9);
        CHECK(oracle::rel(S.apply(mu), apply_dense(dm.S, mu)) <= 1e-9);
        CHECK(norm2(T.apply(cvec(mu.size()))) == 0.0);
        CHECK(norm2(S.apply(cvec(mu.size()))) == 0.0);
      }
  // A 3D grid stays under the dense cap comfortably.
  const Grid g3 = boundary_map_grid(3, 3);
  const auto dm = dense_maps(g3, 1.0);
  const cvec mu = oracle::random_vector(BlockPartition(g3).boundary().size(), rng);
  CHECK(oracle::rel(apply_ntd(g3, mu, 1.0), apply_dense(dm.T, mu)) <= 1e-9);
  CHECK(oracle::rel(apply_dtn(g3, mu, 1.0), apply_dense(dm.S, mu)) <= 1e-9);
}

TEST_CASE("S_h T_h = I") {
  std::mt19937_64 rng(31);
  for (std::size_t n : {8u, 16u})
    for (double eta : {0.5, 1.0, 2.0, 4.0}) {
      const Grid g = boundary_map_grid(2, n);
      const NtdOperator T(g, eta);
      const DtnOperator S(g, eta);
      for (int r = 0; r < 3; ++r) {
        const cvec mu = oracle::random_vector(T.partition().boundary().size(), rng);
        CHECK(oracle::rel(S.apply(T.apply(mu)), mu) <= 1e-9);
      }
    }
}

TEST_CASE("S_h is symmetric for real eta") {
  std::mt19937_64 rng(32);
  const Grid g = boundary_map_grid(2, 6);
  const DtnOperator S(g, 1.0);
  const std::size_t nb = S.partition().boundary().size();
  const cvec f = oracle::random_real(nb, rng), h = oracle::random_real(nb, rng);
  const cvec Sf = S.apply(f), Sh = S.apply(h);
  cplx a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < nb; ++i) {
    a += Sf[i] * h[i];
    b += f[i] * Sh[i];
  }
  CHECK(std::abs(a - b) <= 1e-9 * std::abs(a));
}

TEST_CASE("operators are linear") {
  std::mt19937_64 rng(33);
  const Grid g = boundary_map_grid(2, 5);
  const auto T = NtdOperator(g, 0.5).handle();
  const auto S = DtnOperator(g, 0.5).handle();
  const Grid gd = Grid::dirichlet(2, 6);
  cvec kf(gd.size());
  std::uniform_real_distribution<double> u(1.0, 4.0);
  for (auto& k : kf) k = u(rng);
  const auto P = make_preconditioned_operator(Field(gd, kf), 2.5);
  const auto H = make_helmholtz_operator(Field(gd, kf));
  for (const LinearOperator* op : {&T, &S, &P, &H}) {
    const cvec x = oracle::random_vector(op->cols(), rng), y = oracle::random_vector(op->cols(), rng);
    const cplx alpha(0.3, -1.2), beta(2.0, 0.5);
    cvec z(x.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = alpha * x[i] + beta * y[i];
    const cvec ox = (*op)(x), oy = (*op)(y), oz = (*op)(z);
    cvec lin(ox.size());
    for (std::size_t i = 0; i < lin.size(); ++i) lin[i] = alpha * ox[i] + beta * oy[i];
    CHECK_MESSAGE(oracle::rel(oz, lin) <= 1e-10, op->tag());
  }
}

TEST_CASE("variable wave number application") {
  std::mt19937_64 rng(34);
  const Grid g = Grid::dirichlet(2, 5);
  const Field u(g, oracle::random_vector(g.size(), rng));
  const Field k(g, cvec(g.size(), 1.7));
  const auto AD = assemble_dense(g, 1.7, DenseVariant::dirichlet);
  CHECK(oracle::rel(apply_variable_helmholtz(u, k).data(), apply_dense(AD, u.data())) <= 1e-12);
  CHECK(norm2(apply_variable_helmholtz(Field(g), k).values()) == 0.0);
  CHECK_THROWS(apply_variable_helmholtz(u, Field(Grid::dirichlet(2, 4))));

  // Independent oracle: constant-coefficient Kronecker operator plus a diagonal shift.
  cvec kf(g.size());
  std::uniform_real_distribution<double> un(0.5, 3.0);
  for (auto& x : kf) x = un(rng);
  const double h = g.reference_spacing();
  oracle::Mat A = oracle::helmholtz_kron(g, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) A(i, i) -= kf[i] * kf[i] * h * h;
  CHECK(oracle::rel(apply_variable_helmholtz(u, Field(g, kf)).data(), apply_dense(A, u.data())) <= 1e-12);
}

TEST_CASE("preconditioned composite") {
  std::mt19937_64 rng(35);
  const Grid g = Grid::dirichlet(2, 9);
  const auto P = make_preconditioned_operator(Field(g, cvec(g.size(), 3.3)), 3.3);
  const cvec v = oracle::random_vector(g.size(), rng);
  CHECK(oracle::rel(P(v), v) <= 1e-10);
  const double h = g.reference_spacing();
  const double kres = std::sqrt(8.0) * std::sin(std::numbers::pi / 20) / h;
  CHECK_THROWS_AS(make_preconditioned_operator(Field(g, cvec(g.size(), 1.0)), kres), ResonanceError);
}
