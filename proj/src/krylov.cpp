#include "helmfft/krylov.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace helmfft {

namespace {

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {  // a^* b
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(std::span<cplx> x, cplx alpha) {
  for (auto& v : x) v *= alpha;
}

// Complex plane rotation [c s; -conj(s) c] [f; g] = [r; 0] with real c.
struct Rotation {
  double c = 1.0;
  cplx s = 0.0;
};

Rotation make_rotation(cplx f, cplx g) {
  if (g == cplx{}) return {1.0, 0.0};
  if (f == cplx{}) return {0.0, std::conj(g) / std::abs(g)};
  const double af = std::abs(f);
  const double nu = std::hypot(af, std::abs(g));
  return {af / nu, (f / af) * std::conj(g) / nu};
}

void rotate(const Rotation& r, cplx& x, cplx& y) {
  const cplx t = r.c * x + r.s * y;
  y = -std::conj(r.s) * x + r.c * y;
  x = t;
}

cvec random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  cvec v(n);
  for (auto& x : v) x = {u(rng), u(rng)};
  return v;
}

// Two passes of modified Gram-Schmidt against `basis`; coefficients are
// accumulated into `coeffs` when given.
void orthogonalize(std::span<cplx> w, const std::vector<cvec>& basis, std::size_t count,
                   Eigen::VectorXcd* coeffs) {
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < count; ++i) {
      const cplx h = dot(basis[i], w);
      axpy(-h, basis[i], w);
      if (coeffs) (*coeffs)(static_cast<Eigen::Index>(i)) += h;
    }
  }
}

}  // namespace

GmresResult gmres(const LinearOperator& op, std::span<const cplx> rhs, const GmresOptions& options,
                  const LinearOperator* right_preconditioner) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!op.square()) throw std::invalid_argument("gmres: operator must be square");
  if (rhs.size() != op.rows()) throw std::invalid_argument("gmres: rhs length does not match operator");
  if (right_preconditioner &&
      (right_preconditioner->rows() != op.cols() || !right_preconditioner->square()))
    throw std::invalid_argument("gmres: preconditioner shape mismatch");
  if (!(options.tol > 0.0) || options.restart == 0) throw std::invalid_argument("gmres: bad options");

  const std::size_t n = rhs.size();
  const double bnorm = norm2(rhs);
  if (bnorm == 0.0) throw std::invalid_argument("gmres: right-hand side is zero");

  auto apply = [&](std::span<const cplx> v) {
    if (!right_preconditioner) return op(v);
    const cvec z = (*right_preconditioner)(v);
    return op(z);
  };

  GmresResult result;
  SolveReport& rep = result.report;
  cvec y(n, 0.0);  // iterate in the preconditioned variable
  cvec r(rhs.begin(), rhs.end());
  double beta = bnorm;
  const std::size_t m = options.restart;
  std::vector<cvec> V(m + 1, cvec(n));
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(m + 1), static_cast<Eigen::Index>(m));
  std::vector<Rotation> rot(m);
  cvec g(m + 1);

  while (true) {
    if (beta / bnorm <= options.tol) {
      rep.converged = true;
      break;
    }
    if (rep.iterations >= options.max_iter) break;

    for (std::size_t i = 0; i < n; ++i) V[0][i] = r[i] / beta;
    std::fill(g.begin(), g.end(), cplx{});
    g[0] = beta;
    std::size_t j = 0;
    for (; j < m && rep.iterations < options.max_iter; ++j) {
      cvec w = apply(V[j]);
      ++rep.iterations;
      Eigen::VectorXcd h = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(j + 1));
      orthogonalize(w, V, j + 1, &h);
      const double hn = norm2(w);
      for (std::size_t i = 0; i <= j; ++i) H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = h(static_cast<Eigen::Index>(i));
      cplx sub = hn;
      for (std::size_t i = 0; i < j; ++i)
        rotate(rot[i], H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
               H(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(j)));
      cplx& diag = H(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j));
      rot[j] = make_rotation(diag, sub);
      rotate(rot[j], diag, sub);
      rotate(rot[j], g[j], g[j + 1]);
      const double est = std::abs(g[j + 1]) / bnorm;
      rep.residual_history.push_back(est);
      if (hn == 0.0 || est <= options.tol) {
        ++j;
        break;
      }
      for (std::size_t i = 0; i < n; ++i) V[j + 1][i] = w[i] / hn;
    }

    // Back substitution for the cycle's coefficients.
    cvec s(j);
    for (std::size_t i = j; i-- > 0;) {
      cplx acc = g[i];
      for (std::size_t l = i + 1; l < j; ++l) acc -= H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) * s[l];
      s[i] = acc / H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
    }
    for (std::size_t i = 0; i < j; ++i) axpy(s[i], V[i], y);

    const cvec ay = apply(y);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - ay[i];
    beta = norm2(r);
    ++rep.restarts;
    if (beta / bnorm <= options.tol) {
      rep.converged = true;
      break;
    }
    // Stagnation: the cycle did not reduce the true residual at all.
    if (j == 0) break;
  }
  // The final cycle is not a restart.
  if (rep.restarts > 0) --rep.restarts;
  rep.relative_residual = beta / bnorm;
  result.x = right_preconditioner ? (*right_preconditioner)(y) : std::move(y);
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

KrylovDecomposition::KrylovDecomposition(std::size_t n, cvec start) : n_(n) {
  if (start.size() != n) throw std::invalid_argument("Krylov start vector has the wrong length");
  const double nrm = norm2(start);
  if (nrm == 0.0) throw std::invalid_argument("Krylov start vector is zero");
  scale(start, 1.0 / nrm);
  V_.push_back(std::move(start));
  H_ = Eigen::MatrixXcd::Zero(1, 0);
}

void KrylovDecomposition::expand(const LinearOperator& op, std::size_t size,
                                 const std::vector<cvec>& locked, std::mt19937_64& rng) {
  if (size <= k_) return;
  const auto old_k = static_cast<Eigen::Index>(k_);
  H_.conservativeResize(static_cast<Eigen::Index>(size + 1), static_cast<Eigen::Index>(size));
  H_.bottomRows(static_cast<Eigen::Index>(size) - old_k).setZero();
  H_.rightCols(static_cast<Eigen::Index>(size) - old_k).setZero();

  for (std::size_t j = k_; j < size; ++j) {
    cvec w = op(V_[j]);
    ++applications_;
    const double wn = norm2(w);
    orthogonalize(w, locked, locked.size(), nullptr);
    Eigen::VectorXcd h = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(j + 1));
    orthogonalize(w, V_, j + 1, &h);
    H_.col(static_cast<Eigen::Index>(j)).head(static_cast<Eigen::Index>(j + 1)) = h;
    double hn = norm2(w);
    if (hn <= 1e-13 * std::max(wn, 1e-300)) {
      // Invariant subspace found: continue with a fresh direction.
      w = random_vector(n_, rng);
      orthogonalize(w, locked, locked.size(), nullptr);
      orthogonalize(w, V_, j + 1, nullptr);
      const double rn = norm2(w);
      if (rn == 0.0) throw std::runtime_error("Krylov basis exhausted the space");
      scale(w, 1.0 / rn);
      hn = 0.0;
    } else {
      scale(w, 1.0 / hn);
    }
    H_(static_cast<Eigen::Index>(j + 1), static_cast<Eigen::Index>(j)) = hn;
    V_.push_back(std::move(w));
  }
  k_ = size;
}

void KrylovDecomposition::restart(const Eigen::MatrixXcd& U, const Eigen::MatrixXcd& T) {
  const auto p = U.cols();
  if (U.rows() != static_cast<Eigen::Index>(k_) || T.rows() != p || T.cols() != p)
    throw std::invalid_argument("Krylov restart: shape mismatch");
  std::vector<cvec> W(static_cast<std::size_t>(p) + 1, cvec(n_, 0.0));
  for (Eigen::Index i = 0; i < p; ++i)
    for (std::size_t j = 0; j < k_; ++j) axpy(U(static_cast<Eigen::Index>(j), i), V_[j], W[static_cast<std::size_t>(i)]);
  W[static_cast<std::size_t>(p)] = std::move(V_[k_]);
  const Eigen::RowVectorXcd c = last_row() * U;
  H_ = Eigen::MatrixXcd::Zero(p + 1, p);
  H_.topRows(p) = T;
  H_.row(p) = c;
  V_ = std::move(W);
  k_ = static_cast<std::size_t>(p);
}

Eigen::MatrixXcd KrylovDecomposition::projected() const {
  const auto k = static_cast<Eigen::Index>(k_);
  return H_.topLeftCorner(k, k);
}

Eigen::RowVectorXcd KrylovDecomposition::last_row() const {
  return H_.row(static_cast<Eigen::Index>(k_)).head(static_cast<Eigen::Index>(k_));
}

double arnoldi_relation_residual(const LinearOperator& op, const KrylovDecomposition& kd) {
  double sum = 0.0;
  const auto& V = kd.basis();
  const auto& H = kd.hessenberg();
  for (std::size_t j = 0; j < kd.size(); ++j) {
    cvec r = op(V[j]);
    for (std::size_t i = 0; i <= kd.size(); ++i)
      axpy(-H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), V[i], r);
    const double rn = norm2(r);
    sum += rn * rn;
  }
  return std::sqrt(sum);
}

void sort_schur(Eigen::MatrixXcd& T, Eigen::MatrixXcd& U, const std::function<bool(cplx, cplx)>& first) {
  const Eigen::Index n = T.rows();
  auto swap_adjacent = [&](Eigen::Index k) {
    const cplx t11 = T(k, k), t22 = T(k + 1, k + 1);
    const Rotation r = make_rotation(T(k, k + 1), t22 - t11);
    for (Eigen::Index j = k + 2; j < n; ++j) rotate(r, T(k, j), T(k + 1, j));
    const Rotation rc{r.c, std::conj(r.s)};
    for (Eigen::Index i = 0; i < k; ++i) rotate(rc, T(i, k), T(i, k + 1));
    T(k, k) = t22;
    T(k + 1, k + 1) = t11;
    for (Eigen::Index i = 0; i < U.rows(); ++i) rotate(rc, U(i, k), U(i, k + 1));
  };
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = n - 2; j >= i; --j)
      if (first(T(j + 1, j + 1), T(j, j))) swap_adjacent(j);
}

namespace {

struct Candidate {
  cplx theta;
  cvec x;
};

bool wanted_before(Which which, cplx a, cplx b) {
  return which == Which::largest_magnitude ? std::abs(a) > std::abs(b) : std::abs(a) < std::abs(b);
}

// One Krylov-Schur run on the operator deflated by `locked`.
std::vector<Candidate> krylov_schur(const LinearOperator& op, const EigOptions& opt,
                                    const std::vector<cvec>& locked, std::mt19937_64& rng,
                                    std::size_t& applications, std::size_t& restarts) {
  const std::size_t n = op.rows();
  if (locked.size() >= n) return {};
  const std::size_t n_eff = n - locked.size();
  const std::size_t m = std::min(opt.max_subspace, n_eff);
  const std::size_t want = std::min(opt.how_many, m);

  cvec start = random_vector(n, rng);
  orthogonalize(start, locked, locked.size(), nullptr);
  KrylovDecomposition kd(n, std::move(start));
  auto before = [&](cplx a, cplx b) { return wanted_before(opt.which, a, b); };

  std::vector<Candidate> out;
  for (std::size_t it = 0;; ++it) {
    kd.expand(op, m, locked, rng);
    const Eigen::MatrixXcd Hm = kd.projected();
    const Eigen::RowVectorXcd c = kd.last_row();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Hm);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(Hm.rows()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return before(es.eigenvalues()(a), es.eigenvalues()(b)); });
    const double hnorm = Hm.norm();
    std::size_t conv = 0;
    for (std::size_t i = 0; i < want; ++i) {
      const auto idx = order[i];
      const cplx theta = es.eigenvalues()(idx);
      const double res = std::abs(c.dot(es.eigenvectors().col(idx).conjugate()));
      // c.dot(v.conj()) = sum c_j v_j
      if (res <= opt.tol * std::max(std::abs(theta), 1e-12 * hnorm)) ++conv;
    }
    const bool done = conv >= want || m == n_eff || it >= opt.max_restarts;
    if (done) {
      applications += kd.applications();
      for (std::size_t i = 0; i < want; ++i) {
        const auto idx = order[i];
        cvec x(n, 0.0);
        for (std::size_t j = 0; j < m; ++j) axpy(es.eigenvectors()(static_cast<Eigen::Index>(j), idx), kd.basis()[j], x);
        scale(x, 1.0 / norm2(x));
        out.push_back({es.eigenvalues()(idx), std::move(x)});
      }
      return out;
    }
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(Hm);
    Eigen::MatrixXcd T = schur.matrixT();
    Eigen::MatrixXcd U = schur.matrixU();
    sort_schur(T, U, before);
    const std::size_t keep = std::min(m - 1, want + (m - want) / 2);
    const auto p = static_cast<Eigen::Index>(keep);
    kd.restart(U.leftCols(p), T.topLeftCorner(p, p));
    ++restarts;
  }
}

using Verifier = std::function<std::pair<cplx, double>(const Candidate&)>;  // (lambda, residual)

struct Accepted {
  cplx lambda;
  cplx theta;
  double residual;
  cvec x;
};

EigenReport locked_search(const LinearOperator& op, const EigOptions& opt, Which report_order,
                          const Verifier& verify, double pass_tol) {
  if (!op.square()) throw std::invalid_argument("eigensolver: operator must be square");
  if (opt.how_many == 0 || opt.how_many >= opt.max_subspace)
    throw std::invalid_argument("eigensolver: need 0 < how_many < max_subspace");
  std::mt19937_64 rng(opt.seed);
  EigenReport rep;
  auto passes = [&](const Accepted& a) { return a.residual <= pass_tol * std::max(1.0, std::abs(a.lambda)); };
  auto before = [&](const Accepted& a, const Accepted& b) { return wanted_before(opt.which, a.theta, b.theta); };

  std::vector<Accepted> accepted;
  std::vector<cvec> locked;
  const std::size_t max_rounds = opt.how_many + 2;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    auto cands = krylov_schur(op, opt, locked, rng, rep.iterations, rep.restarts);
    std::vector<Accepted> fresh;
    for (auto& c : cands) {
      auto [lambda, res] = verify(c);
      Accepted a{lambda, c.theta, res, std::move(c.x)};
      if (passes(a)) fresh.push_back(std::move(a));
    }
    // Merge; only fresh pairs that displace an accepted one count as progress.
    std::vector<std::pair<Accepted, bool>> all;
    for (auto& a : accepted) all.push_back({std::move(a), false});
    for (auto& a : fresh) all.push_back({std::move(a), true});
    std::stable_sort(all.begin(), all.end(), [&](const auto& a, const auto& b) { return before(a.first, b.first); });
    if (all.size() > opt.how_many) all.resize(opt.how_many);
    bool changed = false;
    accepted.clear();
    for (auto& [a, is_new] : all) {
      changed = changed || is_new;
      accepted.push_back(std::move(a));
    }
    if (!changed && round > 0) break;
    if (round > 0 && fresh.empty()) break;
    // Lock an orthonormal basis of all accepted vectors for the next round.
    locked.clear();
    for (const auto& a : accepted) {
      cvec q = a.x;
      orthogonalize(q, locked, locked.size(), nullptr);
      const double qn = norm2(q);
      if (qn > 1e-8) {
        scale(q, 1.0 / qn);
        locked.push_back(std::move(q));
      }
    }
    if (locked.size() >= op.rows()) break;
  }

  std::stable_sort(accepted.begin(), accepted.end(), [&](const Accepted& a, const Accepted& b) {
    return report_order == Which::largest_magnitude ? std::abs(a.lambda) > std::abs(b.lambda)
                                                    : std::abs(a.lambda) < std::abs(b.lambda);
  });
  for (auto& a : accepted) {
    rep.eigenvalues.push_back(a.lambda);
    rep.residuals.push_back(a.residual);
    if (opt.want_vectors) rep.eigenvectors.push_back(std::move(a.x));
  }
  rep.converged = accepted.size();
  return rep;
}

double residual_of(const LinearOperator& op, cplx lambda, std::span<const cplx> x) {
  cvec r = op(x);
  axpy(-lambda, x, r);
  return norm2(r) / norm2(x);
}

}  // namespace

EigenReport arnoldi_eigs(const LinearOperator& op, const EigOptions& options) {
  auto verify = [&](const Candidate& c) { return std::pair{c.theta, residual_of(op, c.theta, c.x)}; };
  return locked_search(op, options, options.which, verify, options.tol);
}

EigenReport reciprocal_eigs(const LinearOperator& inverse, const LinearOperator& target,
                            const EigOptions& options) {
  if (inverse.rows() != target.rows() || !target.square())
    throw std::invalid_argument("reciprocal_eigs: operator shapes differ");
  EigOptions inner = options;
  inner.which = Which::largest_magnitude;
  inner.tol = options.tol * 1e-2;
  auto verify = [&](const Candidate& c) {
    const cplx lambda = 1.0 / c.theta;
    return std::pair{lambda, residual_of(target, lambda, c.x)};
  };
  return locked_search(inverse, inner, Which::smallest_magnitude, verify, options.tol);
}

}  // namespace helmfft
