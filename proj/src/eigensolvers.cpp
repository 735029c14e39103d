#include "lutt2d/eigensolvers.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <fmt/core.h>

#include "lutt2d/model_core.hpp"

namespace lutt2d {

namespace {

void project_out(Eigen::VectorXd& v, const std::vector<Eigen::VectorXd>& basis) {
  for (const auto& b : basis) v -= b.dot(v) * b;
}

Eigen::VectorXd random_start(long n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (long i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

}  // namespace

EigenPair lanczos_lowest(const SparseMatrix& h, const LanczosOptions& opts,
                         const std::vector<Eigen::VectorXd>& deflate) {
  const long n = h.rows();
  if (n == 0) throw DomainError("eigensolver called on an empty sector");
  if (static_cast<long>(deflate.size()) >= n) throw DomainError("deflation exhausts the space");
  const double scale = std::max(norm_bound(h), 1e-300);

  Eigen::VectorXd start = random_start(n, opts.seed);
  project_out(start, deflate);
  project_out(start, deflate);
  start.normalize();

  EigenPair best;
  const int m_max = static_cast<int>(std::min<long>(opts.krylov_dim, n - static_cast<long>(deflate.size())));
  for (int restart = 0; restart < opts.max_restarts; ++restart) {
    std::vector<Eigen::VectorXd> q;
    q.reserve(static_cast<std::size_t>(m_max));
    std::vector<double> alpha;
    std::vector<double> beta;
    q.push_back(start);
    Eigen::VectorXd w(n);
    for (int j = 0; j < m_max; ++j) {
      w.noalias() = h * q[static_cast<std::size_t>(j)];
      ++best.matvecs;
      const double a = q[static_cast<std::size_t>(j)].dot(w);
      alpha.push_back(a);
      // Full reorthogonalization (twice) against the Krylov basis and the
      // deflated vectors.
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& v : q) w -= v.dot(w) * v;
        project_out(w, deflate);
      }
      const double b = w.norm();
      if (j + 1 == m_max || b <= 1e-13 * scale) break;
      beta.push_back(b);
      q.push_back(w / b);
    }
    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const Eigen::VectorXd y = es.eigenvectors().col(0);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < m; ++i) x += y[i] * q[static_cast<std::size_t>(i)];
    project_out(x, deflate);
    x.normalize();

    Eigen::VectorXd hx = h * x;
    ++best.matvecs;
    const double theta = x.dot(hx);
    best.value = theta;
    best.vector = x;
    best.residual = (hx - theta * x).norm();
    if (best.residual <= opts.tolerance * scale) return best;
    start = x;
  }
  throw DomainError(fmt::format("Lanczos did not converge after {} restarts (residual {:.3e})",
                                opts.max_restarts, best.residual));
}

std::vector<EigenPair> lowest_eigenpairs(const SparseMatrix& h, int count, const LanczosOptions& opts) {
  std::vector<EigenPair> out;
  std::vector<Eigen::VectorXd> found;
  for (int i = 0; i < count && i < h.rows(); ++i) {
    LanczosOptions o = opts;
    o.seed = opts.seed + static_cast<std::uint64_t>(i);
    out.push_back(lanczos_lowest(h, o, found));
    found.push_back(out.back().vector);
  }
  return out;
}

Multiplet ground_multiplet(const SparseMatrix& h, double degeneracy_tol, const LanczosOptions& opts) {
  Multiplet mp;
  std::vector<Eigen::VectorXd> found;
  EigenPair first = lanczos_lowest(h, opts, found);
  mp.energy = first.value;
  found.push_back(first.vector);
  mp.states.push_back(std::move(first));
  while (static_cast<long>(found.size()) < h.rows()) {
    LanczosOptions o = opts;
    o.seed = opts.seed + found.size();
    EigenPair next = lanczos_lowest(h, o, found);
    if (next.value > mp.energy + degeneracy_tol) break;
    found.push_back(next.vector);
    mp.states.push_back(std::move(next));
  }
  return mp;
}

Eigen::VectorXd dense_eigenvalues(const SparseMatrix& h) {
  const Eigen::MatrixXd dense = Eigen::MatrixXd(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

std::vector<double> lowest_eigenvalues(const SparseMatrix& h, int count, long dense_limit,
                                       const LanczosOptions& opts) {
  std::vector<double> out;
  if (h.rows() <= dense_limit) {
    const Eigen::VectorXd ev = dense_eigenvalues(h);
    for (int i = 0; i < count && i < ev.size(); ++i) out.push_back(ev[i]);
    return out;
  }
  for (const auto& p : lowest_eigenpairs(h, count, opts)) out.push_back(p.value);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lutt2d
