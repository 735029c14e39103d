#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "lutt2d/fock.hpp"

namespace lutt2d {

struct LanczosOptions {
  int krylov_dim = 80;
  int max_restarts = 400;
  /// Converged when ||Hv - Ev|| <= tolerance * norm_bound(H).
  double tolerance = 1e-10;
  std::uint64_t seed = 0x5eed;
};

struct EigenPair {
  double value = 0;
  Eigen::VectorXd vector;
  double residual = 0;
  int matvecs = 0;
};

/// Lowest eigenpair of a real symmetric H via restarted Lanczos with full
/// reorthogonalization, restricted to the orthogonal complement of `deflate`.
/// Throws DomainError after max_restarts without convergence.
EigenPair lanczos_lowest(const SparseMatrix& h, const LanczosOptions& opts = {},
                         const std::vector<Eigen::VectorXd>& deflate = {});

/// The `count` lowest eigenpairs by successive deflation.
std::vector<EigenPair> lowest_eigenpairs(const SparseMatrix& h, int count, const LanczosOptions& opts = {});

/// Ground level with its full degenerate multiplet (levels within
/// `degeneracy_tol` of the lowest).
struct Multiplet {
  double energy = 0;
  std::vector<EigenPair> states;
};
Multiplet ground_multiplet(const SparseMatrix& h, double degeneracy_tol, const LanczosOptions& opts = {});

/// All eigenvalues by dense diagonalization (ascending).
Eigen::VectorXd dense_eigenvalues(const SparseMatrix& h);

/// Lowest `count` eigenvalues: dense below `dense_limit`, Lanczos above.
std::vector<double> lowest_eigenvalues(const SparseMatrix& h, int count, long dense_limit = 4096,
                                       const LanczosOptions& opts = {});

}  // namespace lutt2d
