#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lutt2d/eigensolvers.hpp"
#include "lutt2d/fock.hpp"

namespace lutt2d {

/// Periodic n1 x n2 square lattice; site x = i1 + n1·i2.
struct LatticeSpec {
  int n1 = 4;
  int n2 = 4;

  static constexpr int kMaxSites = 20;

  int sites() const { return n1 * n2; }
  int site(int i1, int i2) const;
  /// (-1)^(i1 + i2)
  int parity(int x) const { return ((x % n1) + (x / n1)) % 2 == 0 ? 1 : -1; }
  /// Throws DomainError for n < 2 or more than kMaxSites sites.
  void validate() const;
};

struct Bond {
  int x;
  int y;
};

/// Bonds (x, x+e1) and (x, x+e2) for every site. On a direction of length 2
/// the same pair appears twice, matching the momentum-space Hamiltonian.
std::vector<Bond> lattice_bonds(const LatticeSpec& lattice, int shift1 = 0, int shift2 = 0);

struct TvCouplings {
  double t = 1.0;
  double V = 0.0;
  double mu = 0.0;
};

/// Nearest-neighbour density coupling equivalent to the momentum-space
/// interaction with û(p) = a²V[cos(ap1) + cos(ap2)]/(8π²): V/2 per bond.
inline double bond_interaction(double V) { return 0.5 * V; }

struct HtvOptions {
  /// Restrict to fixed particle number; full Fock space when empty.
  std::optional<int> sector;
  /// Rigid relabeling of sites (translation of the label origin).
  int shift1 = 0;
  int shift2 = 0;
  /// Symmetry-breaking extras used as negative controls.
  int bond_perturb_index = -1;
  double bond_perturb_t = 0.0;
  int site_potential_index = -1;
  double site_potential = 0.0;
};

struct TvOperator {
  LatticeSpec lattice;
  FockBasis basis;
  SparseMatrix matrix;
  std::optional<int> sector;
};

/// H_0 - μN + H_int in the position occupation basis.
TvOperator build_htv(const LatticeSpec& lattice, const TvCouplings& c, const HtvOptions& opts = {});

/// Total particle number as a diagonal operator on the same basis.
SparseMatrix number_operator(const TvOperator& op);

struct GroundState {
  double energy = 0;
  int degeneracy = 0;
  std::vector<Eigen::VectorXd> states;
  double residual = 0;
};

/// Lowest level of a fixed-N operator with its degenerate multiplet.
GroundState ground_state(const TvOperator& op, double degeneracy_tol = 1e-8, const LanczosOptions& opts = {});

/// (1/𝒩²) Σ_{x,y} (-1)^{x-y} <n_x n_y> for one normalized state.
double cdw_order(const Eigen::VectorXd& state, const TvOperator& op);
/// Multiplet average (basis independent).
double cdw_order(const GroundState& gs, const TvOperator& op);

struct PhReport {
  bool pass = false;
  int levels_compared = 0;
  double constant_shift = 0;
  double max_deviation = 0;
};

/// Spectrum of H(μ) in sector N against H(V - μ) in sector 𝒩 - N, up to a
/// global constant fixed from the ground energies. Compares the full
/// spectrum when both sectors are at most `dense_limit`, else the lowest
/// `levels` eigenvalues.
PhReport ph_transform_check(const LatticeSpec& lattice, const TvCouplings& c, int particles, int levels = 8,
                            const HtvOptions& extras = {}, double tol = 1e-9, long dense_limit = 2500);

}  // namespace lutt2d
