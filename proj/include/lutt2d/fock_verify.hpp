#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "lutt2d/fock.hpp"
#include "lutt2d/model_core.hpp"

namespace lutt2d {

/// Nodal branch label (r, s) with r = ±1 and s = ±1.
struct BranchLabel {
  int r = 1;
  int s = 1;
};

std::vector<BranchLabel> all_nodal_branches();

struct TruncationSpec {
  /// Longitudinal modes per transverse channel, k = (l - n/2 + 1/2) in units of 2π/L.
  int longitudinal_modes = 10;
  /// Transverse channels per branch (= L/ã).
  int transverse = 1;
  /// Safe margin W in units of 2π/L (0 <= W <= longitudinal_modes).
  int margin = 3;
  std::vector<BranchLabel> branches = all_nodal_branches();
};

/// Density operator label J_{r,s}(p) with p = (2π/L)(p_plus, p_minus).
struct DensityKey {
  int r = 1;
  int s = 1;
  int p_plus = 0;
  int p_minus = 0;

  int longitudinal() const { return s > 0 ? p_plus : p_minus; }
  int transverse() const { return s > 0 ? p_minus : p_plus; }
  DensityKey negated() const { return {r, s, -p_plus, -p_minus}; }
};

/// Finite set of chiral modes with a filled Dirac sea Ω below the truncation.
class TruncatedChiralSpace {
 public:
  explicit TruncatedChiralSpace(TruncationSpec spec);

  const TruncationSpec& spec() const { return spec_; }
  int modes() const { return static_cast<int>(spec_.branches.size()) * channel_modes(); }
  int channel_modes() const { return spec_.transverse * spec_.longitudinal_modes; }
  /// -1 when the branch is not part of the truncation.
  int branch_index(int r, int s) const;
  int mode(int branch, int channel, int l) const {
    return (branch * spec_.transverse + channel) * spec_.longitudinal_modes + l;
  }
  /// Longitudinal momentum of slot l in units of 2π/L (half-integer).
  double momentum(int l) const { return l - 0.5 * spec_.longitudinal_modes + 0.5; }

  /// Ω: r = + fills k < 0, r = - fills k > 0.
  FockState vacuum() const { return vacuum_; }
  FockState branch_mask(int branch) const;
  int charge(FockState s, int branch) const;
  /// Σ r k (n_k - n_k^Ω) in units of v_F·2π/L.
  double kinetic_energy(FockState s) const;
  /// Outer `margin` slots of every channel agree with Ω.
  bool is_safe(FockState s) const;
  /// Branch present and transverse momentum inside |p_{-s}| <= π/ã.
  bool in_window(const DensityKey& key) const;

  /// J_{r,s}(p)|s> = Σ_k c†(k) c(k+p), transverse index shifted modulo the
  /// channel count (umklapp). p = 0 is normal ordered with respect to Ω.
  void apply_density(const DensityKey& key, FockState s, double amp, std::vector<FockAmplitude>& out) const;

  struct StateFilter {
    /// Branch-resolved charges allowed; empty means any.
    std::vector<int> charges = {0};
    double energy_cap = std::numeric_limits<double>::infinity();
    /// Branches allowed to deviate from Ω; empty means all.
    std::vector<int> active_branches;
    bool safe_only = false;
  };
  std::vector<FockState> enumerate(const StateFilter& filter) const;

 private:
  TruncationSpec spec_;
  FockState vacuum_ = 0;
  FockState safe_mask_ = 0;
};

/// Matrix of J_{r,s}(p) projected onto `basis`.
SparseMatrix build_density(const TruncatedChiralSpace& space, const DensityKey& key, const FockBasis& basis);

struct VerifyReport {
  std::string check;
  std::vector<std::pair<std::string, long>> dims;
  double max_residual = 0;
  int levels_compared = 0;
  bool pass = false;
  std::string detail;
  std::vector<double> levels_lhs;
  std::vector<double> levels_rhs;
  std::vector<int> degeneracies;
};

/// Schwinger term r·(L/ã)·p_s of [J_{r,s}(p), J_{r',s'}(p')] in units where
/// J = Σ :c†c: (equals (2π p_s/ã)(L/2π)² in the paper normalization).
double schwinger_value(const TruncatedChiralSpace& space, const DensityKey& a, const DensityKey& b);

struct SchwingerOptions {
  double tolerance = 1e-12;
  /// Larger safe sectors are replaced by a seeded uniform sample of this size.
  long max_states = 20000;
};

/// ([J_a, J_b] - schwinger_value)·ψ on every safe state of the involved branches.
VerifyReport schwinger_check(const TruncatedChiralSpace& space, const DensityKey& a, const DensityKey& b,
                             const SchwingerOptions& opts = {});

/// All pairs of density keys with |p_s| <= margin inside the χ-window.
VerifyReport schwinger_scan(const TruncatedChiralSpace& space, const SchwingerOptions& opts = {});

/// Adjoint relation J(p)ᵀ = J(-p) on the safe states of each branch and the
/// annihilation conditions J(p)Ω = 0 for r p_s >= 0.
VerifyReport theorem_a_identities(const TruncatedChiralSpace& space, double tolerance = 1e-12);

struct SpectralOptions {
  int levels = 0;  ///< 0: every level below the cutoff
  double tolerance = 1e-10;
  double energy_cap = std::numeric_limits<double>::infinity();
  double degeneracy_tol = 1e-8;
  long dense_limit = 4096;
};

/// Kinetic r Σ k :n_k: against (1/2M) Σ_p :J(-p)J(p): for one branch in the
/// neutral sector; compares every level up to v_F·W·(2π/L)/2.
VerifyReport kronig_check(const TruncatedChiralSpace& space, int r, int s, const SpectralOptions& opts = {});

/// Eq. (Hn) against Eq. (Hnboson) on the neutral sector (every branch charge 0).
VerifyReport hn_equivalence_check(const EffectiveParams& eff, const TruncatedChiralSpace& space,
                                  const SpectralOptions& opts = {});

/// Both Hamiltonians as matrices on `basis`, in units of v_F·2π/L.
struct NodalMatrices {
  SparseMatrix fermionic;
  SparseMatrix bosonic;
};
NodalMatrices build_nodal_hamiltonians(const EffectiveParams& eff, const TruncatedChiralSpace& space,
                                       const FockBasis& basis);

/// Group ascending eigenvalues into levels within tol; returns multiplicities.
std::vector<int> level_degeneracies(const std::vector<double>& eigenvalues, double tol);

}  // namespace lutt2d
