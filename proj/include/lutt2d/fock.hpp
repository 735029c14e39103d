#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Sparse>

namespace lutt2d {

/// Occupation bitstring; bit i is mode i. Up to 128 modes.
using FockState = unsigned __int128;
inline constexpr int kMaxModes = 128;

inline FockState mode_bit(int i) { return FockState{1} << i; }
inline bool occupied(FockState s, int i) { return ((s >> i) & 1) != 0; }

inline int popcount(FockState s) {
  return std::popcount(static_cast<std::uint64_t>(s)) + std::popcount(static_cast<std::uint64_t>(s >> 64));
}

/// Number of occupied modes with index strictly below i.
inline int occupied_below(FockState s, int i) { return i == 0 ? 0 : popcount(s & (mode_bit(i) - 1)); }

/// c†_to c_from |s> in Jordan-Wigner ordering by mode index. Returns false
/// when the result vanishes; otherwise writes the image and its sign.
inline bool apply_hop(FockState s, int to, int from, FockState& out, double& sign) {
  if (!occupied(s, from)) return false;
  FockState t = s & ~mode_bit(from);
  if (occupied(t, to)) return false;
  int swaps = occupied_below(s, from) + occupied_below(t, to);
  out = t | mode_bit(to);
  sign = (swaps & 1) ? -1.0 : 1.0;
  return true;
}

/// Sorted list of basis states with binary-search lookup.
class FockBasis {
 public:
  FockBasis() = default;
  FockBasis(int modes, std::vector<FockState> states);

  static FockBasis full(int modes);
  static FockBasis fixed_number(int modes, int particles);

  int modes() const { return modes_; }
  long size() const { return static_cast<long>(states_.size()); }
  FockState state(long i) const { return states_[static_cast<std::size_t>(i)]; }
  const std::vector<FockState>& states() const { return states_; }
  /// -1 when absent.
  long index(FockState s) const;

 private:
  int modes_ = 0;
  std::vector<FockState> states_;
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// One (image, amplitude) pair produced by an operator acting on a basis state.
struct FockAmplitude {
  FockState state;
  double value;
};

/// Generator of O|s>: appends amplitudes for the given state.
using FockAction = std::function<void(FockState, std::vector<FockAmplitude>&)>;

struct BuildStats {
  /// Amplitudes whose image lies outside the basis (dropped).
  long leaked = 0;
};

/// Matrix of `action` on `basis`, projected onto the basis. Columns are
/// generated independently and merged in a fixed order, so the result does
/// not depend on the number of worker threads.
SparseMatrix build_operator(const FockBasis& basis, const FockAction& action, BuildStats* stats = nullptr);

/// Row-wise absolute sum bound on the spectral norm.
double norm_bound(const SparseMatrix& m);
/// max |m - m^T|.
double hermiticity_defect(const SparseMatrix& m);

}  // namespace lutt2d
