#pragma once

#include <array>
#include <vector>

#include "lutt2d/model_core.hpp"

namespace lutt2d {

/// Brillouin-zone point on the rotated half-integer grid, stored as integer
/// cartesian coordinates: a·k_i = π j_i / (2·cells). BZ points have
/// -2·cells <= j_i < 2·cells and j1 + j2 odd; difference momenta and the
/// points Q_{r,s}/a have j1 + j2 even.
struct GridPoint {
  int j1 = 0;
  int j2 = 0;

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

/// Geometry of the (L/a)^2 lattice in momentum space.
class BzGrid {
 public:
  explicit BzGrid(int cells);

  int cells() const { return cells_; }
  /// Period of j_i (2π/a in grid units).
  int period() const { return 4 * cells_; }
  long size() const { return 8L * cells_ * cells_; }

  bool contains(const GridPoint& g) const;
  GridPoint reduce(GridPoint g) const;
  /// All BZ points in a fixed (j2-major, j1-minor) order.
  std::vector<GridPoint> points() const;

  Momentum to_momentum(const GridPoint& g, double a) const;
  /// Exact inverse of to_momentum for grid-aligned input.
  GridPoint from_momentum(const Momentum& k, double a) const;

  /// Odd-half-integer index m with k± = (2π/L)(m + 1/2).
  static int plus_index(const GridPoint& g) { return floor_half(g.j1 + g.j2 - 1); }
  static int minus_index(const GridPoint& g) { return floor_half(g.j1 - g.j2 - 1); }

 private:
  static int floor_half(int x) { return x >= 0 ? x / 2 : -((-x + 1) / 2); }
  int cells_;
};

/// Q_{r,s}/a for π/4 < Q < 3π/4.
Momentum q_point(const RegionIndex& idx, double Q, double a);
/// Q_{r,s}/a in grid units; Q = π q_steps / (2·cells).
GridPoint q_point_grid(const RegionIndex& idx, int q_steps, int cells);

struct Classification {
  RegionIndex region;
  GridPoint local;  // k' with k = [Q_{r,s}/a + k']
};

/// Six-region partition of the BZ for a commensurate Q.
class ZonePartition {
 public:
  /// Requires cells/2 < q_steps < 3·cells/2 (π/4 < Q < 3π/4).
  ZonePartition(int cells, int q_steps);
  explicit ZonePartition(const MicroParams& p) : ZonePartition(p.cells(), p.q_steps()) {}

  const BzGrid& grid() const { return grid_; }
  int q_steps() const { return q_steps_; }

  /// Window test for a local momentum k' relative to Q_{r,s}/a.
  bool in_region(const RegionIndex& idx, const GridPoint& local) const;
  /// Unique (r, s, k'); throws std::logic_error if the partition fails.
  Classification classify(const GridPoint& k) const;
  Classification classify(const Momentum& k, double a) const;

  /// Region sizes by evaluating the window predicates point by point.
  std::array<long, kRegionCount> region_sizes() const;

 private:
  GridPoint local_representative(const RegionIndex& idx, const GridPoint& k) const;

  BzGrid grid_;
  int q_steps_;
};

/// Materialized k ↦ (r, s, k') map with per-region member lists.
class RegionMap {
 public:
  explicit RegionMap(const ZonePartition& zp);

  const std::vector<GridPoint>& points() const { return points_; }
  const std::vector<Classification>& classes() const { return classes_; }
  const std::vector<GridPoint>& members(const RegionIndex& idx) const {
    return members_[region_ordinal(idx)];
  }
  std::array<long, kRegionCount> region_sizes() const;

 private:
  std::vector<GridPoint> points_;
  std::vector<Classification> classes_;
  std::array<std::vector<GridPoint>, kRegionCount> members_;
};

/// ν_{r,s} for the reference state; entries follow all_regions() order.
std::array<double, kRegionCount> filling_fractions(double Q);

}  // namespace lutt2d
