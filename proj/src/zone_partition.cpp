#include "lutt2d/zone_partition.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

namespace lutt2d {

namespace {

int wrap_into(int x, int lo, int period) {
  int y = (x - lo) % period;
  if (y < 0) y += period;
  return y + lo;
}

}  // namespace

BzGrid::BzGrid(int cells) : cells_(cells) {
  if (cells < 1 || cells % 2 == 0)
    throw DomainError(fmt::format("L/ã must be a positive odd integer, got {}", cells));
}

bool BzGrid::contains(const GridPoint& g) const {
  const int h = 2 * cells_;
  return g.j1 >= -h && g.j1 < h && g.j2 >= -h && g.j2 < h && ((g.j1 + g.j2) & 1) != 0;
}

GridPoint BzGrid::reduce(GridPoint g) const {
  g.j1 = wrap_into(g.j1, -2 * cells_, period());
  g.j2 = wrap_into(g.j2, -2 * cells_, period());
  return g;
}

std::vector<GridPoint> BzGrid::points() const {
  std::vector<GridPoint> out;
  out.reserve(static_cast<std::size_t>(size()));
  const int h = 2 * cells_;
  for (int j2 = -h; j2 < h; ++j2)
    for (int j1 = -h; j1 < h; ++j1)
      if (((j1 + j2) & 1) != 0) out.push_back({j1, j2});
  return out;
}

Momentum BzGrid::to_momentum(const GridPoint& g, double a) const {
  const double unit = kPi / (2.0 * cells_ * a);
  return Momentum::from_cartesian(unit * g.j1, unit * g.j2);
}

GridPoint BzGrid::from_momentum(const Momentum& k, double a) const {
  const double unit = kPi / (2.0 * cells_ * a);
  return {static_cast<int>(std::lround(k.k1() / unit)), static_cast<int>(std::lround(k.k2() / unit))};
}

Momentum q_point(const RegionIndex& idx, double Q, double a) {
  validate(idx);
  if (!(Q > kPi / 4.0 && Q < 3.0 * kPi / 4.0))
    throw DomainError(fmt::format("Q = {} outside (π/4, 3π/4)", Q));
  if (idx.s == 0) return idx.r > 0 ? Momentum::from_cartesian(kPi / a, 0.0) : Momentum::from_cartesian(0.0, kPi / a);
  return Momentum::from_cartesian(idx.r * Q / a, idx.r * idx.s * Q / a);
}

GridPoint q_point_grid(const RegionIndex& idx, int q_steps, int cells) {
  validate(idx);
  if (idx.s == 0) return idx.r > 0 ? GridPoint{2 * cells, 0} : GridPoint{0, 2 * cells};
  return {idx.r * q_steps, idx.r * idx.s * q_steps};
}

ZonePartition::ZonePartition(int cells, int q_steps) : grid_(cells), q_steps_(q_steps) {
  // π/4 < Q < 3π/4 with Q = π n / (2 cells)
  if (!(2 * q_steps > cells && 2 * q_steps < 3 * cells))
    throw DomainError(fmt::format("Q = π·{}/{} outside (π/4, 3π/4)", q_steps, 2 * cells));
}

bool ZonePartition::in_region(const RegionIndex& idx, const GridPoint& k) const {
  const int m = grid_.cells();
  auto half_open = [m](int x) { return -m <= x && x < m; };
  if (idx.s == 0) return half_open(k.j1 + k.j2) && half_open(k.j1 - k.j2);
  const int shift = q_steps_ - m;  // (Q - π/2) in grid units
  return half_open(k.j1 - idx.s * k.j2) && half_open(k.j1 + idx.r * shift) &&
         half_open(k.j2 + idx.r * idx.s * shift);
}

GridPoint ZonePartition::local_representative(const RegionIndex& idx, const GridPoint& k) const {
  const int m = grid_.cells();
  const GridPoint q = q_point_grid(idx, q_steps_, m);
  int c1 = 0;
  int c2 = 0;
  if (idx.s != 0) {
    const int shift = q_steps_ - m;
    c1 = -idx.r * shift;
    c2 = -idx.r * idx.s * shift;
  }
  return {wrap_into(k.j1 - q.j1, c1 - 2 * m, grid_.period()), wrap_into(k.j2 - q.j2, c2 - 2 * m, grid_.period())};
}

Classification ZonePartition::classify(const GridPoint& k) const {
  if (!grid_.contains(k)) throw DomainError(fmt::format("({}, {}) is not a BZ grid point", k.j1, k.j2));
  const RegionIndex* regions = all_regions();
  int hits = 0;
  Classification out{};
  for (int i = 0; i < kRegionCount; ++i) {
    const GridPoint local = local_representative(regions[i], k);
    if (in_region(regions[i], local)) {
      ++hits;
      out = {regions[i], local};
    }
  }
  if (hits != 1)
    throw std::logic_error(fmt::format("BZ point ({}, {}) matched {} regions", k.j1, k.j2, hits));
  return out;
}

Classification ZonePartition::classify(const Momentum& k, double a) const {
  return classify(grid_.from_momentum(reduce_to_bz(k, a), a));
}

std::array<long, kRegionCount> ZonePartition::region_sizes() const {
  std::array<long, kRegionCount> sizes{};
  const RegionIndex* regions = all_regions();
  const int m = grid_.cells();
  // Enumerate candidate local momenta directly from the windows.
  for (int i = 0; i < kRegionCount; ++i)
    for (int j2 = -3 * m; j2 <= 3 * m; ++j2)
      for (int j1 = -3 * m; j1 <= 3 * m; ++j1)
        if (((j1 + j2) & 1) != 0 && in_region(regions[i], {j1, j2})) ++sizes[i];
  return sizes;
}

RegionMap::RegionMap(const ZonePartition& zp) : points_(zp.grid().points()) {
  classes_.reserve(points_.size());
  for (const auto& k : points_) {
    classes_.push_back(zp.classify(k));
    members_[region_ordinal(classes_.back().region)].push_back(classes_.back().local);
  }
}

std::array<long, kRegionCount> RegionMap::region_sizes() const {
  std::array<long, kRegionCount> sizes{};
  for (int i = 0; i < kRegionCount; ++i) sizes[i] = static_cast<long>(members_[i].size());
  return sizes;
}

std::array<double, kRegionCount> filling_fractions(double Q) {
  if (!(Q > kPi / 4.0 && Q < 3.0 * kPi / 4.0))
    throw DomainError(fmt::format("Q = {} outside (π/4, 3π/4)", Q));
  const double nodal = (Q / kPi - 0.125) / 4.0;
  return {1.0 / 16.0, 1.0 / 16.0, nodal, nodal, nodal, nodal};
}

}  // namespace lutt2d
