#include <doctest.h>

#include <cmath>
#include <random>

#include "lutt2d/zone_partition.hpp"

using namespace lutt2d;

namespace {

// Independent exact-cover oracle: try every region and every period shift of
// k − Q_{r,s} and count window hits.
int window_hits(const ZonePartition& zp, const GridPoint& k) {
  const int m = zp.grid().cells();
  const int P = zp.grid().period();
  int hits = 0;
  for (int i = 0; i < kRegionCount; ++i) {
    const RegionIndex idx = all_regions()[i];
    const GridPoint q = q_point_grid(idx, zp.q_steps(), m);
    for (int n1 = -2; n1 <= 2; ++n1)
      for (int n2 = -2; n2 <= 2; ++n2)
        if (zp.in_region(idx, {k.j1 - q.j1 + n1 * P, k.j2 - q.j2 + n2 * P})) ++hits;
  }
  return hits;
}

}  // namespace

TEST_CASE("q_point examples") {
  const Momentum p0 = q_point({1, 0}, 0.55 * kPi, 1.0);
  CHECK(p0.k1() == doctest::Approx(kPi));
  CHECK(std::abs(p0.k2()) < 1e-15);
  const Momentum pm = q_point({-1, -1}, kPi / 2, 1.0);
  CHECK(pm.k1() == doctest::Approx(-kPi / 2));
  CHECK(pm.k2() == doctest::Approx(kPi / 2));
  const Momentum pp = q_point({1, 1}, 0.55 * kPi, 1.0);
  CHECK(pp.k1() == doctest::Approx(0.55 * kPi));
  CHECK(pp.k2() == doctest::Approx(0.55 * kPi));
  const Momentum m0 = q_point({-1, 0}, 0.55 * kPi, 1.0);
  CHECK(std::abs(m0.k1()) < 1e-15);
  CHECK(m0.k2() == doctest::Approx(kPi));
  CHECK_THROWS_AS(q_point({1, 1}, 0.2 * kPi, 1.0), DomainError);
  CHECK_THROWS_AS(q_point({1, 1}, 0.76 * kPi, 1.0), DomainError);
}

TEST_CASE("grid geometry") {
  const BzGrid g(3);
  CHECK(g.size() == 72);
  const auto pts = g.points();
  CHECK(static_cast<long>(pts.size()) == 72);
  for (const auto& p : pts) {
    CHECK(g.contains(p));
    CHECK(g.from_momentum(g.to_momentum(p, 1.3), 1.3) == p);
  }
  CHECK(g.reduce({13, -12}) == GridPoint{1, 0});
}

TEST_CASE("exact cover on 6√2 and 10√2 lattices for every commensurate Q") {
  for (int m : {3, 5}) {
    for (int q = m / 2 + 1; 2 * q < 3 * m; ++q) {
      const ZonePartition zp(m, q);
      const RegionMap map(zp);
      const auto pred = zp.region_sizes();
      const auto mat = map.region_sizes();
      long total = 0;
      for (int i = 0; i < kRegionCount; ++i) {
        CHECK(pred[i] == mat[i]);
        total += pred[i];
      }
      CHECK(total == 8L * m * m);
      // Antinodal regions hold (L/ã)² points; ± reflections have equal size.
      CHECK(pred[0] == m * m);
      CHECK(pred[1] == m * m);
      CHECK(pred[2] == pred[4]);
      CHECK(pred[3] == pred[5]);
      for (const auto& k : zp.grid().points()) CHECK(window_hits(zp, k) == 1);
    }
  }
}

TEST_CASE("classification reconstructs k and q points classify to their own region") {
  const ZonePartition zp(5, 6);
  const RegionMap map(zp);
  const int P = zp.grid().period();
  for (std::size_t i = 0; i < map.points().size(); ++i) {
    const GridPoint k = map.points()[i];
    const Classification c = map.classes()[i];
    const GridPoint q = q_point_grid(c.region, zp.q_steps(), 5);
    CHECK(((q.j1 + c.local.j1 - k.j1) % P + P) % P == 0);
    CHECK(((q.j2 + c.local.j2 - k.j2) % P + P) % P == 0);
    CHECK(zp.in_region(c.region, c.local));
  }
  for (int i = 0; i < kRegionCount; ++i) {
    const RegionIndex idx = all_regions()[i];
    const GridPoint q = q_point_grid(idx, zp.q_steps(), 5);
    // Smallest half-integer offset k' = (1/2, 1/2)·2π/L onto the fermion grid.
    const Classification c = zp.classify(zp.grid().reduce({q.j1 + 1, q.j2}));
    CHECK(c.region == idx);
    CHECK(c.local == GridPoint{1, 0});
  }
  // The (+,0) centre.
  const Classification c = zp.classify(Momentum::from_cartesian(kPi + kPi / 10, 0.0), 1.0);
  CHECK(c.region == RegionIndex{1, 0});
}

TEST_CASE("classify rejects off-grid points") {
  const ZonePartition zp(3, 3);
  CHECK_THROWS_AS(zp.classify(GridPoint{0, 0}), DomainError);
  CHECK_THROWS_AS(ZonePartition(3, 1), DomainError);
}

TEST_CASE("filling fractions") {
  const auto f = filling_fractions(kPi / 2);
  CHECK(f[0] == 1.0 / 16);
  CHECK(f[1] == 1.0 / 16);
  for (int i = 2; i < 6; ++i) CHECK(f[i] == doctest::Approx(3.0 / 32).epsilon(1e-15));
  const auto g = filling_fractions(0.6 * kPi);
  for (int i = 2; i < 6; ++i) CHECK(g[i] == doctest::Approx(0.11875).epsilon(1e-14));
  double s55 = 0;
  for (double x : filling_fractions(0.55 * kPi)) s55 += x;
  CHECK(s55 == doctest::Approx(0.55).epsilon(1e-14));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(kPi / 4, 3 * kPi / 4);
  for (int i = 0; i < 10000; ++i) {
    const double Q = u(rng);
    double s = 0;
    for (double x : filling_fractions(Q)) s += x;
    REQUIRE(std::abs(s - Q / kPi) <= 1e-14);
  }
}
