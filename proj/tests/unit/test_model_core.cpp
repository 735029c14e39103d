#include <doctest.h>

#include <cmath>
#include <random>

#include "lutt2d/model_core.hpp"

using namespace lutt2d;

namespace {

// Oracle closed forms written out independently of the library.
double oracle_vF(double t, double a, double Q) { return 2.0 * std::sqrt(2.0) * t * a * std::sin(Q); }
double oracle_mua(double t, double V, double Q) {
  const double pi = std::acos(-1.0);
  return -4.0 * t * std::cos(Q) - V * std::cos(Q) / 4.0 + V * std::cos(Q) * std::cos(Q) * (1.0 - 2.0 * Q / pi);
}
double oracle_gamma(double t, double V, double Q) { return V * std::sin(Q) / (4.0 * std::acos(-1.0) * t); }

bool rel_close(double x, double y, double tol) { return std::abs(x - y) <= tol * std::max(1.0, std::abs(y)); }

}  // namespace

TEST_CASE("band_energy extremes and the half-filled square") {
  CHECK(band_energy(Momentum::from_cartesian(0, 0), 1.0, 1.0) == doctest::Approx(-4.0).epsilon(1e-15));
  CHECK(band_energy(Momentum::from_cartesian(kPi, kPi), 1.0, 1.0) == doctest::Approx(4.0).epsilon(1e-15));
  for (double k1 : {0.1, 0.7, 1.3, 2.9}) {
    CHECK(std::abs(band_energy(Momentum::from_cartesian(k1, kPi - k1), 1.0, 1.0)) < 1e-14);
  }
}

TEST_CASE("particle-hole covariance of the band") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int i = 0; i < 1000; ++i) {
    const double k1 = u(rng), k2 = u(rng);
    const double e = band_energy(Momentum::from_cartesian(k1, k2), 1.3, 1.0);
    const double e_shift = band_energy(Momentum::from_cartesian(k1 + kPi, k2 + kPi), 1.3, 1.0);
    CHECK(std::abs(e + e_shift) < 1e-13);
  }
}

TEST_CASE("rotated coordinates invert exactly and reduce into the BZ") {
  const Momentum k = Momentum::from_cartesian(0.3, -1.1);
  CHECK(k.k1() == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(k.k2() == doctest::Approx(-1.1).epsilon(1e-15));
  const Momentum r = reduce_to_bz(Momentum::from_cartesian(0.3 + 4 * kPi, -1.1 - 2 * kPi), 1.0);
  CHECK(r.k1() == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(r.k2() == doctest::Approx(-1.1).epsilon(1e-12));
  const Momentum edge = reduce_to_bz(Momentum::from_cartesian(kPi, 0.0), 1.0);
  CHECK(edge.k1() >= -kPi);
  CHECK(edge.k1() < kPi);
}

TEST_CASE("cutoff window is closed on both ends") {
  const CutoffWindow w = CutoffWindow::for_lattice(1.0);
  CHECK(w.bound == doctest::Approx(kPi / (2 * std::sqrt(2.0))));
  CHECK(w.contains({w.bound, -w.bound}));
  CHECK_FALSE(w.contains({w.bound * (1 + 1e-12), 0.0}));
}

TEST_CASE("linearized band examples") {
  const EffectiveParams eff = effective_params_at(1.0, 2.0, 1.0, kPi / 2);
  CHECK(linearized_band({1, 0}, {0, 0}, eff) == 0.0);
  CHECK(std::abs(linearized_band({1, 1}, {0, 0}, eff)) < 1e-15);
  // −2√2·0.1
  CHECK(linearized_band({-1, 1}, {0.1, 0.0}, eff) == doctest::Approx(-0.28284271247461906).epsilon(1e-12));
  CHECK(linearized_band({1, 0}, {0.5, 0.3}, eff) == doctest::Approx(-2.0 * 0.15));
  CHECK_THROWS_AS(linearized_band({1, 2}, {0, 0}, eff), DomainError);
  CHECK_THROWS_AS(linearized_band({0, 1}, {0, 0}, eff), DomainError);
}

TEST_CASE("effective parameters against independent closed forms") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uq(kPi / 4 + 1e-3, 3 * kPi / 4 - 1e-3);
  std::uniform_real_distribution<double> uv(0.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const double Q = uq(rng), V = uv(rng), t = 0.5 + 0.01 * i, a = 0.7;
    const EffectiveParams e = effective_params_at(t, V, a, Q);
    CHECK(rel_close(e.v_F, oracle_vF(t, a, Q), 1e-12));
    CHECK(rel_close(e.c_F, 2 * t * a * a, 1e-12));
    CHECK(rel_close(e.g1, 2 * e.g2, 1e-12));
    CHECK(rel_close(e.g3, 2 * V * a * a, 1e-12));
    CHECK(e.g4 == e.g3);
    CHECK(rel_close(e.mu_a, oracle_mua(t, V, Q), 1e-12));
    CHECK(rel_close(e.gamma, oracle_gamma(t, V, Q), 1e-12));
    CHECK((e.stability == Stability::stable) == (e.gamma < 1.0));
  }
}

TEST_CASE("spec example t=1 a=1 V=2 nu=0.55") {
  const EffectiveParams e = effective_params_at(1.0, 2.0, 1.0, 0.55 * kPi);
  CHECK(e.Q == doctest::Approx(0.55 * kPi).epsilon(1e-15));
  CHECK(e.c_F == 2.0);
  CHECK(e.g3 == 4.0);
  CHECK(e.g4 == 4.0);
  // Quoted to about five digits.
  CHECK(e.v_F == doctest::Approx(2.793527).epsilon(1e-4));
  CHECK(e.g1 == doctest::Approx(3.902113).epsilon(1e-6));
  CHECK(e.g2 == doctest::Approx(1.951056).epsilon(1e-6));
  CHECK(e.mu_a == doctest::Approx(0.699059).epsilon(1e-5));
  CHECK(e.v_F == doctest::Approx(oracle_vF(1, 1, 0.55 * kPi)).epsilon(1e-14));
}

TEST_CASE("mu_a antisymmetry and the half-filled zero") {
  CHECK(antinodal_chemical_potential(1.0, 3.0, kPi / 2) == 0.0);
  for (int i = 0; i < 100; ++i) {
    const double Q = kPi / 4 + (i + 0.5) * (kPi / 2) / 100;
    CHECK(std::abs(antinodal_chemical_potential(1.0, 2.5, Q) + antinodal_chemical_potential(1.0, 2.5, kPi - Q)) <
          1e-12);
  }
  const EffectiveParams lo = effective_params_at(1.0, 2.0, 1.0, 0.45 * kPi);
  const EffectiveParams hi = effective_params_at(1.0, 2.0, 1.0, 0.55 * kPi);
  CHECK(lo.v_F == doctest::Approx(hi.v_F).epsilon(1e-14));
  CHECK(lo.g1 == doctest::Approx(hi.g1).epsilon(1e-14));
  CHECK(lo.gamma == doctest::Approx(hi.gamma).epsilon(1e-14));
  CHECK(lo.mu_a == doctest::Approx(-hi.mu_a).epsilon(1e-12));
}

TEST_CASE("stability examples and boundary") {
  CHECK(stability_check(effective_params_at(1, 2, 1, kPi / 2)) == Stability::stable);
  CHECK(effective_params_at(1, 2, 1, kPi / 2).gamma == doctest::Approx(0.159155).epsilon(1e-6));
  CHECK(stability_check(effective_params_at(1, 4 * kPi, 1, kPi / 2)) == Stability::unstable);
  CHECK(effective_params_at(1, 0, 1, kPi / 2).gamma == 0.0);
  CHECK(stability_bound(1.0, kPi / 2) == doctest::Approx(4 * kPi));
}

TEST_CASE("MicroParams commensurate rounding") {
  const MicroParams p(1.0, 2.0, 1.0, 9, 0.55);
  CHECK(p.sites() == 8 * 81);
  CHECK(p.L() == doctest::Approx(9 * 2 * std::sqrt(2.0)));
  // Q lies on the lattice of steps √2πa/L and moved by at most half a step.
  const double step = std::sqrt(2.0) * kPi * p.a() / p.L();
  CHECK(p.Q() / step == doctest::Approx(std::round(p.Q() / step)).epsilon(1e-12));
  CHECK(std::abs(p.Q() - kPi * 0.55) <= 0.5 * step + 1e-15);
  CHECK(p.nu_rounding() == doctest::Approx(p.nu() - 0.55));
  CHECK_THROWS_AS(MicroParams(1.0, 2.0, 1.0, 4, 0.55), DomainError);
  CHECK_THROWS_AS(MicroParams(-1.0, 2.0, 1.0, 3, 0.55), DomainError);
  CHECK_THROWS_AS(derive_effective_params(MicroParams(1.0, 2.0, 1.0, 9, 0.9)), DomainError);
  const EffectiveParams e = derive_effective_params(p);
  CHECK(e.Q == p.Q());
  CHECK(e.mu == doctest::Approx(microscopic_chemical_potential(1, 2, p.Q())));
}

TEST_CASE("effective_params_at rejects Q outside the model interval") {
  CHECK_THROWS_AS(effective_params_at(1, 1, 1, 0.2 * kPi), DomainError);
  CHECK_THROWS_AS(effective_params_at(1, 1, 1, 0.8 * kPi), DomainError);
}
