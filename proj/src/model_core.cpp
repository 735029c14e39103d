#include "lutt2d/model_core.hpp"

#include <array>
#include <cmath>

#include <fmt/core.h>

namespace lutt2d {

MicroParams::MicroParams(double t, double V, double a, int cells, double nu)
    : t_(t), V_(V), a_(a), cells_(cells), nu_requested_(nu) {
  if (!(t > 0.0)) throw DomainError(fmt::format("hopping t must be > 0, got {}", t));
  if (!(V >= 0.0)) throw DomainError(fmt::format("coupling V must be >= 0, got {}", V));
  if (!(a > 0.0)) throw DomainError(fmt::format("lattice constant a must be > 0, got {}", a));
  if (cells < 1 || cells % 2 == 0)
    throw DomainError(fmt::format("L/ã must be a positive odd integer, got {}", cells));
  if (!(nu >= 0.0 && nu <= 1.0)) throw DomainError(fmt::format("filling must lie in [0, 1], got {}", nu));
  // Commensurate fillings are ν = n / (2·cells).
  q_steps_ = static_cast<int>(std::lround(nu * 2.0 * cells));
  nu_ = static_cast<double>(q_steps_) / (2.0 * cells);
}

double MicroParams::Q() const { return kPi * nu_; }

MicroParams MicroParams::with_V(double V) const { return {t_, V, a_, cells_, nu_requested_}; }

MicroParams MicroParams::with_nu(double nu) const { return {t_, V_, a_, cells_, nu}; }

namespace {

constexpr std::array<RegionIndex, kRegionCount> kRegions{{
    {+1, 0},
    {-1, 0},
    {+1, +1},
    {+1, -1},
    {-1, +1},
    {-1, -1},
}};

}  // namespace

void validate(const RegionIndex& idx) {
  if ((idx.r != 1 && idx.r != -1) || idx.s < -1 || idx.s > 1)
    throw DomainError(fmt::format("invalid region index (r={}, s={})", idx.r, idx.s));
}

const RegionIndex* all_regions() { return kRegions.data(); }

int region_ordinal(const RegionIndex& idx) {
  validate(idx);
  for (int i = 0; i < kRegionCount; ++i)
    if (kRegions[i] == idx) return i;
  return -1;
}

std::string to_string(const RegionIndex& idx) {
  const char r = idx.r > 0 ? '+' : '-';
  const char s = idx.s == 0 ? '0' : (idx.s > 0 ? '+' : '-');
  return fmt::format("({},{})", r, s);
}

Momentum Momentum::from_cartesian(double k1, double k2) {
  return {(k1 + k2) / kSqrt2, (k1 - k2) / kSqrt2};
}

Momentum reduce_to_bz(const Momentum& k, double a) {
  const double period = 2.0 * kPi / a;
  auto wrap = [&](double x) {
    double y = std::fmod(x + kPi / a, period);
    if (y < 0) y += period;
    return y - kPi / a;
  };
  return Momentum::from_cartesian(wrap(k.k1()), wrap(k.k2()));
}

bool CutoffWindow::contains(const Momentum& p) const {
  return -bound <= p.k_plus && p.k_plus <= bound && -bound <= p.k_minus && p.k_minus <= bound;
}

namespace {

/// cos Q written so that Q = π/2 gives exactly 0.
double cos_q(double Q) { return std::sin(0.5 * kPi - Q); }

}  // namespace

double band_energy(const Momentum& k, double t, double a) {
  return -2.0 * t * (std::cos(a * k.k1()) + std::cos(a * k.k2()));
}

double linearized_band(const RegionIndex& idx, const Momentum& k, const EffectiveParams& eff) {
  validate(idx);
  if (idx.s == 0) return -idx.r * eff.c_F * k.k_plus * k.k_minus;
  return -4.0 * eff.t * cos_q(eff.Q) + idx.r * eff.v_F * k.component(idx.s);
}

double fermi_velocity(double t, double a, double Q) { return 2.0 * kSqrt2 * t * a * std::sin(Q); }

double antinodal_chemical_potential(double t, double V, double Q) {
  const double c = cos_q(Q);
  return -(4.0 * t + V / 4.0) * c + V * c * c * (1.0 - 2.0 * Q / kPi);
}

double microscopic_chemical_potential(double t, double V, double Q) {
  return antinodal_chemical_potential(t, V, Q) + 2.0 * Q * V / kPi;
}

double interaction_parameter(double t, double V, double Q) { return V * std::sin(Q) / (4.0 * kPi * t); }

double stability_bound(double t, double Q) { return 4.0 * kPi * t / std::sin(Q); }

EffectiveParams effective_params_at(double t, double V, double a, double Q) {
  if (!(Q > kPi / 4.0 && Q < 3.0 * kPi / 4.0))
    throw DomainError(fmt::format("Q = {} outside (π/4, 3π/4)", Q));
  EffectiveParams eff;
  eff.t = t;
  eff.V = V;
  eff.a = a;
  eff.Q = Q;
  eff.c_F = 2.0 * t * a * a;
  eff.v_F = fermi_velocity(t, a, Q);
  const double s = std::sin(Q);
  eff.g1 = 2.0 * V * s * s * a * a;
  eff.g2 = eff.g1 / 2.0;
  eff.g3 = 2.0 * V * a * a;
  eff.g4 = eff.g3;
  eff.mu_a = antinodal_chemical_potential(t, V, Q);
  eff.mu = microscopic_chemical_potential(t, V, Q);
  eff.gamma = interaction_parameter(t, V, Q);
  eff.stability = stability_check(eff);
  return eff;
}

EffectiveParams derive_effective_params(const MicroParams& p) {
  if (!(std::abs(p.nu() - 0.5) < 0.25))
    throw DomainError(fmt::format("effective model needs |ν - 1/2| < 1/4, got ν = {}", p.nu()));
  return effective_params_at(p.t(), p.V(), p.a(), p.Q());
}

Stability stability_check(const EffectiveParams& eff) {
  return eff.gamma < 1.0 ? Stability::stable : Stability::unstable;
}

}  // namespace lutt2d
