#include "lutt2d/nodal_boson.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <fmt/core.h>

namespace lutt2d {

namespace {

void require_stable(const EffectiveParams& eff) {
  if (!(eff.gamma < 1.0))
    throw DomainError(fmt::format("unstable coupling: gamma = {} >= 1 (V >= 4πt/sin Q)", eff.gamma));
}

double clamp_radicand(double x, double scale, const char* what) {
  if (x < -1e-12 * scale) throw std::logic_error(fmt::format("negative {} radicand {}", what, x));
  return std::max(x, -1e-15) < 0.0 ? 0.0 : x;
}

}  // namespace

std::string to_string(DispersionSource s) { return s == DispersionSource::closed_form ? "closed-form" : "numeric"; }

QuadraticBosonForm boson_form(const Momentum& p, const EffectiveParams& eff) {
  const double g = eff.gamma;
  QuadraticBosonForm f;
  f.p = p;
  f.stiffness << (1.0 + g) * p.k_plus * p.k_plus, g * p.k_plus * p.k_minus, g * p.k_plus * p.k_minus,
      (1.0 + g) * p.k_minus * p.k_minus;
  f.stiffness *= eff.v_F;
  f.kinetic = eff.v_F * (1.0 - g);
  return f;
}

DispersionResult closed_form_dispersion(const Momentum& p, const EffectiveParams& eff) {
  require_stable(eff);
  const double g = eff.gamma;
  const double p2 = p.norm2();
  const double cross = 2.0 * p.k_plus * p.k_minus;
  const double ratio = g / (1.0 + g);
  const double scale = std::max(p2 * p2, 1e-300);
  const double inner = std::sqrt(clamp_radicand(p2 * p2 - (1.0 - ratio * ratio) * cross * cross, scale, "inner"));
  const double pref = eff.v_F / (2.0 * kSqrt2) * std::sqrt(1.0 - g * g);
  DispersionResult r;
  r.p = p;
  r.omega_plus = pref * std::sqrt(clamp_radicand(p2 + inner, std::sqrt(scale), "outer"));
  r.omega_minus = pref * std::sqrt(clamp_radicand(p2 - inner, std::sqrt(scale), "outer"));
  r.source = DispersionSource::closed_form;
  return r;
}

DispersionResult numeric_dispersion(const Momentum& p, const EffectiveParams& eff) {
  require_stable(eff);
  const QuadraticBosonForm f = boson_form(p, eff);
  // The kinetic block is a multiple of the identity, so kinetic·stiffness is
  // symmetric and its eigenvalues are the squared normal-mode frequencies.
  const Eigen::Matrix2d dyn = f.kinetic * f.stiffness;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(dyn, Eigen::EigenvaluesOnly);
  const double scale = std::max(eff.v_F * eff.v_F * p.norm2(), 1e-300);
  const double lo = es.eigenvalues()[0];
  const double hi = es.eigenvalues()[1];
  if (lo < -1e-12 * scale)
    throw DomainError(fmt::format("unstable normal mode: omega^2 = {} at p = ({}, {})", lo, p.k_plus, p.k_minus));
  DispersionResult r;
  r.p = p;
  r.omega_minus = std::sqrt(std::max(lo, 0.0));
  r.omega_plus = std::sqrt(std::max(hi, 0.0));
  r.source = DispersionSource::numeric;
  return r;
}

double measure_calibration(double v_F, double a) {
  EffectiveParams free;
  free.v_F = v_F;
  free.a = a;
  free.gamma = 0.0;
  const Momentum ref{1.0 / a, 1.0 / a};
  return numeric_dispersion(ref, free).omega_plus / closed_form_dispersion(ref, free).omega_plus;
}

std::vector<Momentum> BosonGrid::momenta() const {
  if (cells < 1) throw DomainError(fmt::format("boson grid needs at least one point per axis, got {}", cells));
  // Odd cells: exactly the closed window |n| <= (cells-1)/2. Even cells use
  // the half-open convention so both axes keep `cells` points.
  const int lo = -(cells / 2);
  const int hi = lo + cells - 1;
  const double unit = 2.0 * kPi / L();
  std::vector<Momentum> out;
  out.reserve(static_cast<std::size_t>(cells) * cells);
  for (int nm = lo; nm <= hi; ++nm)
    for (int np = lo; np <= hi; ++np) out.push_back({unit * np, unit * nm});
  return out;
}

std::vector<double> mode_frequencies(const EffectiveParams& eff, const BosonGrid& grid, long* zero_modes) {
  const double floor = 1e-12 * eff.v_F * kPi / (2.0 * kSqrt2 * grid.a);
  std::vector<double> out;
  long zeros = 0;
  for (const auto& p : grid.momenta()) {
    const DispersionResult d = numeric_dispersion(p, eff);
    for (double w : {d.omega_plus, d.omega_minus}) {
      if (w <= floor)
        ++zeros;
      else
        out.push_back(w);
    }
  }
  if (zero_modes) *zero_modes = zeros;
  return out;
}

double ground_constant(const EffectiveParams& eff, const BosonGrid& grid) {
  require_stable(eff);
  EffectiveParams free = eff;
  free.gamma = 0.0;
  double acc = 0.0;
  for (const auto& p : grid.momenta()) {
    const DispersionResult w = numeric_dispersion(p, eff);
    const DispersionResult w0 = numeric_dispersion(p, free);
    acc += (w.omega_plus - w0.omega_plus) + (w.omega_minus - w0.omega_minus);
  }
  return 0.5 * acc;
}

ThermoResult free_energy(const EffectiveParams& eff, const BosonGrid& grid, const std::vector<double>& temperatures) {
  ThermoResult r;
  r.E_n = ground_constant(eff, grid);
  r.grid_cells = grid.cells;
  r.window = kPi / (2.0 * kSqrt2 * grid.a);
  const std::vector<double> omegas = mode_frequencies(eff, grid, &r.zero_modes);
  r.modes = static_cast<long>(omegas.size());
  for (double T : temperatures) {
    if (!(T >= 0.0)) throw DomainError(fmt::format("temperature must be >= 0, got {}", T));
    double f = r.E_n;
    if (T > 0.0) {
      double acc = 0.0;
      for (double w : omegas) acc += std::log1p(-std::exp(-w / T));
      f += T * acc;
    }
    r.table.emplace_back(T, f);
  }
  return r;
}

std::pair<double, double> effective_antinodal_couplings(const EffectiveParams& eff) {
  require_stable(eff);
  const double s = std::sin(eff.Q);
  const double g3 = 2.0 * eff.V * eff.a * eff.a * (1.0 - eff.V / (2.0 * s * (2.0 * kPi * eff.t + eff.V * s)));
  return {g3, 0.0};
}

}  // namespace lutt2d
