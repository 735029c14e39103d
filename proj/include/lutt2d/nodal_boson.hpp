#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lutt2d/model_core.hpp"

namespace lutt2d {

/// Per-momentum quadratic form of the bosonized nodal Hamiltonian:
/// H(p) = ½ [kinetic·|Π(p)|² + Φ(-p)ᵀ stiffness Φ(p)] with Φ = (Φ+, Φ-).
struct QuadraticBosonForm {
  Momentum p;
  /// v_F·[[(1+γ)p+², γ p+ p-], [γ p+ p-, (1+γ)p-²]]
  Eigen::Matrix2d stiffness;
  /// v_F·(1-γ)
  double kinetic = 0;
};

QuadraticBosonForm boson_form(const Momentum& p, const EffectiveParams& eff);

enum class DispersionSource { closed_form, numeric };
std::string to_string(DispersionSource s);

struct DispersionResult {
  Momentum p;
  double omega_plus = 0;
  double omega_minus = 0;
  DispersionSource source = DispersionSource::closed_form;
};

/// Closed-form ω±(p); throws DomainError("unstable ...") for γ >= 1.
DispersionResult closed_form_dispersion(const Momentum& p, const EffectiveParams& eff);

/// Normal-mode frequencies of boson_form(p): ω² are the eigenvalues of
/// kinetic·stiffness. Throws DomainError for γ >= 1 or ω² < -1e-12·scale.
DispersionResult numeric_dispersion(const Momentum& p, const EffectiveParams& eff);

/// κ = ω_numeric / ω_closed, measured once at γ = 0 on a reference momentum.
double measure_calibration(double v_F, double a);

/// Difference momenta of the boson mode sums: p± = (2π/L) n± inside the
/// cutoff window, `cells` = L/ã values per axis.
struct BosonGrid {
  int cells = 9;
  double a = 1.0;

  double L() const { return cells * 2.0 * kSqrt2 * a; }
  std::vector<Momentum> momenta() const;
};

struct ThermoResult {
  double E_n = 0;
  /// (T, F(T))
  std::vector<std::pair<double, double>> table;
  int grid_cells = 0;
  double window = 0;
  long modes = 0;
  long zero_modes = 0;
  std::string frequency_convention = "normal-mode";
  std::string normal_ordering = "gamma0-subtraction";
};

/// Physical (normal-mode) frequencies on the grid, zero modes removed.
std::vector<double> mode_frequencies(const EffectiveParams& eff, const BosonGrid& grid, long* zero_modes = nullptr);

/// E_n = ½ Σ_p Σ_s [ω_s(p) - ω_s⁰(p)], γ = 0 reference.
double ground_constant(const EffectiveParams& eff, const BosonGrid& grid);

/// F(T) = E_n + T Σ log(1 - exp(-ω/T)); T = 0 gives E_n.
ThermoResult free_energy(const EffectiveParams& eff, const BosonGrid& grid, const std::vector<double>& temperatures);

/// Boson-integrated antinodal couplings (g3_eff, g4_eff).
std::pair<double, double> effective_antinodal_couplings(const EffectiveParams& eff);

}  // namespace lutt2d
