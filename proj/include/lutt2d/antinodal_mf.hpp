#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lutt2d/model_core.hpp"

namespace lutt2d {

/// n×n midpoint grid over Λ*_0: k± = (π/ã)(2i + 1 - n)/n.
struct AntinodalGrid {
  int n = 64;
  double a = 1.0;

  double k(int i) const;
  void validate() const;
};

/// Quasiparticle energies (E_plus, E_minus) = (R - μ_a, -R - μ_a) with
/// R = √(ε_a² + Δ²) and ε_a = c_F k+ k-.
std::pair<double, double> mf_bands(const Momentum& k, double Delta, const EffectiveParams& eff);

struct GapOptions {
  double T = 0.0;
  /// Initial gap; negative means t.
  double delta0 = -1.0;
  double damping = 0.5;
  int max_iterations = 20000;
  /// Stop when |gap_map(Δ) - Δ| <= tolerance·max(t, Δ); this also bounds the damped step.
  double tolerance = 1e-10;
  /// Convention constant λ between g3_eff and the kernel prefactor.
  double kernel_prefactor = 1.0;
};

struct GapSolution {
  double Delta = 0;
  int iterations = 0;
  double residual = 0;
  double filling_antinodal = 0;
  double g3_eff = 0;
  EffectiveParams params;
};

/// Right side of the gap equation λ(g3_eff/ã²)·avg_k[Δ/(2R)·(f(E-) - f(E+))].
double gap_map(const EffectiveParams& eff, double g3_eff, const AntinodalGrid& grid, double Delta,
               const GapOptions& opts);

/// avg_k[f(E-) + f(E+) - 1]/8: the :N_a:/𝒩 contribution.
double antinodal_filling(const EffectiveParams& eff, const AntinodalGrid& grid, double Delta, double T);

/// Damped fixed-point iteration of the gap equation with g3_eff from Eq. (g14).
/// Throws DomainError on oscillation or when the iteration cap is reached.
GapSolution solve_gap(const EffectiveParams& eff, const AntinodalGrid& grid, const GapOptions& opts = {});

struct BisectionResult {
  double Delta = 0;
  /// Sign changes of Δ⁻¹·gap_map(Δ) - 1 on a log grid of the bracket.
  int roots_seen = 0;
};

/// Independent oracle: bisection for the nontrivial root of gap_map(Δ)/Δ = 1.
BisectionResult bisection_gap(const EffectiveParams& eff, const AntinodalGrid& grid, const GapOptions& opts = {});

struct GapScanRow {
  double Q = 0;
  double V = 0;
  double T = 0;
  double Delta = 0;
  double filling = 0;
  int iterations = 0;
  double residual = 0;
  double dfilling_dmu = 0;
  bool gapped = false;
};

struct GapScan {
  std::vector<GapScanRow> rows;
  double threshold = 0;
  /// Q range of the gapped rows; empty when none.
  bool interval_found = false;
  double Q_low = 0;
  double Q_high = 0;
};

/// Δ(Q) at fixed t, V over the given Q values. A row is gapped when
/// Δ > threshold (default 1e-6·t) and the antinodal filling vanishes.
GapScan gap_phase_scan(double t, double V, double a, const std::vector<double>& Qs, const AntinodalGrid& grid,
                       const GapOptions& opts = {}, double threshold = -1.0);

}  // namespace lutt2d
