#include "lutt2d/antinodal_mf.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "lutt2d/nodal_boson.hpp"

namespace lutt2d {

namespace {

double fermi(double E, double T) {
  if (T == 0.0) return E < 0.0 ? 1.0 : (E > 0.0 ? 0.0 : 0.5);
  return 0.5 * (1.0 - std::tanh(0.5 * E / T));
}

/// Deterministic grid average: rows summed in parallel, rows combined in order.
template <class F>
double grid_average(const AntinodalGrid& grid, F&& term) {
  std::vector<double> rows(static_cast<std::size_t>(grid.n), 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < grid.n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < grid.n; ++j) acc += term(grid.k(i), grid.k(j));
    rows[static_cast<std::size_t>(i)] = acc;
  }
  double total = 0.0;
  for (double r : rows) total += r;
  return total / (static_cast<double>(grid.n) * grid.n);
}

double coupling(const EffectiveParams& eff, double g3_eff, const GapOptions& opts) {
  return opts.kernel_prefactor * g3_eff / (eff.a_tilde() * eff.a_tilde());
}

/// λ(g/ã²)·avg[w/(2R)] - 1 for Δ > 0.
double gap_function(const EffectiveParams& eff, double g3_eff, const AntinodalGrid& grid, double Delta,
                    const GapOptions& opts) {
  return gap_map(eff, g3_eff, grid, Delta, opts) / Delta - 1.0;
}

}  // namespace

double AntinodalGrid::k(int i) const {
  return kPi / (2.0 * kSqrt2 * a) * static_cast<double>(2 * i + 1 - n) / static_cast<double>(n);
}

void AntinodalGrid::validate() const {
  if (n < 2) throw DomainError(fmt::format("antinodal grid needs n >= 2, got {}", n));
  if (!(a > 0.0)) throw DomainError(fmt::format("lattice constant must be positive, got {}", a));
}

std::pair<double, double> mf_bands(const Momentum& k, double Delta, const EffectiveParams& eff) {
  const double eps = eff.c_F * k.k_plus * k.k_minus;
  const double R = std::hypot(eps, Delta);
  return {R - eff.mu_a, -R - eff.mu_a};
}

double gap_map(const EffectiveParams& eff, double g3_eff, const AntinodalGrid& grid, double Delta,
               const GapOptions& opts) {
  if (Delta == 0.0) return 0.0;
  const double avg = grid_average(grid, [&](double kp, double km) {
    const auto [Ep, Em] = mf_bands({kp, km}, Delta, eff);
    const double R = 0.5 * (Ep - Em);
    return Delta / (2.0 * R) * (fermi(Em, opts.T) - fermi(Ep, opts.T));
  });
  return coupling(eff, g3_eff, opts) * avg;
}

double antinodal_filling(const EffectiveParams& eff, const AntinodalGrid& grid, double Delta, double T) {
  return grid_average(grid, [&](double kp, double km) {
           const auto [Ep, Em] = mf_bands({kp, km}, Delta, eff);
           return fermi(Em, T) + fermi(Ep, T) - 1.0;
         }) /
         8.0;
}

GapSolution solve_gap(const EffectiveParams& eff, const AntinodalGrid& grid, const GapOptions& opts) {
  grid.validate();
  if (!(opts.T >= 0.0)) throw DomainError(fmt::format("temperature must be >= 0, got {}", opts.T));
  if (!(opts.damping > 0.0 && opts.damping <= 1.0))
    throw DomainError(fmt::format("damping must lie in (0, 1], got {}", opts.damping));
  GapSolution sol;
  sol.params = eff;
  sol.g3_eff = effective_antinodal_couplings(eff).first;
  if (sol.g3_eff == 0.0 || opts.kernel_prefactor == 0.0) {
    sol.filling_antinodal = antinodal_filling(eff, grid, 0.0, opts.T);
    return sol;
  }

  double delta = opts.delta0 < 0.0 ? eff.t : opts.delta0;
  double prev_step = 0.0;
  int alternating = 0;
  std::vector<double> trace;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    const double mapped = gap_map(eff, sol.g3_eff, grid, delta, opts);
    // The undamped residual bounds the damped step, so testing it is stricter.
    if (std::abs(mapped - delta) <= opts.tolerance * std::max(eff.t, delta)) {
      // A vanishing iterate on a contracting map is the trivial solution.
      const bool trivial = delta <= 1e3 * opts.tolerance * eff.t && mapped < delta;
      sol.Delta = trivial ? 0.0 : delta;
      sol.iterations = it;
      sol.residual = trivial ? 0.0 : std::abs(mapped - delta);
      sol.filling_antinodal = antinodal_filling(eff, grid, sol.Delta, opts.T);
      return sol;
    }
    const double next = std::max(0.0, (1.0 - opts.damping) * delta + opts.damping * mapped);
    const double step = next - delta;
    trace.push_back(next);
    if (trace.size() > 8) trace.erase(trace.begin());
    // Growing alternation means the damped map overshoots.
    if (prev_step != 0.0 && step * prev_step < 0.0 && std::abs(step) >= std::abs(prev_step))
      ++alternating;
    else
      alternating = 0;
    if (alternating >= 20)
      throw DomainError(fmt::format("gap iteration oscillates at Delta = {:.6g}; increase damping (lower the mixing)", next));
    prev_step = step;
    delta = next;
  }
  std::string tail;
  for (double d : trace) tail += fmt::format(" {:.12g}", d);
  throw DomainError(fmt::format("gap iteration did not converge in {} steps; last iterates:{}", opts.max_iterations, tail));
}

BisectionResult bisection_gap(const EffectiveParams& eff, const AntinodalGrid& grid, const GapOptions& opts) {
  grid.validate();
  BisectionResult res;
  const double g3 = effective_antinodal_couplings(eff).first;
  const double g = coupling(eff, g3, opts);
  if (!(g > 0.0)) return res;
  // avg[w/(2R)] <= 1/(2Δ), so the gap function is negative above g/2.
  const double hi = 0.5 * g * (1.0 + 1e-12);
  const double lo = 1e-12 * std::max(eff.t, hi);

  int changes = 0;
  double prev = gap_function(eff, g3, grid, lo, opts);
  for (int i = 1; i <= 200; ++i) {
    const double d = lo * std::pow(hi / lo, i / 200.0);
    const double cur = gap_function(eff, g3, grid, d, opts);
    if ((prev > 0.0) != (cur > 0.0)) ++changes;
    prev = cur;
  }
  res.roots_seen = changes;

  // Largest root: scan downward from the top of the bracket.
  double a = lo;
  double b = hi;
  if (gap_function(eff, g3, grid, lo, opts) <= 0.0) {
    bool found = false;
    for (int i = 199; i >= 0 && !found; --i) {
      const double d = lo * std::pow(hi / lo, i / 200.0);
      if (gap_function(eff, g3, grid, d, opts) > 0.0) {
        a = d;
        b = lo * std::pow(hi / lo, (i + 1) / 200.0);
        found = true;
      }
    }
    if (!found) return res;
  }
  for (int i = 0; i < 200 && b - a > 1e-15 * b; ++i) {
    const double m = 0.5 * (a + b);
    (gap_function(eff, g3, grid, m, opts) > 0.0 ? a : b) = m;
  }
  res.Delta = 0.5 * (a + b);
  return res;
}

GapScan gap_phase_scan(double t, double V, double a, const std::vector<double>& Qs, const AntinodalGrid& grid,
                       const GapOptions& opts, double threshold) {
  GapScan scan;
  scan.threshold = threshold < 0.0 ? 1e-6 * t : threshold;
  for (double Q : Qs) {
    const EffectiveParams eff = effective_params_at(t, V, a, Q);
    const GapSolution sol = solve_gap(eff, grid, opts);
    GapScanRow row;
    row.Q = Q;
    row.V = V;
    row.T = opts.T;
    row.Delta = sol.Delta;
    row.filling = sol.filling_antinodal;
    row.iterations = sol.iterations;
    row.residual = sol.residual;
    // d<:N_a:>/dμ_a with Δ re-solved at the shifted chemical potentials.
    const double h = 1e-4 * t;
    EffectiveParams up = eff;
    EffectiveParams dn = eff;
    up.mu_a += h;
    dn.mu_a -= h;
    GapOptions warm = opts;
    warm.delta0 = sol.Delta > 0.0 ? sol.Delta : opts.delta0;
    const GapSolution su = solve_gap(up, grid, warm);
    const GapSolution sd = solve_gap(dn, grid, warm);
    row.dfilling_dmu = (su.filling_antinodal - sd.filling_antinodal) / (2.0 * h);
    row.gapped = row.Delta > scan.threshold && std::abs(row.filling) <= 1e-12;
    if (row.gapped) {
      if (!scan.interval_found) {
        scan.Q_low = scan.Q_high = Q;
        scan.interval_found = true;
      }
      scan.Q_low = std::min(scan.Q_low, Q);
      scan.Q_high = std::max(scan.Q_high, Q);
    }
    scan.rows.push_back(row);
  }
  return scan;
}

}  // namespace lutt2d
