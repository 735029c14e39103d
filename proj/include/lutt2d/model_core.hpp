#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace lutt2d {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSqrt2 = std::numbers::sqrt2;

/// Raised when inputs violate a model-level contract (bad geometry, unstable
/// coupling where stability is required, non-convergence, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Microscopic t-V inputs on an L x L torus.
///
/// The linear size is stored as `cells` = L/ã with ã = 2√2 a. The torus
/// closes on the rotated half-integer grid only when L/a = 2√2·cells with
/// `cells` odd, which is what the constructor enforces. The filling is rounded
/// to the nearest commensurate value ν = n/(2·cells), i.e. Q = πν on the
/// lattice of steps √2π a/L.
class MicroParams {
 public:
  MicroParams(double t, double V, double a, int cells, double nu);

  double t() const { return t_; }
  double V() const { return V_; }
  double a() const { return a_; }
  int cells() const { return cells_; }
  double nu() const { return nu_; }
  double nu_requested() const { return nu_requested_; }
  /// ν - ν_requested
  double nu_rounding() const { return nu_ - nu_requested_; }
  /// Integer n with Q = π n / (2·cells).
  int q_steps() const { return q_steps_; }

  double a_tilde() const { return 2.0 * kSqrt2 * a_; }
  double L() const { return cells_ * a_tilde(); }
  /// 𝒩 = (L/a)^2 = 8·cells^2.
  long sites() const { return 8L * cells_ * cells_; }
  double Q() const;

  MicroParams with_V(double V) const;
  MicroParams with_nu(double nu) const;

 private:
  double t_;
  double V_;
  double a_;
  int cells_;
  double nu_;
  double nu_requested_;
  int q_steps_;
};

enum class Stability { stable, unstable };

struct EffectiveParams {
  double t = 0;
  double V = 0;
  double a = 0;
  double Q = 0;
  double v_F = 0;
  double c_F = 0;
  double g1 = 0;
  double g2 = 0;
  double g3 = 0;
  double g4 = 0;
  double mu_a = 0;
  double gamma = 0;
  /// Microscopic chemical potential that makes the nodal one vanish.
  double mu = 0;
  Stability stability = Stability::stable;

  double a_tilde() const { return 2.0 * kSqrt2 * a; }
};

/// Region / flavor label: r = ±1, s ∈ {0, +1, -1}.
struct RegionIndex {
  int r = 1;
  int s = 0;

  bool nodal() const { return s != 0; }
  friend bool operator==(const RegionIndex&, const RegionIndex&) = default;
};

/// Throws DomainError unless r = ±1 and s ∈ {0, ±1}.
void validate(const RegionIndex& idx);

/// The six indices in a fixed order: (+,0), (-,0), (+,+), (+,-), (-,+), (-,-).
const RegionIndex* all_regions();
inline constexpr int kRegionCount = 6;
int region_ordinal(const RegionIndex& idx);
std::string to_string(const RegionIndex& idx);

/// Momentum in rotated coordinates, k± = (k1 ± k2)/√2.
struct Momentum {
  double k_plus = 0;
  double k_minus = 0;

  static Momentum from_cartesian(double k1, double k2);
  double k1() const { return (k_plus + k_minus) / kSqrt2; }
  double k2() const { return (k_plus - k_minus) / kSqrt2; }
  double component(int s) const { return s > 0 ? k_plus : k_minus; }
  double norm2() const { return k_plus * k_plus + k_minus * k_minus; }
};

/// [k] : shift the cartesian components into [-π/a, π/a).
Momentum reduce_to_bz(const Momentum& k, double a);

/// χ(p) = 1 iff -π/ã <= p± <= π/ã.
struct CutoffWindow {
  double bound;

  static CutoffWindow for_lattice(double a) { return {kPi / (2.0 * kSqrt2 * a)}; }
  bool contains(const Momentum& p) const;
};

double band_energy(const Momentum& k, double t, double a);

/// ε_{r,s}(k): -r c_F k+ k- for s = 0, -4t cos Q + r v_F k_s for s = ±.
double linearized_band(const RegionIndex& idx, const Momentum& k, const EffectiveParams& eff);

// Closed forms shared by derive_effective_params and callers that scan Q
// without building a commensurate lattice.
double fermi_velocity(double t, double a, double Q);
double antinodal_chemical_potential(double t, double V, double Q);
double microscopic_chemical_potential(double t, double V, double Q);
double interaction_parameter(double t, double V, double Q);

/// Effective parameters for the given commensurate lattice. Requires
/// 0 < |ν - 1/2| < 1/4 up to the exact half-filled point, which is accepted
/// (the closed forms are continuous there) but is outside the model's
/// intended regime.
EffectiveParams derive_effective_params(const MicroParams& p);

/// Closed forms at an arbitrary Q in (π/4, 3π/4); no lattice attached.
EffectiveParams effective_params_at(double t, double V, double a, double Q);

Stability stability_check(const EffectiveParams& eff);
/// V at which γ = 1.
double stability_bound(double t, double Q);

}  // namespace lutt2d
