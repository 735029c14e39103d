#include "lutt2d/fock_verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>

#include <Eigen/Eigenvalues>
#include <fmt/core.h>

#include "lutt2d/eigensolvers.hpp"

namespace lutt2d {

namespace {

constexpr long kEnumerationLimit = 1L << 22;

int wrap(int x, int m) { return ((x % m) + m) % m; }

/// Sums amplitudes of equal states and drops exact zeros.
void combine(std::vector<FockAmplitude>& v) {
  std::stable_sort(v.begin(), v.end(), [](const FockAmplitude& a, const FockAmplitude& b) { return a.state < b.state; });
  std::size_t w = 0;
  for (std::size_t i = 0; i < v.size();) {
    FockAmplitude acc = v[i];
    std::size_t j = i + 1;
    for (; j < v.size() && v[j].state == acc.state; ++j) acc.value += v[j].value;
    if (acc.value != 0.0) v[w++] = acc;
    i = j;
  }
  v.resize(w);
}

/// Range of transverse momenta that covers every residue once.
std::pair<int, int> transverse_range(int m) { return {-(m / 2), -(m / 2) + m - 1}; }

struct ChannelConfig {
  FockState bits;  // over the longitudinal slots of one channel
  int charge;
  double energy;
};

}  // namespace

std::vector<BranchLabel> all_nodal_branches() { return {{1, 1}, {-1, 1}, {1, -1}, {-1, -1}}; }

TruncatedChiralSpace::TruncatedChiralSpace(TruncationSpec spec) : spec_(std::move(spec)) {
  if (spec_.longitudinal_modes < 2 || spec_.longitudinal_modes % 2 != 0)
    throw DomainError(fmt::format("longitudinal modes must be even and >= 2, got {}", spec_.longitudinal_modes));
  if (spec_.transverse < 1) throw DomainError(fmt::format("transverse channels must be >= 1, got {}", spec_.transverse));
  if (spec_.margin < 0 || spec_.margin > spec_.longitudinal_modes)
    throw DomainError(fmt::format("safe margin {} does not fit {} modes", spec_.margin, spec_.longitudinal_modes));
  if (spec_.branches.empty()) throw DomainError("truncation needs at least one branch");
  for (std::size_t i = 0; i < spec_.branches.size(); ++i) {
    const auto& b = spec_.branches[i];
    if (std::abs(b.r) != 1 || std::abs(b.s) != 1) throw DomainError(fmt::format("invalid branch ({}, {})", b.r, b.s));
    for (std::size_t j = 0; j < i; ++j)
      if (spec_.branches[j].r == b.r && spec_.branches[j].s == b.s)
        throw DomainError(fmt::format("duplicate branch ({}, {})", b.r, b.s));
  }
  if (modes() > kMaxModes) throw DomainError(fmt::format("{} modes exceed the {}-mode limit", modes(), kMaxModes));

  const int n = spec_.longitudinal_modes;
  for (int b = 0; b < static_cast<int>(spec_.branches.size()); ++b)
    for (int c = 0; c < spec_.transverse; ++c)
      for (int l = 0; l < n; ++l) {
        const bool filled = spec_.branches[static_cast<std::size_t>(b)].r > 0 ? l < n / 2 : l >= n / 2;
        if (filled) vacuum_ |= mode_bit(mode(b, c, l));
        if (l < spec_.margin || l >= n - spec_.margin) safe_mask_ |= mode_bit(mode(b, c, l));
      }
}

int TruncatedChiralSpace::branch_index(int r, int s) const {
  for (std::size_t i = 0; i < spec_.branches.size(); ++i)
    if (spec_.branches[i].r == r && spec_.branches[i].s == s) return static_cast<int>(i);
  return -1;
}

FockState TruncatedChiralSpace::branch_mask(int branch) const {
  const int w = channel_modes();
  const FockState ones = w == kMaxModes ? ~FockState{0} : mode_bit(w) - 1;
  return ones << (branch * w);
}

int TruncatedChiralSpace::charge(FockState s, int branch) const {
  const FockState m = branch_mask(branch);
  return popcount(s & m) - popcount(vacuum_ & m);
}

double TruncatedChiralSpace::kinetic_energy(FockState s) const {
  double e = 0.0;
  const FockState diff = s ^ vacuum_;
  for (int b = 0; b < static_cast<int>(spec_.branches.size()); ++b)
    for (int c = 0; c < spec_.transverse; ++c)
      for (int l = 0; l < spec_.longitudinal_modes; ++l) {
        const int m = mode(b, c, l);
        if (!occupied(diff, m)) continue;
        // Particle above or hole below the sea: |k| either way.
        e += std::abs(momentum(l));
      }
  return e;
}

bool TruncatedChiralSpace::is_safe(FockState s) const { return ((s ^ vacuum_) & safe_mask_) == 0; }

bool TruncatedChiralSpace::in_window(const DensityKey& key) const {
  if (branch_index(key.r, key.s) < 0) return false;
  return 2 * std::abs(key.transverse()) <= spec_.transverse;
}

void TruncatedChiralSpace::apply_density(const DensityKey& key, FockState s, double amp,
                                         std::vector<FockAmplitude>& out) const {
  const int b = branch_index(key.r, key.s);
  if (b < 0) throw DomainError(fmt::format("branch ({}, {}) is not in the truncation", key.r, key.s));
  const int n = spec_.longitudinal_modes;
  const int m = spec_.transverse;
  const int q = key.longitudinal();
  const int t = wrap(key.transverse(), m);
  if (q == 0 && t == 0) {
    const int qn = charge(s, b);
    if (qn != 0) out.push_back({s, amp * qn});
    return;
  }
  for (int c = 0; c < m; ++c) {
    const int c_from = (c + t) % m;
    for (int l = std::max(0, -q); l < n && l + q < n; ++l) {
      FockState img;
      double sign;
      if (apply_hop(s, mode(b, c, l), mode(b, c_from, l + q), img, sign)) out.push_back({img, amp * sign});
    }
  }
}

std::vector<FockState> TruncatedChiralSpace::enumerate(const StateFilter& filter) const {
  const int n = spec_.longitudinal_modes;
  const int nb = static_cast<int>(spec_.branches.size());
  std::vector<bool> active(static_cast<std::size_t>(nb), filter.active_branches.empty());
  for (int b : filter.active_branches) {
    if (b < 0 || b >= nb) throw DomainError(fmt::format("branch index {} out of range", b));
    active[static_cast<std::size_t>(b)] = true;
  }

  // Channel configurations per branch sign, sorted by energy for pruning.
  auto configs_for = [&](int r) {
    std::vector<ChannelConfig> out;
    const int half = n / 2;
    for (unsigned long bits = 0; bits < (1UL << n); ++bits) {
      int chg = 0;
      double e = 0.0;
      bool safe = true;
      for (int l = 0; l < n; ++l) {
        const bool occ = (bits >> l) & 1UL;
        const bool sea = r > 0 ? l < half : l >= half;
        if (occ != sea) {
          e += std::abs(momentum(l));
          chg += occ ? 1 : -1;
          if (l < spec_.margin || l >= n - spec_.margin) safe = false;
        }
      }
      if (filter.safe_only && !safe) continue;
      if (e > filter.energy_cap + 1e-9) continue;
      out.push_back({static_cast<FockState>(bits), chg, e});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const ChannelConfig& a, const ChannelConfig& b) { return a.energy < b.energy; });
    return out;
  };
  const std::vector<ChannelConfig> plus = configs_for(1);
  const std::vector<ChannelConfig> minus = configs_for(-1);

  auto charge_ok = [&](int q) {
    return filter.charges.empty() || std::find(filter.charges.begin(), filter.charges.end(), q) != filter.charges.end();
  };

  std::vector<FockState> out;
  const int slots = nb * spec_.transverse;
  // Depth-first over (branch, channel) slots.
  auto dfs = [&](auto&& self, int slot, FockState acc, double energy, int branch_charge) -> void {
    if (slot == slots) {
      out.push_back(acc);
      if (static_cast<long>(out.size()) > kEnumerationLimit)
        throw DomainError(fmt::format("state enumeration exceeds {} states; reduce the truncation", kEnumerationLimit));
      return;
    }
    const int b = slot / spec_.transverse;
    const int c = slot % spec_.transverse;
    const bool last_channel = c + 1 == spec_.transverse;
    const int r = spec_.branches[static_cast<std::size_t>(b)].r;
    const int shift = mode(b, c, 0);
    if (!active[static_cast<std::size_t>(b)]) {
      const FockState sea = (vacuum_ >> shift) & (mode_bit(n) - 1);
      self(self, slot + 1, acc | (sea << shift), energy, 0);
      return;
    }
    for (const auto& cfg : r > 0 ? plus : minus) {
      if (energy + cfg.energy > filter.energy_cap + 1e-9) break;
      const int q = branch_charge + cfg.charge;
      if (last_channel && !charge_ok(q)) continue;
      self(self, slot + 1, acc | (cfg.bits << shift), energy + cfg.energy, last_channel ? 0 : q);
    }
  };
  dfs(dfs, 0, FockState{0}, 0.0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

SparseMatrix build_density(const TruncatedChiralSpace& space, const DensityKey& key, const FockBasis& basis) {
  if (!space.in_window(key))
    throw DomainError(fmt::format("density J_({},{})({}, {}) outside the transverse window or truncation", key.r,
                                  key.s, key.p_plus, key.p_minus));
  return build_operator(basis, [&](FockState s, std::vector<FockAmplitude>& out) { space.apply_density(key, s, 1.0, out); });
}

double schwinger_value(const TruncatedChiralSpace& space, const DensityKey& a, const DensityKey& b) {
  if (a.r != b.r || a.s != b.s) return 0.0;
  const int m = space.spec().transverse;
  if (a.longitudinal() + b.longitudinal() != 0) return 0.0;
  if (wrap(a.transverse() + b.transverse(), m) != 0) return 0.0;
  return static_cast<double>(a.r) * m * a.longitudinal();
}

namespace {

/// Applies the product left·right to (s, 1).
std::vector<FockAmplitude> apply_product(const TruncatedChiralSpace& space, const DensityKey& left,
                                         const DensityKey& right, FockState s) {
  std::vector<FockAmplitude> mid;
  space.apply_density(right, s, 1.0, mid);
  combine(mid);
  std::vector<FockAmplitude> out;
  for (const auto& x : mid) space.apply_density(left, x.state, x.value, out);
  return out;
}

void require_in_window(const TruncatedChiralSpace& space, const DensityKey& k) {
  if (!space.in_window(k))
    throw DomainError(fmt::format("density J_({},{})({}, {}) outside the transverse window or truncation", k.r, k.s,
                                  k.p_plus, k.p_minus));
}

std::vector<FockState> safe_states_for(const TruncatedChiralSpace& space, const std::vector<int>& branches,
                                       long max_states, bool& sampled) {
  const TruncationSpec& spec = space.spec();
  const int inner = std::max(0, spec.longitudinal_modes - 2 * spec.margin);
  const long bits = static_cast<long>(branches.size()) * spec.transverse * inner;
  sampled = max_states > 0 && (bits >= 62 || (1L << bits) > max_states);
  if (!sampled) {
    TruncatedChiralSpace::StateFilter f;
    f.charges = {};
    f.safe_only = true;
    f.active_branches = branches;
    return space.enumerate(f);
  }
  // Seeded uniform sample of the inner occupations; Ω elsewhere.
  std::mt19937_64 rng(0x5afe5eedULL + static_cast<std::uint64_t>(bits));
  std::vector<FockState> out;
  out.reserve(static_cast<std::size_t>(max_states) + 1);
  out.push_back(space.vacuum());
  while (static_cast<long>(out.size()) < max_states) {
    FockState s = space.vacuum();
    for (int b : branches)
      for (int c = 0; c < spec.transverse; ++c)
        for (int l = spec.margin; l < spec.longitudinal_modes - spec.margin; ++l) {
          const FockState bit = mode_bit(space.mode(b, c, l));
          s = (rng() & 1ULL) ? (s | bit) : (s & ~bit);
        }
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct CommutatorResult {
  double residual = 0;
  long states = 0;
  bool sampled = false;
  FockState worst = 0;
};

CommutatorResult commutator_residual(const TruncatedChiralSpace& space, const DensityKey& a, const DensityKey& b,
                                     long max_states) {
  std::vector<int> branches{space.branch_index(a.r, a.s)};
  const int bb = space.branch_index(b.r, b.s);
  if (bb != branches.front()) branches.push_back(bb);
  CommutatorResult res;
  const std::vector<FockState> states = safe_states_for(space, branches, max_states, res.sampled);
  res.states = static_cast<long>(states.size());
  const double expected = schwinger_value(space, a, b);
  for (FockState s : states) {
    std::vector<FockAmplitude> v = apply_product(space, a, b, s);
    for (const auto& x : apply_product(space, b, a, s)) v.push_back({x.state, -x.value});
    if (expected != 0.0) v.push_back({s, -expected});
    combine(v);
    for (const auto& x : v)
      if (std::abs(x.value) > res.residual) {
        res.residual = std::abs(x.value);
        res.worst = s;
      }
  }
  return res;
}

std::string state_string(FockState s, int modes) {
  std::string out;
  for (int i = 0; i < modes; ++i) out.push_back(occupied(s, i) ? '1' : '0');
  return out;
}

std::vector<DensityKey> safe_keys(const TruncatedChiralSpace& space) {
  std::vector<DensityKey> keys;
  const auto [lo, hi] = transverse_range(space.spec().transverse);
  const int w = space.spec().margin;
  for (const auto& br : space.spec().branches)
    for (int q = -w; q <= w; ++q)
      for (int t = lo; t <= hi; ++t) {
        const DensityKey k = br.s > 0 ? DensityKey{br.r, br.s, q, t} : DensityKey{br.r, br.s, t, q};
        if (space.in_window(k)) keys.push_back(k);
      }
  return keys;
}

std::vector<double> spectrum(const SparseMatrix& h, int count, long dense_limit) {
  if (h.rows() <= dense_limit) {
    const Eigen::VectorXd ev = dense_eigenvalues(h);
    return {ev.data(), ev.data() + ev.size()};
  }
  LanczosOptions opts;
  opts.tolerance = 1e-12;
  return lowest_eigenvalues(h, count, 0, opts);
}

/// (1/2M) Σ_p :J(-p)J(p): of one branch, acting on s.
void boson_kinetic(const TruncatedChiralSpace& space, const BranchLabel& br, FockState s, double scale,
                   std::vector<FockAmplitude>& out) {
  const int n = space.spec().longitudinal_modes;
  const int m = space.spec().transverse;
  const auto [lo, hi] = transverse_range(m);
  const double coeff = scale / (2.0 * m);
  for (int q = -(n - 1); q <= n - 1; ++q)
    for (int t = lo; t <= hi; ++t) {
      const DensityKey p = br.s > 0 ? DensityKey{br.r, br.s, q, t} : DensityKey{br.r, br.s, t, q};
      // Normal order: the annihilating factor (r p_s >= 0) stands to the right.
      const bool right_annihilates = br.r * q >= 0;
      const DensityKey left = right_annihilates ? p.negated() : p;
      const DensityKey right = right_annihilates ? p : p.negated();
      for (const auto& x : apply_product(space, left, right, s)) out.push_back({x.state, coeff * x.value});
    }
}

/// χ-window interaction of Eq. (Hn) acting on s, in units of v_F·2π/L.
void nodal_interaction(const EffectiveParams& eff, const TruncatedChiralSpace& space, FockState s,
                       std::vector<FockAmplitude>& out) {
  const int m = space.spec().transverse;
  const double unit = 2.0 * m * kPi * eff.a_tilde() * eff.v_F;
  const double c1 = eff.g1 / unit;
  const double c2 = eff.g2 / unit;
  const int w = m / 2;
  for (int sb : {1, -1})
    for (int pp = -w; pp <= w; ++pp)
      for (int pm = -w; pm <= w; ++pm) {
        if (2 * std::abs(pp) > m || 2 * std::abs(pm) > m) continue;
        for (int r : {1, -1}) {
          if (space.branch_index(r, sb) < 0) continue;
          const DensityKey left{r, sb, -pp, -pm};
          if (c1 != 0.0 && space.branch_index(-r, sb) >= 0)
            for (const auto& x : apply_product(space, left, {-r, sb, pp, pm}, s)) out.push_back({x.state, c1 * x.value});
          if (c2 != 0.0)
            for (int rp : {1, -1}) {
              if (space.branch_index(rp, -sb) < 0) continue;
              for (const auto& x : apply_product(space, left, {rp, -sb, pp, pm}, s))
                out.push_back({x.state, c2 * x.value});
            }
        }
      }
}

void compare_levels(VerifyReport& rep, std::vector<double> lhs, std::vector<double> rhs, double cutoff,
                    const SpectralOptions& opts) {
  std::size_t count = 0;
  while (count < lhs.size() && count < rhs.size() && lhs[count] <= cutoff + 1e-9) ++count;
  if (opts.levels > 0) count = std::min(count, static_cast<std::size_t>(opts.levels));
  lhs.resize(count);
  rhs.resize(std::min(count, rhs.size()));
  rep.levels_compared = static_cast<int>(count);
  rep.max_residual = 0.0;
  int first_bad = -1;
  for (std::size_t i = 0; i < count; ++i) {
    const double d = std::abs(lhs[i] - rhs[i]);
    rep.max_residual = std::max(rep.max_residual, d);
    if (d > opts.tolerance && first_bad < 0) first_bad = static_cast<int>(i);
  }
  rep.degeneracies = level_degeneracies(lhs, opts.degeneracy_tol);
  rep.pass = count > 0 && first_bad < 0;
  if (first_bad >= 0)
    rep.detail = fmt::format("first mismatched level {}: {:.17g} vs {:.17g}", first_bad, lhs[static_cast<std::size_t>(first_bad)],
                             rhs[static_cast<std::size_t>(first_bad)]);
  rep.levels_lhs = std::move(lhs);
  rep.levels_rhs = std::move(rhs);
}

}  // namespace

VerifyReport schwinger_check(const TruncatedChiralSpace& space, const DensityKey& a, const DensityKey& b,
                             const SchwingerOptions& opts) {
  require_in_window(space, a);
  require_in_window(space, b);
  const int w = space.spec().margin;
  if (std::abs(a.longitudinal()) > w || std::abs(b.longitudinal()) > w)
    throw DomainError(fmt::format("momentum transfer exceeds the safe margin {}", w));
  const CommutatorResult res = commutator_residual(space, a, b, opts.max_states);
  VerifyReport rep;
  rep.check = "schwinger";
  rep.dims = {{"modes", space.modes()}, {"safe_states", res.states}, {"sampled", res.sampled ? 1 : 0}};
  rep.max_residual = res.residual;
  rep.pass = res.residual <= opts.tolerance;
  rep.detail = fmt::format("expected {}", schwinger_value(space, a, b));
  if (!rep.pass) rep.detail += fmt::format("; offending state {}", state_string(res.worst, space.modes()));
  return rep;
}

VerifyReport schwinger_scan(const TruncatedChiralSpace& space, const SchwingerOptions& opts) {
  const std::vector<DensityKey> keys = safe_keys(space);
  VerifyReport rep;
  rep.check = "schwinger";
  long pairs = 0;
  long nonzero = 0;
  long max_states = 0;
  bool sampled = false;
  std::string worst;
  for (const auto& a : keys)
    for (const auto& b : keys) {
      const CommutatorResult res = commutator_residual(space, a, b, opts.max_states);
      ++pairs;
      if (schwinger_value(space, a, b) != 0.0) ++nonzero;
      max_states = std::max(max_states, res.states);
      sampled = sampled || res.sampled;
      if (res.residual > rep.max_residual) {
        rep.max_residual = res.residual;
        worst = fmt::format("[J_({},{})({},{}), J_({},{})({},{})] on {}", a.r, a.s, a.p_plus, a.p_minus, b.r, b.s,
                            b.p_plus, b.p_minus, state_string(res.worst, space.modes()));
      }
    }
  rep.dims = {{"modes", space.modes()},       {"operators", static_cast<long>(keys.size())},
              {"pairs", pairs},               {"nonzero_schwinger_pairs", nonzero},
              {"max_safe_states", max_states}, {"sampled", sampled ? 1 : 0}};
  rep.pass = rep.max_residual <= opts.tolerance;
  if (!rep.pass) rep.detail = "worst " + worst;
  if (space.spec().transverse == 1) rep.detail += (rep.detail.empty() ? "" : "; ") + std::string("one transverse site: umklapp terms absent");
  return rep;
}

VerifyReport theorem_a_identities(const TruncatedChiralSpace& space, double tolerance) {
  VerifyReport rep;
  rep.check = "theorem-a";
  const std::vector<DensityKey> keys = safe_keys(space);
  long states = 0;
  for (int b = 0; b < static_cast<int>(space.spec().branches.size()); ++b) {
    bool sampled = false;
    const FockBasis basis(space.modes(), safe_states_for(space, {b}, 4096, sampled));
    states = std::max(states, basis.size());
    const auto& br = space.spec().branches[static_cast<std::size_t>(b)];
    for (const auto& k : keys) {
      if (k.r != br.r || k.s != br.s) continue;
      const SparseMatrix j = build_density(space, k, basis);
      const SparseMatrix jm = build_density(space, k.negated(), basis);
      const SparseMatrix diff = SparseMatrix(j.transpose()) - jm;
      for (int i = 0; i < diff.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(diff, i); it; ++it) rep.max_residual = std::max(rep.max_residual, std::abs(it.value()));
      if (k.r * k.longitudinal() >= 0) {
        std::vector<FockAmplitude> v;
        space.apply_density(k, space.vacuum(), 1.0, v);
        combine(v);
        for (const auto& x : v) rep.max_residual = std::max(rep.max_residual, std::abs(x.value));
      }
    }
  }
  rep.dims = {{"modes", space.modes()}, {"operators", static_cast<long>(keys.size())}, {"max_states", states}};
  rep.pass = rep.max_residual <= tolerance;
  return rep;
}

std::vector<int> level_degeneracies(const std::vector<double>& eigenvalues, double tol) {
  std::vector<int> out;
  for (std::size_t i = 0; i < eigenvalues.size();) {
    std::size_t j = i + 1;
    while (j < eigenvalues.size() && eigenvalues[j] - eigenvalues[i] <= tol) ++j;
    out.push_back(static_cast<int>(j - i));
    i = j;
  }
  return out;
}

VerifyReport kronig_check(const TruncatedChiralSpace& space, int r, int s, const SpectralOptions& opts) {
  const int b = space.branch_index(r, s);
  if (b < 0) throw DomainError(fmt::format("branch ({}, {}) is not in the truncation", r, s));
  const int n = space.spec().longitudinal_modes;
  if (2 * space.spec().margin < n)
    throw DomainError(fmt::format("kronig_check needs margin >= {} (half the mode window), got {}", n / 2, space.spec().margin));
  TruncatedChiralSpace::StateFilter f;
  f.charges = {0};
  f.active_branches = {b};
  f.energy_cap = opts.energy_cap;
  const FockBasis basis(space.modes(), space.enumerate(f));
  const BranchLabel br{r, s};

  const SparseMatrix kin = build_operator(basis, [&](FockState st, std::vector<FockAmplitude>& out) {
    out.push_back({st, space.kinetic_energy(st)});
  });
  const SparseMatrix bos = build_operator(basis, [&](FockState st, std::vector<FockAmplitude>& out) {
    boson_kinetic(space, br, st, 1.0, out);
  });

  VerifyReport rep;
  rep.check = "kronig";
  rep.dims = {{"modes", space.channel_modes()}, {"neutral_states", basis.size()}};
  const double cutoff = 0.5 * space.spec().margin;
  const int count = opts.levels > 0 ? opts.levels : 64;
  compare_levels(rep, spectrum(kin, count, opts.dense_limit), spectrum(bos, count, opts.dense_limit), cutoff, opts);
  return rep;
}

NodalMatrices build_nodal_hamiltonians(const EffectiveParams& eff, const TruncatedChiralSpace& space,
                                       const FockBasis& basis) {
  NodalMatrices h;
  h.fermionic = build_operator(basis, [&](FockState st, std::vector<FockAmplitude>& out) {
    out.push_back({st, space.kinetic_energy(st)});
    nodal_interaction(eff, space, st, out);
  });
  h.bosonic = build_operator(basis, [&](FockState st, std::vector<FockAmplitude>& out) {
    for (const auto& br : space.spec().branches) boson_kinetic(space, br, st, 1.0, out);
    nodal_interaction(eff, space, st, out);
  });
  return h;
}

VerifyReport hn_equivalence_check(const EffectiveParams& eff, const TruncatedChiralSpace& space,
                                  const SpectralOptions& opts) {
  if (!(eff.gamma < 1.0)) throw DomainError(fmt::format("unstable coupling: gamma = {} >= 1", eff.gamma));
  TruncatedChiralSpace::StateFilter f;
  f.charges = {0};
  f.energy_cap = opts.energy_cap;
  const FockBasis basis(space.modes(), space.enumerate(f));
  const NodalMatrices h = build_nodal_hamiltonians(eff, space, basis);

  VerifyReport rep;
  rep.check = "hn";
  rep.dims = {{"modes", space.modes()}, {"neutral_states", basis.size()}};
  const double cutoff = std::min(0.5 * space.spec().margin, opts.energy_cap);
  const int count = opts.levels > 0 ? opts.levels : 16;
  compare_levels(rep, spectrum(h.fermionic, count, opts.dense_limit), spectrum(h.bosonic, count, opts.dense_limit),
                 cutoff, opts);
  if (space.spec().transverse == 1) rep.detail += (rep.detail.empty() ? "" : "; ") + std::string("one transverse site: chi-window holds only p = 0");
  return rep;
}

}  // namespace lutt2d
