#include "lutt2d/tv_ed.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "lutt2d/model_core.hpp"

namespace lutt2d {

int LatticeSpec::site(int i1, int i2) const {
  i1 = ((i1 % n1) + n1) % n1;
  i2 = ((i2 % n2) + n2) % n2;
  return i1 + n1 * i2;
}

void LatticeSpec::validate() const {
  if (n1 < 2 || n2 < 2) throw DomainError(fmt::format("lattice {}x{} needs at least 2 sites per direction", n1, n2));
  if (sites() > kMaxSites)
    throw DomainError(fmt::format("lattice {}x{} has {} sites, limit is {}", n1, n2, sites(), kMaxSites));
}

std::vector<Bond> lattice_bonds(const LatticeSpec& lattice, int shift1, int shift2) {
  std::vector<Bond> out;
  for (int i2 = 0; i2 < lattice.n2; ++i2)
    for (int i1 = 0; i1 < lattice.n1; ++i1) {
      const int x = lattice.site(i1 + shift1, i2 + shift2);
      out.push_back({x, lattice.site(i1 + 1 + shift1, i2 + shift2)});
      out.push_back({x, lattice.site(i1 + shift1, i2 + 1 + shift2)});
    }
  return out;
}

TvOperator build_htv(const LatticeSpec& lattice, const TvCouplings& c, const HtvOptions& opts) {
  lattice.validate();
  const int n = lattice.sites();
  TvOperator op{lattice, opts.sector ? FockBasis::fixed_number(n, *opts.sector) : FockBasis::full(n), {}, opts.sector};

  const std::vector<Bond> bonds = lattice_bonds(lattice, opts.shift1, opts.shift2);
  std::vector<double> hop(bonds.size(), -c.t);
  if (opts.bond_perturb_index >= 0) hop.at(static_cast<std::size_t>(opts.bond_perturb_index)) = -opts.bond_perturb_t;
  const double w = bond_interaction(c.V);

  auto action = [&](FockState s, std::vector<FockAmplitude>& out) {
    double diag = -c.mu * popcount(s);
    for (std::size_t b = 0; b < bonds.size(); ++b) {
      const auto [x, y] = bonds[b];
      if (occupied(s, x) && occupied(s, y)) diag += w;
      FockState img;
      double sign;
      if (apply_hop(s, x, y, img, sign)) out.push_back({img, hop[b] * sign});
      if (apply_hop(s, y, x, img, sign)) out.push_back({img, hop[b] * sign});
    }
    if (opts.site_potential_index >= 0 && occupied(s, opts.site_potential_index)) diag += opts.site_potential;
    out.push_back({s, diag});
  };
  op.matrix = build_operator(op.basis, action);
  return op;
}

SparseMatrix number_operator(const TvOperator& op) {
  return build_operator(op.basis, [](FockState s, std::vector<FockAmplitude>& out) {
    out.push_back({s, static_cast<double>(popcount(s))});
  });
}

GroundState ground_state(const TvOperator& op, double degeneracy_tol, const LanczosOptions& opts) {
  if (!op.sector) throw DomainError("ground_state needs a fixed particle-number sector");
  GroundState gs;
  if (op.basis.size() <= 64) {
    // Tiny sectors: dense diagonalization resolves the multiplet exactly.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(op.matrix)};
    gs.energy = es.eigenvalues()[0];
    for (long i = 0; i < es.eigenvalues().size() && es.eigenvalues()[i] <= gs.energy + degeneracy_tol; ++i)
      gs.states.push_back(es.eigenvectors().col(i));
    gs.residual = 0.0;
    for (const auto& v : gs.states)
      gs.residual = std::max(gs.residual, (op.matrix * v - gs.energy * v).norm());
  } else {
    const Multiplet mp = ground_multiplet(op.matrix, degeneracy_tol, opts);
    gs.energy = mp.energy;
    for (const auto& p : mp.states) {
      gs.states.push_back(p.vector);
      gs.residual = std::max(gs.residual, p.residual);
    }
  }
  gs.degeneracy = static_cast<int>(gs.states.size());
  return gs;
}

namespace {

double staggered_square(FockState s, const LatticeSpec& lattice) {
  int m = 0;
  for (int x = 0; x < lattice.sites(); ++x)
    if (occupied(s, x)) m += lattice.parity(x);
  return static_cast<double>(m) * m;
}

}  // namespace

double cdw_order(const Eigen::VectorXd& state, const TvOperator& op) {
  const double n = op.lattice.sites();
  double acc = 0.0;
  for (long i = 0; i < op.basis.size(); ++i) acc += state[i] * state[i] * staggered_square(op.basis.state(i), op.lattice);
  return acc / (n * n);
}

double cdw_order(const GroundState& gs, const TvOperator& op) {
  double acc = 0.0;
  for (const auto& v : gs.states) acc += cdw_order(v, op);
  return acc / static_cast<double>(gs.states.size());
}

PhReport ph_transform_check(const LatticeSpec& lattice, const TvCouplings& c, int particles, int levels,
                            const HtvOptions& extras, double tol, long dense_limit) {
  lattice.validate();
  const int holes = lattice.sites() - particles;
  HtvOptions left_opts = extras;
  left_opts.sector = particles;
  HtvOptions right_opts = extras;
  right_opts.sector = holes;
  const TvOperator left = build_htv(lattice, c, left_opts);
  const TvOperator right = build_htv(lattice, {c.t, c.V, c.V - c.mu}, right_opts);

  std::vector<double> el;
  std::vector<double> er;
  if (left.basis.size() <= dense_limit && right.basis.size() <= dense_limit) {
    const Eigen::VectorXd a = dense_eigenvalues(left.matrix);
    const Eigen::VectorXd b = dense_eigenvalues(right.matrix);
    el.assign(a.data(), a.data() + a.size());
    er.assign(b.data(), b.data() + b.size());
  } else {
    LanczosOptions opts;
    opts.tolerance = 1e-13;
    el = lowest_eigenvalues(left.matrix, levels, 0, opts);
    er = lowest_eigenvalues(right.matrix, levels, 0, opts);
  }

  PhReport report;
  report.levels_compared = static_cast<int>(std::min(el.size(), er.size()));
  report.constant_shift = er.front() - el.front();
  for (int i = 0; i < report.levels_compared; ++i) {
    const double dev = std::abs(er[static_cast<std::size_t>(i)] - el[static_cast<std::size_t>(i)] - report.constant_shift);
    report.max_deviation = std::max(report.max_deviation, dev);
  }
  report.pass = el.size() == er.size() && report.max_deviation <= tol;
  return report;
}

}  // namespace lutt2d
