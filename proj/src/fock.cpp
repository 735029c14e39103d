#include "lutt2d/fock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

#include "lutt2d/model_core.hpp"

namespace lutt2d {

FockBasis::FockBasis(int modes, std::vector<FockState> states) : modes_(modes), states_(std::move(states)) {
  if (modes < 0 || modes > kMaxModes) throw DomainError(fmt::format("mode count {} out of range", modes));
  std::sort(states_.begin(), states_.end());
  states_.erase(std::unique(states_.begin(), states_.end()), states_.end());
}

FockBasis FockBasis::full(int modes) {
  if (modes > 30) throw DomainError(fmt::format("full Fock space of {} modes is too large", modes));
  std::vector<FockState> states(std::size_t{1} << modes);
  for (std::size_t i = 0; i < states.size(); ++i) states[i] = i;
  return FockBasis(modes, std::move(states));
}

FockBasis FockBasis::fixed_number(int modes, int particles) {
  if (modes > 63) throw DomainError(fmt::format("fixed-number basis limited to 63 modes, got {}", modes));
  if (particles < 0 || particles > modes)
    throw DomainError(fmt::format("particle number {} outside [0, {}]", particles, modes));
  std::vector<FockState> states;
  if (particles == 0) {
    states.push_back(0);
    return FockBasis(modes, std::move(states));
  }
  // Gosper's hack enumerates same-popcount words in increasing order.
  std::uint64_t s = (std::uint64_t{1} << particles) - 1;
  const std::uint64_t limit = std::uint64_t{1} << modes;
  while (s < limit) {
    states.push_back(s);
    const std::uint64_t c = s & (~s + 1);
    const std::uint64_t r = s + c;
    s = (((r ^ s) >> 2) / c) | r;
  }
  return FockBasis(modes, std::move(states));
}

long FockBasis::index(FockState s) const {
  auto it = std::lower_bound(states_.begin(), states_.end(), s);
  if (it == states_.end() || *it != s) return -1;
  return static_cast<long>(it - states_.begin());
}

SparseMatrix build_operator(const FockBasis& basis, const FockAction& action, BuildStats* stats) {
  const long n = basis.size();
  std::vector<std::vector<std::pair<long, double>>> columns(static_cast<std::size_t>(n));
  long leaked = 0;

#pragma omp parallel reduction(+ : leaked)
  {
    std::vector<FockAmplitude> scratch;
#pragma omp for schedule(static)
    for (long j = 0; j < n; ++j) {
      scratch.clear();
      action(basis.state(j), scratch);
      auto& col = columns[static_cast<std::size_t>(j)];
      for (const auto& amp : scratch) {
        const long i = basis.index(amp.state);
        if (i < 0) {
          ++leaked;
          continue;
        }
        col.emplace_back(i, amp.value);
      }
      // Merge duplicates in generation order after a stable sort by row.
      std::stable_sort(col.begin(), col.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      std::size_t w = 0;
      for (std::size_t r = 0; r < col.size(); ++r) {
        if (w > 0 && col[w - 1].first == col[r].first)
          col[w - 1].second += col[r].second;
        else
          col[w++] = col[r];
      }
      col.resize(w);
    }
  }

  std::vector<Eigen::Triplet<double>> triplets;
  for (long j = 0; j < n; ++j)
    for (const auto& [i, v] : columns[static_cast<std::size_t>(j)])
      if (v != 0.0) triplets.emplace_back(i, j, v);
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  if (stats) stats->leaked = leaked;
  return m;
}

double norm_bound(const SparseMatrix& m) {
  double best = 0.0;
  for (int k = 0; k < m.outerSize(); ++k) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) row += std::abs(it.value());
    best = std::max(best, row);
  }
  return best;
}

double hermiticity_defect(const SparseMatrix& m) {
  SparseMatrix diff = m - SparseMatrix(m.transpose());
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

}  // namespace lutt2d
