#pragma once

// Least-squares fitting by subspaces that are compatible with an orthogonal
// decomposition H = H_1 + ... + H_kappa (every component projection of the
// subspace stays inside it).
//
// In a single Hilbert space the optimum splits into independent per-component
// fits whose dimensions alpha_i add up to at most l. The per-component error
// with alpha_i directions is the sum of that component's discarded Gramian
// eigenvalues, so the optimal allocation keeps the l largest eigenvalues of
// the pooled spectrum. The MI version applies this fiber by fiber.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mifit/errors.hpp"
#include "mifit/gramian.hpp"
#include "mifit/linalg.hpp"
#include "mifit/measure.hpp"
#include "mifit/mi_solver.hpp"

namespace mifit {

/// Number of directions kept in each component.
struct Allocation {
  std::vector<std::size_t> counts;

  std::size_t total() const {
    std::size_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }
  bool admissible(std::size_t length) const { return total() <= length; }
  friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// One of the l largest pooled eigenvalues: eigenvalue `index` (0-based,
/// descending) of the Gramian of component `component`.
struct PooledPick {
  double value = 0.0;
  std::size_t component = 0;
  std::size_t index = 0;
  friend bool operator==(const PooledPick&, const PooledPick&) = default;
};

struct HilbertSolution {
  std::vector<CVector> generators;  // always `length` entries; unused ones are zero
  std::vector<PooledPick> picks;
  Allocation allocation;
  double error = 0.0;
  std::vector<double> pooled;  // every component eigenvalue, descending
  std::size_t rank = 0;        // number of nonzero generators
};

/// Relative gap under which pooled eigenvalues from different components count
/// as tied; ties go to the lower component index.
inline constexpr double kPooledTieTolerance = 1e-12;

inline HilbertSolution solve_hilbert_decomposed(std::span<const CVector> x, const Decomposition& d,
                                                std::size_t length, double epsilon = kDefaultEpsilon) {
  if (length == 0) throw InvalidInput("solve_hilbert_decomposed: length must be at least 1");
  if (x.empty()) throw InvalidInput("solve_hilbert_decomposed: empty data");
  const std::size_t n = d.dim();
  const std::size_t m = x.size();
  const std::size_t kappa = d.block_count();
  for (const auto& v : x) {
    if (v.size() != n) throw DimensionMismatch("solve_hilbert_decomposed: data length differs from dimension");
  }

  std::vector<std::vector<CVector>> projected(kappa);
  std::vector<HermitianEig> eigs;
  eigs.reserve(kappa);
  for (std::size_t i = 0; i < kappa; ++i) {
    for (const auto& v : x) projected[i].push_back(d.project(v, i));
    Matrix g(m, m);
    for (std::size_t a = 0; a < m; ++a) {
      g(a, a) = norm_squared(projected[i][a]);
      for (std::size_t b = a + 1; b < m; ++b) {
        g(a, b) = dot(projected[i][a], projected[i][b]);
        g(b, a) = std::conj(g(a, b));
      }
    }
    HermitianEig e = hermitian_eig(g);
    for (double& l : e.values) l = std::max(0.0, l);
    eigs.push_back(std::move(e));
  }

  HilbertSolution out;
  for (const auto& e : eigs) out.pooled.insert(out.pooled.end(), e.values.begin(), e.values.end());
  std::sort(out.pooled.begin(), out.pooled.end(), std::greater<>());
  const double top = out.pooled.front();
  const double tie = kPooledTieTolerance * top;
  const double threshold = epsilon * top;

  // Greedy merge of the per-component descending spectra.
  std::vector<std::size_t> next(kappa, 0);
  const std::size_t picks = std::min(length, m * kappa);
  for (std::size_t s = 0; s < picks; ++s) {
    double best = -1.0;
    for (std::size_t i = 0; i < kappa; ++i)
      if (next[i] < m) best = std::max(best, eigs[i].values[next[i]]);
    for (std::size_t i = 0; i < kappa; ++i) {
      if (next[i] < m && eigs[i].values[next[i]] >= best - tie) {
        out.picks.push_back({eigs[i].values[next[i]], i, next[i]});
        ++next[i];
        break;
      }
    }
  }

  out.allocation.counts = next;
  out.generators.assign(length, CVector(n));
  for (std::size_t s = 0; s < out.picks.size(); ++s) {
    const PooledPick& p = out.picks[s];
    if (!(top > 0.0 && p.value > threshold)) continue;
    const Matrix& u = eigs[p.component].vectors;
    const double beta = 1.0 / std::sqrt(p.value);
    for (std::size_t k = 0; k < m; ++k) axpy(beta * std::conj(u(k, p.index)), projected[p.component][k], out.generators[s]);
    ++out.rank;
  }

  for (std::size_t i = 0; i < kappa; ++i)
    for (std::size_t j = next[i]; j < m; ++j) out.error += eigs[i].values[j];
  return out;
}

struct DecomposedSolution {
  MISolution solution;
  std::vector<std::vector<PooledPick>> picks;  // per fiber: (i_s(omega), j_s(omega))
  std::vector<Allocation> allocations;         // per fiber
  std::vector<std::vector<double>> pooled;     // per fiber, descending
};

inline DecomposedSolution solve_problem2(std::span<const VectorField> data, const Decomposition& d,
                                         std::size_t length, double epsilon = kDefaultEpsilon) {
  if (length == 0) throw InvalidInput("solve_problem2: length must be at least 1");
  detail::require_shared_grid(data, "solve_problem2");
  const GridPtr& grid = data.front().grid();
  const std::size_t n = data.front().dim();
  if (d.dim() != n) throw DimensionMismatch("solve_problem2: decomposition dimension differs from fiber dimension");

  std::vector<std::vector<CVector>> gen_values(length, std::vector<CVector>(grid->size()));
  std::vector<std::vector<CVector>> range(grid->size());
  DecomposedSolution out{MISolution{{}, RangeBasis::empty(grid, n), std::nullopt, 0.0, length, 0}, {}, {}, {}};

  for (std::size_t w = 0; w < grid->size(); ++w) {
    std::vector<CVector> x;
    x.reserve(data.size());
    for (const auto& f : data) x.push_back(f[w]);
    HilbertSolution h = solve_hilbert_decomposed(x, d, length, epsilon);

    std::vector<CVector> nonzero;
    for (std::size_t s = 0; s < length; ++s) {
      if (norm_squared(h.generators[s]) > 0.0) nonzero.push_back(h.generators[s]);
      gen_values[s][w] = std::move(h.generators[s]);
    }
    range[w] = orthonormalize(nonzero, 0.0);
    out.solution.achieved_length = std::max(out.solution.achieved_length, h.rank);
    out.solution.error += grid->weight(w) * h.error;
    out.picks.push_back(std::move(h.picks));
    out.allocations.push_back(std::move(h.allocation));
    out.pooled.push_back(std::move(h.pooled));
  }

  for (auto& g : gen_values) out.solution.generators.emplace_back(grid, n, std::move(g));
  out.solution.range = RangeBasis(grid, n, std::move(range));
  return out;
}

/// True iff P_{H_j} J(omega) is contained in J(omega) for every block j and
/// fiber omega, checked on the projections of each basis vector.
inline bool decomposable_check(const RangeBasis& r, const Decomposition& d, double tol = 1e-9) {
  if (r.dim() != d.dim()) throw DimensionMismatch("decomposable_check: decomposition dimension differs");
  for (std::size_t w = 0; w < r.fiber_count(); ++w) {
    for (const auto& b : r.at(w)) {
      for (std::size_t j = 0; j < d.block_count(); ++j) {
        const CVector p = d.project(b, j);
        if (norm(p - r.project(w, p)) > tol) return false;
      }
    }
  }
  return true;
}

/// {P_j F_i}, component-major: all of block 0 first, then block 1, ...
inline std::vector<VectorField> split_data(std::span<const VectorField> data, const Decomposition& d) {
  std::vector<VectorField> out;
  out.reserve(data.size() * d.block_count());
  for (std::size_t j = 0; j < d.block_count(); ++j)
    for (const auto& f : data) out.push_back(project_component(f, d, j));
  return out;
}

}  // namespace mifit
