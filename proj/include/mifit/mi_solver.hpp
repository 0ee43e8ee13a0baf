#pragma once

// Optimal multiplicatively invariant space of length at most l for a finite
// data family (least-squares fit, "Problem 1").
//
// Per fiber the Gramian is diagonalized and the l leading eigendirections are
// turned into generators
//
//   Phi_s(omega) = lambda_s(omega)^{-1/2} sum_i y_s(omega)_i F_i(omega)
//
// (zero where lambda_s(omega) is below the rank threshold). The nonzero
// generators are orthonormal at each fiber, so they form a Parseval frame of
// J*(omega), and the fit error is the integral of the discarded eigenvalues.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mifit/errors.hpp"
#include "mifit/gramian.hpp"
#include "mifit/linalg.hpp"
#include "mifit/measure.hpp"

namespace mifit {

struct MISolution {
  std::vector<VectorField> generators;
  RangeBasis range;
  // Present for Problem 1 solutions. Decomposed solutions carry pooled
  // spectra instead (see DecomposedSolution).
  std::optional<SpectralField> spectral;
  double error = 0.0;
  std::size_t length = 0;
  std::size_t achieved_length = 0;
};

/// sum_{j > length} sum_omega weight(omega) lambda_j(omega)
inline double error_formula(const SpectralField& s, std::size_t length) {
  double total = 0.0;
  for (std::size_t w = 0; w < s.fiber_count(); ++w) {
    const auto& lam = s.eigenvalues(w);
    double tail = 0.0;
    for (std::size_t j = length; j < lam.size(); ++j) tail += lam[j];
    total += s.grid()->weight(w) * tail;
  }
  return total;
}

/// sum_j |F_j - P_R F_j|^2
inline double residual(std::span<const VectorField> data, const RangeBasis& r) {
  double total = 0.0;
  for (const auto& f : data) total += norm_squared(f - project_fiberwise(r, f));
  return total;
}

inline bool contains(const RangeBasis& r, const VectorField& f, double tol = 1e-9) {
  const double miss = norm(f - project_fiberwise(r, f));
  return miss <= tol * (1.0 + norm(f));
}

/// Largest entry of sum_s Phi_s(omega) Phi_s(omega)^* - P_{J(omega)} over all
/// fibers. Zero for a uniform Parseval frame of the range function.
inline double parseval_deviation(std::span<const VectorField> generators, const RangeBasis& r) {
  double worst = 0.0;
  for (std::size_t w = 0; w < r.fiber_count(); ++w) {
    Matrix frame(r.dim(), r.dim());
    for (const auto& g : generators) {
      if (!same_grid(g.grid(), r.grid()) || g.dim() != r.dim()) {
        throw DimensionMismatch("parseval_deviation: generator does not match range");
      }
      const CVector& v = g[w];
      for (std::size_t i = 0; i < r.dim(); ++i)
        for (std::size_t j = 0; j < r.dim(); ++j) frame(i, j) += v[i] * std::conj(v[j]);
    }
    worst = std::max(worst, (frame - r.projector(w)).max_abs());
  }
  return worst;
}

inline MISolution solve_problem1(std::span<const VectorField> data, std::size_t length,
                                 double epsilon = kDefaultEpsilon) {
  if (length == 0) throw InvalidInput("solve_problem1: length must be at least 1");
  detail::require_shared_grid(data, "solve_problem1");
  const GridPtr& grid = data.front().grid();
  const std::size_t n = data.front().dim();
  const std::size_t m = data.size();

  SpectralField spec = spectral(gramian(data), epsilon);

  std::vector<std::vector<CVector>> gen_values(length, std::vector<CVector>(grid->size(), CVector(n)));
  std::vector<std::vector<CVector>> range(grid->size());
  std::size_t achieved = 0;

  for (std::size_t w = 0; w < grid->size(); ++w) {
    const auto& lam = spec.eigenvalues(w);
    const Matrix& u = spec.right_eigenvectors(w);
    std::vector<CVector> nonzero;
    for (std::size_t s = 0; s < std::min(length, m); ++s) {
      if (!spec.is_nonzero(w, s)) continue;
      const double beta = 1.0 / std::sqrt(lam[s]);
      CVector& phi = gen_values[s][w];
      for (std::size_t i = 0; i < m; ++i) axpy(beta * std::conj(u(i, s)), data[i][w], phi);
      nonzero.push_back(phi);
    }
    achieved = std::max(achieved, nonzero.size());
    range[w] = orthonormalize(nonzero, 0.0);
  }

  std::vector<VectorField> generators;
  generators.reserve(length);
  for (auto& g : gen_values) generators.emplace_back(grid, n, std::move(g));

  MISolution out{std::move(generators), RangeBasis(grid, n, std::move(range)), std::nullopt, 0.0, length, achieved};
  out.error = error_formula(spec, length);
  out.spectral = std::move(spec);
  return out;
}

}  // namespace mifit
