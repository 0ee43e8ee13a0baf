#pragma once

// Random instance generators shared by the unit tests and the acceptance run.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mifit/mifit.hpp"

namespace mifit::fixtures {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double gauss() { return normal_(eng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  std::size_t pick(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(eng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(eng_); }
  Complex complex() { return {gauss(), gauss()}; }

  CVector vector(std::size_t n) {
    CVector v(n);
    for (auto& z : v) z = complex();
    return v;
  }

  Matrix hermitian(std::size_t n) {
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      a(i, i) = gauss();
      for (std::size_t j = i + 1; j < n; ++j) {
        a(i, j) = complex();
        a(j, i) = std::conj(a(i, j));
      }
    }
    return a;
  }

  GridPtr grid(std::size_t fibers) {
    std::vector<double> w(fibers);
    for (auto& x : w) x = uniform(0.1, 2.0);
    return make_grid(std::move(w));
  }

  /// Random data family; with probability `deficient` some fibers get
  /// linearly dependent values so rank-deficient Gramians show up.
  std::vector<VectorField> data(const GridPtr& g, std::size_t m, std::size_t n, double deficient = 0.3) {
    std::vector<std::vector<CVector>> vals(m, std::vector<CVector>(g->size()));
    for (std::size_t w = 0; w < g->size(); ++w) {
      const bool low = coin(deficient);
      const CVector base = vector(n);
      for (std::size_t i = 0; i < m; ++i) {
        if (low) {
          const Complex c = complex();
          CVector v(n);
          for (std::size_t k = 0; k < n; ++k) v[k] = c * base[k];
          vals[i][w] = std::move(v);
        } else {
          vals[i][w] = vector(n);
        }
      }
    }
    std::vector<VectorField> out;
    for (auto& v : vals) out.emplace_back(g, n, std::move(v));
    return out;
  }

  /// Random partition of {0..n-1} into kappa nonempty blocks.
  Decomposition partition(std::size_t n, std::size_t kappa) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), eng_);
    std::vector<std::vector<std::size_t>> blocks(kappa);
    for (std::size_t i = 0; i < n; ++i) blocks[i < kappa ? i : pick(0, kappa - 1)].push_back(perm[i]);
    return Decomposition(n, std::move(blocks));
  }

  Signal signal(const FiniteAbelianGroup& g) { return Signal(g, vector(g.size())); }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> normal_;
};

inline FiniteAbelianGroup cyclic(long n) { return FiniteAbelianGroup({n}); }

inline std::vector<FiniteAbelianGroup> test_groups() {
  return {FiniteAbelianGroup({4}),    FiniteAbelianGroup({6}),    FiniteAbelianGroup({8}),
          FiniteAbelianGroup({2, 2}), FiniteAbelianGroup({2, 4}), FiniteAbelianGroup({3, 3})};
}

}  // namespace mifit::fixtures
