#pragma once

// Brute-force reference routines for verifying the solvers.
//
// Nothing in here calls into the solver code paths: eigenvalues come from the
// closed-form 2x2 formula or from bisection on the characteristic polynomial,
// projections and orthonormalizations are written out locally, and allocations
// are enumerated exhaustively.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "mifit/errors.hpp"
#include "mifit/linalg.hpp"
#include "mifit/measure.hpp"

namespace mifit::oracle {

namespace detail {

inline Complex inner(const CVector& a, const CVector& b) {
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

inline double sq(const CVector& a) {
  double s = 0.0;
  for (const auto& z : a) s += z.real() * z.real() + z.imag() * z.imag();
  return s;
}

// Orthonormal family by repeated subtraction of projections; near-dependent
// vectors are dropped.
inline std::vector<CVector> gram_schmidt(std::vector<CVector> vs) {
  std::vector<CVector> out;
  double largest = 0.0;
  for (const auto& v : vs) largest = std::max(largest, std::sqrt(sq(v)));
  for (auto& v : vs) {
    for (int pass = 0; pass < 3; ++pass)
      for (const auto& b : out) {
        const Complex c = inner(v, b);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
      }
    const double nv = std::sqrt(sq(v));
    if (nv <= 1e-12 * largest || nv == 0.0) continue;
    for (auto& z : v) z /= nv;
    out.push_back(std::move(v));
  }
  return out;
}

inline double residual_against(const CVector& x, const std::vector<CVector>& basis) {
  CVector r = x;
  for (const auto& b : basis) {
    const Complex c = inner(x, b);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c * b[i];
  }
  return sq(r);
}

inline double eval(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
  return v;
}

inline std::vector<double> derivative(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(static_cast<double>(i) * c[i]);
  return d;
}

inline double bisect(const std::vector<double>& c, double a, double b) {
  double fa = eval(c, a), fb = eval(c, b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) return std::abs(fa) <= std::abs(fb) ? a : b;
  for (int it = 0; it < 4000; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double fm = eval(c, mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

// Real roots (ascending) of a polynomial known to have only real roots in
// [-bound, bound]; coefficients are lowest degree first. Critical points of
// the polynomial separate its roots, so each gap between consecutive critical
// points holds exactly one root.
inline std::vector<double> real_roots(const std::vector<double>& c, double bound) {
  const std::size_t degree = c.size() - 1;
  if (degree == 0) return {};
  if (degree == 1) return {-c[0] / c[1]};
  std::vector<double> marks{-bound};
  for (double r : real_roots(derivative(c), bound)) marks.push_back(std::clamp(r, -bound, bound));
  marks.push_back(bound);
  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < marks.size(); ++i) roots.push_back(bisect(c, marks[i], marks[i + 1]));
  return roots;
}

}  // namespace detail

/// Eigenvalues of a 2x2 Hermitian matrix, descending, from the roots of
/// lambda^2 - tr(A) lambda + det(A) computed without cancellation.
inline std::pair<double, double> eig2x2_closed_form(const Matrix& a) {
  if (a.rows() != 2 || a.cols() != 2) throw InvalidInput("eig2x2_closed_form: matrix must be 2x2");
  const double p = a(0, 0).real();
  const double q = a(1, 1).real();
  const double off = std::norm(a(0, 1));
  const double half_tr = 0.5 * (p + q);
  const double half_gap = 0.5 * (p - q);
  const double disc = std::sqrt(half_gap * half_gap + off);
  const double det = p * q - off;
  const double big = half_tr >= 0.0 ? half_tr + disc : half_tr - disc;
  const double small = big != 0.0 ? det / big : 0.0;
  return {std::max(big, small), std::min(big, small)};
}

/// Coefficients of det(x I - A), lowest degree first (Faddeev-LeVerrier).
inline std::vector<double> characteristic_polynomial(const Matrix& a) {
  const std::size_t n = a.rows();
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  Matrix mk(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    Matrix next(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Complex s{};
        for (std::size_t l = 0; l < n; ++l) s += a(i, l) * mk(l, j);
        next(i, j) = s;
      }
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    mk = next;
    Complex tr{};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr += a(i, l) * mk(l, i);
    c[n - k] = -tr.real() / static_cast<double>(k);
  }
  return c;
}

/// Eigenvalues of a Hermitian matrix (order <= 4), descending, by bisection on
/// the characteristic polynomial.
inline std::vector<double> eig_bisection(const Matrix& a) {
  if (!a.square() || a.rows() == 0) throw InvalidInput("eig_bisection: matrix must be square");
  if (a.rows() > 4) throw InvalidInput("eig_bisection: order above 4 is not supported");
  double fro = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) fro += std::norm(a(i, j));
  const double bound = std::sqrt(fro) * 1.01 + 1e-300;
  std::vector<double> roots = detail::real_roots(characteristic_polynomial(a), bound);
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}

/// Spectrum by the cheapest independent route for the size at hand.
inline std::vector<double> reference_eigenvalues(const Matrix& a) {
  if (a.rows() == 1) return {a(0, 0).real()};
  if (a.rows() == 2) {
    const auto [hi, lo] = eig2x2_closed_form(a);
    return {hi, lo};
  }
  return eig_bisection(a);
}

/// Minimum of sum_j |x_j - P_S x_j|^2 over `samples` random subspaces S of
/// dimension `dim` (orthonormalized complex Gaussian frames).
inline double best_subspace_sampler(std::span<const CVector> x, std::size_t dim, std::size_t samples,
                                    std::uint64_t seed) {
  if (samples == 0) throw InvalidInput("best_subspace_sampler: samples must be positive");
  if (x.empty()) return 0.0;
  const std::size_t n = x.front().size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<CVector> frame(std::min(dim, n), CVector(n));
    for (auto& v : frame)
      for (auto& z : v) z = {gauss(rng), gauss(rng)};
    const std::vector<CVector> basis = detail::gram_schmidt(std::move(frame));
    double r = 0.0;
    for (const auto& v : x) r += detail::residual_against(v, basis);
    best = std::min(best, r);
  }
  return best;
}

/// Minimum residual over `samples` random MI spaces of length `length`, each
/// spanned fiberwise by `length` random fields.
inline double mi_candidate_sampler(std::span<const VectorField> data, std::size_t length, std::size_t samples,
                                   std::uint64_t seed) {
  if (samples == 0) throw InvalidInput("mi_candidate_sampler: samples must be positive");
  if (data.empty()) return 0.0;
  const auto& grid = *data.front().grid();
  const std::size_t n = data.front().dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    double total = 0.0;
    for (std::size_t w = 0; w < grid.size(); ++w) {
      std::vector<CVector> frame(length, CVector(n));
      for (auto& v : frame)
        for (auto& z : v) z = {gauss(rng), gauss(rng)};
      const std::vector<CVector> basis = detail::gram_schmidt(std::move(frame));
      double r = 0.0;
      for (const auto& f : data) r += detail::residual_against(f[w], basis);
      total += grid.weight(w) * r;
    }
    best = std::min(best, total);
  }
  return best;
}

struct AllocationResult {
  double error = 0.0;
  std::vector<std::size_t> alpha;
};

inline constexpr std::size_t kAllocationGuard = 10000;

/// Optimal decomposition-compatible fit by enumerating every allocation
/// alpha with sum alpha_i <= length. Allocations are visited in descending
/// lexicographic order and the first minimizer is kept.
inline AllocationResult exhaustive_allocation(std::span<const CVector> x, const Decomposition& d, std::size_t length) {
  const std::size_t kappa = d.block_count();
  const std::size_t n = d.dim();
  // |Q| = C(length + kappa, kappa)
  double q_size = 1.0;
  for (std::size_t i = 1; i <= kappa; ++i) q_size = q_size * static_cast<double>(length + i) / static_cast<double>(i);
  if (q_size > static_cast<double>(kAllocationGuard)) {
    throw InvalidInput("exhaustive_allocation: allocation set exceeds the enumeration guard");
  }

  // Discarded-energy table: tail[i][a] = error of component i with a directions.
  std::vector<std::vector<double>> tail(kappa);
  for (std::size_t i = 0; i < kappa; ++i) {
    std::vector<CVector> p;
    for (const auto& v : x) {
      if (v.size() != n) throw DimensionMismatch("exhaustive_allocation: data length differs from dimension");
      CVector out(n);
      if (const auto& b = d.basis()) {
        for (std::size_t c : d.block(i)) {
          Complex coef{};
          for (std::size_t r = 0; r < n; ++r) coef += std::conj((*b)(r, c)) * v[r];
          for (std::size_t r = 0; r < n; ++r) out[r] += coef * (*b)(r, c);
        }
      } else {
        for (std::size_t c : d.block(i)) out[c] = v[c];
      }
      p.push_back(std::move(out));
    }
    // Same nonzero spectrum either way; use the smaller matrix.
    const std::size_t m = p.size();
    const std::size_t bsize = d.block(i).size();
    std::vector<double> lam;
    if (m <= bsize) {
      Matrix g(m, m);
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t c = 0; c < m; ++c) g(a, c) = detail::inner(p[a], p[c]);
      lam = reference_eigenvalues(g);
    } else {
      // Restrict sum_k p_k p_k^* to the block's coordinates.
      Matrix coords(bsize, m);
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t r = 0; r < bsize; ++r) {
          const std::size_t c = d.block(i)[r];
          if (const auto& b = d.basis()) {
            Complex coef{};
            for (std::size_t t = 0; t < n; ++t) coef += std::conj((*b)(t, c)) * p[k][t];
            coords(r, k) = coef;
          } else {
            coords(r, k) = p[k][c];
          }
        }
      Matrix s(bsize, bsize);
      for (std::size_t r = 0; r < bsize; ++r)
        for (std::size_t t = 0; t < bsize; ++t)
          for (std::size_t k = 0; k < m; ++k) s(r, t) += coords(r, k) * std::conj(coords(t, k));
      lam = reference_eigenvalues(s);
    }
    for (double& l : lam) l = std::max(0.0, l);
    tail[i].assign(length + 1, 0.0);
    for (std::size_t a = 0; a <= length; ++a)
      for (std::size_t j = a; j < lam.size(); ++j) tail[i][a] += lam[j];
  }

  AllocationResult best{std::numeric_limits<double>::infinity(), {}};
  std::vector<std::size_t> alpha(kappa, 0);
  // Recursive descent, largest counts first.
  auto visit = [&](auto&& self, std::size_t i, std::size_t left) -> void {
    if (i == kappa) {
      double err = 0.0;
      for (std::size_t c = 0; c < kappa; ++c) err += tail[c][alpha[c]];
      if (err < best.error - 1e-14 * (1.0 + std::abs(best.error)) || best.alpha.empty()) {
        best.error = err;
        best.alpha = alpha;
      }
      return;
    }
    for (std::size_t a = left + 1; a-- > 0;) {
      alpha[i] = a;
      self(self, i + 1, left - a);
    }
  };
  visit(visit, 0, length);
  return best;
}

}  // namespace mifit::oracle
