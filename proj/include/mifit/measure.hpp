#pragma once

// Finite models of a measure space (Omega, mu) and of L^2(Omega, H) for a
// finite-dimensional fiber space H = C^n.
//
// A multiplicatively invariant space is carried by its range function
// omega -> J(omega); RangeBasis stores an orthonormal basis of each J(omega).
// Orthogonal projection onto the space acts fiber by fiber.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mifit/errors.hpp"
#include "mifit/linalg.hpp"

namespace mifit {

/// Atomic measure on finitely many fibers. Weights play the role of mu({omega}).
class WeightedGrid {
 public:
  WeightedGrid(std::vector<std::string> fibers, std::vector<double> weights)
      : fibers_(std::move(fibers)), weights_(std::move(weights)) {
    if (fibers_.empty()) throw InvalidInput("WeightedGrid: no fibers");
    if (fibers_.size() != weights_.size()) {
      throw InvalidInput("WeightedGrid: " + std::to_string(fibers_.size()) + " fibers but " +
                         std::to_string(weights_.size()) + " weights");
    }
    std::set<std::string> seen;
    for (std::size_t i = 0; i < fibers_.size(); ++i) {
      if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
        throw InvalidInput("WeightedGrid: fiber " + std::to_string(i) + " ('" + fibers_[i] +
                           "') has non-positive weight");
      }
      if (!seen.insert(fibers_[i]).second) {
        throw InvalidInput("WeightedGrid: duplicate fiber identifier '" + fibers_[i] + "'");
      }
    }
  }

  std::size_t size() const noexcept { return fibers_.size(); }
  const std::string& fiber(std::size_t i) const { return fibers_.at(i); }
  double weight(std::size_t i) const { return weights_.at(i); }
  const std::vector<std::string>& fibers() const noexcept { return fibers_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  double total_measure() const {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
  }

  friend bool operator==(const WeightedGrid&, const WeightedGrid&) = default;

 private:
  std::vector<std::string> fibers_;
  std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const WeightedGrid>;

inline GridPtr make_grid(std::vector<std::string> fibers, std::vector<double> weights) {
  return std::make_shared<const WeightedGrid>(std::move(fibers), std::move(weights));
}

/// Grid with fibers named "0", "1", ... and the given weights.
inline GridPtr make_grid(std::vector<double> weights) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < weights.size(); ++i) ids.push_back(std::to_string(i));
  return make_grid(std::move(ids), std::move(weights));
}

inline bool same_grid(const GridPtr& a, const GridPtr& b) {
  return a == b || (a && b && *a == *b);
}

/// Orthogonal decomposition H = H_1 + ... + H_kappa of C^n.
///
/// Each summand is spanned by a group of columns of `basis` (the identity when
/// no basis is given); `blocks` lists those column indices.
class Decomposition {
 public:
  Decomposition(std::size_t dim, std::vector<std::vector<std::size_t>> blocks,
                std::optional<Matrix> basis = std::nullopt)
      : dim_(dim), blocks_(std::move(blocks)), basis_(std::move(basis)) {
    if (dim_ == 0) throw InvalidInput("Decomposition: dimension must be positive");
    if (blocks_.empty()) throw InvalidInput("Decomposition: no blocks");
    std::vector<int> hits(dim_, 0);
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      if (blocks_[b].empty()) throw InvalidInput("Decomposition: block " + std::to_string(b) + " is empty");
      for (std::size_t c : blocks_[b]) {
        if (c >= dim_) throw InvalidInput("Decomposition: coordinate " + std::to_string(c) + " out of range");
        ++hits[c];
      }
    }
    for (std::size_t c = 0; c < dim_; ++c) {
      if (hits[c] != 1) {
        throw InvalidInput("Decomposition: coordinate " + std::to_string(c) + " appears " +
                           std::to_string(hits[c]) + " times");
      }
    }
    if (basis_) {
      if (basis_->rows() != dim_ || basis_->cols() != dim_) {
        throw InvalidInput("Decomposition: basis must be " + std::to_string(dim_) + "x" + std::to_string(dim_));
      }
      if (unitary_defect(*basis_) > 1e-12) throw InvalidInput("Decomposition: basis is not unitary");
    }
  }

  static Decomposition whole(std::size_t dim) {
    std::vector<std::size_t> all(dim);
    for (std::size_t i = 0; i < dim; ++i) all[i] = i;
    return Decomposition(dim, {all});
  }

  static Decomposition singletons(std::size_t dim) {
    std::vector<std::vector<std::size_t>> b;
    for (std::size_t i = 0; i < dim; ++i) b.push_back({i});
    return Decomposition(dim, std::move(b));
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  const std::vector<std::vector<std::size_t>>& blocks() const noexcept { return blocks_; }
  const std::vector<std::size_t>& block(std::size_t j) const { return blocks_.at(j); }
  const std::optional<Matrix>& basis() const noexcept { return basis_; }

  /// P_{H_j} v
  CVector project(std::span<const Complex> v, std::size_t j) const {
    if (j >= blocks_.size()) {
      throw InvalidInput("Decomposition: block index " + std::to_string(j) + " out of range (kappa = " +
                         std::to_string(blocks_.size()) + ")");
    }
    if (v.size() != dim_) throw DimensionMismatch("Decomposition: vector length differs from dimension");
    if (!basis_) {
      CVector out(dim_);
      for (std::size_t c : blocks_[j]) out[c] = v[c];
      return out;
    }
    const CVector coeffs = apply_adjoint(*basis_, v);
    CVector masked(dim_);
    for (std::size_t c : blocks_[j]) masked[c] = coeffs[c];
    return mifit::apply(*basis_, masked);
  }

 private:
  std::size_t dim_;
  std::vector<std::vector<std::size_t>> blocks_;
  std::optional<Matrix> basis_;
};

/// The fiber Hilbert space C^n, optionally carrying a decomposition.
struct FiberSpace {
  std::size_t dim;
  std::optional<Decomposition> decomposition;

  explicit FiberSpace(std::size_t n, std::optional<Decomposition> d = std::nullopt)
      : dim(n), decomposition(std::move(d)) {
    if (dim == 0) throw InvalidInput("FiberSpace: dimension must be positive");
    if (decomposition && decomposition->dim() != dim) {
      throw DimensionMismatch("FiberSpace: decomposition dimension differs");
    }
  }
};

/// An element of L^2(Omega, C^n): one vector per fiber.
class VectorField {
 public:
  VectorField(GridPtr grid, std::size_t dim, std::vector<CVector> values)
      : grid_(std::move(grid)), dim_(dim), values_(std::move(values)) {
    if (!grid_) throw InvalidInput("VectorField: null grid");
    if (dim_ == 0) throw InvalidInput("VectorField: fiber dimension must be positive");
    if (values_.size() != grid_->size()) {
      throw DimensionMismatch("VectorField: " + std::to_string(values_.size()) + " values for " +
                              std::to_string(grid_->size()) + " fibers");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (values_[i].size() != dim_) {
        throw DimensionMismatch("VectorField: value at fiber " + std::to_string(i) + " has length " +
                                std::to_string(values_[i].size()) + ", expected " + std::to_string(dim_));
      }
      for (const auto& z : values_[i]) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
          throw InvalidInput("VectorField: non-finite entry at fiber " + std::to_string(i));
        }
      }
    }
  }

  static VectorField zero(GridPtr grid, std::size_t dim) {
    const std::size_t n = grid ? grid->size() : 0;
    return VectorField(std::move(grid), dim, std::vector<CVector>(n, CVector(dim)));
  }

  /// The same vector on every fiber.
  static VectorField constant(GridPtr grid, CVector v) {
    const std::size_t n = grid ? grid->size() : 0;
    const std::size_t d = v.size();
    return VectorField(std::move(grid), d, std::vector<CVector>(n, v));
  }

  const GridPtr& grid() const noexcept { return grid_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t fiber_count() const noexcept { return values_.size(); }
  const CVector& operator[](std::size_t i) const { return values_[i]; }
  const std::vector<CVector>& values() const noexcept { return values_; }

  friend VectorField operator-(const VectorField& a, const VectorField& b) {
    a.require_compatible(b, "field difference");
    std::vector<CVector> out(a.values_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values_[i] - b.values_[i];
    return VectorField(a.grid_, a.dim_, std::move(out));
  }

  friend VectorField operator+(const VectorField& a, const VectorField& b) {
    a.require_compatible(b, "field sum");
    std::vector<CVector> out(a.values_);
    for (std::size_t i = 0; i < out.size(); ++i) axpy(1.0, b.values_[i], out[i]);
    return VectorField(a.grid_, a.dim_, std::move(out));
  }

  void require_compatible(const VectorField& other, const char* what) const {
    if (!same_grid(grid_, other.grid_)) throw DimensionMismatch(std::string(what) + ": grids differ");
    if (dim_ != other.dim_) throw DimensionMismatch(std::string(what) + ": fiber dimensions differ");
  }

 private:
  GridPtr grid_;
  std::size_t dim_;
  std::vector<CVector> values_;
};

/// Orthonormal basis of J(omega) at every fiber (possibly empty).
class RangeBasis {
 public:
  static constexpr double kOrthonormalTolerance = 1e-10;

  RangeBasis(GridPtr grid, std::size_t dim, std::vector<std::vector<CVector>> basis)
      : grid_(std::move(grid)), dim_(dim), basis_(std::move(basis)) {
    if (!grid_) throw InvalidInput("RangeBasis: null grid");
    if (dim_ == 0) throw InvalidInput("RangeBasis: fiber dimension must be positive");
    if (basis_.size() != grid_->size()) throw DimensionMismatch("RangeBasis: one basis per fiber required");
    for (std::size_t f = 0; f < basis_.size(); ++f) {
      const auto& b = basis_[f];
      if (b.size() > dim_) throw InvalidInput("RangeBasis: more basis vectors than the fiber dimension");
      for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i].size() != dim_) throw DimensionMismatch("RangeBasis: basis vector of wrong length");
        for (std::size_t j = 0; j <= i; ++j) {
          const Complex g = dot(b[i], b[j]);
          const Complex want = i == j ? Complex{1.0} : Complex{};
          if (std::abs(g - want) > kOrthonormalTolerance) {
            throw InvalidInput("RangeBasis: basis at fiber " + std::to_string(f) + " is not orthonormal");
          }
        }
      }
    }
  }

  static RangeBasis empty(GridPtr grid, std::size_t dim) {
    const std::size_t n = grid ? grid->size() : 0;
    return RangeBasis(std::move(grid), dim, std::vector<std::vector<CVector>>(n));
  }

  static RangeBasis full(GridPtr grid, std::size_t dim) {
    std::vector<CVector> e(dim, CVector(dim));
    for (std::size_t i = 0; i < dim; ++i) e[i][i] = 1.0;
    const std::size_t n = grid ? grid->size() : 0;
    return RangeBasis(std::move(grid), dim, std::vector<std::vector<CVector>>(n, e));
  }

  /// J(omega) = span{ F(omega) : F in fields }, orthonormalized per fiber.
  /// The drop tolerance is relative to the largest value over all fibers, so
  /// round-off on an otherwise empty fiber does not produce a direction.
  static RangeBasis spanned_by(GridPtr grid, std::size_t dim, std::span<const VectorField> fields,
                               double relative_tolerance = 1e-10) {
    std::vector<std::vector<CVector>> basis(grid->size());
    double largest = 0.0;
    for (const auto& f : fields) {
      if (!same_grid(grid, f.grid()) || f.dim() != dim) throw DimensionMismatch("RangeBasis: field mismatch");
      for (const auto& v : f.values()) largest = std::max(largest, norm(v));
    }
    for (std::size_t w = 0; w < grid->size(); ++w) {
      std::vector<CVector> vs;
      for (const auto& f : fields) vs.push_back(f[w]);
      basis[w] = orthonormalize(vs, relative_tolerance, largest);
    }
    return RangeBasis(std::move(grid), dim, std::move(basis));
  }

  const GridPtr& grid() const noexcept { return grid_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t fiber_count() const noexcept { return basis_.size(); }
  const std::vector<CVector>& at(std::size_t fiber) const { return basis_.at(fiber); }
  std::size_t fiber_dim(std::size_t fiber) const { return basis_.at(fiber).size(); }
  const std::vector<std::vector<CVector>>& bases() const noexcept { return basis_; }

  /// P_{J(omega)} v
  CVector project(std::size_t fiber, std::span<const Complex> v) const {
    CVector out(dim_);
    for (const auto& b : basis_.at(fiber)) axpy(dot(v, b), b, out);
    return out;
  }

  /// Matrix of P_{J(omega)}.
  Matrix projector(std::size_t fiber) const {
    Matrix p(dim_, dim_);
    for (const auto& b : basis_.at(fiber))
      for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) p(i, j) += b[i] * std::conj(b[j]);
    return p;
  }

 private:
  GridPtr grid_;
  std::size_t dim_;
  std::vector<std::vector<CVector>> basis_;
};

/// <F, G> = sum_omega weight(omega) <F(omega), G(omega)>.
inline Complex inner_product(const VectorField& f, const VectorField& g) {
  f.require_compatible(g, "inner_product");
  Complex s{};
  for (std::size_t w = 0; w < f.fiber_count(); ++w) s += f.grid()->weight(w) * dot(f[w], g[w]);
  return s;
}

inline double norm_squared(const VectorField& f) {
  double s = 0.0;
  for (std::size_t w = 0; w < f.fiber_count(); ++w) s += f.grid()->weight(w) * norm_squared(f[w]);
  return s;
}

inline double norm(const VectorField& f) { return std::sqrt(norm_squared(f)); }

/// (P_M F)(omega) = P_{J(omega)} F(omega)
inline VectorField project_fiberwise(const RangeBasis& r, const VectorField& f) {
  if (!same_grid(r.grid(), f.grid())) throw DimensionMismatch("project_fiberwise: grids differ");
  if (r.dim() != f.dim()) throw DimensionMismatch("project_fiberwise: fiber dimensions differ");
  std::vector<CVector> out(f.fiber_count());
  for (std::size_t w = 0; w < out.size(); ++w) out[w] = r.project(w, f[w]);
  return VectorField(f.grid(), f.dim(), std::move(out));
}

/// (P_j F)(omega) = P_{H_j} F(omega)
inline VectorField project_component(const VectorField& f, const Decomposition& d, std::size_t j) {
  if (d.dim() != f.dim()) throw DimensionMismatch("project_component: decomposition dimension differs");
  if (j >= d.block_count()) {
    throw InvalidInput("project_component: block index " + std::to_string(j) + " out of range");
  }
  std::vector<CVector> out(f.fiber_count());
  for (std::size_t w = 0; w < out.size(); ++w) out[w] = d.project(f[w], j);
  return VectorField(f.grid(), f.dim(), std::move(out));
}

namespace detail {

inline void require_shared_grid(std::span<const VectorField> data, const char* what) {
  if (data.empty()) throw InvalidInput(std::string(what) + ": empty data list");
  for (const auto& f : data) data.front().require_compatible(f, what);
}

}  // namespace detail

}  // namespace mifit
