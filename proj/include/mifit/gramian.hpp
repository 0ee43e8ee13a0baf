#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mifit/errors.hpp"
#include "mifit/linalg.hpp"
#include "mifit/measure.hpp"

namespace mifit {

inline constexpr double kDefaultEpsilon = 1e-10;

/// Per-fiber m x m matrices (G(omega))_ij = <F_i(omega), F_j(omega)>.
class GramianField {
 public:
  static constexpr double kHermitianTolerance = 1e-10;

  GramianField(GridPtr grid, std::vector<Matrix> matrices) : grid_(std::move(grid)), matrices_(std::move(matrices)) {
    if (!grid_) throw InvalidInput("GramianField: null grid");
    if (matrices_.size() != grid_->size()) throw DimensionMismatch("GramianField: one matrix per fiber required");
    order_ = matrices_.front().rows();
    for (std::size_t w = 0; w < matrices_.size(); ++w) {
      const Matrix& g = matrices_[w];
      if (!g.square() || g.rows() != order_ || order_ == 0) {
        throw DimensionMismatch("GramianField: matrix at fiber " + std::to_string(w) + " has the wrong shape");
      }
      if (hermitian_defect(g) > kHermitianTolerance * std::max(1.0, g.max_abs())) {
        throw InvalidInput("GramianField: matrix at fiber " + std::to_string(w) + " is not Hermitian");
      }
    }
  }

  const GridPtr& grid() const noexcept { return grid_; }
  std::size_t order() const noexcept { return order_; }
  std::size_t fiber_count() const noexcept { return matrices_.size(); }
  const Matrix& operator[](std::size_t w) const { return matrices_[w]; }

 private:
  GridPtr grid_;
  std::vector<Matrix> matrices_;
  std::size_t order_ = 0;
};

inline GramianField gramian(std::span<const VectorField> data) {
  detail::require_shared_grid(data, "gramian");
  const std::size_t m = data.size();
  const GridPtr& grid = data.front().grid();
  std::vector<Matrix> mats;
  mats.reserve(grid->size());
  for (std::size_t w = 0; w < grid->size(); ++w) {
    Matrix g(m, m);
    for (std::size_t i = 0; i < m; ++i) {
      g(i, i) = norm_squared(data[i][w]);
      for (std::size_t j = i + 1; j < m; ++j) {
        g(i, j) = dot(data[i][w], data[j][w]);
        g(j, i) = std::conj(g(i, j));
      }
    }
    mats.push_back(std::move(g));
  }
  return GramianField(grid, std::move(mats));
}

/// Fiberwise eigendecomposition G(omega) = U(omega) diag(lambda) U(omega)^*.
///
/// Eigenvalues are clamped at zero and descending. The left eigenvector
/// y_j(omega) is the conjugate transpose of column j of U(omega). An eigenvalue
/// counts as nonzero only above epsilon * lambda_1(omega); a fiber with
/// lambda_1 = 0 has rank 0.
class SpectralField {
 public:
  SpectralField(GridPtr grid, std::vector<std::vector<double>> values, std::vector<Matrix> vectors, double epsilon)
      : grid_(std::move(grid)), values_(std::move(values)), vectors_(std::move(vectors)), epsilon_(epsilon) {
    if (values_.size() != grid_->size() || vectors_.size() != grid_->size()) {
      throw DimensionMismatch("SpectralField: one decomposition per fiber required");
    }
  }

  const GridPtr& grid() const noexcept { return grid_; }
  std::size_t fiber_count() const noexcept { return values_.size(); }
  std::size_t order() const noexcept { return values_.empty() ? 0 : values_.front().size(); }
  double epsilon() const noexcept { return epsilon_; }

  const std::vector<double>& eigenvalues(std::size_t w) const { return values_.at(w); }
  const Matrix& right_eigenvectors(std::size_t w) const { return vectors_.at(w); }

  /// y_j(omega) as a row vector: entries conj(U_kj).
  CVector left_eigenvector(std::size_t w, std::size_t j) const {
    const Matrix& u = vectors_.at(w);
    CVector y(u.rows());
    for (std::size_t k = 0; k < u.rows(); ++k) y[k] = std::conj(u(k, j));
    return y;
  }

  double threshold(std::size_t w) const { return epsilon_ * values_.at(w).front(); }

  bool is_nonzero(std::size_t w, std::size_t j) const {
    const auto& v = values_.at(w);
    return v.front() > 0.0 && v.at(j) > threshold(w);
  }

  std::size_t rank(std::size_t w) const {
    std::size_t r = 0;
    for (std::size_t j = 0; j < values_.at(w).size(); ++j) r += is_nonzero(w, j) ? 1 : 0;
    return r;
  }

 private:
  GridPtr grid_;
  std::vector<std::vector<double>> values_;
  std::vector<Matrix> vectors_;
  double epsilon_;
};

inline SpectralField spectral(const GramianField& g, double epsilon = kDefaultEpsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InvalidInput("spectral: epsilon must lie in [0, 1)");
  std::vector<std::vector<double>> values;
  std::vector<Matrix> vectors;
  values.reserve(g.fiber_count());
  vectors.reserve(g.fiber_count());
  for (std::size_t w = 0; w < g.fiber_count(); ++w) {
    HermitianEig e = hermitian_eig(g[w]);
    const double top = std::max(0.0, e.values.front());
    if (e.values.back() < -1e-10 * std::max(top, g[w].max_abs())) {
      throw InvalidInput("spectral: Gramian at fiber " + std::to_string(w) + " is not positive semidefinite");
    }
    for (double& l : e.values) l = std::max(0.0, l);
    values.push_back(std::move(e.values));
    vectors.push_back(std::move(e.vectors));
  }
  return SpectralField(g.grid(), std::move(values), std::move(vectors), epsilon);
}

}  // namespace mifit
