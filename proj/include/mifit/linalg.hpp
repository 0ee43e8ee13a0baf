#pragma once

// Dense complex linear algebra used by the solvers: a small row-major matrix
// type, vector helpers, a cyclic Jacobi Hermitian eigensolver and a
// rank-revealing Gram-Schmidt.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mifit/errors.hpp"

namespace mifit {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw DimensionMismatch("Matrix: data length does not match shape");
    }
  }

  Matrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionMismatch("Matrix: ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  CVector column(std::size_t j) const {
    CVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Matrix adjoint() const {
    Matrix a(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) a(j, i) = std::conj((*this)(i, j));
    return a;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  double frobenius() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  const std::vector<Complex>& data() const noexcept { return data_; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("Matrix product: inner dimensions differ");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("Matrix difference: shapes differ");
    Matrix c(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) c.data_[i] = a.data_[i] - b.data_[i];
    return c;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// <a, b> = sum_i a_i conj(b_i); linear in the first argument.
inline Complex dot(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot: vector lengths differ");
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

inline double norm_squared(std::span<const Complex> a) {
  double s = 0.0;
  for (const auto& z : a) s += std::norm(z);
  return s;
}

inline double norm(std::span<const Complex> a) { return std::sqrt(norm_squared(a)); }

inline void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) {
  if (x.size() != y.size()) throw DimensionMismatch("axpy: vector lengths differ");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline CVector operator-(const CVector& a, const CVector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector difference: lengths differ");
  CVector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

inline CVector apply(const Matrix& a, std::span<const Complex> x) {
  if (a.cols() != x.size()) throw DimensionMismatch("apply: matrix/vector shapes differ");
  CVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

/// a^* x
inline CVector apply_adjoint(const Matrix& a, std::span<const Complex> x) {
  if (a.rows() != x.size()) throw DimensionMismatch("apply_adjoint: matrix/vector shapes differ");
  CVector y(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += std::conj(a(i, j)) * x[i];
  return y;
}

/// max_ij |a_ij - conj(a_ji)|
inline double hermitian_defect(const Matrix& a) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - std::conj(a(j, i))));
  return d;
}

inline double unitary_defect(const Matrix& u) {
  const Matrix g = u.adjoint() * u;
  return (g - Matrix::identity(g.rows())).max_abs();
}

struct EigenOptions {
  double hermitian_tolerance = 1e-10;
  double convergence = 1e-14;  // relative to the Frobenius norm
  int max_sweeps = 100;
};

/// Eigenpairs of a Hermitian matrix. values are descending; column j of
/// vectors is a unit right eigenvector for values[j].
struct HermitianEig {
  std::vector<double> values;
  Matrix vectors;
};

namespace detail {

inline double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// A <- J^* A J and V <- V J, where J acts on coordinates (p, q) and zeroes a_pq.
inline void jacobi_rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const Complex phase = apq / mag;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double theta = (aqq - app) / (2.0 * mag);
  double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  if (theta < 0.0) t = -t;
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  // J = diag(1, conj(phase)) * [[c, s], [-s, c]]
  const Complex jpp = c;
  const Complex jpq = s;
  const Complex jqp = -s * std::conj(phase);
  const Complex jqq = c * std::conj(phase);

  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * jpp + akq * jqp;
    a(k, q) = akp * jpq + akq * jqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (std::size_t k = 0; k < v.rows(); ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * jpp + vkq * jqp;
    v(k, q) = vkp * jpq + vkq * jqq;
  }
}

// First entry with modulus above 1e-12 becomes real and positive.
inline void fix_phase(Matrix& v, std::size_t col) {
  for (std::size_t i = 0; i < v.rows(); ++i) {
    const double mag = std::abs(v(i, col));
    if (mag > 1e-12) {
      const Complex rot = std::conj(v(i, col)) / mag;
      for (std::size_t k = 0; k < v.rows(); ++k) v(k, col) *= rot;
      v(i, col) = mag;
      return;
    }
  }
}

}  // namespace detail

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// The input is symmetrized as (A + A^*)/2 after checking that it is
/// Hermitian to `hermitian_tolerance` (scaled by max(1, |A|_max)). Rotations
/// sweep the strict upper triangle row by row until the off-diagonal
/// Frobenius norm drops below `convergence * |A|_F`. Eigenvalues are sorted
/// descending with a stable sort, so numerically tied eigenvalues keep the
/// sweep's diagonal order.
inline HermitianEig hermitian_eig(const Matrix& input, const EigenOptions& opts = {}) {
  if (!input.square()) throw InvalidInput("hermitian_eig: matrix is not square");
  const std::size_t n = input.rows();
  const double scale = std::max(1.0, input.max_abs());
  if (!std::isfinite(scale) || !std::isfinite(input.frobenius())) {
    throw NumericalFailure("hermitian_eig: matrix has non-finite entries or overflows");
  }
  if (hermitian_defect(input) > opts.hermitian_tolerance * scale) {
    throw InvalidInput("hermitian_eig: matrix is not Hermitian");
  }

  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (input(i, j) + std::conj(input(j, i)));
  Matrix v = Matrix::identity(n);

  const double target = opts.convergence * a.frobenius();
  int sweep = 0;
  while (detail::off_diagonal_norm(a) > target) {
    if (sweep++ >= opts.max_sweeps) {
      throw NumericalFailure("hermitian_eig: no convergence after " + std::to_string(opts.max_sweeps) +
                             " sweeps");
    }
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

  HermitianEig out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
    detail::fix_phase(out.vectors, c);
  }
  return out;
}

/// Orthonormal basis of span(vectors) by modified Gram-Schmidt with one
/// reorthogonalization pass. A vector is dropped when its residual norm is at
/// most `relative_tolerance` times the largest input norm.
/// Vectors whose residual norm is at most relative_tolerance * max(reference,
/// largest input norm) are dropped.
inline std::vector<CVector> orthonormalize(std::span<const CVector> vectors, double relative_tolerance = 1e-10,
                                           double reference = 0.0) {
  double largest = reference;
  for (const auto& v : vectors) largest = std::max(largest, norm(v));
  std::vector<CVector> basis;
  if (largest == 0.0) return basis;
  const double cutoff = relative_tolerance * largest;
  for (const auto& v : vectors) {
    CVector r = v;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) axpy(-dot(r, b), b, r);
    const double nr = norm(r);
    if (nr <= cutoff) continue;
    for (auto& z : r) z /= nr;
    basis.push_back(std::move(r));
  }
  return basis;
}

}  // namespace mifit
