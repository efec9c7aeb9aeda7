#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "hetcycle/errors.hpp"

namespace hetcycle {

inline constexpr std::size_t kDim = 4;

using Vec4 = std::array<double, kDim>;
using Mat4 = std::array<Vec4, kDim>;

inline Vec4 mat_vec(const Mat4& m, const Vec4& x) {
  Vec4 y{};
  for (std::size_t k = 0; k < kDim; ++k) {
    double s = 0.0;
    for (std::size_t l = 0; l < kDim; ++l) s += m[k][l] * x[l];
    y[k] = s;
  }
  return y;
}

inline double norm_inf(const Vec4& v) {
  double n = 0.0;
  for (double a : v) n = std::max(n, std::abs(a));
  return n;
}

/// Dense matrix of at most 2x2, used for transition matrices and radial blocks.
class SmallMatrix {
 public:
  SmallMatrix() = default;
  SmallMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    if (rows == 0 || cols == 0 || rows > 2 || cols > 2) {
      throw StructuralError("SmallMatrix supports shapes up to 2x2, got " + std::to_string(rows) +
                            "x" + std::to_string(cols));
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * 2 + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * 2 + c]; }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  double trace() const {
    require_square();
    return rows_ == 1 ? data_[0] : data_[0] + data_[3];
  }

  double determinant() const {
    require_square();
    return rows_ == 1 ? data_[0] : data_[0] * data_[3] - data_[1] * data_[2];
  }

  /// Eigenvalues of a square block (one per row).
  std::vector<std::complex<double>> eigenvalues() const {
    require_square();
    if (rows_ == 1) return {std::complex<double>(data_[0], 0.0)};
    const double tr = trace();
    const double det = determinant();
    const double disc = 0.25 * tr * tr - det;
    if (disc >= 0.0) {
      // Avoid cancellation: larger-magnitude root first, the other from det.
      const double sq = std::sqrt(disc);
      const double big = 0.5 * tr + (tr >= 0.0 ? sq : -sq);
      const double small = big != 0.0 ? det / big : 0.0;
      return {std::complex<double>(big, 0.0), std::complex<double>(small, 0.0)};
    }
    const double im = std::sqrt(-disc);
    return {std::complex<double>(0.5 * tr, im), std::complex<double>(0.5 * tr, -im)};
  }

  friend SmallMatrix operator*(const SmallMatrix& a, const SmallMatrix& b) {
    if (a.cols_ != b.rows_) {
      throw StructuralError("transition matrix shapes do not chain: " + a.shape() + " * " +
                            b.shape());
    }
    SmallMatrix p(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < a.cols_; ++k) s += a(i, k) * b(k, j);
        p(i, j) = s;
      }
    return p;
  }

  friend bool operator==(const SmallMatrix&, const SmallMatrix&) = default;

 private:
  void require_square() const {
    if (rows_ != cols_) throw StructuralError("square matrix required, got " + shape());
  }

  std::size_t rows_ = 1;
  std::size_t cols_ = 1;
  std::array<double, 4> data_{};
};

}  // namespace hetcycle
