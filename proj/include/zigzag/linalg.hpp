#pragma once

#include <cstddef>
#include <vector>

namespace zigzag {

using Vector = std::vector<double>;

/// Minimal dense row-major matrix; dimensions here are tiny (d <= ~10).
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), a(static_cast<size_t>(r) * c, fill) {}

  double& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }
};

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
/// Throws InvalidCovariance if the matrix is not SPD.
Matrix cholesky(const Matrix& m);

/// Inverse of an SPD matrix via its Cholesky factor.
Matrix invert_spd(const Matrix& m);

/// log det of an SPD matrix via its Cholesky factor.
double log_det_spd(const Matrix& m);

Vector mat_vec(const Matrix& m, const Vector& v);

double dot(const Vector& a, const Vector& b);

}  // namespace zigzag
