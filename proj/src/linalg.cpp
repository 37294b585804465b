#include "zigzag/linalg.hpp"

#include <cassert>
#include <cmath>

#include "zigzag/errors.hpp"

namespace zigzag {

Matrix cholesky(const Matrix& m) {
  if (m.rows != m.cols || m.rows == 0) {
    throw InvalidCovariance("covariance must be square and non-empty");
  }
  const int n = m.rows;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      if (std::abs(m.at(i, j) - m.at(j, i)) >
          1e-12 * (1.0 + std::abs(m.at(i, j)))) {
        throw InvalidCovariance("covariance must be symmetric");
      }
    }
  }
  Matrix l(n, n);
  for (int j = 0; j < n; ++j) {
    double d = m.at(j, j);
    for (int k = 0; k < j; ++k) d -= l.at(j, k) * l.at(j, k);
    if (!(d > 0.0)) throw InvalidCovariance("covariance is not positive definite");
    l.at(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = m.at(i, j);
      for (int k = 0; k < j; ++k) s -= l.at(i, k) * l.at(j, k);
      l.at(i, j) = s / l.at(j, j);
    }
  }
  return l;
}

Matrix invert_spd(const Matrix& m) {
  const Matrix l = cholesky(m);
  const int n = m.rows;
  // Solve L L^T X = I column by column.
  Matrix inv(n, n);
  std::vector<double> y(static_cast<size_t>(n));
  for (int c = 0; c < n; ++c) {
    for (int i = 0; i < n; ++i) {
      double s = (i == c) ? 1.0 : 0.0;
      for (int k = 0; k < i; ++k) s -= l.at(i, k) * y[static_cast<size_t>(k)];
      y[static_cast<size_t>(i)] = s / l.at(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = y[static_cast<size_t>(i)];
      for (int k = i + 1; k < n; ++k) s -= l.at(k, i) * inv.at(k, c);
      inv.at(i, c) = s / l.at(i, i);
    }
  }
  // Symmetrize to remove rounding skew.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      double v = 0.5 * (inv.at(i, j) + inv.at(j, i));
      inv.at(i, j) = v;
      inv.at(j, i) = v;
    }
  }
  return inv;
}

double log_det_spd(const Matrix& m) {
  const Matrix l = cholesky(m);
  double s = 0.0;
  for (int i = 0; i < m.rows; ++i) s += std::log(l.at(i, i));
  return 2.0 * s;
}

Vector mat_vec(const Matrix& m, const Vector& v) {
  assert(static_cast<int>(v.size()) == m.cols);
  Vector out(static_cast<size_t>(m.rows), 0.0);
  for (int i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += m.at(i, j) * v[static_cast<size_t>(j)];
    out[static_cast<size_t>(i)] = s;
  }
  return out;
}

double dot(const Vector& a, const Vector& b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace zigzag
