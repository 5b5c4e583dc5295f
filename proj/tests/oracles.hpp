#pragma once

// Reference computations used only by tests. Written with plain loops so they
// share no code path with the library routines they check.

#include "dcsp/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dcsp::oracle {

/// Solves (A^T A) c = A^T y by Gaussian elimination with partial pivoting.
inline std::vector<double> normal_equations(const Matrix& a, const Vector& y) {
  const auto m = static_cast<std::size_t>(a.rows());
  const auto k = static_cast<std::size_t>(a.cols());
  std::vector<std::vector<double>> g(k, std::vector<double>(k + 1, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < m; ++r) s += a(r, i) * a(r, j);
      g[i][j] = s;
    }
    double s = 0.0;
    for (std::size_t r = 0; r < m; ++r) s += a(r, i) * y(r);
    g[i][k] = s;
  }
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < k; ++r) {
      if (std::abs(g[r][col]) > std::abs(g[pivot][col])) pivot = r;
    }
    std::swap(g[col], g[pivot]);
    if (g[col][col] == 0.0) throw std::runtime_error("oracle: singular normal equations");
    for (std::size_t r = col + 1; r < k; ++r) {
      const double f = g[r][col] / g[col][col];
      for (std::size_t c = col; c <= k; ++c) g[r][c] -= f * g[col][c];
    }
  }
  std::vector<double> x(k);
  for (std::size_t i = k; i-- > 0;) {
    double s = g[i][k];
    for (std::size_t j = i + 1; j < k; ++j) s -= g[i][j] * x[j];
    x[i] = s / g[i][i];
  }
  return x;
}

inline std::vector<double> naive_correlate(const Matrix& a, const Vector& r) {
  std::vector<double> out(static_cast<std::size_t>(a.cols()));
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) s += a(i, j) * r(i);
    out[static_cast<std::size_t>(j)] = std::abs(s);
  }
  return out;
}

/// Gaussian test matrix; the tests only need variety, not portability.
inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal;
  Matrix a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = normal(rng);
  return a;
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

}  // namespace dcsp::oracle
