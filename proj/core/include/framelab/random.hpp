#pragma once

#include <cstdint>
#include <random>

#include "framelab/model.hpp"
#include "framelab/numerics.hpp"

namespace framelab {

/// Deterministic generator for fixtures and probe vectors.
///
/// Only raw 64-bit draws from std::mt19937_64 are used (their sequence is
/// fixed by the standard), so generated fixtures are identical across
/// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  bool coin() { return (engine_() >> 63) != 0; }

  Complex scalar(Field field) {
    const double re = uniform(-1.0, 1.0);
    if (field == Field::Real) return {re, 0.0};
    return {re, uniform(-1.0, 1.0)};
  }

  Matrix matrix(Index rows, Index cols, Field field) {
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
      for (Index c = 0; c < cols; ++c) m(r, c) = scalar(field);
    }
    return m;
  }

  Vector unit_vector(Index n, Field field) {
    Vector v = matrix(n, 1, field).col(0);
    while (v.norm() < 1e-3) v = matrix(n, 1, field).col(0);
    return v / v.norm();
  }

  /// Unitary (orthogonal for real fields) matrix from a QR factorisation.
  Matrix unitary(Index n, Field field) {
    const Matrix a = matrix(n, n, field);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < n; ++i) {
      const double a_ii = std::abs(r(i, i));
      if (a_ii > 0.0) q.col(i) *= r(i, i) / a_ii;
    }
    if (field == Field::Real) q = q.real().cast<Complex>();
    return q;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace framelab
