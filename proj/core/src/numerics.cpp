#include "framelab/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace framelab {

namespace {

constexpr Index kJacobiLimit = 64;

template <typename M>
void fill_svd(const M& m, Svd& out) {
  const auto options = Eigen::ComputeThinU | Eigen::ComputeThinV;
  if (std::min(m.rows(), m.cols()) <= kJacobiLimit) {
    Eigen::JacobiSVD<M> solver(m, options);
    out.u = solver.matrixU().template cast<Complex>();
    out.sigma = solver.singularValues();
    out.v = solver.matrixV().template cast<Complex>();
  } else {
    Eigen::BDCSVD<M> solver(m, options);
    out.u = solver.matrixU().template cast<Complex>();
    out.sigma = solver.singularValues();
    out.v = solver.matrixV().template cast<Complex>();
  }
}

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw PreconditionError(std::string(what) + ": matrix must be square, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_hermitian(const Matrix& m, const Tolerance& tol, const char* what) {
  require_square(m, what);
  const Matrix skew = m - m.adjoint();
  const double bound = tol.at(operator_norm(m));
  if (skew.norm() <= bound) return;
  if (operator_norm(skew) > bound) {
    throw PreconditionError(std::string(what) + ": matrix is not Hermitian");
  }
}

// Phase convention: the largest-modulus entry of each column becomes real
// and positive, so real inputs give real bases with a fixed sign.
void normalize_phases(Matrix& q) {
  for (Index c = 0; c < q.cols(); ++c) {
    Index best = 0;
    double best_abs = -1.0;
    for (Index r = 0; r < q.rows(); ++r) {
      const double a = std::abs(q(r, c));
      if (a > best_abs * (1.0 + 1e-12)) {
        best_abs = a;
        best = r;
      }
    }
    if (best_abs > 0.0) q.col(c) *= std::conj(q(best, c)) / best_abs;
  }
}

}  // namespace

double Tolerance::at(double scale) const { return abs + rel * std::max(1.0, scale); }

void Tolerance::validate() const {
  if (!(abs >= 0.0) || !(rel >= 0.0)) {
    throw InputError("tolerances must be non-negative");
  }
}

Index Svd::rank(const Tolerance& tol) const {
  if (sigma.size() == 0) return 0;
  const double cutoff = tol.rank_cutoff(sigma(0));
  Index r = 0;
  while (r < sigma.size() && sigma(r) > cutoff) ++r;
  return r;
}

bool is_real(const Matrix& m) { return (m.array().imag() == 0.0).all(); }

bool all_finite(const Matrix& m) { return m.allFinite(); }

Matrix adjoint(const Matrix& m) { return m.adjoint(); }

Matrix identity(Index n) { return Matrix::Identity(n, n); }

Svd svd(const Matrix& m) {
  Svd out;
  if (m.rows() == 0 || m.cols() == 0) {
    out.u = Matrix::Zero(m.rows(), 0);
    out.sigma = RealVector::Zero(0);
    out.v = Matrix::Zero(m.cols(), 0);
    return out;
  }
  if (is_real(m)) {
    const Eigen::MatrixXd re = m.real();
    fill_svd(re, out);
  } else {
    fill_svd(m, out);
  }
  return out;
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return svd(m).largest();
}

double smallest_singular_value(const Matrix& m) {
  require_square(m, "smallest_singular_value");
  if (m.size() == 0) return 0.0;
  const Svd s = svd(m);
  return s.sigma(s.sigma.size() - 1);
}

HermitianEig hermitian_eig(const Matrix& m, const Tolerance& tol) {
  require_hermitian(m, tol, "hermitian_eig");
  HermitianEig out;
  const Matrix sym = 0.5 * (m + m.adjoint());
  if (is_real(sym)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym.real());
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();
  }
  return out;
}

Matrix pinv(const Matrix& m, const Tolerance& tol) {
  const Svd s = svd(m);
  const Index r = s.rank(tol);
  Matrix out = Matrix::Zero(m.cols(), m.rows());
  for (Index i = 0; i < r; ++i) {
    out.noalias() += (s.v.col(i) / s.sigma(i)) * s.u.col(i).adjoint();
  }
  return out;
}

Index numerical_rank(const Matrix& m, const Tolerance& tol) { return svd(m).rank(tol); }

Matrix orthonormalize(const Matrix& spanning, const Tolerance& tol) {
  const Svd s = svd(spanning);
  const Index r = s.rank(tol);
  Matrix q = s.u.leftCols(r);
  normalize_phases(q);
  return q;
}

Matrix range_projector(const Matrix& m, const Tolerance& tol) {
  const Matrix q = orthonormalize(m, tol);
  return q * q.adjoint();
}

double min_eigenvalue(const Matrix& m, const Tolerance& tol) {
  const HermitianEig e = hermitian_eig(m, tol);
  return e.values.size() == 0 ? 0.0 : e.values(0);
}

double max_eigenvalue(const Matrix& m, const Tolerance& tol) {
  const HermitianEig e = hermitian_eig(m, tol);
  return e.values.size() == 0 ? 0.0 : e.values(e.values.size() - 1);
}

bool psd_check(const Matrix& m, const Tolerance& tol) {
  if (m.size() == 0) return true;
  const HermitianEig e = hermitian_eig(m, tol);
  const double norm = std::max(std::abs(e.values(0)), std::abs(e.values(e.values.size() - 1)));
  return e.values(0) >= -(tol.abs + tol.rel * norm);
}

DouglasFactorization douglas_factor(const Matrix& l1, const Matrix& l2, const Tolerance& tol) {
  if (l1.rows() != l2.rows()) {
    throw PreconditionError("douglas_factor: operators must share a codomain (row count " +
                            std::to_string(l1.rows()) + " vs " + std::to_string(l2.rows()) +
                            ")");
  }
  DouglasFactorization out;
  const Matrix l2_pinv = pinv(l2, tol);
  const Matrix outside = l1 - l2 * (l2_pinv * l1);
  const double l1_norm = operator_norm(l1);

  out.range_residual = operator_norm(outside);
  out.included = out.range_residual <= tol.at(l1_norm);
  out.u_min = l2_pinv * l1;
  out.lambda_min = operator_norm(out.u_min);
  out.factorization_residual = operator_norm(l1 - l2 * out.u_min);
  if (out.included) {
    const double lambda_sq = out.lambda_min * out.lambda_min;
    out.majorization_holds =
        psd_check(lambda_sq * (l2 * l2.adjoint()) - l1 * l1.adjoint(), tol);
  }
  return out;
}

Matrix psd_sqrt(const Matrix& m, const Tolerance& tol) {
  const HermitianEig e = hermitian_eig(m, tol);
  const RealVector roots = e.values.cwiseMax(0.0).cwiseSqrt();
  return e.vectors * roots.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

}  // namespace framelab
