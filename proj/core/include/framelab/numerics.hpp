#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace framelab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Raised when an operation is called with arguments outside its contract
/// (shape mismatch, non-Hermitian input to an eigensolver, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for malformed user input: unknown fixture names, bad documents.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One tolerance policy shared by every verdict in the library.
///
/// A comparison at magnitude `s` passes when the discrepancy is at most
/// `abs + rel * max(1, s)`. The same rule sets the numerical-rank cutoff,
/// except that it is applied relative to the largest singular value.
struct Tolerance {
  double abs = 1e-10;
  double rel = 1e-9;

  [[nodiscard]] double at(double scale) const;
  [[nodiscard]] double rank_cutoff(double sigma_max) const { return abs + rel * sigma_max; }
  void validate() const;
};

struct HermitianEig {
  RealVector values;  // ascending
  Matrix vectors;     // orthonormal columns
};

struct Svd {
  Matrix u;
  RealVector sigma;  // descending
  Matrix v;

  [[nodiscard]] Index rank(const Tolerance& tol) const;
  [[nodiscard]] double largest() const { return sigma.size() == 0 ? 0.0 : sigma(0); }
};

/// Douglas range-inclusion certificate for L1 = L2 * u.
struct DouglasFactorization {
  bool included = false;
  Matrix u_min;              // pinv(L2) * L1
  double lambda_min = 0.0;   // ||u_min||
  double range_residual = 0.0;        // ||(I - L2 pinv(L2)) L1||
  double factorization_residual = 0.0;  // ||L1 - L2 u_min||
  bool majorization_holds = false;    // L1 L1^* <= lambda_min^2 L2 L2^*
};

bool is_real(const Matrix& m);
bool all_finite(const Matrix& m);

Matrix adjoint(const Matrix& m);
Matrix identity(Index n);

/// Largest singular value; 0 for empty matrices.
double operator_norm(const Matrix& m);

/// Smallest singular value of a square matrix.
double smallest_singular_value(const Matrix& m);

Svd svd(const Matrix& m);

HermitianEig hermitian_eig(const Matrix& m, const Tolerance& tol = {});

/// Moore-Penrose pseudo-inverse with the shared rank cutoff.
Matrix pinv(const Matrix& m, const Tolerance& tol = {});

Index numerical_rank(const Matrix& m, const Tolerance& tol = {});

/// Orthonormal basis (as columns) for the span of the input columns. The
/// largest-modulus entry of every output column is made real and positive.
Matrix orthonormalize(const Matrix& spanning, const Tolerance& tol = {});

/// Orthogonal projector onto the column space of `m`.
Matrix range_projector(const Matrix& m, const Tolerance& tol = {});

/// Smallest eigenvalue of a Hermitian matrix (after symmetrisation).
double min_eigenvalue(const Matrix& m, const Tolerance& tol = {});
double max_eigenvalue(const Matrix& m, const Tolerance& tol = {});

/// lambda_min(M) >= -(abs + rel * ||M||).
bool psd_check(const Matrix& m, const Tolerance& tol = {});

DouglasFactorization douglas_factor(const Matrix& l1, const Matrix& l2,
                                    const Tolerance& tol = {});

/// Positive square root of a positive semidefinite matrix; negative
/// eigenvalue noise is clamped to zero.
Matrix psd_sqrt(const Matrix& m, const Tolerance& tol = {});

}  // namespace framelab
