#pragma once

// Reference computations for the tests. None of them call the library's
// spectral routines; they use plain Eigen arithmetic and textbook loops.

#include <string>
#include <vector>

#include "framelab/document_io.hpp"
#include "framelab/model.hpp"

namespace oracle {

using framelab::Index;
using framelab::Json;
using framelab::Matrix;
using framelab::Vector;

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations on its real
/// symmetric embedding [[Re, -Im], [Im, Re]]; ascending.
std::vector<double> jacobi_eigenvalues(const Matrix& h);

/// Eigenvalues of a real symmetric matrix as roots of its characteristic
/// polynomial (Faddeev-LeVerrier coefficients, sign-change bisection).
std::vector<double> charpoly_eigenvalues(const Eigen::MatrixXd& a);

/// Orthonormal basis of the column span by modified Gram-Schmidt with one
/// reorthogonalisation pass. Columns whose residual falls below
/// `drop * max column norm` are discarded.
Matrix gram_schmidt(const Matrix& m, double drop = 1e-10);

/// ||(I - QQ^*) b|| for Q = gram_schmidt(a).
double distance_to_span(const Matrix& a, const Matrix& b);

/// sum_j v_j^2 pi_j Lambda_j^* Lambda_j pi_j assembled entry by entry from
/// quadratic forms, with pi_j rebuilt from a Gram-Schmidt basis.
Matrix frame_operator(const framelab::GFusionSystem& system);

/// sup{a : g2 - a g1 >= 0} by bisection on the Jacobi minimum eigenvalue.
double psd_bisection(const Matrix& g2, const Matrix& g1);

/// Smallest Jacobi eigenvalue.
double min_eigenvalue(const Matrix& h);

std::string source_path(const std::string& relative);
framelab::FrameDocument load_fixture(const std::string& name);
Json load_oracle(const std::string& name);
Json load_corpus(const std::string& kind);
framelab::Field field_of(const Json& c);

}  // namespace oracle
