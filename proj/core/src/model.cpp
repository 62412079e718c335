#include "framelab/model.hpp"

#include <cmath>

namespace framelab {

std::string to_string(Field f) { return f == Field::Real ? "real" : "complex"; }

Field field_from_string(const std::string& s) {
  if (s == "real") return Field::Real;
  if (s == "complex") return Field::Complex;
  throw InputError("unknown field tag '" + s + "' (expected real or complex)");
}

WeightedSubspace::WeightedSubspace(Matrix basis, double weight, const Tolerance& tol)
    : basis_(std::move(basis)), weight_(weight) {
  if (!(weight_ > 0.0) || !std::isfinite(weight_)) {
    throw PreconditionError("subspace weight must be positive and finite");
  }
  if (!all_finite(basis_)) throw PreconditionError("subspace basis has non-finite entries");
  if (basis_.cols() > 0) {
    const Matrix gram = basis_.adjoint() * basis_;
    const double err = (gram - identity(basis_.cols())).norm();
    if (err > tol.at(1.0)) {
      throw PreconditionError("subspace basis is not orthonormal (||Q^*Q - I|| = " +
                              std::to_string(err) + ")");
    }
  }
}

WeightedSubspace WeightedSubspace::full(Index n, double weight) {
  return WeightedSubspace(identity(n), weight);
}

WeightedSubspace WeightedSubspace::spanned_by(const Matrix& spanning, double weight,
                                              const Tolerance& tol) {
  return WeightedSubspace(orthonormalize(spanning, tol), weight, tol);
}

Matrix WeightedSubspace::projection() const { return basis_ * basis_.adjoint(); }

GFusionSystem::GFusionSystem(HilbertSpace space, std::vector<Member> members)
    : space_(space), members_(std::move(members)) {
  if (space_.dim < 1) throw PreconditionError("Hilbert space dimension must be positive");
  if (members_.empty()) throw PreconditionError("index set J must be nonempty");
  for (std::size_t j = 0; j < members_.size(); ++j) {
    const auto& m = members_[j];
    if (m.subspace.ambient_dim() != space_.dim) {
      throw PreconditionError("member " + std::to_string(j) + ": subspace lives in dimension " +
                              std::to_string(m.subspace.ambient_dim()) + ", expected " +
                              std::to_string(space_.dim));
    }
    if (m.local.matrix.cols() != space_.dim) {
      throw PreconditionError("member " + std::to_string(j) + ": local operator has " +
                              std::to_string(m.local.matrix.cols()) + " columns, expected " +
                              std::to_string(space_.dim));
    }
    if (!all_finite(m.local.matrix)) {
      throw PreconditionError("member " + std::to_string(j) + ": non-finite local operator");
    }
  }
}

Index GFusionSystem::total_local_dim() const {
  Index total = 0;
  for (const auto& m : members_) total += m.local.local_dim();
  return total;
}

GFusionSystem GFusionSystem::with_local_operators(const std::vector<Matrix>& locals) const {
  if (locals.size() != members_.size()) {
    throw PreconditionError("expected " + std::to_string(members_.size()) +
                            " local operators, got " + std::to_string(locals.size()));
  }
  std::vector<Member> out;
  out.reserve(members_.size());
  for (std::size_t j = 0; j < members_.size(); ++j) {
    out.push_back(Member{members_[j].subspace, LocalOperator{locals[j]}});
  }
  HilbertSpace space = space_;
  for (const auto& l : locals) {
    if (!is_real(l)) space.field = Field::Complex;
  }
  return GFusionSystem(space, std::move(out));
}

GFusionSystem GFusionSystem::scaled_weights(double factor) const {
  std::vector<Member> out;
  out.reserve(members_.size());
  for (const auto& m : members_) {
    out.push_back(Member{WeightedSubspace(m.subspace.basis(), m.subspace.weight() * factor),
                         m.local});
  }
  return GFusionSystem(space_, std::move(out));
}

BoundedOperator::BoundedOperator(Matrix m) : matrix_(std::move(m)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw PreconditionError("bounded operator must be square");
  }
  if (!all_finite(matrix_)) throw PreconditionError("bounded operator has non-finite entries");
  svd_ = framelab::svd(matrix_);
}

bool BoundedOperator::is_invertible(const Tolerance& tol) const {
  return svd_.sigma.size() > 0 && svd_.sigma(svd_.sigma.size() - 1) > tol.rank_cutoff(norm());
}

Matrix BoundedOperator::pinv(const Tolerance& tol) const {
  const Index r = svd_.rank(tol);
  Matrix out = Matrix::Zero(dim(), dim());
  for (Index i = 0; i < r; ++i) {
    out.noalias() += (svd_.v.col(i) / svd_.sigma(i)) * svd_.u.col(i).adjoint();
  }
  return out;
}

Matrix BoundedOperator::range_basis(const Tolerance& tol) const {
  return orthonormalize(matrix_, tol);
}

BoundedOperator BoundedOperator::adjoint() const { return BoundedOperator(matrix_.adjoint()); }

Matrix projection(const WeightedSubspace& w) { return w.projection(); }

ProjectionLemmaReport check_projection_lemma(const WeightedSubspace& v, const BoundedOperator& t,
                                             const Tolerance& tol) {
  if (v.ambient_dim() != t.dim()) {
    throw PreconditionError("check_projection_lemma: subspace and operator dimensions differ");
  }
  const Matrix& tm = t.matrix();
  const Matrix pi_v = v.projection();
  const Matrix pi_tv = range_projector(tm * v.basis(), tol);

  ProjectionLemmaReport out;
  out.commutation_residual = operator_norm(pi_v * tm.adjoint() - pi_v * tm.adjoint() * pi_tv);
  const double isometry_defect = operator_norm(tm.adjoint() * tm - identity(t.dim()));
  if (isometry_defect <= tol.at(1.0)) {
    out.isometry_residual = operator_norm(pi_tv * tm - tm * pi_v);
  }
  return out;
}

GFusionSystem embed_k_frame(const std::vector<Vector>& vectors) {
  if (vectors.empty()) throw PreconditionError("embed_k_frame: empty vector family");
  const Index n = vectors.front().size();
  HilbertSpace space{Field::Real, n};
  std::vector<Member> members;
  members.reserve(vectors.size());
  for (const auto& f : vectors) {
    if (f.size() != n) throw PreconditionError("embed_k_frame: vector dimension mismatch");
    if (!is_real(f)) space.field = Field::Complex;
    // Lambda_j g = <g, f_j> = f_j^* g
    members.push_back(Member{WeightedSubspace::full(n), LocalOperator{f.adjoint()}});
  }
  return GFusionSystem(space, std::move(members));
}

BoundedOperator FrameDocument::op(const std::string& op_name) const {
  const auto it = operators.find(op_name);
  if (it == operators.end()) {
    throw InputError("document '" + name + "' has no operator named '" + op_name + "'");
  }
  return BoundedOperator(it->second);
}

}  // namespace framelab
