#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "framelab/numerics.hpp"

namespace framelab {

enum class Field { Real, Complex };

std::string to_string(Field f);
Field field_from_string(const std::string& s);

struct HilbertSpace {
  Field field = Field::Real;
  Index dim = 1;
};

/// A closed subspace W_j stored by an orthonormal basis, together with its
/// weight v_j > 0.
class WeightedSubspace {
 public:
  WeightedSubspace(Matrix basis, double weight, const Tolerance& tol = {});

  /// The whole ambient space of dimension n, weight 1 unless given.
  static WeightedSubspace full(Index n, double weight = 1.0);

  /// Orthonormalises `spanning` first; use when the columns are arbitrary.
  static WeightedSubspace spanned_by(const Matrix& spanning, double weight,
                                     const Tolerance& tol = {});

  [[nodiscard]] const Matrix& basis() const { return basis_; }
  [[nodiscard]] double weight() const { return weight_; }
  [[nodiscard]] Index ambient_dim() const { return basis_.rows(); }
  [[nodiscard]] Index dim() const { return basis_.cols(); }

  /// pi_W = Q Q^*.
  [[nodiscard]] Matrix projection() const;

 private:
  Matrix basis_;
  double weight_;
};

/// Lambda_j : H -> H_j as a d_j x n matrix.
struct LocalOperator {
  Matrix matrix;

  [[nodiscard]] Index local_dim() const { return matrix.rows(); }
};

struct Member {
  WeightedSubspace subspace;
  LocalOperator local;
};

/// Finite family (W_j, Lambda_j, v_j) over an index set J = {0, ..., |J|-1}.
class GFusionSystem {
 public:
  GFusionSystem(HilbertSpace space, std::vector<Member> members);

  [[nodiscard]] const HilbertSpace& space() const { return space_; }
  [[nodiscard]] Index dim() const { return space_.dim; }
  [[nodiscard]] std::size_t size() const { return members_.size(); }
  [[nodiscard]] const std::vector<Member>& members() const { return members_; }
  [[nodiscard]] const Member& member(std::size_t j) const { return members_.at(j); }

  /// Sum of the local dimensions d_j, i.e. the dimension of the l2-sum space.
  [[nodiscard]] Index total_local_dim() const;

  /// Same subspaces and weights with new local operators.
  [[nodiscard]] GFusionSystem with_local_operators(const std::vector<Matrix>& locals) const;

  /// Every weight multiplied by `factor`.
  [[nodiscard]] GFusionSystem scaled_weights(double factor) const;

 private:
  HilbertSpace space_;
  std::vector<Member> members_;
};

/// k in B(H) with its singular value decomposition computed once.
class BoundedOperator {
 public:
  explicit BoundedOperator(Matrix m);

  [[nodiscard]] const Matrix& matrix() const { return matrix_; }
  [[nodiscard]] Index dim() const { return matrix_.rows(); }
  [[nodiscard]] const Svd& svd() const { return svd_; }
  [[nodiscard]] double norm() const { return svd_.largest(); }
  [[nodiscard]] Index rank(const Tolerance& tol = {}) const { return svd_.rank(tol); }
  [[nodiscard]] bool is_invertible(const Tolerance& tol = {}) const;
  [[nodiscard]] Matrix pinv(const Tolerance& tol = {}) const;
  /// Orthonormal basis of R(k).
  [[nodiscard]] Matrix range_basis(const Tolerance& tol = {}) const;
  [[nodiscard]] BoundedOperator adjoint() const;

 private:
  Matrix matrix_;
  Svd svd_;
};

struct ProjectionLemmaReport {
  double commutation_residual = 0.0;  // ||pi_V T^* - pi_V T^* pi_{TV}||
  std::optional<double> isometry_residual;  // ||pi_{TV} T - T pi_V||, only when T^*T = I
};

Matrix projection(const WeightedSubspace& w);

ProjectionLemmaReport check_projection_lemma(const WeightedSubspace& v, const BoundedOperator& t,
                                             const Tolerance& tol = {});

/// Embeds a k-frame {f_j} as the g-fusion system (H, <., f_j>, 1).
GFusionSystem embed_k_frame(const std::vector<Vector>& vectors);

/// A documented statement about a system that reports compare against.
struct FrameClaim {
  std::string operator_name;
  bool is_frame = true;
  std::optional<double> lower;
  std::optional<double> upper;
  std::string source;
};

/// A named system together with the operators (k, u, ...) that accompany
/// it. This is the in-memory form of a frame document on disk.
struct FrameDocument {
  std::string name;
  GFusionSystem system;
  std::map<std::string, Matrix> operators;
  std::vector<FrameClaim> claims;

  [[nodiscard]] BoundedOperator op(const std::string& name) const;
};

/// FIX-A, FIX-I and FIX-R<id> (id in 00..19), plus the perturbed
/// companions FIX-A-THETA (Theta_j = Lambda_j + 0.05 e_1^T) and FIX-I-THETA
/// (Theta_j = 1.1 Lambda_j).
FrameDocument fixture(const std::string& name);

/// Names of the frame fixtures (FIX-A, FIX-I, FIX-R00..FIX-R19).
std::vector<std::string> fixture_names();

/// Names of the perturbed companion fixtures.
std::vector<std::string> theta_fixture_names();

/// Random system with `members` members of local dimension `local_dim` in
/// dimension `dim`. When members * local_dim >= dim the synthesis operator is
/// regenerated until it has full row rank, so the result is a k-g-fusion
/// frame for every k.
FrameDocument random_system(std::uint64_t seed, Index dim, std::size_t members, Index local_dim,
                            Field field, const std::string& name);

}  // namespace framelab
