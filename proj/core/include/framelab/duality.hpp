#pragma once

#include <string>
#include <vector>

#include "framelab/frame_ops.hpp"
#include "framelab/model.hpp"

namespace framelab {

/// A subset I of the index set J, as sorted member indices.
using IndexSet = std::vector<std::size_t>;

IndexSet complement(const IndexSet& subset, std::size_t members);
IndexSet subset_from_mask(std::uint64_t mask, std::size_t members);

/// How the dual subspaces W~_j are derived from u (T_Lambda u = k, u_j the
/// j-th block row of u):
///   Literal       range(u_j^* u_j pi_{W_j})
///   AdjointRange  range(u_j^*)
///   GramImage     range(u^* u pi_{W_j})
enum class DualSubspaceReading { Literal, AdjointRange, GramImage };

std::string to_string(DualSubspaceReading r);

struct QDualVerification {
  double synthesis_residual = 0.0;  // ||T Q^* T~^* - k||
  double analysis_residual = 0.0;   // ||T~ Q T^* - k^*||
  double bilinear_residual = 0.0;   // max over probes of |<kf,f'> - <Q^* T~^* f, T^* f'>|
  bool passed = false;
  double forms_spread = 0.0;        // largest pairwise difference of the three residuals
};

struct QDualAttempt {
  DualSubspaceReading reading;
  double residual = 0.0;
  double well_defined_residual = 0.0;  // ||u - Phi T~^*||, zero iff ker T~^* within ker u
};

struct QDualPair {
  GFusionSystem base;
  GFusionSystem dual;
  Matrix q;  // square, dimension sum_j d_j
  BoundedOperator k;
  double residual = 0.0;
  bool certified = false;
  DualSubspaceReading reading = DualSubspaceReading::Literal;
  std::vector<QDualAttempt> attempts;
};

/// Checks the three equivalent Q-duality conditions. Throws std::logic_error
/// when they disagree beyond tolerance, which would mean a broken adjoint.
QDualVerification verify_q_dual(const GFusionSystem& base, const GFusionSystem& dual,
                                const Matrix& q, const BoundedOperator& k,
                                const Tolerance& tol = {});
QDualVerification verify_q_dual(const QDualPair& pair, const Tolerance& tol = {});

/// Builds W~_j from u = pinv(T) k and Q = Phi^* with Phi = u pinv(T~^*).
/// Readings are tried in the order Literal, AdjointRange, GramImage unless
/// `only` is given; the first certified one is returned, otherwise the
/// attempt with the smallest residual (certified = false).
QDualPair construct_q_dual(const GFusionSystem& system, const BoundedOperator& k,
                           const Tolerance& tol = {},
                           std::optional<DualSubspaceReading> only = std::nullopt);

struct QDualBoundReport {
  FrameBounds base;  // (A_op, B_op) of the base for k
  FrameBounds dual;  // (C_op, D_op) of the dual for k^*
  double q_norm = 0.0;
  double lower_slack = 0.0;  // C_op - 1/(B_op ||Q||^2)
  double upper_slack = 0.0;  // D_op - 1/(A_op ||Q||^2)
  bool holds = false;
};

QDualBoundReport qdual_bound_corollary(const QDualPair& pair, const Tolerance& tol = {});

struct KGFDualPair {
  GFusionSystem base;
  GFusionSystem dual;  // weights are taken from `base`
  BoundedOperator k;
  double residual = 0.0;  // ||k - sum_j v_j^2 pi_j Lambda_j^* Lambda~_j pi~_j||
  bool certified = false;
  bool exploratory = false;  // k is not invertible; the residual is recorded only
};

/// sum_j v_j^2 pi_{W_j} Lambda_j^* Lambda~_j pi_{W~_j} over the members in `subset`.
Matrix dual_partial_sum(const GFusionSystem& base, const GFusionSystem& dual, const IndexSet& subset);

KGFDualPair make_kgf_pair(GFusionSystem base, GFusionSystem dual, BoundedOperator k,
                          const Tolerance& tol = {});

KGFDualPair canonical_dual(const GFusionSystem& system, const BoundedOperator& k,
                           const Tolerance& tol = {});

struct KGFDualVerification {
  double residual = 0.0;        // operator level
  double probe_residual = 0.0;  // term-by-term expansion on probe vectors
  bool passed = false;
  FrameReport dual_frame;       // the dual as a k^*-g-fusion frame
};

KGFDualVerification verify_kgf_dual(const KGFDualPair& pair, const Tolerance& tol = {},
                                    std::size_t probes = 50);

struct PartialOperator {
  IndexSet index_set;
  Matrix matrix;
};

PartialOperator partial_operator(const KGFDualPair& pair, const IndexSet& subset);

/// ||S_I + S_{I^c} - k||.
double complement_identity_residual(const KGFDualPair& pair, const IndexSet& subset);

struct IdentityCheck {
  Complex lhs;
  Complex rhs;
  double residual = 0.0;
  bool passed = false;
};

IdentityCheck check_identity_tg1(const KGFDualPair& pair, const IndexSet& subset, const Vector& f,
                                 const Tolerance& tol = {});

/// Requires S = kk^* (Parseval) and E within the complement of I.
IdentityCheck check_identity_ti1(const GFusionSystem& system, const BoundedOperator& k,
                                 const IndexSet& subset, const IndexSet& extra, const Vector& f,
                                 const Tolerance& tol = {});

struct ThreeQuartersCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double lower = 0.0;  // 0.75 ||kk^* f||^2
  double equality_residual = 0.0;
  double slack = 0.0;  // lhs - lower
  bool passed = false;
};

ThreeQuartersCheck check_three_quarters(const GFusionSystem& system, const BoundedOperator& k,
                                        const IndexSet& subset, const Vector& f,
                                        const Tolerance& tol = {});

}  // namespace framelab
