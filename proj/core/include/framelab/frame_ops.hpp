#pragma once

#include <optional>
#include <vector>

#include "framelab/model.hpp"
#include "framelab/numerics.hpp"

namespace framelab {

/// T_Lambda : (sum_j (+) H_j) -> H. The l2-sum space is the coordinate space
/// of dimension sum_j d_j; block j occupies columns [offset(j), offset(j)+d_j).
class SynthesisOperator {
 public:
  explicit SynthesisOperator(const GFusionSystem& system);

  [[nodiscard]] const Matrix& matrix() const { return t_; }
  [[nodiscard]] Matrix analysis() const { return t_.adjoint(); }
  [[nodiscard]] Index offset(std::size_t j) const { return offsets_.at(j); }
  [[nodiscard]] Index block_size(std::size_t j) const { return offsets_.at(j + 1) - offsets_.at(j); }
  [[nodiscard]] std::size_t blocks() const { return offsets_.size() - 1; }
  [[nodiscard]] Index domain_dim() const { return t_.cols(); }

  /// Rows of an (sum d_j) x m matrix belonging to block j.
  [[nodiscard]] Matrix block_rows(const Matrix& m, std::size_t j) const;

  /// T g for g in the l2-sum space.
  [[nodiscard]] Vector apply(const Vector& g) const { return t_ * g; }

 private:
  Matrix t_;
  std::vector<Index> offsets_;
};

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

struct ClaimCheck {
  FrameBounds claimed;
  bool lower_holds = false;  // S - A kk^* >= 0
  bool upper_holds = false;  // B I - S >= 0
};

struct FrameReport {
  bool is_bessel = true;
  bool is_frame = false;
  bool is_parseval = false;
  FrameBounds optimal;  // lower is 0 when not a frame
  double range_inclusion_residual = 0.0;
  double parseval_residual = 0.0;  // ||S - kk^*||
  Tolerance tolerance;
  std::optional<ClaimCheck> claim;
};

/// Certificates that the optimal bounds really are optimal.
struct BoundsCertificate {
  bool lower_valid = false;  // S - A kk^* >= 0
  bool lower_tight = false;  // S - (1 + 1e-6) A kk^* is not >= 0
  bool upper_valid = false;  // B I - S >= 0
  bool upper_tight = false;  // (1 - 1e-6) B I - S is not >= 0

  [[nodiscard]] bool ok() const { return lower_valid && lower_tight && upper_valid && upper_tight; }
};

/// Raised by operations that need a k-g-fusion frame when R(k) is not
/// contained in R(T_Lambda).
class NotAFrameError : public PreconditionError {
 public:
  NotAFrameError() : PreconditionError("range inclusion fails: system is not a k-g-fusion frame") {}
};

SynthesisOperator synthesis(const GFusionSystem& system);

/// S = sum_j v_j^2 pi_j Lambda_j^* Lambda_j pi_j, summed in index order.
Matrix frame_operator(const GFusionSystem& system);

/// v_j^2 pi_j Lambda_j^* Lambda_j pi_j for a single member.
Matrix member_frame_operator(const Member& member);

/// sum_j v_j^2 ||Lambda_j pi_j f||^2, evaluated member by member.
double frame_sum(const GFusionSystem& system, const Vector& f);

FrameReport verify_k_g_fusion(const GFusionSystem& system, const BoundedOperator& k,
                              const std::optional<FrameBounds>& claimed = std::nullopt,
                              const Tolerance& tol = {});

/// (A_op, B_op) = (||pinv(T) k||^{-2}, ||S||). Throws NotAFrameError.
FrameBounds optimal_bounds(const GFusionSystem& system, const BoundedOperator& k,
                           const Tolerance& tol = {});

BoundsCertificate certify_bounds(const Matrix& frame_op, const Matrix& k, const FrameBounds& bounds,
                                 const Tolerance& tol = {});

/// sup{A : L2 L2^* >= A L1 L1^*} by bisection on psd_check. Independent of
/// the pseudo-inverse route; used as an oracle.
double bisection_lower_bound(const Matrix& l2_gram, const Matrix& l1_gram, double rel_accuracy = 1e-12);

/// k := S^{1/2}, for which the system is Parseval.
BoundedOperator parseval_operator(const GFusionSystem& system, const Tolerance& tol = {});

struct RestrictedInverse {
  Matrix x;              // maps S(R(k)) onto R(k), zero on its complement
  Matrix range_basis;    // orthonormal basis of R(k)
  Matrix image_projector;  // projection onto S(R(k))
  double inverse_residual = 0.0;  // ||X S B_k - B_k||
  double bound_residual = 0.0;    // worst violation of B^{-1}|f|^2 <= <Xf,f> <= A^{-1}|k^+|^2 |f|^2
  std::size_t probes = 0;
};

RestrictedInverse restricted_inverse(const GFusionSystem& system, const BoundedOperator& k,
                                     const Tolerance& tol = {}, std::size_t probes = 50);

struct ReconstructionCheck {
  double residual = 0.0;
  bool projected = false;  // f was not in S(R(k)) and was projected onto it
  bool passed = false;
};

/// |<kf,f> - sum_j v_j^2 <X pi_j Lambda_j^* Lambda_j pi_j k f, f>|.
ReconstructionCheck reconstruction_check(const GFusionSystem& system, const BoundedOperator& k,
                                         const Vector& f, const Tolerance& tol = {});

struct CrossFrameReport {
  bool premise_holds = false;
  double premise_residual = 0.0;  // ||T_Theta T_Lambda^* - k^*||
  double lambda_bessel = 0.0;     // B1 = ||S_Lambda||
  double theta_bessel = 0.0;      // B2 = ||S_Theta||
  bool lambda_lower_certified = false;  // S_Lambda >= B2^{-1} kk^*
  bool theta_lower_certified = false;   // S_Theta >= B1^{-1} kk^*
};

CrossFrameReport cross_frame_check(const GFusionSystem& lambda, const GFusionSystem& theta,
                                   const BoundedOperator& k, const Tolerance& tol = {});

}  // namespace framelab
