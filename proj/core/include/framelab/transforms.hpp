#pragma once

#include "framelab/frame_ops.hpp"
#include "framelab/model.hpp"

namespace framelab {

/// Image family under an operator u, with the bounds the transformation
/// theorem guarantees for `target`.
struct TransformedSystem {
  GFusionSystem system;
  FrameBounds certified;
  BoundedOperator target;
  FrameReport verification;  // verify_k_g_fusion(system, target, certified)

  [[nodiscard]] bool certified_ok() const {
    return verification.is_frame && verification.claim && verification.claim->lower_holds &&
           verification.claim->upper_holds;
  }
};

/// Gamma = (uW_j, Lambda_j pi_{W_j} u^*, v_j), certified (A, B ||u||^2) for uk.
/// `bounds` are bounds of the input system for k.
TransformedSystem transform_invertible(const GFusionSystem& system, const BoundedOperator& k,
                                       const FrameBounds& bounds, const BoundedOperator& u,
                                       const Tolerance& tol = {});

/// (uW_j, Lambda_j u^{-1}, v_j) for unitary u, certified (A, B ||u^{-1}||^2)
/// for (u^{-1})^* k.
TransformedSystem transform_unitary(const GFusionSystem& system, const BoundedOperator& k,
                                    const FrameBounds& bounds, const BoundedOperator& u,
                                    const Tolerance& tol = {});

struct ReductionReport {
  DouglasFactorization douglas;  // douglas_factor(u, k)
  bool derivable = false;        // R(u) within R(k)
  double certified_lower = 0.0;  // A / lambda^2 when derivable
  bool certified_holds = false;  // S - (A / lambda^2) uu^* >= 0
  FrameReport direct;            // verify_k_g_fusion(system, u), independent of the theorem
};

/// Passes a k-g-fusion frame with lower bound A to an operator u with
/// R(u) within R(k). "Not derivable" does not mean "not a frame": `direct`
/// carries the independent verdict.
ReductionReport reduce_operator(const GFusionSystem& system, const BoundedOperator& k,
                                const FrameBounds& bounds, const BoundedOperator& u,
                                const Tolerance& tol = {});

}  // namespace framelab
