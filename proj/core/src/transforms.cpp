#include "framelab/transforms.hpp"

namespace framelab {

namespace {

std::vector<Member> image_members(const GFusionSystem& system, const Matrix& u,
                                  const Matrix& right_factor, bool keep_projection,
                                  const Tolerance& tol) {
  std::vector<Member> out;
  out.reserve(system.size());
  for (const auto& m : system.members()) {
    const Matrix basis = orthonormalize(u * m.subspace.basis(), tol);
    const Matrix local = keep_projection
                             ? Matrix(m.local.matrix * m.subspace.projection() * right_factor)
                             : Matrix(m.local.matrix * right_factor);
    out.push_back(Member{WeightedSubspace(basis, m.subspace.weight(), tol), LocalOperator{local}});
  }
  return out;
}

HilbertSpace promoted_space(const GFusionSystem& system, const Matrix& u) {
  HilbertSpace space = system.space();
  if (!is_real(u)) space.field = Field::Complex;
  return space;
}

}  // namespace

TransformedSystem transform_invertible(const GFusionSystem& system, const BoundedOperator& k,
                                       const FrameBounds& bounds, const BoundedOperator& u,
                                       const Tolerance& tol) {
  if (u.dim() != system.dim() || k.dim() != system.dim()) {
    throw PreconditionError("transform_invertible: operator dimensions do not match the system");
  }
  if (!u.is_invertible(tol)) throw PreconditionError("transform_invertible: u is singular");

  const Matrix& um = u.matrix();
  GFusionSystem image(promoted_space(system, um),
                      image_members(system, um, um.adjoint(), /*keep_projection=*/true, tol));
  const FrameBounds certified{bounds.lower, bounds.upper * u.norm() * u.norm()};
  BoundedOperator target(um * k.matrix());
  FrameReport verification = verify_k_g_fusion(image, target, certified, tol);
  return TransformedSystem{std::move(image), certified, std::move(target), std::move(verification)};
}

TransformedSystem transform_unitary(const GFusionSystem& system, const BoundedOperator& k,
                                    const FrameBounds& bounds, const BoundedOperator& u,
                                    const Tolerance& tol) {
  if (u.dim() != system.dim() || k.dim() != system.dim()) {
    throw PreconditionError("transform_unitary: operator dimensions do not match the system");
  }
  const Matrix& um = u.matrix();
  if (operator_norm(um.adjoint() * um - identity(u.dim())) > tol.at(1.0)) {
    throw PreconditionError("transform_unitary: u is not unitary");
  }
  const Matrix u_inv = um.adjoint();
  GFusionSystem image(promoted_space(system, um),
                      image_members(system, um, u_inv, /*keep_projection=*/false, tol));
  const double inv_norm = operator_norm(u_inv);
  const FrameBounds certified{bounds.lower, bounds.upper * inv_norm * inv_norm};
  // (u^{-1})^* = u for unitary u
  BoundedOperator target(u_inv.adjoint() * k.matrix());
  FrameReport verification = verify_k_g_fusion(image, target, certified, tol);
  return TransformedSystem{std::move(image), certified, std::move(target), std::move(verification)};
}

ReductionReport reduce_operator(const GFusionSystem& system, const BoundedOperator& k,
                                const FrameBounds& bounds, const BoundedOperator& u,
                                const Tolerance& tol) {
  if (u.dim() != system.dim() || k.dim() != system.dim()) {
    throw PreconditionError("reduce_operator: operator dimensions do not match the system");
  }
  ReductionReport out;
  out.douglas = douglas_factor(u.matrix(), k.matrix(), tol);
  out.derivable = out.douglas.included;
  if (out.derivable) {
    const double lambda = out.douglas.lambda_min;
    const Matrix& um = u.matrix();
    if (lambda > 0.0) {
      out.certified_lower = bounds.lower / (lambda * lambda);
      out.certified_holds =
          psd_check(frame_operator(system) - out.certified_lower * (um * um.adjoint()), tol);
    } else {
      // u = 0: every positive constant works
      out.certified_lower = bounds.lower;
      out.certified_holds = true;
    }
  }
  out.direct = verify_k_g_fusion(system, u, std::nullopt, tol);
  return out;
}

}  // namespace framelab
