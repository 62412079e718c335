#include "framelab/frame_ops.hpp"

#include <cmath>
#include <limits>

#include "framelab/random.hpp"

namespace framelab {

namespace {

constexpr double kTightnessFactor = 1e-6;
// Near machine precision; used where a verdict must resolve tiny margins.
constexpr Tolerance kExact{1e-14, 1e-13};

void require_same_space(const GFusionSystem& system, const BoundedOperator& k, const char* what) {
  if (k.dim() != system.dim()) {
    throw InputError(std::string(what) + ": operator is " + std::to_string(k.dim()) + "x" +
                     std::to_string(k.dim()) + " but the system lives in dimension " +
                     std::to_string(system.dim()));
  }
}

}  // namespace

SynthesisOperator::SynthesisOperator(const GFusionSystem& system) {
  offsets_.reserve(system.size() + 1);
  offsets_.push_back(0);
  for (const auto& m : system.members()) offsets_.push_back(offsets_.back() + m.local.local_dim());

  t_ = Matrix::Zero(system.dim(), offsets_.back());
  for (std::size_t j = 0; j < system.size(); ++j) {
    const Member& m = system.member(j);
    t_.middleCols(offsets_[j], block_size(j)) =
        m.subspace.weight() * m.subspace.projection() * m.local.matrix.adjoint();
  }
}

Matrix SynthesisOperator::block_rows(const Matrix& m, std::size_t j) const {
  return m.middleRows(offset(j), block_size(j));
}

SynthesisOperator synthesis(const GFusionSystem& system) { return SynthesisOperator(system); }

Matrix member_frame_operator(const Member& member) {
  const Matrix analysis = member.local.matrix * member.subspace.projection();
  const double w2 = member.subspace.weight() * member.subspace.weight();
  return w2 * (analysis.adjoint() * analysis);
}

Matrix frame_operator(const GFusionSystem& system) {
  Matrix s = Matrix::Zero(system.dim(), system.dim());
  for (const auto& m : system.members()) s += member_frame_operator(m);
  return s;
}

double frame_sum(const GFusionSystem& system, const Vector& f) {
  double total = 0.0;
  for (const auto& m : system.members()) {
    const double w = m.subspace.weight();
    total += w * w * (m.local.matrix * (m.subspace.projection() * f)).squaredNorm();
  }
  return total;
}

FrameReport verify_k_g_fusion(const GFusionSystem& system, const BoundedOperator& k,
                              const std::optional<FrameBounds>& claimed, const Tolerance& tol) {
  require_same_space(system, k, "verify_k_g_fusion");
  FrameReport report;
  report.tolerance = tol;

  const SynthesisOperator t(system);
  const Matrix s = frame_operator(system);
  const Matrix kk = k.matrix() * k.matrix().adjoint();

  const DouglasFactorization d = douglas_factor(k.matrix(), t.matrix(), tol);
  report.is_bessel = true;
  report.is_frame = d.included;
  report.range_inclusion_residual = d.range_residual;
  report.optimal.upper = max_eigenvalue(s, tol);
  if (d.included) {
    report.optimal.lower = d.lambda_min > 0.0 ? 1.0 / (d.lambda_min * d.lambda_min)
                                              : std::numeric_limits<double>::infinity();
  }

  report.parseval_residual = operator_norm(s - kk);
  report.is_parseval = report.parseval_residual <= tol.at(operator_norm(kk));

  if (claimed) {
    ClaimCheck c;
    c.claimed = *claimed;
    c.lower_holds = claimed->lower > 0.0 && psd_check(s - claimed->lower * kk, tol);
    c.upper_holds = psd_check(claimed->upper * identity(system.dim()) - s, tol);
    report.claim = c;
  }
  return report;
}

FrameBounds optimal_bounds(const GFusionSystem& system, const BoundedOperator& k,
                           const Tolerance& tol) {
  require_same_space(system, k, "optimal_bounds");
  const SynthesisOperator t(system);
  const DouglasFactorization d = douglas_factor(k.matrix(), t.matrix(), tol);
  if (!d.included) throw NotAFrameError();
  FrameBounds b;
  b.upper = max_eigenvalue(frame_operator(system), tol);
  b.lower = d.lambda_min > 0.0 ? 1.0 / (d.lambda_min * d.lambda_min)
                               : std::numeric_limits<double>::infinity();
  return b;
}

BoundsCertificate certify_bounds(const Matrix& frame_op, const Matrix& k, const FrameBounds& bounds,
                                 const Tolerance& tol) {
  const Matrix kk = k * k.adjoint();
  const Matrix id = identity(frame_op.rows());
  BoundsCertificate c;
  c.lower_valid = psd_check(frame_op - bounds.lower * kk, tol);
  c.lower_tight = !psd_check(frame_op - (1.0 + kTightnessFactor) * bounds.lower * kk, kExact);
  c.upper_valid = psd_check(bounds.upper * id - frame_op, tol);
  c.upper_tight = !psd_check((1.0 - kTightnessFactor) * bounds.upper * id - frame_op, kExact);
  return c;
}

double bisection_lower_bound(const Matrix& l2_gram, const Matrix& l1_gram, double rel_accuracy) {
  if (operator_norm(l1_gram) == 0.0) return std::numeric_limits<double>::infinity();
  auto admissible = [&](double a) { return psd_check(l2_gram - a * l1_gram, kExact); };

  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 2048 && admissible(hi); ++i) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 400 && hi - lo > rel_accuracy * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (admissible(mid) ? lo : hi) = mid;
  }
  return lo;
}

BoundedOperator parseval_operator(const GFusionSystem& system, const Tolerance& tol) {
  return BoundedOperator(psd_sqrt(frame_operator(system), tol));
}

RestrictedInverse restricted_inverse(const GFusionSystem& system, const BoundedOperator& k,
                                     const Tolerance& tol, std::size_t probes) {
  const FrameBounds bounds = optimal_bounds(system, k, tol);
  const Matrix s = frame_operator(system);

  RestrictedInverse out;
  out.range_basis = k.range_basis(tol);
  const Matrix image = s * out.range_basis;
  out.x = out.range_basis * pinv(image, tol);
  out.image_projector = range_projector(image, tol);
  out.inverse_residual = operator_norm(out.x * image - out.range_basis);

  const Index r = out.range_basis.cols();
  const Index rk = k.rank(tol);
  const double k_pinv_norm = rk > 0 ? 1.0 / k.svd().sigma(rk - 1) : 0.0;
  const double upper_factor = k_pinv_norm * k_pinv_norm / bounds.lower;
  const double lower_factor = 1.0 / bounds.upper;

  Rng rng(0x0F0F0F0FULL + static_cast<std::uint64_t>(system.dim()));
  for (std::size_t p = 0; p < probes && r > 0; ++p) {
    const Vector c = rng.unit_vector(r, system.space().field);
    const Vector f = image * c;
    const double ff = f.squaredNorm();
    if (ff == 0.0) continue;
    const double q = f.dot(out.x * f).real();
    const double low = (lower_factor * ff - q) / ff;
    const double high = (q - upper_factor * ff) / ff;
    out.bound_residual = std::max({out.bound_residual, low, high});
    ++out.probes;
  }
  return out;
}

ReconstructionCheck reconstruction_check(const GFusionSystem& system, const BoundedOperator& k,
                                         const Vector& f_in, const Tolerance& tol) {
  require_same_space(system, k, "reconstruction_check");
  const RestrictedInverse ri = restricted_inverse(system, k, tol, 0);
  ReconstructionCheck out;
  Vector f = f_in;
  const Vector pf = ri.image_projector * f;
  if ((f - pf).norm() > tol.at(f.norm())) {
    out.projected = true;
    f = pf;
  }
  const Vector kf = k.matrix() * f;
  const Complex direct = f.dot(kf);
  Complex expanded = 0.0;
  for (const auto& m : system.members()) {
    const Matrix p = m.subspace.projection();
    const double w2 = m.subspace.weight() * m.subspace.weight();
    const Vector term = ri.x * (p * (m.local.matrix.adjoint() * (m.local.matrix * (p * kf))));
    expanded += w2 * f.dot(term);
  }
  out.residual = std::abs(direct - expanded);
  out.passed = out.residual <= tol.at(std::abs(direct));
  return out;
}

CrossFrameReport cross_frame_check(const GFusionSystem& lambda, const GFusionSystem& theta,
                                   const BoundedOperator& k, const Tolerance& tol) {
  require_same_space(lambda, k, "cross_frame_check");
  require_same_space(theta, k, "cross_frame_check");
  const SynthesisOperator tl(lambda);
  const SynthesisOperator tt(theta);
  if (tl.domain_dim() != tt.domain_dim()) {
    throw PreconditionError("cross_frame_check: systems have different local dimensions");
  }
  const Matrix sl = tl.matrix() * tl.analysis();
  const Matrix st = tt.matrix() * tt.analysis();

  CrossFrameReport out;
  out.premise_residual = operator_norm(tt.matrix() * tl.analysis() - k.matrix().adjoint());
  out.premise_holds = out.premise_residual <= tol.at(k.norm());
  out.lambda_bessel = max_eigenvalue(sl, tol);
  out.theta_bessel = max_eigenvalue(st, tol);
  if (out.premise_holds && out.lambda_bessel > 0.0 && out.theta_bessel > 0.0) {
    const Matrix& km = k.matrix();
    out.lambda_lower_certified = psd_check(sl - (km * km.adjoint()) / out.theta_bessel, tol);
    out.theta_lower_certified = psd_check(st - (km.adjoint() * km) / out.lambda_bessel, tol);
  }
  return out;
}

}  // namespace framelab
