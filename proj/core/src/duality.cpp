#include "framelab/duality.hpp"

#include <algorithm>
#include <stdexcept>

#include "framelab/random.hpp"

namespace framelab {

namespace {

void validate_subset(const IndexSet& subset, std::size_t members) {
  for (std::size_t j : subset) {
    if (j >= members) {
      throw InputError("index " + std::to_string(j) + " is outside the index set of size " +
                       std::to_string(members));
    }
  }
}

std::vector<bool> membership(const IndexSet& subset, std::size_t members) {
  validate_subset(subset, members);
  std::vector<bool> in(members, false);
  for (std::size_t j : subset) in[j] = true;
  return in;
}

void require_parseval(const GFusionSystem& system, const BoundedOperator& k, const Tolerance& tol,
                      const char* what) {
  if (k.dim() != system.dim()) throw PreconditionError(std::string(what) + ": dimension mismatch");
  const Matrix kk = k.matrix() * k.matrix().adjoint();
  if (operator_norm(frame_operator(system) - kk) > tol.at(operator_norm(kk))) {
    throw PreconditionError(std::string(what) + ": system is not Parseval for k (S != kk^*)");
  }
}

// S_{Lambda,I} = sum_{j in I} v_j^2 pi_j Lambda_j^* Lambda_j pi_j
Matrix partial_frame_operator(const GFusionSystem& system, const std::vector<bool>& in, bool take) {
  Matrix s = Matrix::Zero(system.dim(), system.dim());
  for (std::size_t j = 0; j < system.size(); ++j) {
    if (in[j] == take) s += member_frame_operator(system.member(j));
  }
  return s;
}

// v_j^2 <Lambda_j pi_j f, Lambda_j pi_j g>
Complex member_form(const Member& m, const Vector& f, const Vector& g) {
  const Matrix p = m.subspace.projection();
  const double w2 = m.subspace.weight() * m.subspace.weight();
  return w2 * (m.local.matrix * (p * g)).dot(m.local.matrix * (p * f));
}

struct Candidate {
  GFusionSystem dual;
  Matrix q;
  QDualAttempt attempt;
};

Candidate build_candidate(const GFusionSystem& system, const SynthesisOperator& t, const Matrix& u,
                          const BoundedOperator& k, DualSubspaceReading reading,
                          const Tolerance& tol) {
  std::vector<Member> members;
  members.reserve(system.size());
  const Matrix gram = u.adjoint() * u;
  for (std::size_t j = 0; j < system.size(); ++j) {
    const Member& m = system.member(j);
    const Matrix uj = t.block_rows(u, j);
    Matrix spanning;
    switch (reading) {
      case DualSubspaceReading::Literal:
        spanning = uj.adjoint() * uj * m.subspace.projection();
        break;
      case DualSubspaceReading::AdjointRange:
        spanning = uj.adjoint();
        break;
      case DualSubspaceReading::GramImage:
        spanning = gram * m.subspace.projection();
        break;
    }
    members.push_back(Member{WeightedSubspace(orthonormalize(spanning, tol), m.subspace.weight(), tol),
                             m.local});
  }
  HilbertSpace space = system.space();
  if (!is_real(u)) space.field = Field::Complex;
  GFusionSystem dual(space, std::move(members));

  const Matrix dual_analysis = synthesis(dual).analysis();
  const Matrix phi = u * pinv(dual_analysis, tol);
  Candidate c{std::move(dual), phi.adjoint(), QDualAttempt{reading}};
  c.attempt.well_defined_residual = operator_norm(u - phi * dual_analysis);
  c.attempt.residual = operator_norm(t.matrix() * phi * dual_analysis - k.matrix());
  return c;
}

}  // namespace

IndexSet complement(const IndexSet& subset, std::size_t members) {
  const auto in = membership(subset, members);
  IndexSet out;
  for (std::size_t j = 0; j < members; ++j) {
    if (!in[j]) out.push_back(j);
  }
  return out;
}

IndexSet subset_from_mask(std::uint64_t mask, std::size_t members) {
  IndexSet out;
  for (std::size_t j = 0; j < members; ++j) {
    if ((mask >> j) & 1U) out.push_back(j);
  }
  return out;
}

std::string to_string(DualSubspaceReading r) {
  switch (r) {
    case DualSubspaceReading::Literal:
      return "literal";
    case DualSubspaceReading::AdjointRange:
      return "adjoint-range";
    case DualSubspaceReading::GramImage:
      return "gram-image";
  }
  return "unknown";
}

QDualVerification verify_q_dual(const GFusionSystem& base, const GFusionSystem& dual,
                                const Matrix& q, const BoundedOperator& k, const Tolerance& tol) {
  const SynthesisOperator t(base);
  const SynthesisOperator td(dual);
  if (k.dim() != base.dim() || dual.dim() != base.dim()) {
    throw PreconditionError("verify_q_dual: dimension mismatch");
  }
  if (q.rows() != td.domain_dim() || q.cols() != t.domain_dim()) {
    throw PreconditionError("verify_q_dual: Q must map the base l2-sum space to the dual one");
  }
  const Matrix& km = k.matrix();
  QDualVerification out;
  out.synthesis_residual = operator_norm(t.matrix() * q.adjoint() * td.analysis() - km);
  out.analysis_residual = operator_norm(td.matrix() * q * t.analysis() - km.adjoint());

  // Bilinear form on basis pairs assembles the full matrix entry by entry;
  // extra random pairs exercise the sesquilinear convention.
  const Index n = base.dim();
  Matrix form(n, n);
  for (Index i = 0; i < n; ++i) {
    const Vector left = q.adjoint() * td.analysis().col(i);
    for (Index l = 0; l < n; ++l) {
      const Vector right = t.analysis().col(l);
      form(l, i) = right.dot(left);  // <Q^* T~^* e_i, T^* e_l>
    }
  }
  out.bilinear_residual = operator_norm(form - km);
  Rng rng(0xB111EA5ULL);
  for (int p = 0; p < 8; ++p) {
    const Vector f = rng.unit_vector(n, Field::Complex);
    const Vector g = rng.unit_vector(n, Field::Complex);
    const Complex lhs = g.dot(km * f);
    const Complex rhs = (t.analysis() * g).dot(q.adjoint() * (td.analysis() * f));
    out.bilinear_residual = std::max(out.bilinear_residual, std::abs(lhs - rhs));
  }

  const double r[3] = {out.synthesis_residual, out.analysis_residual, out.bilinear_residual};
  out.forms_spread = std::max({std::abs(r[0] - r[1]), std::abs(r[0] - r[2]), std::abs(r[1] - r[2])});
  const double bound = tol.at(k.norm());
  out.passed = r[0] <= bound;
  const bool agree = (r[1] <= bound) == out.passed && (r[2] <= bound) == out.passed;
  if (!agree && out.forms_spread > bound) {
    throw std::logic_error("verify_q_dual: equivalent duality conditions disagree (spread " +
                           std::to_string(out.forms_spread) + ")");
  }
  return out;
}

QDualVerification verify_q_dual(const QDualPair& pair, const Tolerance& tol) {
  return verify_q_dual(pair.base, pair.dual, pair.q, pair.k, tol);
}

QDualPair construct_q_dual(const GFusionSystem& system, const BoundedOperator& k,
                           const Tolerance& tol, std::optional<DualSubspaceReading> only) {
  const SynthesisOperator t(system);
  const DouglasFactorization d = douglas_factor(k.matrix(), t.matrix(), tol);
  if (!d.included) throw NotAFrameError();
  const Matrix& u = d.u_min;  // T u = k

  std::vector<DualSubspaceReading> order{DualSubspaceReading::Literal,
                                         DualSubspaceReading::AdjointRange,
                                         DualSubspaceReading::GramImage};
  if (only) order = {*only};

  const double bound = tol.at(k.norm());
  std::vector<QDualAttempt> attempts;
  std::optional<Candidate> best;
  for (DualSubspaceReading reading : order) {
    Candidate c = build_candidate(system, t, u, k, reading, tol);
    attempts.push_back(c.attempt);
    const bool better = !best || c.attempt.residual < best->attempt.residual;
    const bool done = c.attempt.residual <= bound;
    if (better) best = std::move(c);
    if (done) break;
  }
  QDualPair pair{system, best->dual, best->q, k, best->attempt.residual,
                 best->attempt.residual <= bound, best->attempt.reading, std::move(attempts)};
  return pair;
}

QDualBoundReport qdual_bound_corollary(const QDualPair& pair, const Tolerance& tol) {
  if (!pair.certified) throw PreconditionError("qdual_bound_corollary: pair is not certified");
  QDualBoundReport out;
  out.base = optimal_bounds(pair.base, pair.k, tol);
  out.dual = optimal_bounds(pair.dual, pair.k.adjoint(), tol);
  out.q_norm = operator_norm(pair.q);
  const double q2 = out.q_norm * out.q_norm;
  out.lower_slack = out.dual.lower - 1.0 / (out.base.upper * q2);
  out.upper_slack = out.dual.upper - 1.0 / (out.base.lower * q2);
  out.holds = out.lower_slack >= -tol.at(out.dual.lower) && out.upper_slack >= -tol.at(out.dual.upper);
  return out;
}

Matrix dual_partial_sum(const GFusionSystem& base, const GFusionSystem& dual, const IndexSet& subset) {
  if (base.size() != dual.size() || base.dim() != dual.dim()) {
    throw PreconditionError("dual pair: systems have different index sets or dimensions");
  }
  validate_subset(subset, base.size());
  Matrix s = Matrix::Zero(base.dim(), base.dim());
  for (std::size_t j : subset) {
    const Member& m = base.member(j);
    const Member& md = dual.member(j);
    const double w2 = m.subspace.weight() * m.subspace.weight();
    s += w2 * m.subspace.projection() * m.local.matrix.adjoint() * md.local.matrix *
         md.subspace.projection();
  }
  return s;
}

KGFDualPair make_kgf_pair(GFusionSystem base, GFusionSystem dual, BoundedOperator k,
                          const Tolerance& tol) {
  IndexSet all(base.size());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  const double residual = operator_norm(k.matrix() - dual_partial_sum(base, dual, all));
  const bool certified = residual <= tol.at(k.norm());
  const bool exploratory = !k.is_invertible(tol);
  return KGFDualPair{std::move(base), std::move(dual), std::move(k), residual, certified, exploratory};
}

KGFDualPair canonical_dual(const GFusionSystem& system, const BoundedOperator& k,
                           const Tolerance& tol) {
  const RestrictedInverse ri = restricted_inverse(system, k, tol, 0);
  const Matrix& x = ri.x;
  const Matrix& p = ri.image_projector;
  const Matrix& km = k.matrix();

  std::vector<Member> members;
  members.reserve(system.size());
  for (const auto& m : system.members()) {
    const Matrix pi = m.subspace.projection();
    const Matrix basis = orthonormalize(km.adjoint() * x * p * pi, tol);
    const Matrix local = m.local.matrix * pi * p * x.adjoint() * km;
    members.push_back(Member{WeightedSubspace(basis, m.subspace.weight(), tol), LocalOperator{local}});
  }
  HilbertSpace space = system.space();
  if (!is_real(km)) space.field = Field::Complex;
  GFusionSystem dual(space, std::move(members));
  return make_kgf_pair(system, std::move(dual), k, tol);
}

KGFDualVerification verify_kgf_dual(const KGFDualPair& pair, const Tolerance& tol,
                                    std::size_t probes) {
  KGFDualVerification out;
  IndexSet all(pair.base.size());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  const Matrix& km = pair.k.matrix();
  out.residual = operator_norm(km - dual_partial_sum(pair.base, pair.dual, all));

  Rng rng(0xD1D1ULL);
  for (std::size_t p = 0; p < probes; ++p) {
    const Vector f = rng.unit_vector(pair.base.dim(), pair.base.space().field);
    Vector sum = Vector::Zero(f.size());
    for (std::size_t j = 0; j < pair.base.size(); ++j) {
      const Member& m = pair.base.member(j);
      const Member& md = pair.dual.member(j);
      const double w2 = m.subspace.weight() * m.subspace.weight();
      const Vector coeff = md.local.matrix * (md.subspace.projection() * f);
      sum += w2 * (m.subspace.projection() * (m.local.matrix.adjoint() * coeff));
    }
    const Vector kf = km * f;
    out.probe_residual = std::max(out.probe_residual, (kf - sum).norm() / (1.0 + kf.norm()));
  }
  out.passed = out.residual <= tol.at(pair.k.norm());
  out.dual_frame = verify_k_g_fusion(pair.dual, pair.k.adjoint(), std::nullopt, tol);
  return out;
}

PartialOperator partial_operator(const KGFDualPair& pair, const IndexSet& subset) {
  validate_subset(subset, pair.base.size());
  IndexSet sorted = subset;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  return PartialOperator{sorted, dual_partial_sum(pair.base, pair.dual, sorted)};
}

double complement_identity_residual(const KGFDualPair& pair, const IndexSet& subset) {
  const Matrix si = partial_operator(pair, subset).matrix;
  const Matrix sc = partial_operator(pair, complement(subset, pair.base.size())).matrix;
  return operator_norm(si + sc - pair.k.matrix());
}

IdentityCheck check_identity_tg1(const KGFDualPair& pair, const IndexSet& subset, const Vector& f,
                                 const Tolerance& tol) {
  if (!pair.certified) throw PreconditionError("check_identity_tg1: dual pair is not certified");
  const auto in = membership(subset, pair.base.size());
  const Vector kf = pair.k.matrix() * f;

  Complex sum_in = 0.0;
  Complex sum_out = 0.0;
  for (std::size_t j = 0; j < pair.base.size(); ++j) {
    const Member& m = pair.base.member(j);
    const Member& md = pair.dual.member(j);
    const double w2 = m.subspace.weight() * m.subspace.weight();
    const Vector dual_coeff = md.local.matrix * (md.subspace.projection() * f);
    const Vector base_coeff = m.local.matrix * (m.subspace.projection() * kf);
    const Complex term = w2 * base_coeff.dot(dual_coeff);  // <Lambda~ pi~ f, Lambda pi k f>
    (in[j] ? sum_in : sum_out) += term;
  }
  const IndexSet rest = complement(subset, pair.base.size());
  const double si_f = (dual_partial_sum(pair.base, pair.dual, subset) * f).squaredNorm();
  const double sc_f = (dual_partial_sum(pair.base, pair.dual, rest) * f).squaredNorm();

  IdentityCheck out;
  out.lhs = sum_in - si_f;
  out.rhs = std::conj(sum_out) - sc_f;
  out.residual = std::abs(out.lhs - out.rhs);
  out.passed = out.residual <= tol.at(std::abs(out.lhs));
  return out;
}

IdentityCheck check_identity_ti1(const GFusionSystem& system, const BoundedOperator& k,
                                 const IndexSet& subset, const IndexSet& extra, const Vector& f,
                                 const Tolerance& tol) {
  require_parseval(system, k, tol, "check_identity_ti1");
  const std::size_t nj = system.size();
  const auto in = membership(subset, nj);
  const auto in_extra = membership(extra, nj);
  for (std::size_t j = 0; j < nj; ++j) {
    if (in[j] && in_extra[j]) {
      throw PreconditionError("check_identity_ti1: E must lie in the complement of I");
    }
  }
  std::vector<bool> widened(nj);
  for (std::size_t j = 0; j < nj; ++j) widened[j] = in[j] || in_extra[j];

  const Vector kkf = k.matrix() * (k.matrix().adjoint() * f);
  const double lhs = (partial_frame_operator(system, widened, true) * f).squaredNorm() -
                     (partial_frame_operator(system, widened, false) * f).squaredNorm();
  Complex cross = 0.0;
  for (std::size_t j = 0; j < nj; ++j) {
    if (in_extra[j]) cross += member_form(system.member(j), f, kkf);
  }
  const double rhs = (partial_frame_operator(system, in, true) * f).squaredNorm() -
                     (partial_frame_operator(system, in, false) * f).squaredNorm() +
                     2.0 * cross.real();

  IdentityCheck out;
  out.lhs = lhs;
  out.rhs = rhs;
  out.residual = std::abs(lhs - rhs);
  const double kk_norm = k.norm() * k.norm();
  out.passed = out.residual <= tol.at(kk_norm * kk_norm * f.squaredNorm());
  return out;
}

ThreeQuartersCheck check_three_quarters(const GFusionSystem& system, const BoundedOperator& k,
                                        const IndexSet& subset, const Vector& f,
                                        const Tolerance& tol) {
  require_parseval(system, k, tol, "check_three_quarters");
  const auto in = membership(subset, system.size());
  const Vector kkf = k.matrix() * (k.matrix().adjoint() * f);

  Complex cross_in = 0.0;
  Complex cross_out = 0.0;
  for (std::size_t j = 0; j < system.size(); ++j) {
    (in[j] ? cross_in : cross_out) += member_form(system.member(j), f, kkf);
  }
  ThreeQuartersCheck out;
  out.lhs = (partial_frame_operator(system, in, true) * f).squaredNorm() + cross_out.real();
  out.rhs = (partial_frame_operator(system, in, false) * f).squaredNorm() + cross_in.real();
  out.lower = 0.75 * kkf.squaredNorm();
  out.equality_residual = std::abs(out.lhs - out.rhs);
  out.slack = out.lhs - out.lower;
  const double kk_norm = k.norm() * k.norm();
  const double scale = tol.at(kk_norm * kk_norm * f.squaredNorm());
  out.passed = out.equality_residual <= scale && out.slack >= -scale;
  return out;
}

}  // namespace framelab
