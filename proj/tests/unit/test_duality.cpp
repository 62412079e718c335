#include <gtest/gtest.h>

#include <cmath>

#include "framelab/duality.hpp"
#include "framelab/random.hpp"
#include "builders.hpp"
#include "oracles.hpp"

using namespace framelab;
using build::basis_vector;
using build::diag;
using build::vec;

namespace {

bool invertible_k(const FrameDocument& d) { return d.op("k").is_invertible(); }

// Two copies of R^2 with identity local operators and weight 1/sqrt2: S = I,
// and for I = {0} the partial frame operator is I/2.
GFusionSystem halved_pair() { return build::full_space_system(2, identity(2), 1.0 / std::sqrt(2.0)); }

// sum_{j in I} v_j^2 pi_j Lambda_j^* Lambda~_j pi~_j, term by term.
Matrix naive_partial(const GFusionSystem& base, const GFusionSystem& dual, const IndexSet& subset) {
  Matrix out = Matrix::Zero(base.dim(), base.dim());
  for (std::size_t j : subset) {
    const Member& m = base.member(j);
    const Member& md = dual.member(j);
    const Matrix q = oracle::gram_schmidt(m.subspace.basis());
    const Matrix qd = oracle::gram_schmidt(md.subspace.basis());
    const double v = m.subspace.weight();
    out += v * v * (q * q.adjoint()) * m.local.matrix.adjoint() * md.local.matrix * (qd * qd.adjoint());
  }
  return out;
}

IndexSet all_of(std::size_t n) { return subset_from_mask((std::uint64_t{1} << n) - 1, n); }

}  // namespace

TEST(IndexSets, ComplementAndMasks) {
  EXPECT_EQ(complement({0, 2}, 4), (IndexSet{1, 3}));
  EXPECT_EQ(subset_from_mask(0b101, 3), (IndexSet{0, 2}));
  EXPECT_TRUE(subset_from_mask(0, 3).empty());
}

TEST(VerifyQDual, FixISelfDual) {
  const FrameDocument i = fixture("FIX-I");
  const QDualVerification v = verify_q_dual(i.system, i.system, identity(2), i.op("k"));
  EXPECT_TRUE(v.passed);
  EXPECT_LE(v.synthesis_residual, 1e-12);
  EXPECT_LE(v.analysis_residual, 1e-12);
  EXPECT_LE(v.bilinear_residual, 1e-12);
}

TEST(VerifyQDual, ScaledQFails) {
  const FrameDocument i = fixture("FIX-I");
  const QDualVerification v = verify_q_dual(i.system, i.system, 2.0 * identity(2), i.op("k"));
  EXPECT_FALSE(v.passed);
  EXPECT_NEAR(v.synthesis_residual, 1.0, 1e-12);
}

TEST(VerifyQDual, ShapeMismatchIsPrecondition) {
  const FrameDocument i = fixture("FIX-I");
  EXPECT_THROW(verify_q_dual(i.system, i.system, identity(3), i.op("k")), PreconditionError);
}

TEST(ConstructQDual, FixIIsSelfDual) {
  const FrameDocument i = fixture("FIX-I");
  const QDualPair p = construct_q_dual(i.system, i.op("k"));
  EXPECT_TRUE(p.certified);
  EXPECT_LE(p.residual, 1e-12);
  EXPECT_LE((p.q - identity(2)).norm(), 1e-12);
  EXPECT_EQ(p.reading, DualSubspaceReading::Literal);
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_LE((p.dual.member(j).subspace.projection() - i.system.member(j).subspace.projection()).norm(), 1e-12);
  }
}

TEST(ConstructQDual, FixACertifiesUnderSomeReading) {
  const FrameDocument a = fixture("FIX-A");
  const QDualPair p = construct_q_dual(a.system, a.op("k"));
  EXPECT_TRUE(p.certified);
  EXPECT_LE(p.residual, 1e-9);
  EXPECT_FALSE(p.attempts.empty());
  EXPECT_EQ(p.attempts.back().reading, p.reading);
}

TEST(ConstructQDual, AllFixturesCertifyAndSatisfyTheCorollary) {
  for (const auto& name : fixture_names()) {
    const FrameDocument d = oracle::load_fixture(name);
    const BoundedOperator k = d.op("k");
    const QDualPair p = construct_q_dual(d.system, k);
    ASSERT_TRUE(p.certified) << name;
    const QDualVerification v = verify_q_dual(p);
    EXPECT_LE(v.synthesis_residual, 1e-9) << name;
    EXPECT_LE(v.forms_spread, 1e-10) << name;
    // Independent synthesis residual.
    const Matrix t = synthesis(p.base).matrix();
    const Matrix td = synthesis(p.dual).matrix();
    EXPECT_LE(oracle::jacobi_eigenvalues([&] {
                const Matrix r = t * p.q.adjoint() * td.adjoint() - k.matrix();
                return Matrix(r.adjoint() * r);
              }()).back(),
              1e-18)
        << name;
    const FrameReport dual_frame = verify_k_g_fusion(p.dual, k.adjoint());
    EXPECT_TRUE(dual_frame.is_frame) << name;
    const QDualBoundReport c = qdual_bound_corollary(p);
    EXPECT_TRUE(c.holds) << name;
    EXPECT_GE(c.dual.lower, 1.0 / (c.base.upper * c.q_norm * c.q_norm) - 1e-9) << name;
  }
}

TEST(ConstructQDual, NotAFrameThrows) {
  const GFusionSystem s = embed_k_frame({basis_vector(2, 0)});
  EXPECT_THROW(construct_q_dual(s, BoundedOperator(identity(2))), NotAFrameError);
}

TEST(QDualCorollary, FixISelfDual) {
  const FrameDocument i = fixture("FIX-I");
  const QDualBoundReport c = qdual_bound_corollary(construct_q_dual(i.system, i.op("k")));
  EXPECT_NEAR(c.dual.lower, 1.0, 1e-9);
  EXPECT_NEAR(c.q_norm, 1.0, 1e-12);
  EXPECT_TRUE(c.holds);
}

TEST(QDualCorollary, UncertifiedPairIsRejected) {
  const FrameDocument a = fixture("FIX-A");
  QDualPair p = construct_q_dual(a.system, a.op("k"));
  p.certified = false;
  EXPECT_THROW(qdual_bound_corollary(p), PreconditionError);
}

TEST(CanonicalDual, FixIEqualsBase) {
  const FrameDocument i = fixture("FIX-I");
  const KGFDualPair p = canonical_dual(i.system, i.op("k"));
  EXPECT_TRUE(p.certified);
  EXPECT_FALSE(p.exploratory);
  EXPECT_LE(p.residual, 1e-12);
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_LE((p.dual.member(j).local.matrix - i.system.member(j).local.matrix).norm(), 1e-12);
  }
}

TEST(CanonicalDual, FixAWithInvertibleK) {
  const FrameDocument a = fixture("FIX-A");
  const Matrix k = build::fix_a_k() + basis_vector(3, 0) * basis_vector(3, 2).adjoint();
  const KGFDualPair p = canonical_dual(a.system, BoundedOperator(k));
  EXPECT_FALSE(p.exploratory);
  EXPECT_TRUE(p.certified);
  EXPECT_LE(p.residual, 1e-9);
  EXPECT_LE((naive_partial(p.base, p.dual, all_of(3)) - k).norm(), 1e-9);
}

TEST(CanonicalDual, FixARankDeficientMatchesBruteForce) {
  const FrameDocument a = fixture("FIX-A");
  const KGFDualPair p = canonical_dual(a.system, a.op("k"));
  EXPECT_TRUE(p.exploratory);
  const double brute = oracle::jacobi_eigenvalues([&] {
    const Matrix r = naive_partial(p.base, p.dual, all_of(3)) - a.op("k").matrix();
    return Matrix(r.adjoint() * r);
  }()).back();
  EXPECT_NEAR(p.residual, std::sqrt(std::max(brute, 0.0)), 1e-9);
}

TEST(CanonicalDual, InvertibleFixturesReproduceK) {
  std::size_t checked = 0;
  for (const auto& name : fixture_names()) {
    const FrameDocument d = oracle::load_fixture(name);
    if (!invertible_k(d)) continue;
    const KGFDualPair p = canonical_dual(d.system, d.op("k"));
    EXPECT_TRUE(p.certified) << name;
    EXPECT_LE(p.residual, 1e-9) << name;
    const KGFDualVerification v = verify_kgf_dual(p);
    EXPECT_TRUE(v.passed) << name;
    EXPECT_LE(v.probe_residual, 1e-9) << name;
    EXPECT_TRUE(v.dual_frame.is_frame) << name;
    ++checked;
  }
  EXPECT_GE(checked, 10u);
}

TEST(VerifyKgfDual, FixISelfPair) {
  const FrameDocument i = fixture("FIX-I");
  const KGFDualPair p = make_kgf_pair(i.system, i.system, i.op("k"));
  const KGFDualVerification v = verify_kgf_dual(p);
  EXPECT_EQ(v.residual, 0.0);
  EXPECT_TRUE(v.passed);
}

TEST(VerifyKgfDual, ScaledDualFailsByOnePercent) {
  const FrameDocument i = fixture("FIX-I");
  std::vector<Matrix> locals;
  for (const auto& m : i.system.members()) locals.push_back(1.01 * m.local.matrix);
  const KGFDualPair p = make_kgf_pair(i.system, i.system.with_local_operators(locals), i.op("k"));
  const KGFDualVerification v = verify_kgf_dual(p);
  EXPECT_NEAR(v.residual, 0.01, 1e-12);
  EXPECT_FALSE(v.passed);
  EXPECT_FALSE(p.certified);
}

TEST(PartialOperator, Examples) {
  const FrameDocument i = fixture("FIX-I");
  const KGFDualPair p = make_kgf_pair(i.system, i.system, i.op("k"));
  EXPECT_LE(partial_operator(p, {}).matrix.norm(), 0.0);
  EXPECT_LE((partial_operator(p, {0, 1}).matrix - identity(2)).norm(), 1e-15);
  EXPECT_LE((partial_operator(p, {0}).matrix - diag({1, 0})).norm(), 1e-15);
  EXPECT_THROW(partial_operator(p, {2}), InputError);
}

TEST(PartialOperator, ComplementIdentityOnCanonicalPairs) {
  for (const auto& name : fixture_names()) {
    const FrameDocument d = oracle::load_fixture(name);
    if (!invertible_k(d)) continue;
    const KGFDualPair p = canonical_dual(d.system, d.op("k"));
    const std::size_t n = p.base.size();
    ASSERT_LE(n, 10u);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      const IndexSet s = subset_from_mask(mask, n);
      EXPECT_LE(complement_identity_residual(p, s), 1e-10) << name << " mask " << mask;
      EXPECT_LE((partial_operator(p, s).matrix - naive_partial(p.base, p.dual, s)).norm(), 1e-12) << name;
    }
  }
}

TEST(IdentityTg1, FixIHandValues) {
  const FrameDocument i = fixture("FIX-I");
  const KGFDualPair p = make_kgf_pair(i.system, i.system, i.op("k"));
  for (const Vector& f : {vec({1, 1}), vec({1, 2})}) {
    const IdentityCheck c = check_identity_tg1(p, {0}, f);
    EXPECT_NEAR(std::abs(c.lhs), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(c.rhs), 0.0, 1e-15);
    EXPECT_TRUE(c.passed);
  }
}

TEST(IdentityTg1, RandomSubsetsOnCanonicalPairs) {
  Rng rng(901);
  for (const auto& name : fixture_names()) {
    const FrameDocument d = oracle::load_fixture(name);
    if (!invertible_k(d)) continue;
    const KGFDualPair p = canonical_dual(d.system, d.op("k"));
    for (int trial = 0; trial < 50; ++trial) {
      const IndexSet s = subset_from_mask(rng.engine()() & ((std::uint64_t{1} << p.base.size()) - 1), p.base.size());
      const IdentityCheck c = check_identity_tg1(p, s, rng.unit_vector(d.system.dim(), d.system.space().field));
      EXPECT_LE(c.residual, 1e-9 * (1 + std::abs(c.lhs))) << name;
      EXPECT_TRUE(c.passed) << name;
    }
  }
}

TEST(IdentityTg1, UncertifiedPairIsRejected) {
  const FrameDocument i = fixture("FIX-I");
  std::vector<Matrix> locals;
  for (const auto& m : i.system.members()) locals.push_back(2.0 * m.local.matrix);
  const KGFDualPair p = make_kgf_pair(i.system, i.system.with_local_operators(locals), i.op("k"));
  EXPECT_THROW(check_identity_tg1(p, {0}, vec({1, 0})), PreconditionError);
}

TEST(IdentityTi1, EmptyExtraAndHandCase) {
  const FrameDocument i = fixture("FIX-I");
  const IdentityCheck a = check_identity_ti1(i.system, i.op("k"), {0}, {}, vec({1, 2}));
  EXPECT_LE(a.residual, 1e-12);
  const IdentityCheck b = check_identity_ti1(i.system, i.op("k"), {0}, {1}, vec({1, 1}));
  EXPECT_LE(b.residual, 1e-12);
  EXPECT_TRUE(b.passed);
}

TEST(IdentityTi1, Preconditions) {
  const FrameDocument i = fixture("FIX-I");
  EXPECT_THROW(check_identity_ti1(i.system, i.op("k"), {0}, {0}, vec({1, 1})), PreconditionError);
  const FrameDocument a = fixture("FIX-A");
  EXPECT_THROW(check_identity_ti1(a.system, a.op("k"), {0}, {}, vec({1, 1, 1})), PreconditionError);
  EXPECT_THROW(check_three_quarters(a.system, a.op("k"), {0}, vec({1, 1, 1})), PreconditionError);
}

TEST(IdentityTi1, RandomParsevalFixtures) {
  Rng rng(902);
  for (const auto& name : fixture_names()) {
    const FrameDocument d = oracle::load_fixture(name);
    const BoundedOperator k = parseval_operator(d.system);
    const std::size_t n = d.system.size();
    for (int trial = 0; trial < 100; ++trial) {
      const IndexSet s = subset_from_mask(rng.engine()() & ((std::uint64_t{1} << n) - 1), n);
      IndexSet extra;
      for (std::size_t j : complement(s, n)) {
        if (rng.coin()) extra.push_back(j);
      }
      const Vector f = rng.unit_vector(d.system.dim(), d.system.space().field);
      const IdentityCheck c = check_identity_ti1(d.system, k, s, extra, f);
      EXPECT_TRUE(c.passed) << name;
      EXPECT_LE(c.residual, 1e-9) << name;
    }
  }
}

TEST(ThreeQuarters, FixICoordinateVector) {
  const FrameDocument i = fixture("FIX-I");
  const ThreeQuartersCheck c = check_three_quarters(i.system, i.op("k"), {0}, vec({1, 0}));
  EXPECT_NEAR(c.lhs, 1.0, 1e-15);
  EXPECT_NEAR(c.lower, 0.75, 1e-15);
  EXPECT_TRUE(c.passed);
}

TEST(ThreeQuarters, CoordinateSystemGivesSquaredNorm) {
  // On the coordinate system the left side is |f|^2 for every f and I.
  const FrameDocument i = fixture("FIX-I");
  const double s = 1.0 / std::sqrt(2.0);
  const ThreeQuartersCheck c = check_three_quarters(i.system, i.op("k"), {0}, vec({s, s}));
  EXPECT_NEAR(c.lhs, 1.0, 1e-15);
  EXPECT_TRUE(c.passed);
}

TEST(ThreeQuarters, HalvedPairAttainsTheBound) {
  const GFusionSystem sys = halved_pair();
  const BoundedOperator k(identity(2));
  ASSERT_LE((frame_operator(sys) - identity(2)).norm(), 1e-15);
  Rng rng(903);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector f = rng.unit_vector(2, Field::Real);
    const ThreeQuartersCheck c = check_three_quarters(sys, k, {0}, f);
    EXPECT_NEAR(c.lhs, 0.75, 1e-9);
    EXPECT_NEAR(c.slack, 0.0, 1e-9);
    EXPECT_TRUE(c.passed);
  }
}

TEST(ThreeQuarters, RandomParsevalFixtures) {
  Rng rng(904);
  for (const auto& name : fixture_names()) {
    const FrameDocument d = oracle::load_fixture(name);
    const BoundedOperator k = parseval_operator(d.system);
    const std::size_t n = d.system.size();
    for (int trial = 0; trial < 100; ++trial) {
      const IndexSet s = subset_from_mask(rng.engine()() & ((std::uint64_t{1} << n) - 1), n);
      const ThreeQuartersCheck c = check_three_quarters(d.system, k, s, rng.unit_vector(d.system.dim(), d.system.space().field));
      EXPECT_TRUE(c.passed) << name;
      EXPECT_GE(c.slack, -1e-9) << name;
      EXPECT_LE(c.equality_residual, 1e-9) << name;
    }
  }
}
