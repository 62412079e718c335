#include <algorithm>
#include <cstdio>

#include "framelab/model.hpp"
#include "framelab/random.hpp"

namespace framelab {

namespace {

constexpr int kRandomFixtureCount = 20;
constexpr std::uint64_t kRandomFixtureSeedBase = 0x5EED0000;

Matrix unit_row(Index n, Index j) {
  Matrix row = Matrix::Zero(1, n);
  row(0, j) = 1.0;
  return row;
}

// H = R^n, W_j = span{e_j}, Lambda_j f = f_j, v_j = 1.
GFusionSystem coordinate_system(Index n) {
  std::vector<Member> members;
  for (Index j = 0; j < n; ++j) {
    members.push_back(Member{WeightedSubspace(unit_row(n, j).transpose(), 1.0),
                             LocalOperator{unit_row(n, j)}});
  }
  return GFusionSystem(HilbertSpace{Field::Real, n}, std::move(members));
}

FrameDocument fixture_a() {
  // k: e1 -> e2, e2 -> e3, e3 -> e3;  u: e1 -> 0, e2 -> e1, e3 -> e2
  Matrix k = Matrix::Zero(3, 3);
  k(1, 0) = 1.0;
  k(2, 1) = 1.0;
  k(2, 2) = 1.0;
  Matrix u = Matrix::Zero(3, 3);
  u(0, 1) = 1.0;
  u(1, 2) = 1.0;

  FrameDocument doc{"FIX-A", coordinate_system(3), {{"k", k}, {"u", u}}, {}};
  doc.claims.push_back(FrameClaim{"k", true, 0.5, 1.0, "reference example: bounds 1/2 and 1"});
  doc.claims.push_back(FrameClaim{
      "u", false, std::nullopt, std::nullopt,
      "reference example: asserted not a u-g-fusion frame, arguing S = kk^*"});
  return doc;
}

FrameDocument fixture_i() {
  return FrameDocument{"FIX-I", coordinate_system(2), {{"k", identity(2)}}, {}};
}

std::string random_fixture_name(int id) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "FIX-R%02d", id);
  return buf;
}

FrameDocument fixture_r(int id) {
  const Index n = 2 + id % 7;
  const Field field = (id % 2 == 1) ? Field::Complex : Field::Real;
  const Index local_dim = 1 + id % 3;
  std::size_t members = 2 + static_cast<std::size_t>(id % 5);
  members = std::max<std::size_t>(members, static_cast<std::size_t>((n + local_dim - 1) / local_dim));

  const std::uint64_t seed = kRandomFixtureSeedBase + static_cast<std::uint64_t>(id);
  FrameDocument doc = random_system(seed, n, members, local_dim, field, random_fixture_name(id));

  Rng rng(seed ^ 0xA5A5A5A5ULL);
  Matrix k = rng.matrix(n, n, field) + 1.5 * identity(n);
  if (id % 4 == 3) {
    // Rank n-1: annihilate one random direction.
    const Vector w = rng.unit_vector(n, field);
    k = k * (identity(n) - w * w.adjoint());
  }
  doc.operators["k"] = k;
  doc.operators["u"] = rng.unitary(n, field);
  return doc;
}

// Same subspaces, weights and operators as `base`; Theta_j = c Lambda_j.
FrameDocument scaled_theta(const FrameDocument& base, double c, const std::string& name) {
  std::vector<Matrix> locals;
  for (const auto& m : base.system.members()) locals.push_back(c * m.local.matrix);
  return FrameDocument{name, base.system.with_local_operators(locals), base.operators, {}};
}

// Theta_j = Lambda_j + eps e_1^T.
FrameDocument bumped_theta(const FrameDocument& base, double eps, const std::string& name) {
  std::vector<Matrix> locals;
  for (const auto& m : base.system.members()) {
    Matrix t = m.local.matrix;
    t.col(0).array() += eps;
    locals.push_back(t);
  }
  return FrameDocument{name, base.system.with_local_operators(locals), base.operators, {}};
}

}  // namespace

FrameDocument random_system(std::uint64_t seed, Index dim, std::size_t members, Index local_dim,
                            Field field, const std::string& name) {
  if (dim < 1 || members < 1 || local_dim < 1) {
    throw InputError("random_system: dimensions must be positive");
  }
  Rng rng(seed);
  const bool want_full_rank = static_cast<Index>(members) * local_dim >= dim;
  for (int attempt = 0;; ++attempt) {
    std::vector<Member> out;
    out.reserve(members);
    for (std::size_t j = 0; j < members; ++j) {
      const Index lo = std::min(local_dim, dim);
      const Index m = lo + static_cast<Index>(rng.index(static_cast<std::size_t>(dim - lo + 1)));
      const Matrix basis = orthonormalize(rng.matrix(dim, m, field));
      const double weight = rng.uniform(0.5, 1.5);
      out.push_back(Member{WeightedSubspace(basis, weight), LocalOperator{rng.matrix(local_dim, dim, field)}});
    }
    GFusionSystem system(HilbertSpace{field, dim}, std::move(out));
    if (!want_full_rank || attempt >= 64) return FrameDocument{name, std::move(system), {}, {}};

    Matrix t(dim, system.total_local_dim());
    Index offset = 0;
    for (const auto& m : system.members()) {
      const Matrix block = m.subspace.weight() * m.subspace.projection() * m.local.matrix.adjoint();
      t.middleCols(offset, block.cols()) = block;
      offset += block.cols();
    }
    const Svd s = svd(t);
    if (s.sigma(dim - 1) > 1e-3 * s.sigma(0)) return FrameDocument{name, std::move(system), {}, {}};
  }
}

FrameDocument fixture(const std::string& name) {
  if (name == "FIX-A") return fixture_a();
  if (name == "FIX-I") return fixture_i();
  if (name == "FIX-I-THETA") return scaled_theta(fixture_i(), 1.1, name);
  if (name == "FIX-A-THETA") return bumped_theta(fixture_a(), 0.05, name);
  if (name.size() == 7 && name.rfind("FIX-R", 0) == 0) {
    const char hi = name[5];
    const char lo = name[6];
    if (hi >= '0' && hi <= '9' && lo >= '0' && lo <= '9') {
      const int id = (hi - '0') * 10 + (lo - '0');
      if (id < kRandomFixtureCount) return fixture_r(id);
    }
  }
  throw InputError("unknown fixture '" + name + "' (expected FIX-A, FIX-I, FIX-A-THETA, FIX-I-THETA or FIX-R00..FIX-R" +
                   std::to_string(kRandomFixtureCount - 1) + ")");
}

std::vector<std::string> fixture_names() {
  std::vector<std::string> names{"FIX-A", "FIX-I"};
  for (int id = 0; id < kRandomFixtureCount; ++id) names.push_back(random_fixture_name(id));
  return names;
}

std::vector<std::string> theta_fixture_names() { return {"FIX-A-THETA", "FIX-I-THETA"}; }

}  // namespace framelab
