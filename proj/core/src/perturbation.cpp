#include "framelab/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "framelab/random.hpp"

namespace framelab {

namespace {

// Per-member data reused by every probe.
struct MemberTerms {
  Matrix base_op;    // v^2 pi Lambda^* Lambda pi
  Matrix theta_op;   // v^2 pi Theta^* Theta pi
  Matrix base_half;  // v Lambda pi
  Matrix diff_half;  // v (Lambda - Theta) pi
};

class HypothesisEvaluator {
 public:
  HypothesisEvaluator(const GFusionSystem& base, const std::vector<Matrix>& theta,
                      const BoundedOperator& k, const PerturbationParams& params)
      : params_(params), k_adjoint_(k.matrix().adjoint()) {
    terms_.reserve(base.size());
    for (std::size_t j = 0; j < base.size(); ++j) {
      const Member& m = base.member(j);
      const Matrix p = m.subspace.projection();
      const double v = m.subspace.weight();
      MemberTerms t;
      t.base_half = v * m.local.matrix * p;
      const Matrix theta_half = v * theta[j] * p;
      t.diff_half = t.base_half - theta_half;
      t.base_op = t.base_half.adjoint() * t.base_half;
      t.theta_op = theta_half.adjoint() * theta_half;
      terms_.push_back(std::move(t));
    }
  }

  [[nodiscard]] bool uses_subsets() const {
    return params_.mode == PerturbationMode::SqrtSum || params_.mode == PerturbationMode::KStar;
  }

  /// lhs - rhs of the hypothesis at f (f is normalised first).
  [[nodiscard]] double violation(const std::vector<bool>& in, const Vector& f_raw) const {
    const double norm = f_raw.norm();
    if (norm == 0.0) return -std::numeric_limits<double>::infinity();
    const Vector f = f_raw / norm;
    const double kstar = (k_adjoint_ * f).norm();

    switch (params_.mode) {
      case PerturbationMode::SqrtSum:
      case PerturbationMode::KStar: {
        Vector a = Vector::Zero(f.size());
        Vector b = Vector::Zero(f.size());
        double c = 0.0;
        for (std::size_t j = 0; j < terms_.size(); ++j) {
          if (!in[j]) continue;
          a += terms_[j].base_op * f;
          b += terms_[j].theta_op * f;
          c += (terms_[j].base_half * f).squaredNorm();
        }
        const double last = params_.mode == PerturbationMode::SqrtSum ? std::sqrt(c) : kstar;
        return (a - b).norm() - params_.lambda1 * a.norm() - params_.lambda2 * b.norm() -
               params_.gamma * last;
      }
      case PerturbationMode::NormSum: {
        if (params_.norm_sum_reading == NormSumReading::SumOfNorms) {
          double total = 0.0;
          for (const auto& t : terms_) total += ((t.base_op - t.theta_op) * f).norm();
          return total - params_.r * kstar;
        }
        Vector d = Vector::Zero(f.size());
        for (const auto& t : terms_) d += (t.base_op - t.theta_op) * f;
        return d.norm() - params_.r * kstar;
      }
      case PerturbationMode::SqSum: {
        double total = 0.0;
        for (const auto& t : terms_) total += (t.diff_half * f).squaredNorm();
        return total - params_.r * kstar * kstar;
      }
    }
    return 0.0;
  }

 private:
  PerturbationParams params_;
  Matrix k_adjoint_;
  std::vector<MemberTerms> terms_;
};

std::vector<std::vector<bool>> subsets_to_test(std::size_t nj, bool uses_subsets,
                                               const ProbeOptions& options, Rng& rng) {
  std::vector<std::vector<bool>> out;
  if (!uses_subsets) {
    out.emplace_back(nj, true);
    return out;
  }
  if (nj <= options.exhaustive_limit) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << nj); ++mask) {
      std::vector<bool> in(nj);
      for (std::size_t j = 0; j < nj; ++j) in[j] = (mask >> j) & 1U;
      out.push_back(std::move(in));
    }
    return out;
  }
  out.emplace_back(nj, true);
  for (std::size_t j = 0; j < nj; ++j) {
    std::vector<bool> single(nj, false);
    single[j] = true;
    out.push_back(single);
    single.flip();
    out.push_back(std::move(single));
  }
  while (out.size() < options.sampled_subsets) {
    std::vector<bool> in(nj);
    for (std::size_t j = 0; j < nj; ++j) in[j] = rng.coin();
    out.push_back(std::move(in));
  }
  return out;
}

// Finite-difference ascent of the violation on the unit sphere.
Vector refine_probe(const HypothesisEvaluator& eval, const std::vector<bool>& in, Vector f,
                    bool complex_field, std::size_t iterations) {
  const Index n = f.size();
  const Index params = complex_field ? 2 * n : n;
  auto pack = [&](const Vector& v) {
    Eigen::VectorXd x(params);
    for (Index i = 0; i < n; ++i) {
      x(i) = v(i).real();
      if (complex_field) x(n + i) = v(i).imag();
    }
    return x;
  };
  auto unpack = [&](const Eigen::VectorXd& x) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = Complex(x(i), complex_field ? x(n + i) : 0.0);
    return v;
  };

  Eigen::VectorXd x = pack(f / f.norm());
  double value = eval.violation(in, unpack(x));
  double step = 0.1;
  const double h = 1e-6;
  for (std::size_t it = 0; it < iterations && step > 1e-9; ++it) {
    Eigen::VectorXd grad(params);
    for (Index i = 0; i < params; ++i) {
      Eigen::VectorXd xp = x;
      Eigen::VectorXd xm = x;
      xp(i) += h;
      xm(i) -= h;
      grad(i) = (eval.violation(in, unpack(xp)) - eval.violation(in, unpack(xm))) / (2.0 * h);
    }
    const double gnorm = grad.norm();
    if (!(gnorm > 1e-14)) break;
    Eigen::VectorXd candidate = x + step * grad / gnorm;
    candidate /= candidate.norm();
    const double cv = eval.violation(in, unpack(candidate));
    if (cv > value) {
      x = candidate;
      value = cv;
      step *= 1.5;
    } else {
      step *= 0.5;
    }
  }
  return unpack(x);
}

void require_theta(const GFusionSystem& base, const std::vector<Matrix>& theta) {
  if (theta.size() != base.size()) {
    throw PreconditionError("theta has " + std::to_string(theta.size()) + " operators, expected " +
                            std::to_string(base.size()));
  }
  for (std::size_t j = 0; j < theta.size(); ++j) {
    const Matrix& lam = base.member(j).local.matrix;
    if (theta[j].rows() != lam.rows() || theta[j].cols() != lam.cols()) {
      throw PreconditionError("theta operator " + std::to_string(j) + " has shape " +
                              std::to_string(theta[j].rows()) + "x" + std::to_string(theta[j].cols()) +
                              ", expected " + std::to_string(lam.rows()) + "x" +
                              std::to_string(lam.cols()));
    }
  }
}

bool unit_interval(double x) { return x >= 0.0 && x < 1.0; }

}  // namespace

std::string to_string(PerturbationMode m) {
  switch (m) {
    case PerturbationMode::SqrtSum:
      return "P1-sqrt-sum";
    case PerturbationMode::KStar:
      return "P-variant-kstar";
    case PerturbationMode::NormSum:
      return "C-p2-normsum";
    case PerturbationMode::SqSum:
      return "T-sqsum";
  }
  return "unknown";
}

PerturbationMode perturbation_mode_from_string(const std::string& s) {
  for (auto m : {PerturbationMode::SqrtSum, PerturbationMode::KStar, PerturbationMode::NormSum,
                 PerturbationMode::SqSum}) {
    if (to_string(m) == s) return m;
  }
  throw InputError("unknown perturbation mode '" + s +
                   "' (expected P1-sqrt-sum, P-variant-kstar, C-p2-normsum or T-sqsum)");
}

PaleyWienerReport paley_wiener_check(const Matrix& u, double lambda1, double lambda2,
                                     const Tolerance& tol) {
  if (!unit_interval(lambda1) || !unit_interval(lambda2)) {
    throw PreconditionError("paley_wiener_check: lambda1 and lambda2 must lie in [0, 1)");
  }
  if (u.rows() != u.cols()) throw PreconditionError("paley_wiener_check: U must be square");

  PaleyWienerReport out;
  const Svd s = svd(u);
  out.sigma_max = s.largest();
  out.sigma_min = s.sigma.size() ? s.sigma(s.sigma.size() - 1) : 0.0;
  const double defect = operator_norm(identity(u.rows()) - u);
  out.hypothesis_margin = lambda1 + lambda2 * out.sigma_min - defect;
  out.certified = out.hypothesis_margin >= -tol.at(1.0);

  out.predicted = {(1.0 - lambda1) / (1.0 + lambda2), (1.0 + lambda1) / (1.0 - lambda2)};
  out.predicted_inverse = {(1.0 - lambda2) / (1.0 + lambda1), (1.0 + lambda2) / (1.0 - lambda1)};
  if (out.sigma_min > 0.0) {
    out.inverse_sigma_min = 1.0 / out.sigma_max;
    out.inverse_sigma_max = 1.0 / out.sigma_min;
  }
  if (out.certified) {
    const double slack = tol.at(out.sigma_max);
    out.conclusion_holds = out.sigma_min >= out.predicted.lower - slack &&
                           out.sigma_max <= out.predicted.upper + slack &&
                           out.sigma_min > 0.0 &&
                           out.inverse_sigma_min >= out.predicted_inverse.lower - slack &&
                           out.inverse_sigma_max <= out.predicted_inverse.upper + slack;
  }
  return out;
}

bool admissible(const PerturbationParams& p, double lower, double k_norm) {
  if (!(lower > 0.0)) return false;
  switch (p.mode) {
    case PerturbationMode::SqrtSum:
      return unit_interval(p.lambda1) && unit_interval(p.lambda2) && p.gamma >= 0.0 &&
             std::max(p.lambda1 + p.gamma / std::sqrt(lower), p.lambda2) < 1.0;
    case PerturbationMode::KStar:
      return unit_interval(p.lambda1) && unit_interval(p.lambda2) && p.gamma >= 0.0 && k_norm > 0.0 &&
             std::max(p.lambda1 + p.gamma / (std::sqrt(lower) * k_norm), p.lambda2) < 1.0;
    case PerturbationMode::NormSum:
    case PerturbationMode::SqSum:
      return p.r >= 0.0 && p.r < lower;
  }
  return false;
}

bool kstar_bound_form_admissible(const PerturbationParams& p, double lower, double k_norm) {
  return lower > 0.0 && unit_interval(p.lambda1) && unit_interval(p.lambda2) && p.gamma >= 0.0 &&
         std::max(p.lambda1 + p.gamma * k_norm / std::sqrt(lower), p.lambda2) < 1.0;
}

FrameBounds predicted_bounds(const PerturbationParams& p, double lower, double upper,
                             double k_norm) {
  if (!admissible(p, lower, k_norm)) {
    throw InputError("parameters are not admissible for mode " + to_string(p.mode));
  }
  const double sa = std::sqrt(lower);
  const double sb = std::sqrt(upper);
  switch (p.mode) {
    case PerturbationMode::SqrtSum:
      return {lower * (1.0 - (p.lambda1 + p.gamma / sa)) / (1.0 + p.lambda2),
              upper * (1.0 + p.lambda1 + p.gamma / sb) / (1.0 - p.lambda2)};
    case PerturbationMode::KStar:
      return {lower * (1.0 - (p.lambda1 + p.gamma / sa * k_norm)) / (1.0 + p.lambda2),
              upper * (1.0 + p.lambda1 + p.gamma / sb * k_norm) / (1.0 - p.lambda2)};
    case PerturbationMode::NormSum:
      return {lower - p.r, std::min(upper + p.r * std::sqrt(upper / lower), p.r * k_norm + sb)};
    case PerturbationMode::SqSum: {
      const double sr = std::sqrt(p.r);
      return {(sa - sr) * (sa - sr), (k_norm * sr + sb) * (k_norm * sr + sb)};
    }
  }
  return {};
}

HypothesisVerdict perturb_hypothesis(const GFusionSystem& base, const std::vector<Matrix>& theta,
                                     const BoundedOperator& k, const PerturbationParams& params,
                                     const Tolerance& tol, const ProbeOptions& options) {
  require_theta(base, theta);
  if (k.dim() != base.dim()) throw PreconditionError("perturb_hypothesis: dimension mismatch");

  const HypothesisEvaluator eval(base, theta, k, params);
  Rng rng(options.seed);
  const auto subsets = subsets_to_test(base.size(), eval.uses_subsets(), options, rng);

  const Index n = base.dim();
  const bool complex_field = base.space().field == Field::Complex ||
                             std::any_of(theta.begin(), theta.end(),
                                         [](const Matrix& m) { return !is_real(m); });
  std::vector<Vector> probes;
  for (Index i = 0; i < n; ++i) probes.push_back(Vector::Unit(n, i));
  for (std::size_t p = 0; p < options.random_probes; ++p) {
    probes.push_back(rng.unit_vector(n, complex_field ? Field::Complex : Field::Real));
  }

  HypothesisVerdict out;
  out.subsets_tested = subsets.size();
  double worst = -std::numeric_limits<double>::infinity();
  std::size_t worst_subset = 0;
  Vector worst_probe = probes.front();
  for (const Vector& f : probes) {
    for (std::size_t s = 0; s < subsets.size(); ++s) {
      const double v = eval.violation(subsets[s], f);
      if (v > worst) {
        worst = v;
        worst_subset = s;
        worst_probe = f;
      }
    }
  }
  out.probes_tested = probes.size();

  if (options.refine_iterations > 0) {
    const Vector refined = refine_probe(eval, subsets[worst_subset], worst_probe, complex_field,
                                        options.refine_iterations);
    const double v = eval.violation(subsets[worst_subset], refined);
    ++out.probes_tested;
    if (v > worst) {
      worst = v;
      worst_probe = refined / refined.norm();
    }
  }

  const Matrix s_base = frame_operator(base);
  const Matrix s_theta = frame_operator(base.with_local_operators(theta));
  const double scale = std::max(operator_norm(s_base), operator_norm(s_theta));

  out.worst_violation = std::max(worst, 0.0);
  out.falsified = worst > tol.at(scale);
  for (std::size_t j = 0; j < base.size(); ++j) {
    if (subsets[worst_subset][j]) out.worst_subset.push_back(j);
  }
  out.worst_probe = worst_probe;
  return out;
}

double minimal_sqsum_constant(const GFusionSystem& base, const std::vector<Matrix>& theta,
                              const BoundedOperator& k, const Tolerance& tol) {
  require_theta(base, theta);
  Index rows = 0;
  for (const auto& m : base.members()) rows += m.local.local_dim();
  Matrix d(rows, base.dim());
  Index offset = 0;
  for (std::size_t j = 0; j < base.size(); ++j) {
    const Member& m = base.member(j);
    const Index dj = m.local.local_dim();
    d.middleRows(offset, dj) = m.subspace.weight() * (m.local.matrix - theta[j]) * m.subspace.projection();
    offset += dj;
  }
  // D^* D <= R kk^*  iff  D^* = k w with R = ||w||^2 minimal (Douglas)
  const DouglasFactorization f = douglas_factor(d.adjoint(), k.matrix(), tol);
  if (!f.included) return std::numeric_limits<double>::infinity();
  return f.lambda_min * f.lambda_min;
}

bool PerturbationReport::passed() const {
  if (!theta_frame.is_frame) return false;
  if (containment_asserted) return lower_contained && upper_contained;
  return true;
}

PerturbationReport verify_perturbation_theorem(const GFusionSystem& base,
                                               const std::vector<Matrix>& theta,
                                               const BoundedOperator& k,
                                               const PerturbationParams& params,
                                               const Tolerance& tol, const ProbeOptions& options) {
  PerturbationReport out;
  out.base_bounds = optimal_bounds(base, k, tol);
  out.hypothesis = perturb_hypothesis(base, theta, k, params, tol, options);
  if (out.hypothesis.falsified) {
    throw PreconditionError("perturbation hypothesis falsified (worst violation " +
                            std::to_string(out.hypothesis.worst_violation) + ")");
  }
  const double k_norm = k.norm();
  out.predicted = predicted_bounds(params, out.base_bounds.lower, out.base_bounds.upper, k_norm);
  if (params.mode == PerturbationMode::KStar) {
    out.kstar_printed_admissible = admissible(params, out.base_bounds.lower, k_norm);
    out.kstar_bound_form_admissible = kstar_bound_form_admissible(params, out.base_bounds.lower, k_norm);
  }

  const GFusionSystem theta_system = base.with_local_operators(theta);
  out.theta_frame = verify_k_g_fusion(theta_system, k, std::nullopt, tol);
  out.measured = out.theta_frame.optimal;
  out.lower_contained = out.theta_frame.is_frame &&
                        out.predicted.lower <= out.measured.lower + tol.at(out.measured.lower);
  out.upper_contained = out.measured.upper <= out.predicted.upper + tol.at(out.predicted.upper);
  out.containment_asserted = params.mode == PerturbationMode::SqSum;

  if (!out.containment_asserted) {
    const std::string mode = to_string(params.mode);
    std::string readings;
    if (out.kstar_printed_admissible) {
      readings = std::string(" (admissible as printed: ") +
                 (*out.kstar_printed_admissible ? "yes" : "no") + ", in bound form: " +
                 (*out.kstar_bound_form_admissible ? "yes" : "no") + ")";
    }
    if (!out.lower_contained) {
      out.errata.push_back({mode + "/lower",
                            "predicted lower bound exceeds the measured optimal lower bound" + readings,
                            out.predicted.lower, out.measured.lower});
    }
    if (!out.upper_contained) {
      out.errata.push_back({mode + "/upper",
                            "measured optimal upper bound exceeds the predicted upper bound" + readings,
                            out.predicted.upper, out.measured.upper});
    }
  }
  return out;
}

}  // namespace framelab
