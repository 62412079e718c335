#pragma once

#include <optional>
#include <string>
#include <vector>

#include "framelab/duality.hpp"
#include "framelab/frame_ops.hpp"
#include "framelab/model.hpp"

namespace framelab {

/// Which perturbation hypothesis (and conclusion) is in force.
///   SqrtSum   subset-wise operator-norm hypothesis with gamma (sum v^2 |Lambda pi f|^2)^{1/2}
///   KStar     same with gamma |k^* f| as the last term
///   NormSum   |sum_J v^2 (pi Lambda^*Lambda pi - pi Theta^*Theta pi) f| <= R |k^* f|
///   SqSum     sum_J v^2 |(Lambda_j - Theta_j) pi_j f|^2 <= R |k^* f|^2
enum class PerturbationMode { SqrtSum, KStar, NormSum, SqSum };

std::string to_string(PerturbationMode m);
PerturbationMode perturbation_mode_from_string(const std::string& s);

/// Reading of the NormSum hypothesis. NormOfSum bounds the norm of the sum
/// over J; SumOfNorms bounds the sum of the member norms (stronger).
enum class NormSumReading { NormOfSum, SumOfNorms };

struct PerturbationParams {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double gamma = 0.0;
  double r = 0.0;
  PerturbationMode mode = PerturbationMode::SqSum;
  NormSumReading norm_sum_reading = NormSumReading::NormOfSum;
};

struct HypothesisVerdict {
  bool falsified = false;
  double worst_violation = 0.0;  // max over probes of lhs - rhs (unit f)
  IndexSet worst_subset;
  Vector worst_probe;
  std::size_t subsets_tested = 0;
  std::size_t probes_tested = 0;
};

struct ProbeOptions {
  std::size_t random_probes = 200;
  std::size_t exhaustive_limit = 12;  // |J| up to this is enumerated exhaustively
  std::size_t sampled_subsets = 512;
  std::size_t refine_iterations = 60;
  std::uint64_t seed = 0x9E3779B97F4A7C15ULL;
};

struct PaleyWienerReport {
  bool certified = false;  // ||I - U|| <= lambda1 + lambda2 sigma_min(U)
  double hypothesis_margin = 0.0;  // lambda1 + lambda2 sigma_min - ||I - U||
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double inverse_sigma_min = 0.0;
  double inverse_sigma_max = 0.0;
  FrameBounds predicted;          // [(1-l1)/(1+l2), (1+l1)/(1-l2)]
  FrameBounds predicted_inverse;  // [(1-l2)/(1+l1), (1+l2)/(1-l1)]
  bool conclusion_holds = false;  // only meaningful when certified
};

/// Bounded-invertibility lemma for U with ||x - Ux|| <= l1 |x| + l2 |Ux|.
/// The hypothesis is certified through the sufficient condition
/// ||I - U|| <= l1 + l2 sigma_min(U); otherwise the verdict is inconclusive.
PaleyWienerReport paley_wiener_check(const Matrix& u, double lambda1, double lambda2,
                                     const Tolerance& tol = {});

/// Admissibility of the parameters for the mode given the lower bound A and
/// ||k||. For KStar the condition as printed is lambda1 + gamma/(sqrt(A)|k|).
bool admissible(const PerturbationParams& params, double lower, double k_norm);

/// KStar only: the condition in the form used by its bounds, lambda1 + gamma |k| / sqrt(A).
bool kstar_bound_form_admissible(const PerturbationParams& params, double lower, double k_norm);

/// Predicted bounds of the perturbed system, exactly as the theorems state
/// them. Throws InputError for inadmissible parameters.
FrameBounds predicted_bounds(const PerturbationParams& params, double lower, double upper,
                             double k_norm);

/// Probes the mode's hypothesis over subsets I and unit vectors f. A
/// verdict of "not falsified" is evidence, not proof.
HypothesisVerdict perturb_hypothesis(const GFusionSystem& base, const std::vector<Matrix>& theta,
                                     const BoundedOperator& k, const PerturbationParams& params,
                                     const Tolerance& tol = {}, const ProbeOptions& options = {});

/// Smallest R for which the SqSum hypothesis holds: sup |D f|^2 / |k^* f|^2
/// where D is the analysis operator of Lambda - Theta. Infinite when
/// R(D^*) is not inside R(k).
double minimal_sqsum_constant(const GFusionSystem& base, const std::vector<Matrix>& theta,
                              const BoundedOperator& k, const Tolerance& tol = {});

struct ErratumRecord {
  std::string id;
  std::string message;
  double predicted = 0.0;
  double measured = 0.0;
};

struct PerturbationReport {
  HypothesisVerdict hypothesis;
  FrameReport theta_frame;
  FrameBounds base_bounds;
  FrameBounds measured;   // optimal bounds of Theta for k
  FrameBounds predicted;
  bool lower_contained = false;  // predicted.lower <= measured.lower + tol
  bool upper_contained = false;  // measured.upper <= predicted.upper + tol
  bool containment_asserted = false;  // SqSum only
  std::optional<bool> kstar_printed_admissible;
  std::optional<bool> kstar_bound_form_admissible;
  std::vector<ErratumRecord> errata;

  /// Frame-ness of Theta, plus containment where it is asserted.
  [[nodiscard]] bool passed() const;
};

/// Builds Theta = (W_j, Theta_j, v_j), checks it is a k-g-fusion frame and
/// compares its optimal bounds with the prediction. Throws
/// PreconditionError when the hypothesis is falsified.
PerturbationReport verify_perturbation_theorem(const GFusionSystem& base,
                                               const std::vector<Matrix>& theta,
                                               const BoundedOperator& k,
                                               const PerturbationParams& params,
                                               const Tolerance& tol = {},
                                               const ProbeOptions& options = {});

}  // namespace framelab
