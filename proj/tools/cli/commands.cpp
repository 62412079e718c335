#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <ostream>

#include "framelab/duality.hpp"
#include "framelab/frame_ops.hpp"
#include "framelab/perturbation.hpp"
#include "framelab/random.hpp"

namespace framelab::cli {

namespace {

constexpr std::size_t kExhaustiveMembers = 10;
constexpr std::size_t kSampledSubsets = 1024;
constexpr std::uint64_t kProbeSeed = 0x1D3A7ULL;

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json bounds_json(const FrameBounds& b) { return Json{{"lower", number(b.lower)}, {"upper", number(b.upper)}}; }

Json index_set_json(const IndexSet& s) {
  Json out = Json::array();
  for (auto j : s) out.push_back(j);
  return out;
}

Json skeleton(const std::string& name, Json args, const Tolerance& tol) {
  Json r;
  r["command"] = Json{{"name", name}, {"args", std::move(args)}};
  r["tolerance"] = Json{{"abs", tol.abs}, {"rel", tol.rel}};
  r["verdicts"] = Json::object();
  r["bounds"] = Json::object();
  r["residuals"] = Json::object();
  r["assertions"] = Json::array();
  r["errata"] = Json::array();
  r["notes"] = Json::array();
  return r;
}

void check(Json& r, const std::string& name, bool passed) {
  r["assertions"].push_back(Json{{"check", name}, {"passed", passed}});
}

void note(Json& r, const std::string& text) { r["notes"].push_back(text); }

Result finish(Json r) {
  bool ok = true;
  for (const auto& a : r["assertions"]) ok = ok && a["passed"].get<bool>();
  const int code = ok ? kPass : kCheckFailed;
  r["exit_code"] = code;
  return Result{std::move(r), code};
}

Field probe_field(const GFusionSystem& system, const BoundedOperator& k) {
  return (system.space().field == Field::Complex || !is_real(k.matrix())) ? Field::Complex : Field::Real;
}

std::vector<IndexSet> subsets_for(std::size_t nj, Rng& rng) {
  std::vector<IndexSet> out;
  if (nj <= kExhaustiveMembers) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nj); ++mask) {
      out.push_back(subset_from_mask(mask, nj));
    }
    return out;
  }
  out.emplace_back();
  while (out.size() < kSampledSubsets) {
    IndexSet s;
    for (std::size_t j = 0; j < nj; ++j) {
      if (rng.coin()) s.push_back(j);
    }
    out.push_back(s);
    out.push_back(complement(s, nj));
  }
  return out;
}

void require_compatible_theta(const GFusionSystem& base, const GFusionSystem& theta,
                              const Tolerance& tol) {
  if (theta.dim() != base.dim() || theta.size() != base.size()) {
    throw InputError("theta document does not match the base system's dimension and index set");
  }
  for (std::size_t j = 0; j < base.size(); ++j) {
    const Member& a = base.member(j);
    const Member& b = theta.member(j);
    const bool same = a.subspace.weight() == b.subspace.weight() &&
                      a.local.local_dim() == b.local.local_dim() &&
                      operator_norm(a.subspace.projection() - b.subspace.projection()) <= tol.at(1.0);
    if (!same) {
      throw InputError("theta member " + std::to_string(j) +
                       " differs from the base in subspace, weight or local dimension");
    }
  }
}

void flatten(const Json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object() && !j.empty()) {
    for (const auto& [key, value] : j.items()) flatten(value, path.empty() ? key : path + "." + key, rows);
    return;
  }
  if (j.is_array() && std::any_of(j.begin(), j.end(), [](const Json& e) { return e.is_object(); })) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", rows);
    return;
  }
  std::string text = format_json(j);
  text.pop_back();
  std::replace(text.begin(), text.end(), '\n', ' ');
  rows.emplace_back(path, text);
}

}  // namespace

Result analyze(const AnalyzeOptions& o, const Tolerance& tol) {
  Json args{{"path", o.path}, {"k", o.k}};
  if (o.bounds) args["bounds"] = Json::array({o.bounds->first, o.bounds->second});
  Json r = skeleton("analyze", std::move(args), tol);

  const FrameDocument doc = load_document(o.path);
  const BoundedOperator k = doc.op(o.k);
  std::optional<FrameBounds> claimed;
  if (o.bounds) claimed = FrameBounds{o.bounds->first, o.bounds->second};

  const FrameReport fr = verify_k_g_fusion(doc.system, k, claimed, tol);
  r["verdicts"]["is_bessel"] = fr.is_bessel;
  r["verdicts"]["is_frame"] = fr.is_frame;
  r["verdicts"]["is_parseval"] = fr.is_parseval;
  r["residuals"]["range_inclusion"] = fr.range_inclusion_residual;
  r["residuals"]["parseval"] = fr.parseval_residual;

  const Matrix s = frame_operator(doc.system);
  if (fr.is_frame) {
    r["bounds"]["optimal"] = bounds_json(fr.optimal);
    r["bounds"]["bisection_lower"] = number(bisection_lower_bound(s, k.matrix() * k.matrix().adjoint()));
    r["verdicts"]["optimal_bounds_certified"] = certify_bounds(s, k.matrix(), fr.optimal, tol).ok();
  } else {
    r["bounds"]["optimal"] = Json{{"lower", nullptr}, {"upper", number(fr.optimal.upper)}};
  }

  if (fr.claim) {
    r["bounds"]["claimed"] = bounds_json(fr.claim->claimed);
    check(r, "claimed lower bound", fr.claim->lower_holds);
    check(r, "claimed upper bound", fr.claim->upper_holds);
  }

  for (const auto& c : doc.claims) {
    if (c.operator_name != o.k) continue;
    const bool frame_differs = c.is_frame != fr.is_frame;
    const bool lower_differs = fr.is_frame && c.lower && std::abs(*c.lower - fr.optimal.lower) > tol.at(*c.lower);
    const bool upper_differs = c.upper && std::abs(*c.upper - fr.optimal.upper) > tol.at(*c.upper);
    if (!frame_differs && !lower_differs && !upper_differs) continue;
    Json claimed_j{{"is_frame", c.is_frame}};
    if (c.lower) claimed_j["lower"] = *c.lower;
    if (c.upper) claimed_j["upper"] = *c.upper;
    Json computed{{"is_frame", fr.is_frame}};
    if (fr.is_frame) computed["lower"] = number(fr.optimal.lower);
    computed["upper"] = number(fr.optimal.upper);
    r["errata"].push_back(Json{{"id", "claim/" + c.operator_name},
                               {"message", "document claim disagrees with direct computation"},
                               {"source", c.source},
                               {"claimed", std::move(claimed_j)},
                               {"computed", std::move(computed)}});
  }
  return finish(std::move(r));
}

Result dual(const DualOptions& o, const Tolerance& tol) {
  Json args{{"path", o.path}, {"k", o.k}, {"method", o.method}};
  if (!o.out.empty()) args["out"] = o.out;
  Json r = skeleton("dual", std::move(args), tol);

  const FrameDocument doc = load_document(o.path);
  const BoundedOperator k = doc.op(o.k);
  if (o.method != "q" && o.method != "canonical") {
    throw InputError("unknown method '" + o.method + "' (expected q or canonical)");
  }
  if (k.dim() != doc.system.dim()) throw InputError("operator dimension does not match the system");

  const FrameReport base = verify_k_g_fusion(doc.system, k, std::nullopt, tol);
  r["verdicts"]["base_is_frame"] = base.is_frame;
  if (!base.is_frame) {
    check(r, "base is a k-g-fusion frame", false);
    return finish(std::move(r));
  }

  std::optional<GFusionSystem> dual_system;
  if (o.method == "q") {
    const QDualPair pair = construct_q_dual(doc.system, k, tol);
    Json attempts = Json::array();
    for (const auto& a : pair.attempts) {
      attempts.push_back(Json{{"reading", to_string(a.reading)},
                              {"residual", a.residual},
                              {"well_defined_residual", a.well_defined_residual}});
    }
    r["verdicts"]["reading"] = to_string(pair.reading);
    r["verdicts"]["certified"] = pair.certified;
    r["residuals"]["construction"] = pair.residual;
    r["residuals"]["attempts"] = std::move(attempts);
    check(r, "q-dual construction", pair.certified);
    if (pair.certified) {
      const QDualVerification v = verify_q_dual(pair, tol);
      r["residuals"]["synthesis"] = v.synthesis_residual;
      r["residuals"]["analysis"] = v.analysis_residual;
      r["residuals"]["bilinear"] = v.bilinear_residual;
      r["residuals"]["forms_spread"] = v.forms_spread;
      check(r, "equivalent duality forms agree", v.passed);

      const QDualBoundReport b = qdual_bound_corollary(pair, tol);
      r["bounds"]["base"] = bounds_json(b.base);
      r["bounds"]["dual"] = bounds_json(b.dual);
      r["bounds"]["q_norm"] = b.q_norm;
      r["bounds"]["lower_slack"] = number(b.lower_slack);
      r["bounds"]["upper_slack"] = number(b.upper_slack);
      r["verdicts"]["dual_is_kstar_frame"] = true;
      check(r, "dual bounds corollary", b.holds);
      dual_system = pair.dual;
    }
  } else {
    const KGFDualPair pair = canonical_dual(doc.system, k, tol);
    const KGFDualVerification v = verify_kgf_dual(pair, tol);
    r["verdicts"]["exploratory"] = pair.exploratory;
    r["verdicts"]["certified"] = pair.certified;
    r["verdicts"]["dual_is_kstar_frame"] = v.dual_frame.is_frame;
    r["residuals"]["reproduction"] = v.residual;
    r["residuals"]["probe"] = v.probe_residual;
    if (v.dual_frame.is_frame) r["bounds"]["dual"] = bounds_json(v.dual_frame.optimal);
    if (pair.exploratory) {
      r["verdicts"]["tag"] = "exploratory";
      note(r, "k is not invertible; the canonical dual is exploratory and its residual is not asserted");
      r["errata"].push_back(Json{{"id", "canonical-dual/rank-deficient-k"},
                                 {"message", "reproduction residual with a non-invertible k"},
                                 {"residual", v.residual}});
    } else {
      check(r, "canonical dual reproduces k", v.passed);
      check(r, "dual is a k*-g-fusion frame", v.dual_frame.is_frame);
    }
    dual_system = pair.dual;
  }

  if (dual_system && !o.out.empty()) {
    const FrameDocument out{doc.name + (o.method == "q" ? "-qdual" : "-canonical"), *dual_system,
                            {{"k_adjoint", k.matrix().adjoint()}}, {}};
    save_document(o.out, out);
    r["dual_document"] = o.out;
  }
  return finish(std::move(r));
}

Result identities(const IdentitiesOptions& o, const Tolerance& tol) {
  Json args{{"path", o.path}, {"k", o.k}, {"trials", o.trials}, {"parsevalize", o.parsevalize}};
  if (!o.dual.empty()) args["dual"] = o.dual;
  Json r = skeleton("identities", std::move(args), tol);

  const FrameDocument doc = load_document(o.path);
  const GFusionSystem& system = doc.system;
  BoundedOperator k = doc.op(o.k);
  if (k.dim() != system.dim()) throw InputError("operator dimension does not match the system");
  if (o.parsevalize) {
    k = parseval_operator(system, tol);
    note(r, "k replaced by S^(1/2) so that the system is Parseval");
  }

  Rng rng(kProbeSeed);
  const std::vector<IndexSet> subsets = subsets_for(system.size(), rng);
  std::vector<Vector> probes;
  for (std::size_t t = 0; t < o.trials; ++t) probes.push_back(rng.unit_vector(system.dim(), probe_field(system, k)));
  r["verdicts"]["subsets"] = subsets.size();
  r["verdicts"]["probes"] = probes.size();

  std::optional<KGFDualPair> pair;
  bool pair_asserted = true;
  if (!o.dual.empty()) {
    const FrameDocument d = load_document(o.dual);
    if (d.system.dim() != system.dim() || d.system.size() != system.size()) {
      throw InputError("dual document does not match the base system's dimension and index set");
    }
    pair = make_kgf_pair(system, d.system, k, tol);
  } else if (verify_k_g_fusion(system, k, std::nullopt, tol).is_frame) {
    pair = canonical_dual(system, k, tol);
    pair_asserted = !pair->exploratory;
  }

  if (!pair) {
    note(r, "dual identity skipped: the system is not a frame for k");
  } else if (!pair->certified && !pair_asserted) {
    note(r, "dual identity skipped: k is not invertible and no dual was given");
    r["residuals"]["dual_pair"] = pair->residual;
  } else {
    r["residuals"]["dual_pair"] = pair->residual;
    check(r, "dual pair reproduces k", pair->certified);
    if (pair->certified) {
      double tg1 = 0.0;
      double split = 0.0;
      bool tg1_ok = true;
      bool split_ok = true;
      for (const auto& s : subsets) {
        const double c = complement_identity_residual(*pair, s);
        split = std::max(split, c);
        split_ok = split_ok && c <= tol.at(k.norm());
        for (const auto& f : probes) {
          const IdentityCheck ic = check_identity_tg1(*pair, s, f, tol);
          tg1 = std::max(tg1, ic.residual);
          tg1_ok = tg1_ok && ic.passed;
        }
      }
      r["residuals"]["partial_sum_split"] = split;
      r["residuals"]["dual_identity"] = tg1;
      check(r, "partial operators sum to k", split_ok);
      check(r, "dual identity", tg1_ok);
    }
  }

  const FrameReport fr = verify_k_g_fusion(system, k, std::nullopt, tol);
  r["verdicts"]["is_parseval"] = fr.is_parseval;
  r["residuals"]["parseval"] = fr.parseval_residual;
  if (!fr.is_parseval) {
    note(r, "Parseval identities skipped: S != kk^* (use --parsevalize)");
    return finish(std::move(r));
  }
  double ti1 = 0.0;
  double eq = 0.0;
  double slack = std::numeric_limits<double>::infinity();
  bool ti1_ok = true;
  bool tq_ok = true;
  for (const auto& s : subsets) {
    const IndexSet rest = complement(s, system.size());
    for (const auto& f : probes) {
      IndexSet extra;
      for (auto j : rest) {
        if (rng.coin()) extra.push_back(j);
      }
      const IdentityCheck ic = check_identity_ti1(system, k, s, extra, f, tol);
      ti1 = std::max(ti1, ic.residual);
      ti1_ok = ti1_ok && ic.passed;
      const ThreeQuartersCheck tq = check_three_quarters(system, k, s, f, tol);
      eq = std::max(eq, tq.equality_residual);
      slack = std::min(slack, tq.slack);
      tq_ok = tq_ok && tq.passed;
    }
  }
  r["residuals"]["parseval_identity"] = ti1;
  r["residuals"]["three_quarters_equality"] = eq;
  r["residuals"]["three_quarters_min_slack"] = number(slack);
  check(r, "Parseval subset identity", ti1_ok);
  check(r, "three-quarters inequality", tq_ok);
  return finish(std::move(r));
}

Result perturb(const PerturbOptions& o, const Tolerance& tol) {
  Json args{{"path", o.path}, {"theta", o.theta}, {"k", o.k}, {"mode", o.mode}};
  PerturbationParams params;
  params.mode = perturbation_mode_from_string(o.mode);
  if (params.mode == PerturbationMode::SqrtSum || params.mode == PerturbationMode::KStar) {
    args["lambda1"] = o.lambda1;
    args["lambda2"] = o.lambda2;
    args["gamma"] = o.gamma;
  } else {
    args["R"] = o.r;
  }
  if (o.sum_of_norms) args["sum_of_norms"] = true;
  if (o.require_hypothesis) args["require_hypothesis"] = true;
  Json r = skeleton("perturb", std::move(args), tol);

  params.lambda1 = o.lambda1;
  params.lambda2 = o.lambda2;
  params.gamma = o.gamma;
  params.r = o.r;
  params.norm_sum_reading = o.sum_of_norms ? NormSumReading::SumOfNorms : NormSumReading::NormOfSum;

  const FrameDocument base = load_document(o.path);
  const FrameDocument theta_doc = load_document(o.theta);
  const BoundedOperator k = base.op(o.k);
  if (k.dim() != base.system.dim()) throw InputError("operator dimension does not match the system");
  require_compatible_theta(base.system, theta_doc.system, tol);
  std::vector<Matrix> theta;
  for (const auto& m : theta_doc.system.members()) theta.push_back(m.local.matrix);

  if (params.mode == PerturbationMode::NormSum) {
    note(r, "upper bound taken literally as min{B + R sqrt(B/A), R |k| + sqrt(B)}");
    note(r, "conclusion checked as a k-g-fusion frame with lower bound A - R");
  }

  const HypothesisVerdict h = perturb_hypothesis(base.system, theta, k, params, tol);
  r["verdicts"]["hypothesis"] = h.falsified ? "hypothesis falsified" : "not falsified";
  r["residuals"]["hypothesis_worst_violation"] = h.worst_violation;
  r["residuals"]["hypothesis_worst_subset"] = index_set_json(h.worst_subset);
  r["verdicts"]["subsets_tested"] = h.subsets_tested;
  r["verdicts"]["probes_tested"] = h.probes_tested;
  if (params.mode == PerturbationMode::SqSum) {
    r["residuals"]["minimal_R"] = number(minimal_sqsum_constant(base.system, theta, k, tol));
  }

  if (h.falsified) {
    if (o.require_hypothesis) check(r, "hypothesis holds", false);
    return finish(std::move(r));
  }

  const FrameBounds base_bounds = optimal_bounds(base.system, k, tol);
  if (!admissible(params, base_bounds.lower, k.norm())) {
    throw InputError("parameters are not admissible for " + o.mode + " with A_op = " +
                     std::to_string(base_bounds.lower));
  }
  const PerturbationReport p = verify_perturbation_theorem(base.system, theta, k, params, tol);
  r["verdicts"]["theta_is_frame"] = p.theta_frame.is_frame;
  r["verdicts"]["lower_contained"] = p.lower_contained;
  r["verdicts"]["upper_contained"] = p.upper_contained;
  r["verdicts"]["containment_asserted"] = p.containment_asserted;
  if (p.kstar_printed_admissible) {
    r["verdicts"]["admissible_as_printed"] = *p.kstar_printed_admissible;
    r["verdicts"]["admissible_in_bound_form"] = *p.kstar_bound_form_admissible;
  }
  r["bounds"]["base"] = bounds_json(p.base_bounds);
  r["bounds"]["predicted"] = bounds_json(p.predicted);
  if (p.theta_frame.is_frame) {
    r["bounds"]["measured"] = bounds_json(p.measured);
  } else {
    r["bounds"]["measured"] = Json{{"lower", nullptr}, {"upper", number(p.measured.upper)}};
  }
  for (const auto& e : p.errata) {
    r["errata"].push_back(Json{{"id", e.id}, {"message", e.message}, {"predicted", number(e.predicted)},
                               {"measured", number(e.measured)}});
  }
  check(r, "theta is a k-g-fusion frame", p.theta_frame.is_frame);
  if (p.containment_asserted) {
    check(r, "predicted lower bound contained", p.lower_contained);
    check(r, "predicted upper bound contained", p.upper_contained);
  }
  return finish(std::move(r));
}

Result gen(const GenOptions& o, const Tolerance& tol) {
  Json args = Json::object();
  if (!o.fixture.empty()) args["fixture"] = o.fixture;
  if (!o.spec.empty()) {
    Json spec = Json::array();
    for (const auto& s : o.spec) spec.push_back(s);
    args["spec"] = std::move(spec);
    args["field"] = o.field;
  }
  if (o.seed) args["seed"] = *o.seed;
  args["out_dir"] = o.out_dir;
  Json r = skeleton("gen", std::move(args), tol);

  if (o.fixture.empty() == o.spec.empty()) throw InputError("gen needs exactly one of --fixture or --spec");
  if (o.seed && o.spec.empty()) throw InputError("--seed is only accepted together with --spec");

  FrameDocument doc = [&] {
    if (!o.fixture.empty()) return fixture(o.fixture);
    if (o.spec.size() != 2) throw InputError("--spec expects two values: N MxD");
    const auto parse_count = [](const std::string& s) -> long {
      char* end = nullptr;
      const long v = std::strtol(s.c_str(), &end, 10);
      if (s.empty() || *end != '\0' || v < 1 || v > 64) throw InputError("bad --spec value '" + s + "'");
      return v;
    };
    const std::string& shape = o.spec[1];
    const auto x = shape.find('x');
    if (x == std::string::npos) throw InputError("--spec shape must look like MxD");
    const long n = parse_count(o.spec[0]);
    const long members = parse_count(shape.substr(0, x));
    const long local = parse_count(shape.substr(x + 1));
    const std::uint64_t seed = o.seed.value_or(1);
    const std::string name = "SPEC-" + o.spec[0] + "-" + shape + "-s" + std::to_string(seed);
    FrameDocument d = random_system(seed, n, static_cast<std::size_t>(members), local,
                                    field_from_string(o.field), name);
    d.operators["k"] = identity(n);
    return d;
  }();

  Json doc_json = document_to_json(doc);
  if (!o.spec.empty()) {
    Json with_header;
    with_header["generator"] = Json{{"spec", o.spec[0] + " " + o.spec[1]}, {"seed", o.seed.value_or(1)}};
    for (const auto& [key, value] : doc_json.items()) with_header[key] = value;
    doc_json = std::move(with_header);
  }

  const std::filesystem::path dir(o.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::string doc_path = (dir / (doc.name + ".json")).string();
  const std::string oracle_path = (dir / (doc.name + ".oracle.json")).string();
  write_text_file(doc_path, format_json(doc_json));
  write_text_file(oracle_path, format_json(oracle_sidecar(doc)));
  r["files"] = Json::array({doc_path, oracle_path});
  return finish(std::move(r));
}

std::string human_text(const Json& report) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(report, "", rows);
  std::size_t width = 0;
  for (const auto& [key, value] : rows) width = std::max(width, key.size());
  std::string out;
  for (const auto& [key, value] : rows) {
    out += key;
    out.append(width + 2 - key.size(), ' ');
    out += value;
    out += '\n';
  }
  return out;
}

}  // namespace framelab::cli
