#include <cstdlib>
#include <ostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "framelab/frame_ops.hpp"

namespace framelab::cli {

namespace {

double parse_env_double(const char* name, const char* text) {
  char* end = nullptr;
  const double v = std::strtod(text, &end);
  if (*text == '\0' || *end != '\0') {
    throw InputError(std::string(name) + " is not a number: '" + text + "'");
  }
  return v;
}

Json error_report(const std::string& command, const std::string& message) {
  Json r;
  r["command"] = Json{{"name", command}};
  r["error"] = message;
  r["exit_code"] = static_cast<int>(kInputError);
  return r;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"framelab: k-g-fusion frame analysis"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<double> tol_abs;
  std::optional<double> tol_rel;
  bool human = false;
  app.add_option("--tol-abs", tol_abs, "absolute tolerance");
  app.add_option("--tol-rel", tol_rel, "relative tolerance (also FRAMELAB_TOL_REL)");
  app.add_flag("--human", human, "tabular text instead of JSON");

  AnalyzeOptions ao;
  std::vector<double> bounds;
  auto* analyze_cmd = app.add_subcommand("analyze", "verify a k-g-fusion frame and its bounds");
  analyze_cmd->add_option("path", ao.path, "frame document")->required();
  analyze_cmd->add_option("--k", ao.k, "operator name");
  analyze_cmd->add_option("--bounds", bounds, "claimed bounds A B")->expected(2);

  DualOptions dopt;
  auto* dual_cmd = app.add_subcommand("dual", "construct a Q-dual or the canonical dual");
  dual_cmd->add_option("path", dopt.path, "frame document")->required();
  dual_cmd->add_option("--k", dopt.k, "operator name");
  dual_cmd->add_option("--method", dopt.method, "q or canonical");
  dual_cmd->add_option("--out", dopt.out, "write the dual document here");

  IdentitiesOptions io;
  auto* id_cmd = app.add_subcommand("identities", "check the subset identities");
  id_cmd->add_option("path", io.path, "frame document")->required();
  id_cmd->add_option("--k", io.k, "operator name");
  id_cmd->add_option("--dual", io.dual, "dual document (default: canonical dual)");
  id_cmd->add_option("--trials", io.trials, "random probes per subset");
  id_cmd->add_flag("--parsevalize", io.parsevalize, "replace k by S^(1/2)");

  PerturbOptions po;
  auto* perturb_cmd = app.add_subcommand("perturb", "check a perturbation theorem");
  perturb_cmd->add_option("path", po.path, "base frame document")->required();
  perturb_cmd->add_option("--theta", po.theta, "perturbed document")->required();
  perturb_cmd->add_option("--k", po.k, "operator name");
  perturb_cmd->add_option("--mode", po.mode, "P1-sqrt-sum, P-variant-kstar, C-p2-normsum or T-sqsum");
  perturb_cmd->add_option("--lambda1", po.lambda1);
  perturb_cmd->add_option("--lambda2", po.lambda2);
  perturb_cmd->add_option("--gamma", po.gamma);
  perturb_cmd->add_option("--R", po.r);
  perturb_cmd->add_flag("--sum-of-norms", po.sum_of_norms, "C-p2-normsum: bound the sum of member norms");
  perturb_cmd->add_flag("--require-hypothesis", po.require_hypothesis, "fail when the hypothesis is falsified");

  GenOptions go;
  std::uint64_t seed = 0;
  auto* gen_cmd = app.add_subcommand("gen", "write fixture documents and oracle sidecars");
  gen_cmd->add_option("--fixture", go.fixture, "fixture name");
  gen_cmd->add_option("--spec", go.spec, "N MxD")->expected(2);
  auto* seed_opt = gen_cmd->add_option("--seed", seed, "seed for --spec");
  gen_cmd->add_option("--field", go.field, "real or complex (for --spec)");
  gen_cmd->add_option("--out-dir", go.out_dir, "output directory");

  std::vector<std::string> argv_store{"framelab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kInputError;
  }

  std::string command = "framelab";
  for (auto* sub : app.get_subcommands()) command = sub->get_name();

  Result result;
  try {
    Tolerance tol;
    if (const char* env = std::getenv("FRAMELAB_TOL_REL")) tol.rel = parse_env_double("FRAMELAB_TOL_REL", env);
    if (tol_abs) tol.abs = *tol_abs;
    if (tol_rel) tol.rel = *tol_rel;
    tol.validate();

    if (analyze_cmd->parsed()) {
      if (!bounds.empty()) ao.bounds = std::make_pair(bounds[0], bounds[1]);
      result = analyze(ao, tol);
    } else if (dual_cmd->parsed()) {
      result = dual(dopt, tol);
    } else if (id_cmd->parsed()) {
      result = identities(io, tol);
    } else if (perturb_cmd->parsed()) {
      result = perturb(po, tol);
    } else {
      if (seed_opt->count() > 0) go.seed = seed;
      result = gen(go, tol);
    }
  } catch (const NotAFrameError& e) {
    err << "framelab: " << e.what() << '\n';
    Json r = error_report(command, e.what());
    r["exit_code"] = static_cast<int>(kCheckFailed);
    result = Result{std::move(r), kCheckFailed};
  } catch (const PreconditionError& e) {
    err << "framelab: " << e.what() << '\n';
    result = Result{error_report(command, e.what()), kInputError};
  } catch (const InputError& e) {
    err << "framelab: " << e.what() << '\n';
    result = Result{error_report(command, e.what()), kInputError};
  }

  out << (human ? human_text(result.report) : format_json(result.report));
  return result.exit_code;
}

}  // namespace framelab::cli
