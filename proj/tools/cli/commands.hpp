#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "framelab/document_io.hpp"
#include "framelab/numerics.hpp"

namespace framelab::cli {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kInputError = 2 };

struct Result {
  Json report;
  int exit_code = kPass;
};

struct AnalyzeOptions {
  std::string path;
  std::string k = "k";
  std::optional<std::pair<double, double>> bounds;
};

struct DualOptions {
  std::string path;
  std::string k = "k";
  std::string method = "q";
  std::string out;  // empty: do not write the dual document
};

struct IdentitiesOptions {
  std::string path;
  std::string k = "k";
  std::string dual;  // empty: use the canonical dual
  std::size_t trials = 20;
  bool parsevalize = false;
};

struct PerturbOptions {
  std::string path;
  std::string theta;
  std::string k = "k";
  std::string mode = "T-sqsum";
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double gamma = 0.0;
  double r = 0.0;
  bool sum_of_norms = false;
  bool require_hypothesis = false;
};

struct GenOptions {
  std::string fixture;
  std::vector<std::string> spec;  // {"6", "3x2"}
  std::optional<std::uint64_t> seed;
  std::string field = "real";
  std::string out_dir = ".";
};

Result analyze(const AnalyzeOptions& o, const Tolerance& tol);
Result dual(const DualOptions& o, const Tolerance& tol);
Result identities(const IdentitiesOptions& o, const Tolerance& tol);
Result perturb(const PerturbOptions& o, const Tolerance& tol);
Result gen(const GenOptions& o, const Tolerance& tol);

/// Tabular rendering of a report: one "path  value" line per leaf.
std::string human_text(const Json& report);

/// Full command line entry point; writes the report to `out` and
/// diagnostics to `err`, returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace framelab::cli
