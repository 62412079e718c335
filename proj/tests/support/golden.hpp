#pragma once

// Committed CLI reports. Each case runs `framelab <args>` in-process from the
// source directory and compares stdout with tests/golden/<name>.<ext>. The
// token $OUT in args stands for a scratch directory and is mapped back in the
// captured output. FRAMELAB_UPDATE_GOLDEN=1 rewrites the committed files.

#include <string>
#include <vector>

namespace golden {

struct Case {
  std::string name;
  std::vector<std::string> args;
  int exit_code = 0;
  bool human = false;
};

struct Outcome {
  bool report_matches = false;
  bool exit_matches = false;
  int exit_code = -1;
  std::string detail;
};

const std::vector<Case>& cases();

/// Runs one case with `scratch` as $OUT (created if missing).
Outcome run(const Case& c, const std::string& scratch);

/// Regenerates every committed fixture with `gen --fixture` into `scratch`
/// and returns the names whose document or sidecar differs byte-wise.
std::vector<std::string> regenerate_fixtures(const std::string& scratch);

/// A fresh scratch directory under the system temp directory.
std::string make_scratch(const std::string& tag);

}  // namespace golden
