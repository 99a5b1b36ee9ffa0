#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gpl/identities.hpp"
#include "gpl/parallel.hpp"
#include "json.hpp"

namespace gpl::cli {

enum ExitCode : int { kPassed = 0, kAssertionFailed = 1, kConfigError = 2 };

struct CommandConfig {
  std::string command;
  std::string spec_path;
  std::uint64_t seed = 0;
  int trials = 50;
  std::optional<int> cap;  // overrides the weight or arity cap of the spec
  std::string format = "json";
  std::string output;      // empty: standard output
  std::string expr, gauge, mc, artinian, identities;
  std::optional<std::string> expect;  // eval: asserted value
  std::uint64_t budget = std::uint64_t{1} << 20;
  bool cofibrant = false;
};

struct Outcome {
  int exit_code = kPassed;
  nlohmann::json report;
};

/// Seed of one identity check, independent of which identities were selected.
std::uint64_t identity_seed(std::uint64_t seed, Identity which);

/// One report entry per identity, run concurrently; clears `passed` on any failure and then
/// carries the shortest failing instance with an expression that replays it.
template <BracedModel M>
nlohmann::json identity_suite(const M& m, const std::vector<Identity>& ids, int trials, std::uint64_t seed, bool& passed) {
  std::vector<IdentityReport> reports(ids.size());
  parallel_for(ids.size(), [&](std::size_t i) { reports[i] = verify_identity(m, ids[i], trials, identity_seed(seed, ids[i])); });
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json entry{{"identity", identity_name(r.which)}, {"trials", r.trials}, {"failures", r.failures}};
    if (r.failures > 0) {
      passed = false;
      entry["counterexample"] = {{"instance", r.first_failure}, {"replay", r.replay}};
    }
    out.push_back(std::move(entry));
  }
  return out;
}

/// Executes one configured command. Never throws: failures become exit codes and an "error" report.
Outcome execute(const CommandConfig& config);

/// Line-oriented rendering of a report.
std::string render_text(const nlohmann::json& report);

/// Full command line without the program name; writes the report to `out` or the output file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gpl::cli
