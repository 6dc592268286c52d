#pragma once
// Command front door: one operation per subcommand, reports with stable exit
// codes (0 pass/evidence, 1 fail with witness, 2 inconclusive, 3 input
// error). Operations run on parsed documents, so a report's replay section
// re-executes bit-for-bit without the original files.

#include <string>

#include "json.hpp"

#include "ample/report.hpp"

namespace ample::dispatch {

// Budgets for one run. Resolution order: built-in default, then environment
// (AMPLE_BUDGET_DEPTH / _TRUNC / _RADIUS / _SEARCH), then explicit flags.
struct Budgets {
  int depth = 2;                 // truncation depth for path groupoids
  int trunc = 2;                 // chain truncation level
  int radius = 2;                // word ball radius
  long long search = 2'000'000;  // node budget for searches/rewrites
};

// Budgets with the environment overrides applied.
Budgets envBudgets();

// Runs `module.op` on in-memory documents. `inputs` maps role ("graph",
// "chain", ...) to a document; `args` holds op-specific scalars. Throws
// json_io::SchemaError or std::invalid_argument on bad inputs.
report::Report runOp(const std::string& module, const std::string& op,
                     const nlohmann::json& inputs, const nlohmann::json& args,
                     const Budgets& budgets);

// Re-executes a stored report's replay section and byte-compares the payload;
// a version mismatch is flagged in the payload but still replayed.
report::Report runReplay(const nlohmann::json& storedReport);

// Full command-line entry; returns the process exit code.
int runCli(int argc, const char* const* argv);

}  // namespace ample::dispatch
