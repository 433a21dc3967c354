#pragma once

#include "lwipm/error.hpp"
#include "lwipm/lewis.hpp"
#include "lwipm/pathfollow.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace lwipm {

enum class Command { LpSolve, FlowSolve, LewisWeights, BarrierProbe, Diagnose };

struct RunConfig {
  Command command = Command::LpSolve;
  std::string input;
  double eps = 0.0;  // 0 picks the command default
  std::uint64_t seed = 0;
  Profile profile = Profile::Practical;
  std::string output;  // empty writes to stdout
  int verbosity = 0;
  bool maxflow = false;
  double p = 0.0;  // lewis-weights; 0 means 1 - 1/ln(4m)
  double q = 0.0;  // barrier-probe; 0 means max(4, ln m)
  WeightMode mode = WeightMode::Exact;
  std::string kind = "lp";  // diagnose: lp | flow | barrier
  bool corruptWeights = false;
};

enum ExitCode { kExitOk = 0, kExitInput = 2, kExitNumeric = 3, kExitIterationCap = 4 };

int exitCodeFor(Errc code);

struct DiagnoseResult {
  nlohmann::ordered_json report;
  bool pass = false;
};

DiagnoseResult runDiagnose(const std::string& path, const RunConfig& cfg);

// Runs one command, writes JSON to cfg.output or out, messages to err; returns the exit code.
int runCommand(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace lwipm
