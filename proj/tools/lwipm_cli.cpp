#include "lwipm/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

int main(int argc, char** argv) {
  using namespace lwipm;
  RunConfig cfg;
  std::string profile = "practical";
  std::string mode = "exact";

  CLI::App app{"Lewis weight interior point solvers"};
  app.require_subcommand(1);
  app.add_option("--profile", profile, "strict or practical")
      ->check(CLI::IsMember({"strict", "practical"}))
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--eps", cfg.eps, "accuracy (command default when omitted)");
  app.add_option("--out", cfg.output, "write the result here instead of stdout");
  app.add_flag("-v,--verbose", cfg.verbosity, "more messages on stderr");

  auto* lp = app.add_subcommand("lp-solve", "solve an LP given as JSON");
  auto* flow = app.add_subcommand("flow-solve", "min-cost max-flow on a DIMACS file");
  auto* lw = app.add_subcommand("lewis-weights", "l_p Lewis weights of a matrix file");
  auto* bp = app.add_subcommand("barrier-probe", "Lewis weight barrier report at a point");
  auto* dg = app.add_subcommand("diagnose", "run the invariant checks on an instance");
  for (auto* sub : {lp, flow, lw, bp, dg}) {
    sub->fallthrough();
    sub->add_option("file", cfg.input, "input file")->required()->check(CLI::ExistingFile);
  }
  flow->add_flag("--maxflow", cfg.maxflow, "pure max-flow input with zero costs");
  lw->add_option("--p", cfg.p, "Lewis weight exponent (default 1 - 1/ln(4m))");
  lw->add_option("--mode", mode, "exact or approx")->check(CLI::IsMember({"exact", "approx"}));
  bp->add_option("--q", cfg.q, "barrier exponent (default max(4, ln m))");
  dg->add_option("--kind", cfg.kind, "lp, flow or barrier")
      ->check(CLI::IsMember({"lp", "flow", "barrier"}))
      ->capture_default_str();
  dg->add_flag("--maxflow", cfg.maxflow, "pure max-flow input (kind flow)");
  dg->add_option("--q", cfg.q, "barrier exponent (kind barrier)");
  dg->add_flag("--corrupt-weights", cfg.corruptWeights, "perturb the weights before checking");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  cfg.profile = profile == "strict" ? Profile::Strict : Profile::Practical;
  cfg.mode = mode == "approx" ? WeightMode::Approx : WeightMode::Exact;
  if (*lp) cfg.command = Command::LpSolve;
  if (*flow) cfg.command = Command::FlowSolve;
  if (*lw) cfg.command = Command::LewisWeights;
  if (*bp) cfg.command = Command::BarrierProbe;
  if (*dg) cfg.command = Command::Diagnose;
  return runCommand(cfg, std::cout, std::cerr);
}
