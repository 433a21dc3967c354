#pragma once

#include "lwipm/pathfollow.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lwipm {

struct FlowEdge {
  Index from = 0;
  Index to = 0;
  long long cap = 0;
  long long cost = 0;
};

struct FlowInstance {
  Index vertices = 0;
  std::vector<FlowEdge> edges;
  Index source = 0;
  Index sink = 1;

  long long maxAbs() const;  // M = max(|q|_inf, |c|_inf), at least 1
  void validate() const;     // InvalidArgument / DisconnectedGraph
};

// 4|E|^2 M^2 q + r_e with r_e uniform in {1, ..., 2|E|M}
std::vector<long long> perturbCosts(const FlowInstance& inst, std::uint64_t seed);

enum class PenaltyMode {
  Theoretical,  // 440 |E|^4 Mt^2 M^3
  Practical  // 4 |V| Mt: above the gain 2|V|Mt + |V|Mt of any unit of excess
};

struct FlowLp {
  LpProblem lp;
  Vec x0;
  std::vector<long long> qTilde;
  double Mtilde = 0.0;
  double lambda = 0.0;
  // LP variable layout: [x over usable edges | y | z | F]
  std::vector<Index> edgeOf;   // LP column -> instance edge
  std::vector<Index> rowOf;    // vertex -> constraint row, -1 for the source
  Index numEdgeVars() const { return Index(edgeOf.size()); }
  Index yOffset() const { return numEdgeVars(); }
  Index zOffset() const { return numEdgeVars() + lp.n(); }
  Index fIndex() const { return numEdgeVars() + 2 * lp.n(); }
};

FlowLp buildFlowLp(const FlowInstance& inst, std::uint64_t seed,
                   PenaltyMode mode = PenaltyMode::Practical);

struct FlowReport {
  bool capacityOk = true;
  bool conservationOk = true;
  long long value = 0;
  long long cost = 0;
  std::vector<std::string> violations;
  bool ok() const { return capacityOk && conservationOk; }
};

FlowReport validateFlow(const std::vector<long long>& flow, const FlowInstance& inst);

// No augmenting s-t path and no negative cycle in the residual graph.
bool certifyMinCostMaxFlow(const std::vector<long long>& flow, const FlowInstance& inst);

// Scale by 1 - eps, push excess back along a BFS tree from s, round.
std::vector<long long> roundAndRepair(const Vec& lpSolution, const FlowLp& flp,
                                      const FlowInstance& inst);

struct FlowSolution {
  std::vector<long long> flow;
  long long value = 0;
  long long cost = 0;
  Index attempts = 0;
  Index iterations = 0;
  double lpObjective = 0.0;
};

FlowSolution solveMinCostFlow(const FlowInstance& inst, std::uint64_t seed, const PathConfig* cfg = nullptr,
                              Index maxAttempts = 5);

}  // namespace lwipm
