#include "lwipm/flow.hpp"

#include "lwipm/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>

namespace lwipm {

namespace {

std::vector<std::vector<Index>> adjacency(const FlowInstance& inst, bool usableOnly) {
  std::vector<std::vector<Index>> adj(size_t(inst.vertices));
  for (size_t e = 0; e < inst.edges.size(); ++e) {
    const FlowEdge& ed = inst.edges[e];
    if (usableOnly && ed.cap <= 0) continue;
    adj[size_t(ed.from)].push_back(Index(e));
    adj[size_t(ed.to)].push_back(Index(e));
  }
  return adj;
}

}  // namespace

long long FlowInstance::maxAbs() const {
  long long M = 1;
  for (const FlowEdge& e : edges) M = std::max({M, std::llabs(e.cost), std::llabs(e.cap)});
  return M;
}

void FlowInstance::validate() const {
  if (vertices < 2) throw Error(Errc::InvalidArgument, "need at least two vertices");
  if (source < 0 || source >= vertices || sink < 0 || sink >= vertices)
    throw Error(Errc::InvalidArgument, "source or sink out of range");
  if (source == sink) throw Error(Errc::InvalidArgument, "source equals sink");
  for (size_t i = 0; i < edges.size(); ++i) {
    const FlowEdge& e = edges[i];
    if (e.from < 0 || e.from >= vertices || e.to < 0 || e.to >= vertices)
      throw Error(Errc::InvalidArgument, "edge " + std::to_string(i) + " has an endpoint out of range");
    if (e.from == e.to) throw Error(Errc::InvalidArgument, "edge " + std::to_string(i) + " is a loop");
    if (e.cap < 0) throw Error(Errc::InvalidArgument, "edge " + std::to_string(i) + " has negative capacity");
  }
  const auto adj = adjacency(*this, false);
  std::vector<char> seen(size_t(vertices), 0);
  std::deque<Index> q{source};
  seen[size_t(source)] = 1;
  while (!q.empty()) {
    const Index v = q.front();
    q.pop_front();
    for (Index e : adj[size_t(v)]) {
      const Index u = edges[size_t(e)].from == v ? edges[size_t(e)].to : edges[size_t(e)].from;
      if (!seen[size_t(u)]) {
        seen[size_t(u)] = 1;
        q.push_back(u);
      }
    }
  }
  for (Index v = 0; v < vertices; ++v)
    if (!seen[size_t(v)]) throw Error(Errc::DisconnectedGraph, "vertex " + std::to_string(v) + " is unreachable");
}

std::vector<long long> perturbCosts(const FlowInstance& inst, std::uint64_t seed) {
  const long long E = std::max<long long>(1, static_cast<long long>(inst.edges.size()));
  const long long M = inst.maxAbs();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long long> pick(1, 2 * E * M);
  std::vector<long long> q(inst.edges.size());
  for (size_t i = 0; i < q.size(); ++i) q[i] = 4 * E * E * M * M * inst.edges[i].cost + pick(rng);
  return q;
}

FlowLp buildFlowLp(const FlowInstance& inst, std::uint64_t seed, PenaltyMode mode) {
  inst.validate();
  FlowLp f;
  const double V = double(inst.vertices);
  const double E = double(std::max<size_t>(1, inst.edges.size()));
  const double M = double(inst.maxAbs());
  f.qTilde = perturbCosts(inst, seed);
  f.Mtilde = 8.0 * E * E * M * M * M;
  f.lambda = mode == PenaltyMode::Theoretical ? 440.0 * std::pow(E, 4) * f.Mtilde * f.Mtilde * M * M * M
                                        : 4.0 * V * f.Mtilde;

  f.rowOf.assign(size_t(inst.vertices), -1);
  Index rows = 0;
  for (Index v = 0; v < inst.vertices; ++v)
    if (v != inst.source) f.rowOf[size_t(v)] = rows++;
  for (size_t e = 0; e < inst.edges.size(); ++e)
    if (inst.edges[e].cap > 0) f.edgeOf.push_back(Index(e));

  const Index nx = f.numEdgeVars();
  const Index m = nx + 2 * rows + 1;
  Mat A = Mat::Zero(m, rows);
  Vec c(m), lo = Vec::Zero(m), hi(m), x0(m);
  const Index tRow = f.rowOf[size_t(inst.sink)];
  const double F0 = V * M;
  Vec net = Vec::Zero(rows);  // A (c/2)
  for (Index j = 0; j < nx; ++j) {
    const FlowEdge& ed = inst.edges[size_t(f.edgeOf[size_t(j)])];
    const Index hr = f.rowOf[size_t(ed.to)], tr = f.rowOf[size_t(ed.from)];
    if (hr >= 0) A(j, hr) = 1.0;
    if (tr >= 0) A(j, tr) = -1.0;
    c(j) = double(f.qTilde[size_t(f.edgeOf[size_t(j)])]);
    hi(j) = double(ed.cap);
    x0(j) = 0.5 * double(ed.cap);
    if (hr >= 0) net(hr) += x0(j);
    if (tr >= 0) net(tr) -= x0(j);
  }
  for (Index r = 0; r < rows; ++r) {
    const Index y = f.yOffset() + r, z = nx + rows + r;
    A(y, r) = 1.0;
    A(z, r) = -1.0;
    c(y) = c(z) = f.lambda;
    hi(y) = hi(z) = 4.0 * V * M;
    x0(y) = 2.0 * V * M - std::min(net(r), 0.0) + (r == tRow ? F0 : 0.0);
    x0(z) = 2.0 * V * M + std::max(net(r), 0.0);
  }
  const Index fi = nx + 2 * rows;
  A(fi, tRow) = -1.0;
  c(fi) = -2.0 * V * f.Mtilde;
  hi(fi) = 2.0 * V * M;
  x0(fi) = F0;

  f.lp = LpProblem::make(A, Vec::Zero(rows), c, lo, hi);
  if (!isInterior(f.lp, x0))
    throw Error(Errc::InvalidArgument, "standard interior point is not strictly feasible for this graph");
  f.x0 = x0;
  return f;
}

FlowReport validateFlow(const std::vector<long long>& flow, const FlowInstance& inst) {
  FlowReport r;
  if (flow.size() != inst.edges.size()) {
    r.capacityOk = r.conservationOk = false;
    r.violations.push_back("flow has " + std::to_string(flow.size()) + " entries, expected " +
                           std::to_string(inst.edges.size()));
    return r;
  }
  std::vector<long long> bal(size_t(inst.vertices), 0);
  for (size_t e = 0; e < flow.size(); ++e) {
    const FlowEdge& ed = inst.edges[e];
    if (flow[e] < 0 || flow[e] > ed.cap) {
      r.capacityOk = false;
      r.violations.push_back("edge " + std::to_string(e) + " carries " + std::to_string(flow[e]) +
                             " outside [0," + std::to_string(ed.cap) + "]");
    }
    bal[size_t(ed.to)] += flow[e];
    bal[size_t(ed.from)] -= flow[e];
    r.cost += ed.cost * flow[e];
  }
  for (Index v = 0; v < inst.vertices; ++v) {
    if (v == inst.source || v == inst.sink) continue;
    if (bal[size_t(v)] != 0) {
      r.conservationOk = false;
      r.violations.push_back("vertex " + std::to_string(v) + " has imbalance " +
                             std::to_string(bal[size_t(v)]));
    }
  }
  r.value = -bal[size_t(inst.source)];
  return r;
}

bool certifyMinCostMaxFlow(const std::vector<long long>& flow, const FlowInstance& inst) {
  if (!validateFlow(flow, inst).ok()) return false;
  struct Arc {
    Index from, to;
    long long cost;
  };
  std::vector<Arc> arcs;
  for (size_t e = 0; e < flow.size(); ++e) {
    const FlowEdge& ed = inst.edges[e];
    if (flow[e] < ed.cap) arcs.push_back({ed.from, ed.to, ed.cost});
    if (flow[e] > 0) arcs.push_back({ed.to, ed.from, -ed.cost});
  }
  const size_t V = size_t(inst.vertices);
  // augmenting path
  std::vector<char> seen(V, 0);
  seen[size_t(inst.source)] = 1;
  for (bool grew = true; grew;) {
    grew = false;
    for (const Arc& a : arcs)
      if (seen[size_t(a.from)] && !seen[size_t(a.to)]) seen[size_t(a.to)] = grew = true;
  }
  if (seen[size_t(inst.sink)]) return false;
  // negative cycle, Bellman-Ford from a virtual root
  std::vector<long long> dist(V, 0);
  for (size_t it = 0; it < V; ++it) {
    bool changed = false;
    for (const Arc& a : arcs)
      if (dist[size_t(a.from)] + a.cost < dist[size_t(a.to)]) {
        dist[size_t(a.to)] = dist[size_t(a.from)] + a.cost;
        changed = true;
      }
    if (!changed) return true;
  }
  return false;
}

std::vector<long long> roundAndRepair(const Vec& lpSolution, const FlowLp& flp,
                                      const FlowInstance& inst) {
  const Index nx = flp.numEdgeVars();
  if (lpSolution.size() != flp.lp.m()) throw Error(Errc::InvalidArgument, "LP solution length mismatch");
  const double E = double(std::max<size_t>(1, inst.edges.size()));
  const double M = double(inst.maxAbs());
  const double shrink = 1.0 - 1.0 / (40.0 * E * E * flp.Mtilde * M * M);

  std::vector<double> f(inst.edges.size(), 0.0);
  for (Index j = 0; j < nx; ++j) f[size_t(flp.edgeOf[size_t(j)])] = shrink * lpSolution(j);

  std::vector<double> bal(size_t(inst.vertices), 0.0);
  for (size_t e = 0; e < f.size(); ++e) {
    bal[size_t(inst.edges[e].to)] += f[e];
    bal[size_t(inst.edges[e].from)] -= f[e];
  }

  // BFS tree from s over usable edges, ties broken by edge index
  const auto adj = adjacency(inst, true);
  std::vector<Index> parentEdge(size_t(inst.vertices), -1), order;
  std::vector<char> seen(size_t(inst.vertices), 0);
  std::deque<Index> q{inst.source};
  seen[size_t(inst.source)] = 1;
  while (!q.empty()) {
    const Index v = q.front();
    q.pop_front();
    order.push_back(v);
    for (Index e : adj[size_t(v)]) {
      const FlowEdge& ed = inst.edges[size_t(e)];
      const Index u = ed.from == v ? ed.to : ed.from;
      if (seen[size_t(u)]) continue;
      seen[size_t(u)] = 1;
      parentEdge[size_t(u)] = e;
      q.push_back(u);
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Index v = *it;
    if (v == inst.source || v == inst.sink) continue;
    const double amount = bal[size_t(v)];
    const Index e = parentEdge[size_t(v)];
    const FlowEdge& ed = inst.edges[size_t(e)];
    const Index p = ed.from == v ? ed.to : ed.from;
    f[size_t(e)] += ed.from == v ? amount : -amount;
    bal[size_t(v)] = 0.0;
    bal[size_t(p)] += amount;
  }

  std::vector<long long> out(f.size(), 0);
  for (size_t e = 0; e < f.size(); ++e)
    out[e] = std::clamp<long long>(std::llround(f[e]), 0, inst.edges[e].cap);
  const FlowReport rep = validateFlow(out, inst);
  if (!rep.ok()) throw Error(Errc::RepairFailed, rep.violations.front());
  return out;
}

FlowSolution solveMinCostFlow(const FlowInstance& inst, std::uint64_t seed, const PathConfig* cfg,
                              Index maxAttempts) {
  inst.validate();
  const double eps = 1.0 / (12.0 * double(inst.maxAbs()));
  FlowSolution sol;
  std::string lastFailure = "no attempt made";
  for (Index a = 0; a < maxAttempts; ++a) {
    sol.attempts = a + 1;
    const FlowLp flp = buildFlowLp(inst, mixSeed(seed, std::uint64_t(a)));
    const PathConfig pc = cfg ? *cfg : PathConfig::make(flp.lp.m(), flp.lp.n(), Profile::Practical);
    try {
      const LpResult r = lpSolve(flp.lp, flp.x0, eps, pc, mixSeed(seed, 1000 + std::uint64_t(a)));
      sol.iterations += r.phase1.iterations + r.phase2.iterations;
      sol.lpObjective = r.objective;
      std::vector<long long> flow = roundAndRepair(r.x, flp, inst);
      if (certifyMinCostMaxFlow(flow, inst)) {
        const FlowReport rep = validateFlow(flow, inst);
        sol.flow = std::move(flow);
        sol.value = rep.value;
        sol.cost = rep.cost;
        return sol;
      }
      lastFailure = "rounded flow failed the optimality certificate";
    } catch (const Error& e) {
      if (e.code() == Errc::IterationCap || e.code() == Errc::InvalidArgument) throw;
      lastFailure = e.what();
    }
  }
  throw Error(Errc::NotConverged, "no certified flow after " + std::to_string(maxAttempts) +
                                      " attempts: " + lastFailure);
}

}  // namespace lwipm
