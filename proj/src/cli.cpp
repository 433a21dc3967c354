#include "lwipm/cli.hpp"

#include "lwipm/flow.hpp"
#include "lwipm/io.hpp"
#include "lwipm/lewis.hpp"
#include "lwipm/lewisbarrier.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

namespace lwipm {

using ojson = nlohmann::ordered_json;

int exitCodeFor(Errc code) {
  switch (code) {
    case Errc::IterationCap:
      return kExitIterationCap;
    case Errc::NotConverged:
    case Errc::CenteringDiverged:
    case Errc::RankDeficient:
    case Errc::OutOfDomain:
    case Errc::RepairFailed:
      return kExitNumeric;
    default:
      return kExitInput;
  }
}

namespace {

const char* profileName(Profile p) { return p == Profile::Strict ? "strict" : "practical"; }

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double pickEps(const RunConfig& cfg, double fallback) {
  const double eps = cfg.eps > 0.0 ? cfg.eps : fallback;
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::InvalidTolerance, "eps must lie in (0,1)");
  return eps;
}

void checkEpsFlag(const RunConfig& cfg) {
  if (cfg.eps != 0.0 && !(cfg.eps > 0.0 && cfg.eps < 1.0))
    throw Error(Errc::InvalidTolerance, "eps must lie in (0,1)");
}

ojson header(const char* command, const RunConfig& cfg) {
  ojson j;
  j["schema"] = 1;
  j["command"] = command;
  j["seed"] = cfg.seed;
  return j;
}

ojson statsJson(const PathStats& s) {
  ojson j;
  j["iterations"] = s.iterations;
  j["tSteps"] = s.tSteps;
  j["polishSteps"] = s.polishSteps;
  j["gateOverrides"] = s.gateOverrides;
  j["lewisIterations"] = s.lewisIterations;
  j["factorizations"] = s.factorizations;
  j["finalDeltaHat"] = s.finalDeltaHat;
  j["deltaHatHistory"] = s.deltaHatHistory;
  return j;
}

ojson check(const std::string& name, bool pass, double value, double bound) {
  ojson j;
  j["name"] = name;
  j["pass"] = pass;
  j["value"] = value;
  j["bound"] = bound;
  return j;
}

Mat scaledConstraintMatrix(const LpProblem& lp, const Vec& x) {
  const BarrierVectors bv = evalBarriers(lp, x);
  return bv.d2.cwiseSqrt().cwiseInverse().asDiagonal() * lp.A;
}

// deterministic perturbation used to exercise the fixed-point check
Vec corrupt(const Vec& w) {
  Vec out = w;
  for (Index i = 0; i < out.size(); ++i) out(i) *= (i % 2 == 0) ? 1.25 : 0.8;
  return out;
}

ojson runLp(const RunConfig& cfg) {
  const LpInput in = parseLpJson(cfg.input);
  const double eps = pickEps(cfg, 1e-6);
  const PathConfig pc = PathConfig::make(in.lp.m(), in.lp.n(), cfg.profile);
  const LpResult r = lpSolve(in.lp, in.x0, eps, pc, cfg.seed);

  ojson j = header("lp-solve", cfg);
  j["profile"] = profileName(cfg.profile);
  j["eps"] = eps;
  j["m"] = in.lp.m();
  j["n"] = in.lp.n();
  j["objective"] = r.objective;
  j["x"] = toJson(r.x);
  j["t"] = r.t;
  j["schedule"] = {{"t1", r.t1}, {"t2", r.t2}, {"eps1", r.eps1}, {"eps2", r.eps2}, {"U", r.U}};
  j["iterations"] = r.phase1.iterations + r.phase2.iterations;
  j["solves"] = {{"lewisIterations", r.phase1.lewisIterations + r.phase2.lewisIterations},
                 {"factorizations", r.phase1.factorizations + r.phase2.factorizations}};
  j["phase1"] = statsJson(r.phase1);
  j["phase2"] = statsJson(r.phase2);
  const double eqScale = 1.0 + in.lp.b.cwiseAbs().maxCoeff();
  ojson inv;
  inv["equalityResidual"] = equalityResidual(in.lp, r.x);
  inv["equalityOk"] = equalityResidual(in.lp, r.x) <= 1e-6 * eqScale;
  inv["interior"] = isInterior(in.lp, r.x);
  inv["maxDrift"] = std::max(r.phase1.maxDrift, r.phase2.maxDrift);
  inv["driftViolations"] = r.phase1.driftViolations + r.phase2.driftViolations;
  inv["maxWeightGap"] = std::max(r.phase1.maxWeightGap, r.phase2.maxWeightGap);
  inv["maxNullspaceError"] = std::max(r.phase1.maxNullspaceError, r.phase2.maxNullspaceError);
  j["invariants"] = inv;
  return j;
}

ojson runFlow(const RunConfig& cfg) {
  const FlowInstance inst = parseDimacs(cfg.input, cfg.maxflow);
  checkEpsFlag(cfg);
  const FlowLp probe = buildFlowLp(inst, cfg.seed);
  const PathConfig pc = PathConfig::make(probe.lp.m(), probe.lp.n(), cfg.profile);
  const FlowSolution s = solveMinCostFlow(inst, cfg.seed, &pc);
  ojson j = header("flow-solve", cfg);
  j["profile"] = profileName(cfg.profile);
  j["maxflow"] = cfg.maxflow;
  j["vertices"] = inst.vertices;
  j["edges"] = inst.edges.size();
  j["value"] = s.value;
  j["cost"] = s.cost;
  j["flow"] = s.flow;
  j["attempts"] = s.attempts;
  j["iterations"] = s.iterations;
  j["lpObjective"] = s.lpObjective;
  const FlowReport rep = validateFlow(s.flow, inst);
  j["invariants"] = {{"capacity", rep.capacityOk},
                     {"conservation", rep.conservationOk},
                     {"optimalityCertificate", certifyMinCostMaxFlow(s.flow, inst)}};
  return j;
}

Vec probeDirection(const PolytopeInput& in, std::uint64_t seed) {
  if (in.h.size() == in.A.cols()) return in.h;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N;
  Vec h(in.A.cols());
  for (Index i = 0; i < h.size(); ++i) h(i) = N(rng);
  return h;
}

ojson runBarrier(const RunConfig& cfg) {
  const PolytopeInput in = parsePolytope(cfg.input);
  const double eps = pickEps(cfg, 1e-8);
  const Index m = in.A.rows(), n = in.A.cols();
  const double q = cfg.q > 0.0 ? cfg.q : defaultBarrierQ(m);
  if (!(q >= 2.0) || !std::isfinite(q)) throw Error(Errc::InvalidP, "q must be at least 2");
  const BarrierEval e = psiHessian(in.A, in.b, in.x, q, eps);
  const Vec h = probeDirection(in, cfg.seed);
  const ProbeResult pr = selfConcordanceProbe(in.A, in.b, in.x, h, q, eps);
  ojson j = header("barrier-probe", cfg);
  j["m"] = m;
  j["n"] = n;
  j["q"] = q;
  j["psi"] = e.psi;
  j["grad"] = toJson(e.grad);
  j["force"] = e.force;
  j["forceBound"] = double(n);
  j["forceOk"] = forceBoundHolds(e, n);
  j["sandwich"] = {{"min", e.sandwichMin}, {"max", e.sandwichMax}, {"lower", 1.0},
                   {"upper", 1.0 + q}, {"ok", sandwichHolds(e)}};
  j["nSpectrum"] = {{"min", e.nMin}, {"max", e.nMax}};
  j["selfConcordance"] = {{"direction", toJson(h)}, {"ratio", pr.ratio}, {"bound", pr.bound},
                          {"hNorm", pr.hNorm}, {"ok", pr.ok}};
  return j;
}

void printWeights(const RunConfig& cfg, std::ostream& out) {
  const Mat A = parseMatrix(cfg.input);
  const double p = cfg.p > 0.0 ? cfg.p : 1.0 - 1.0 / std::log(4.0 * double(A.rows()));
  const double eps = pickEps(cfg, cfg.mode == WeightMode::Exact ? 1e-8 : 0.05);
  LewisStats st;
  const Vec w = computeInitialWeight(A, p, eps, cfg.mode, cfg.seed, {}, &st);
  for (Index i = 0; i < w.size(); ++i) out << g17(w(i)) << "\n";
  out << "# residual " << g17(lewisResidual(A, w, p)) << " p " << g17(p) << " eps " << g17(eps)
      << " iterations " << st.iterations << "\n";
}

DiagnoseResult diagnoseLp(const RunConfig& cfg) {
  const LpInput in = parseLpJson(cfg.input);
  const double eps = pickEps(cfg, 1e-6);
  const PathConfig pc = PathConfig::make(in.lp.m(), in.lp.n(), cfg.profile);
  ojson checks = ojson::array();

  const Mat Ax = scaledConstraintMatrix(in.lp, in.x0);
  Vec w = lewisOfScaled(in.lp, in.x0, pc, mixSeed(cfg.seed, 7));
  if (cfg.corruptWeights) w = corrupt(w);
  const double res = lewisResidual(Ax, w, pc.p);
  checks.push_back(check("lewisFixedPoint", res <= 3.0 * pc.weightEps, res, 3.0 * pc.weightEps));
  const double sumDev = std::abs(w.sum() - double(in.lp.n()));
  checks.push_back(check("lewisWeightSum", sumDev <= 1e-6 * double(in.lp.n()), sumDev,
                         1e-6 * double(in.lp.n())));
  const Vec sigma = leverageScores(Ax, Vec::Ones(in.lp.m()));
  const double levMax = sigma.maxCoeff(), levMin = sigma.minCoeff();
  checks.push_back(check("leverageInUnitInterval", levMin >= -1e-12 && levMax <= 1.0 + 1e-12,
                         levMax, 1.0));
  const double levSum = std::abs(sigma.sum() - double(in.lp.n()));
  checks.push_back(check("leverageSum", levSum <= 1e-8 * double(in.lp.n()), levSum,
                         1e-8 * double(in.lp.n())));
  const ProjectionBundle pb = projectionBundle(Ax, Vec::Ones(in.lp.m()));
  const double rowSum = (pb.projSquared.rowwise().sum() - pb.sigma).cwiseAbs().maxCoeff();
  checks.push_back(check("projectionRowSums", rowSum <= 1e-10, rowSum, 1e-10));

  const LpResult r = lpSolve(in.lp, in.x0, eps, pc, cfg.seed);
  const double eqScale = 1.0 + in.lp.b.cwiseAbs().maxCoeff();
  const double eq = equalityResidual(in.lp, r.x);
  checks.push_back(check("equalityResidual", eq <= 1e-6 * eqScale, eq, 1e-6 * eqScale));
  checks.push_back(check("interior", isInterior(in.lp, r.x), isInterior(in.lp, r.x) ? 1.0 : 0.0, 1.0));
  const double drift = std::max(r.phase1.maxDrift, r.phase2.maxDrift);
  checks.push_back(check("weightDrift", drift <= 0.1, drift, 0.1));
  const double ns = std::max(r.phase1.maxNullspaceError, r.phase2.maxNullspaceError);
  checks.push_back(check("stepInNullspace", ns <= 1e-6, ns, 1e-6));
  const double finalDelta = r.phase2.finalDeltaHat;
  checks.push_back(check("finalCentrality", finalDelta <= pc.threshold, finalDelta, pc.threshold));

  DiagnoseResult out;
  out.report = header("diagnose", cfg);
  out.report["kind"] = "lp";
  out.report["profile"] = profileName(cfg.profile);
  out.report["objective"] = r.objective;
  out.report["checks"] = checks;
  return out;
}

DiagnoseResult diagnoseFlow(const RunConfig& cfg) {
  const FlowInstance inst = parseDimacs(cfg.input, cfg.maxflow);
  checkEpsFlag(cfg);
  const FlowLp flp = buildFlowLp(inst, cfg.seed);
  PathConfig pc = PathConfig::make(flp.lp.m(), flp.lp.n(), cfg.profile);
  ojson checks = ojson::array();
  checks.push_back(check("startInterior", isInterior(flp.lp, flp.x0), isInterior(flp.lp, flp.x0) ? 1 : 0, 1));
  const double eq = equalityResidual(flp.lp, flp.x0);
  checks.push_back(check("startFeasible", eq <= 1e-9, eq, 1e-9));
  const FlowSolution s = solveMinCostFlow(inst, cfg.seed, &pc);
  const FlowReport rep = validateFlow(s.flow, inst);
  checks.push_back(check("capacity", rep.capacityOk, rep.capacityOk ? 0 : 1, 0));
  checks.push_back(check("conservation", rep.conservationOk, rep.conservationOk ? 0 : 1, 0));
  const bool cert = certifyMinCostMaxFlow(s.flow, inst);
  checks.push_back(check("optimalityCertificate", cert, cert ? 1 : 0, 1));
  DiagnoseResult out;
  out.report = header("diagnose", cfg);
  out.report["kind"] = "flow";
  out.report["value"] = s.value;
  out.report["cost"] = s.cost;
  out.report["checks"] = checks;
  return out;
}

DiagnoseResult diagnoseBarrier(const RunConfig& cfg) {
  const PolytopeInput in = parsePolytope(cfg.input);
  const double eps = pickEps(cfg, 1e-8);
  const Index m = in.A.rows(), n = in.A.cols();
  const double q = cfg.q > 0.0 ? cfg.q : defaultBarrierQ(m);
  const BarrierEval e = psiHessian(in.A, in.b, in.x, q, eps);
  ojson checks = ojson::array();

  const Vec s = in.A * in.x - in.b;
  const Mat Ax = s.cwiseInverse().asDiagonal() * in.A;
  const Vec sigma = cfg.corruptWeights ? corrupt(e.sigma) : e.sigma;
  const double res = lewisResidual(Ax, sigma, q);
  checks.push_back(check("lewisFixedPoint", res <= 3.0 * eps, res, 3.0 * eps));
  const double gradErr = (e.grad + Ax.transpose() * e.sigma).cwiseAbs().maxCoeff();
  checks.push_back(check("gradientFormula", gradErr <= 1e-8 * (1.0 + e.grad.cwiseAbs().maxCoeff()), gradErr,
                         1e-8 * (1.0 + e.grad.cwiseAbs().maxCoeff())));
  checks.push_back(check("forceBound", forceBoundHolds(e, n), e.force, double(n)));
  checks.push_back(check("sandwichLower", e.sandwichMin >= 1.0 - 1e-8, e.sandwichMin, 1.0));
  checks.push_back(check("sandwichUpper", e.sandwichMax <= 1.0 + q + 1e-8, e.sandwichMax, 1.0 + q));
  checks.push_back(check("nSpectrum", e.nMin >= -1e-8 && e.nMax <= q + 1e-8, e.nMax, q));
  const ProbeResult pr = selfConcordanceProbe(in.A, in.b, in.x, probeDirection(in, cfg.seed), q, eps);
  checks.push_back(check("selfConcordance", pr.ok, pr.ratio, pr.bound));
  DiagnoseResult out;
  out.report = header("diagnose", cfg);
  out.report["kind"] = "barrier";
  out.report["q"] = q;
  out.report["checks"] = checks;
  return out;
}

void emit(const std::string& text, const RunConfig& cfg, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw Error(Errc::ValidationError, cfg.output + ": cannot open for writing");
  f << text;
}

}  // namespace

DiagnoseResult runDiagnose(const std::string& path, const RunConfig& cfg) {
  RunConfig c = cfg;
  c.input = path;
  DiagnoseResult r;
  if (c.kind == "lp") {
    r = diagnoseLp(c);
  } else if (c.kind == "flow") {
    r = diagnoseFlow(c);
  } else if (c.kind == "barrier") {
    r = diagnoseBarrier(c);
  } else {
    throw Error(Errc::InvalidArgument, "unknown diagnose kind '" + c.kind + "'");
  }
  r.pass = true;
  for (const auto& ch : r.report["checks"]) r.pass = r.pass && ch["pass"].get<bool>();
  r.report["pass"] = r.pass;
  return r;
}

int runCommand(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    int code = kExitOk;
    std::string text;
    switch (cfg.command) {
      case Command::LpSolve:
        text = dumpJson(runLp(cfg)) + "\n";
        break;
      case Command::FlowSolve:
        text = dumpJson(runFlow(cfg)) + "\n";
        break;
      case Command::BarrierProbe:
        text = dumpJson(runBarrier(cfg)) + "\n";
        break;
      case Command::LewisWeights: {
        std::ostringstream os;
        printWeights(cfg, os);
        text = os.str();
        break;
      }
      case Command::Diagnose: {
        const DiagnoseResult r = runDiagnose(cfg.input, cfg);
        text = dumpJson(r.report) + "\n";
        if (!r.pass) code = kExitNumeric;
        if (!r.pass && cfg.verbosity > 0) err << "diagnose: some checks failed\n";
        break;
      }
    }
    emit(text, cfg, out);
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace lwipm
