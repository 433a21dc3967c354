#pragma once

#include "lwipm/barrier1d.hpp"
#include "lwipm/lewis.hpp"
#include "lwipm/linalg.hpp"

#include <cstdint>
#include <vector>

namespace lwipm {

// min c^T x  s.t.  A^T x = b,  lower <= x <= upper   (A is m x n)
struct LpProblem {
  Mat A;
  Vec b;
  Vec c;
  Vec lower;
  Vec upper;
  std::vector<IntervalBarrier> barriers;

  Index m() const { return A.rows(); }
  Index n() const { return A.cols(); }

  static LpProblem make(Mat A, Vec b, Vec c, Vec lower, Vec upper);
  LpProblem withCost(const Vec& cost) const;
};

bool isInterior(const LpProblem& lp, const Vec& x);
double equalityResidual(const LpProblem& lp, const Vec& x);
// U = max{|1/(u-x0)|, |1/(x0-l)|, |u-l|, |c|} over finite terms
double dataStat(const LpProblem& lp, const Vec& x0);

struct BarrierVectors {
  Vec phi, d1, d2, d3;
};
BarrierVectors evalBarriers(const LpProblem& lp, const Vec& x);

enum class Profile { Strict, Practical };

struct PathConfig {
  Profile profile = Profile::Practical;
  double p = 0, c0 = 0, c1 = 0, cs = 0, ck = 0, Cnorm = 0, K = 0, Rcent = 0, alpha = 0;
  double epsChase = 0;
  double threshold = 0;  // centrality level gating t-updates
  // Practical profile: jump to the observed weights when they lie inside the
  // chasing ball, and gate t-updates on deltaHat <= threshold.
  bool catchUp = false;
  bool gateT = false;
  Index gateStall = 0;  // force the t-update after this many gated steps; 0 never
  // polishing stops after this many steps without halving deltaHat; 0 disables
  Index polishStall = 0;
  WeightMode weightMode = WeightMode::Exact;
  double weightEps = 1e-8;  // tolerance of exact g(x) evaluations
  Index iterationCap = 1000000;
  double wallClockBudget = 0.0;  // seconds; 0 disables
  LewisOptions lewis;

  static PathConfig make(Index m, Index n, Profile profile);
  double cGamma() const;
  double mu() const;
};

struct StepReport {
  double deltaHat = 0.0;
  Vec eta;
  double stepInfNorm = 0.0;
  double weightMoveNorm = 0.0;
  double phiPotential = 0.0;  // log of Phi_mu(log w - log g(x))
  double postDeltaHat = 0.0;
  double weightGap = 0.0;  // |log g(x) - log w|_inf after the step
};

struct PathState {
  Vec x;
  Vec w;
  double t = 1.0;
  StepReport last;
  Vec lewisCache;  // w_p(A_x) at x, reused as a warm start
};

struct NewtonResult {
  StepReport report;
  Vec h;
  Vec residual;  // (grad f - A eta) / (w sqrt(phi''))
};

double mixedNorm(const Vec& v, const Vec& w, double Cnorm);

Vec lewisOfScaled(const LpProblem& lp, const Vec& x, const PathConfig& cfg, std::uint64_t seed,
                  const Vec* warm = nullptr, LewisStats* stats = nullptr);
// g(x) = w_p(A_x) + c0 with A_x = phi''(x)^{-1/2} A
Vec weightFunction(const LpProblem& lp, const Vec& x, const PathConfig& cfg, std::uint64_t seed,
                   const Vec* warm = nullptr);

NewtonResult newtonStepAndCentrality(const LpProblem& lp, const PathState& state,
                                     const PathConfig& cfg);

// argmax <a,x> over |x|_2 + |x / l|_inf <= 1
Vec projectMixedBall(const Vec& a, const Vec& l);
double mixedBallNorm(const Vec& x, const Vec& l);

struct ChasingConfig {
  double mu = 0;
  double Rnoise = 0;
  double eps = 0;
  double tau = 1;
  static ChasingConfig make(double eps, double Rnoise, double tau = 1.0);
};

double chasingPotential(const Vec& v, double mu);
double logChasingPotential(const Vec& v, double mu);
// grad Phi_mu(v) scaled by exp(-mu |v|_inf)
Vec chasingGradientScaled(const Vec& v, double mu);
Vec chasingStep(const Vec& xLog, const Vec& zObs, double ballRadius, const Vec& w,
                const ChasingConfig& cfg, double Cnorm);

PathState centeringInexact(const LpProblem& lp, const PathState& state, double Kbound,
                           const PathConfig& cfg, std::uint64_t seed);

struct PathStats {
  Index iterations = 0;
  Index tSteps = 0;
  Index polishSteps = 0;
  Index gateOverrides = 0;
  Index lewisIterations = 0;
  Index factorizations = 0;
  std::vector<double> deltaHatHistory;
  double maxDrift = 0.0;
  Index driftViolations = 0;
  double maxWeightGap = 0.0;
  Index weightGapViolations = 0;
  double maxNullspaceError = 0.0;
  double finalDeltaHat = 0.0;
};

PathState pathFollowing(const LpProblem& lp, PathState state, double tStart, double tEnd,
                        double eps, const PathConfig& cfg, std::uint64_t seed,
                        PathStats* stats = nullptr);

struct LpResult {
  Vec x;
  Vec w;
  double t = 0.0;
  double objective = 0.0;
  double t1 = 0.0, t2 = 0.0, eps1 = 0.0, eps2 = 0.0, U = 0.0;
  PathStats phase1;
  PathStats phase2;
  Vec eta;
};

LpResult lpSolve(const LpProblem& lp, const Vec& x0, double eps, const PathConfig& cfg,
                 std::uint64_t seed);

struct DualResult {
  Vec y;
  double dualObjective = 0.0;
  double primalObjective = 0.0;
  double t = 0.0;
  Vec x;
};

// Standard form only: lower = 0, upper = +inf.
DualResult dualSolve(const LpProblem& lp, const Vec& x0, double eps, const PathConfig& cfg,
                     std::uint64_t seed);

}  // namespace lwipm
