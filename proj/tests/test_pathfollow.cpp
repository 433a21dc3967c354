#include "lwipm/error.hpp"
#include "lwipm/pathfollow.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace lwipm;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// Box LP 0 <= x <= 1 whose cost makes x0 the exact center at t = 1.
struct Centered {
  LpProblem lp;
  PathState st;
  PathConfig cfg;
};

Centered centeredBox(Index m, Index n, std::uint64_t seed, Profile profile, double weightEps = 1e-10) {
  std::mt19937_64 rng(seed);
  const Mat A = oracle::gaussian(m, n, rng);
  const Vec x0 = oracle::uniformVec(m, 0.1, 0.9, rng);
  const LpProblem lp0 = LpProblem::make(A, A.transpose() * x0, Vec::Zero(m), Vec::Zero(m), Vec::Ones(m));
  Centered c;
  c.cfg = PathConfig::make(m, n, profile);
  c.cfg.weightEps = weightEps;
  c.st.x = x0;
  c.st.lewisCache = lewisOfScaled(lp0, x0, c.cfg, seed);
  c.st.w = (c.st.lewisCache.array() + c.cfg.c0).matrix();
  const BarrierVectors bv = evalBarriers(lp0, x0);
  c.lp = lp0.withCost(-(c.st.w.array() * bv.d1.array()).matrix());
  c.st.t = 1.0;
  return c;
}

// t giving deltaHat close to `target` (deltaHat is linear in t - 1 at the center)
double tFor(const Centered& c, double target) {
  PathState s = c.st;
  s.t = 2.0;
  const double unit = newtonStepAndCentrality(c.lp, s, c.cfg).report.deltaHat;
  return 1.0 + target / unit;
}

}  // namespace

TEST(MixedNorm, Examples) {
  EXPECT_EQ(mixedNorm(Vec::Zero(4), Vec::Ones(4), 2.0), 0.0);
  EXPECT_EQ(mixedNorm(Vec::Unit(4, 0), Vec::Ones(4), 2.0), 3.0);
}

TEST(MixedNorm, TriangleInequality) {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 100; ++k) {
    const Vec a = oracle::gaussianVec(7, rng), b = oracle::gaussianVec(7, rng);
    const Vec w = oracle::uniformVec(7, 0.01, 2.0, rng);
    EXPECT_LE(mixedNorm(a + b, w, 5.0), mixedNorm(a, w, 5.0) + mixedNorm(b, w, 5.0) + 1e-12);
  }
}

TEST(Config, StrictConstants) {
  const Index m = 20, n = 4;
  const PathConfig c = PathConfig::make(m, n, Profile::Strict);
  EXPECT_NEAR(c.p, 1.0 - 1.0 / std::log(80.0), 1e-15);
  EXPECT_NEAR(c.c0, 0.1, 1e-15);
  EXPECT_NEAR(c.c1, 6.0, 1e-15);
  EXPECT_NEAR(c.cs, 4.0, 1e-15);
  EXPECT_NEAR(c.ck, 2.0 * std::log(80.0), 1e-14);
  EXPECT_NEAR(c.Cnorm, 24.0 * 2.0 * c.ck, 1e-12);
  EXPECT_NEAR(c.K, 1.0 / (16.0 * c.ck), 1e-15);
  EXPECT_NEAR(c.Rcent, c.K / (48.0 * c.ck * std::log(36.0 * c.c1 * c.cs * c.ck * m)), 1e-15);
  EXPECT_NEAR(c.alpha, c.Rcent / (1600.0 * 2.0 * std::log(20.0) * std::log(20.0)), 1e-18);
  EXPECT_NEAR(c.epsChase, 1.0 / (2.0 * c.ck), 1e-15);
}

TEST(Config, PracticalOverrides) {
  const PathConfig c = PathConfig::make(20, 4, Profile::Practical);
  EXPECT_EQ(c.Rcent, 0.05);
  EXPECT_EQ(c.threshold, 0.05);
  EXPECT_NEAR(c.alpha, 1.0 / (20.0 * std::sqrt(6.0)), 1e-15);
}

TEST(WeightFunction, SymmetricBox) {
  // -1 <= x <= 1 at x = 0 with A = [I; I]: the two copies of each coordinate agree
  Mat A(6, 3);
  A << Mat::Identity(3, 3), Mat::Identity(3, 3);
  const LpProblem lp = LpProblem::make(A, Vec::Zero(3), Vec::Zero(6), -Vec::Ones(6), Vec::Ones(6));
  const PathConfig cfg = PathConfig::make(6, 3, Profile::Practical);
  const Vec g = weightFunction(lp, Vec::Zero(6), cfg, 0);
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(g(i), g(i + 3), 1e-12);
  EXPECT_NEAR(g(0), g(1), 1e-12);
}

TEST(WeightFunction, MassAndRange) {
  std::mt19937_64 rng(42);
  const Mat A = oracle::gaussian(12, 3, rng);
  const Vec x = oracle::uniformVec(12, 0.05, 0.95, rng);
  const LpProblem lp = LpProblem::make(A, A.transpose() * x, Vec::Zero(12), Vec::Zero(12), Vec::Ones(12));
  const PathConfig cfg = PathConfig::make(12, 3, Profile::Practical);
  const Vec g = weightFunction(lp, x, cfg, 0);
  EXPECT_NEAR((g.array() - cfg.c0).sum(), 3.0, 3.0 * 1e-7);
  EXPECT_GT(g.minCoeff(), cfg.c0);
  EXPECT_LE(g.maxCoeff(), 1.0 + cfg.c0 + 1e-9);
}

TEST(WeightFunction, StabilityUnderSmallMoves) {
  std::mt19937_64 rng(43);
  const Index m = 12, n = 3;
  const Mat A = oracle::gaussian(m, n, rng);
  const Vec x = oracle::uniformVec(m, 0.2, 0.8, rng);
  const LpProblem lp = LpProblem::make(A, A.transpose() * x, Vec::Zero(m), Vec::Zero(m), Vec::Ones(m));
  PathConfig cfg = PathConfig::make(m, n, Profile::Strict);
  cfg.weightEps = 1e-12;
  const Vec g0 = weightFunction(lp, x, cfg, 0);
  const Vec sq = evalBarriers(lp, x).d2.cwiseSqrt();
  for (int k = 0; k < 10; ++k) {
    Vec h = oracle::gaussianVec(m, rng).cwiseQuotient(sq);
    h *= 1e-3 / mixedNorm(sq.cwiseProduct(h), g0, cfg.Cnorm);
    const Vec g1 = weightFunction(lp, x + h, cfg, 0);
    const Vec dlog = (g1.array().log() - g0.array().log()).matrix();
    EXPECT_LE(mixedNorm(dlog, g0, cfg.Cnorm), (1.0 - 1.0 / cfg.ck + 4e-3) * 1e-3 + 1e-6);
  }
}

TEST(Newton, CenteredPoint) {
  const Centered c = centeredBox(10, 3, 1, Profile::Practical);
  EXPECT_LE(newtonStepAndCentrality(c.lp, c.st, c.cfg).report.deltaHat, 1e-8);
}

TEST(Newton, StepInNullSpaceAndSurrogateSandwich) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    Centered c = centeredBox(15, 4, 10 + s, Profile::Practical);
    c.st.t = tFor(c, 0.05);
    const NewtonResult nr = newtonStepAndCentrality(c.lp, c.st, c.cfg);
    const double ath = (c.lp.A.transpose() * nr.h).cwiseAbs().maxCoeff();
    EXPECT_LE(ath, 1e-8 * (1.0 + c.lp.A.transpose().cwiseAbs().rowwise().sum().maxCoeff() *
                                     nr.h.cwiseAbs().maxCoeff()));
    const double viaEta = mixedNorm(nr.residual, c.st.w, c.cfg.Cnorm);
    const double dh = nr.report.deltaHat;
    EXPECT_LE(std::max(dh / viaEta, viaEta / dh), c.cfg.cGamma() + 1e-9);
  }
}

TEST(Newton, QuadraticConvergence) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    Centered c = centeredBox(12, 3, 20 + s, Profile::Practical, 1e-12);
    for (double d : {0.1, 0.05, 0.01}) {
      PathState st = c.st;
      st.t = tFor(c, d);
      const NewtonResult nr = newtonStepAndCentrality(c.lp, st, c.cfg);
      st.x += nr.h;
      const double post = newtonStepAndCentrality(c.lp, st, c.cfg).report.deltaHat;
      const double pre = nr.report.deltaHat;
      EXPECT_LE(post, 4.0 * c.cfg.cGamma() * pre * pre + 1e-8) << "d " << d;
    }
  }
}

TEST(Newton, TScaling) {
  Centered c = centeredBox(12, 3, 30, Profile::Practical);
  c.st.t = tFor(c, 0.03);
  const double base = newtonStepAndCentrality(c.lp, c.st, c.cfg).report.deltaHat;
  for (double alpha : {1e-3, 1e-2, 0.1}) {
    PathState s = c.st;
    s.t *= 1.0 + alpha;
    const double up = newtonStepAndCentrality(c.lp, s, c.cfg).report.deltaHat;
    EXPECT_LE(up, (1.0 + alpha) * base + alpha * (1.0 + c.cfg.Cnorm * std::sqrt(c.st.w.sum())) + 1e-8);
  }
}

TEST(MixedBall, Examples) {
  EXPECT_EQ(projectMixedBall(Vec::Zero(3), Vec::Ones(3)).norm(), 0.0);
  const Vec x = projectMixedBall(Vec::Ones(1), Vec::Ones(1));
  EXPECT_NEAR(x(0), 0.5, 1e-12);
  const Vec e = projectMixedBall(Vec::Unit(5, 0), Vec::Constant(5, 1e6));
  EXPECT_GE(e(0), 1.0 - 1e-5);
  EXPECT_LE(e(0), 1.0);
}

TEST(MixedBall, MatchesGridOracle) {
  std::mt19937_64 rng(44);
  for (int k = 0; k < 50; ++k) {
    const Index m = 1 + Index(rng() % 30);
    const Vec a = oracle::gaussianVec(m, rng);
    const Vec l = oracle::uniformVec(m, 0.01, 3.0, rng);
    const Vec x = projectMixedBall(a, l);
    EXPECT_LE(mixedBallNorm(x, l), 1.0 + 1e-9);
    const double ref = oracle::mixedBallValue(a, l, 2000);
    EXPECT_NEAR(a.dot(x), ref, 1e-6 * std::abs(ref)) << "m " << m;
  }
}

TEST(MixedBall, RejectsBadCaps) {
  EXPECT_THROW(projectMixedBall(Vec::Ones(2), Vec::Zero(2)), Error);
  EXPECT_THROW(projectMixedBall(Vec::Ones(2), Vec::Ones(3)), Error);
}

TEST(Chasing, ConfigMu) {
  const ChasingConfig c = ChasingConfig::make(0.1, 0.7);
  EXPECT_DOUBLE_EQ(c.mu * c.Rnoise, 0.1 / 12.0);
  EXPECT_THROW(ChasingConfig::make(0.2, 1.0), Error);
}

TEST(Chasing, PotentialSandwich) {
  std::mt19937_64 rng(45);
  for (int k = 0; k < 100; ++k) {
    const Vec v = 5.0 * oracle::gaussianVec(20, rng);
    const double mu = 0.3;
    const double inf = v.cwiseAbs().maxCoeff();
    const double phi = chasingPotential(v, mu);
    EXPECT_GE(phi, std::exp(mu * inf) * (1.0 - 1e-12));
    EXPECT_LE(phi, 2.0 * 20.0 * std::exp(mu * inf) * (1.0 + 1e-12));
    EXPECT_NEAR(logChasingPotential(v, mu), std::log(phi), 1e-12 * (1.0 + std::abs(std::log(phi))));
  }
}

TEST(Chasing, ZeroGapNoMove) {
  const ChasingConfig cc = ChasingConfig::make(0.1, 1.0);
  const Vec x = Vec::LinSpaced(5, -1, 1);
  EXPECT_EQ(chasingStep(x, x, 0.3, Vec::Ones(5), cc, 4.0).norm(), 0.0);
}

TEST(Chasing, SingleCoordinateGap) {
  const ChasingConfig cc = ChasingConfig::make(0.1, 0.01);
  Vec x = Vec::Zero(6), z = Vec::Zero(6);
  x(2) = 1.0;  // x ahead of z in coordinate 2
  const Vec d = chasingStep(x, z, 0.5, Vec::Constant(6, 0.5), cc, 3.0);
  EXPECT_LT(d(2), 0.0);
  Index arg;
  d.cwiseAbs().maxCoeff(&arg);
  EXPECT_EQ(arg, 2);
  EXPECT_LE(mixedNorm(d, Vec::Constant(6, 0.5), 3.0), 1.1 * 0.5 * (1.0 + 1e-9));
}

TEST(Chasing, ShortAdversaryGame) {
  // reduced version of the acceptance simulation
  const Index m = 20;
  const double eps = 0.1, R = 1.0, tau = 6.0;
  const ChasingConfig cc = ChasingConfig::make(eps, R);
  std::mt19937_64 rng(46);
  Vec x = Vec::Zero(m), y = Vec::Zero(m);
  for (int k = 0; k < 200; ++k) {
    const Vec w = oracle::uniformVec(m, 0.01, 0.2, rng);
    const double C = (tau - 1.0) / std::sqrt(w.sum());
    const double rad = R * oracle::uniformVec(1, 0.2, 1.0, rng)(0);
    Vec u = -(x - y).cwiseSign();
    for (Index i = 0; i < m; ++i)
      if (u(i) == 0.0) u(i) = 1.0;
    u *= rad / mixedNorm(u, w, C);
    y += u;
    const Vec z = y + R * (x - y).cwiseSign();
    x += chasingStep(x, z, rad, w, cc, C);
    const double bound = 12.0 * m * tau / eps;
    EXPECT_LE(chasingPotential(x - y, cc.mu), bound);
    EXPECT_LE((x - y).cwiseAbs().maxCoeff(), 12.0 * R / eps * std::log(bound));
  }
}

TEST(Centering, CenteredStateUnchanged) {
  const Centered c = centeredBox(10, 3, 50, Profile::Practical, 1e-12);
  const PathState out = centeringInexact(c.lp, c.st, c.cfg.K, c.cfg, 1);
  EXPECT_LT((out.x - c.st.x).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((out.w.array() / c.st.w.array() - 1.0).abs().maxCoeff(), 1e-8);
}

TEST(Centering, StrictContractionAndWeightGap) {
  for (std::uint64_t s = 0; s < 3; ++s) {
    Centered c = centeredBox(20, 4, 60 + s, Profile::Strict);
    c.st.t = tFor(c, 0.5 * c.cfg.Rcent);
    const double pre = newtonStepAndCentrality(c.lp, c.st, c.cfg).report.deltaHat;
    const PathState out = centeringInexact(c.lp, c.st, c.cfg.K, c.cfg, s);
    EXPECT_LE(out.last.postDeltaHat, (1.0 - 1.0 / (8.0 * c.cfg.ck)) * pre);
    const Vec g = weightFunction(c.lp, out.x, c.cfg, 0);
    EXPECT_LE((g.array().log() - out.w.array().log()).abs().maxCoeff(), c.cfg.K);
  }
}

TEST(PathFollowing, PolishOnly) {
  Centered c = centeredBox(10, 2, 70, Profile::Practical);
  c.st.t = tFor(c, 0.04);
  const double t = c.st.t;
  PathStats st;
  const PathState out = pathFollowing(c.lp, c.st, t, t, 1e-8, c.cfg, 1, &st);
  EXPECT_EQ(out.t, t);
  EXPECT_EQ(st.tSteps, 0);
  EXPECT_LE(st.finalDeltaHat, 1e-8);
}

TEST(PathFollowing, DoublingTKeepsInvariants) {
  Centered c = centeredBox(10, 2, 71, Profile::Practical);
  PathStats st;
  const PathState out = pathFollowing(c.lp, c.st, 1.0, 2.0, 1e-8, c.cfg, 2, &st);
  EXPECT_EQ(out.t, 2.0);
  EXPECT_TRUE(isInterior(c.lp, out.x));
  EXPECT_LE(equalityResidual(c.lp, out.x), 1e-8 * (1.0 + c.lp.b.cwiseAbs().maxCoeff()));
  EXPECT_LE(st.maxDrift, 0.1);
  EXPECT_EQ(st.driftViolations, 0);
  EXPECT_LE(st.maxNullspaceError, 1e-8);
  EXPECT_LE(st.finalDeltaHat, 1e-8);
}

TEST(PathFollowing, IterationCap) {
  Centered c = centeredBox(10, 2, 72, Profile::Practical);
  c.cfg.iterationCap = 3;
  try {
    pathFollowing(c.lp, c.st, 1.0, 100.0, 1e-8, c.cfg, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::IterationCap);
  }
}

TEST(PathFollowing, DistanceToPolishedCenter) {
  Centered c = centeredBox(10, 2, 73, Profile::Practical);
  const PathState loose = pathFollowing(c.lp, c.st, 1.0, 1.5, 1e-2, c.cfg, 3);
  const double dh = newtonStepAndCentrality(c.lp, loose, c.cfg).report.deltaHat;
  const PathState ref = pathFollowing(c.lp, loose, 1.5, 1.5, 1e-12, c.cfg, 4);
  const Vec sq = evalBarriers(c.lp, ref.x).d2.cwiseSqrt();
  EXPECT_LE(sq.cwiseProduct(loose.x - ref.x).cwiseAbs().maxCoeff(), 8.0 * dh + 1e-10);
}

TEST(LpSolve, ConstantObjective) {
  Mat A(2, 1);
  A << 1, 1;
  const LpProblem lp = LpProblem::make(A, Vec::Ones(1), Vec::Ones(2), Vec::Zero(2), Vec::Ones(2));
  const LpResult r = lpSolve(lp, Vec::Constant(2, 0.5), 1e-4, PathConfig::make(2, 1, Profile::Practical), 0);
  EXPECT_NEAR(r.objective, 1.0, 1e-9);
}

TEST(LpSolve, TwoVariableVertex) {
  Mat A(2, 1);
  A << 1, 1;
  const Vec c = (Vec(2) << -1, 0).finished();
  const LpProblem lp = LpProblem::make(A, Vec::Ones(1), c, Vec::Zero(2), Vec::Ones(2));
  const LpResult r = lpSolve(lp, Vec::Constant(2, 0.5), 1e-4, PathConfig::make(2, 1, Profile::Practical), 0);
  EXPECT_LE(r.objective, -1.0 + 1e-4);
  EXPECT_TRUE(isInterior(lp, r.x));
}

TEST(LpSolve, RandomAgainstVertexEnumeration) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    std::mt19937_64 rng(80 + s);
    const Index m = 10, n = 3;
    const Mat A = oracle::gaussian(m, n, rng);
    const Vec x0 = oracle::uniformVec(m, 0.1, 0.9, rng);
    const Vec c = oracle::gaussianVec(m, rng);
    const Vec b = A.transpose() * x0;
    const LpProblem lp = LpProblem::make(A, b, c, Vec::Zero(m), Vec::Ones(m));
    const double opt = oracle::vertexEnumeration(A, b, c, Vec::Zero(m), Vec::Ones(m));
    const LpResult r = lpSolve(lp, x0, 1e-5, PathConfig::make(m, n, Profile::Practical), s);
    EXPECT_LE(r.objective, opt + 1e-5);
    EXPECT_GE(r.objective, opt - 1e-9);
  }
}

TEST(LpSolve, OneSidedAndTwoSidedBounds) {
  // min x1 - x2 + 2 x3 + x4 s.t. sum x = 2, x1 >= 0, x2 <= 1.5, -1 <= x3 <= 1, x4 in [0, 3]
  Mat A = Mat::Ones(4, 1);
  const Vec c = (Vec(4) << 1, -1, 2, 1).finished();
  const Vec lo = (Vec(4) << 0, -kInf, -1, 0).finished();
  const Vec hi = (Vec(4) << kInf, 1.5, 1, 3).finished();
  const LpProblem lp = LpProblem::make(A, Vec::Constant(1, 2.0), c, lo, hi);
  const Vec x0 = (Vec(4) << 0.5, 0.5, 0.5, 0.5).finished();
  const LpResult r = lpSolve(lp, x0, 1e-5, PathConfig::make(4, 1, Profile::Practical), 0);
  // x2 = 1.5, x1 = 1.5, x3 = -1, x4 = 0: 1.5 - 1.5 - 2 = -2
  EXPECT_NEAR(r.objective, -2.0, 1e-5);
}

TEST(LpSolve, Preconditions) {
  Mat A(2, 1);
  A << 1, 1;
  const LpProblem lp = LpProblem::make(A, Vec::Ones(1), Vec::Ones(2), Vec::Zero(2), Vec::Ones(2));
  const PathConfig cfg = PathConfig::make(2, 1, Profile::Practical);
  try {
    lpSolve(lp, (Vec(2) << 0.0, 1.0).finished(), 1e-4, cfg, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Infeasible);
  }
  EXPECT_THROW(lpSolve(lp, Vec::Constant(2, 0.4), 1e-4, cfg, 0), Error);
  EXPECT_THROW(lpSolve(lp, Vec::Constant(2, 0.5), 0.0, cfg, 0), Error);
}

TEST(DualSolve, IdentityByInspection) {
  const Index n = 3;
  const LpProblem lp = LpProblem::make(Mat::Identity(n, n), Vec::Ones(n), Vec::Ones(n), Vec::Zero(n),
                                       Vec::Constant(n, kInf));
  const double eps = 1e-3;
  const DualResult d = dualSolve(lp, Vec::Ones(n), eps, PathConfig::make(n, n, Profile::Practical), 0);
  EXPECT_LE((lp.A * d.y - lp.c).maxCoeff(), 1e-9);
  EXPECT_GE(lp.b.dot(d.y), double(n) - eps);
  EXPECT_LE(d.primalObjective - d.dualObjective, 3.0 * n / d.t + 1e-6);
}

TEST(DualSolve, RandomStandardForm) {
  for (std::uint64_t s = 0; s < 3; ++s) {
    std::mt19937_64 rng(90 + s);
    const Index m = 8, n = 3;
    const Mat A = oracle::gaussian(m, n, rng);
    const Vec x0 = oracle::uniformVec(m, 0.5, 2.0, rng);
    // c = A y0 + positive slack keeps the dual feasible and the primal bounded
    const Vec c = A * oracle::gaussianVec(n, rng) + oracle::uniformVec(m, 0.5, 1.5, rng);
    const LpProblem lp = LpProblem::make(A, A.transpose() * x0, c, Vec::Zero(m), Vec::Constant(m, kInf));
    const double eps = 1e-4;
    const DualResult d = dualSolve(lp, x0, eps, PathConfig::make(m, n, Profile::Practical), s);
    EXPECT_LE((A * d.y - c).maxCoeff(), 1e-9);
    const double opt = d.primalObjective;  // weak duality: dual <= OPT <= primal
    EXPECT_LE(d.dualObjective, opt + 1e-9);
    EXPECT_LE(d.primalObjective - d.dualObjective, 3.0 * n / d.t + 1e-6);
  }
}

TEST(Invariants, DataStat) {
  Mat A = Mat::Ones(3, 1);
  const Vec lo = (Vec(3) << 0, -kInf, -2).finished();
  const Vec hi = (Vec(3) << 4, 1, kInf).finished();
  const Vec c = (Vec(3) << 0.5, -3, 1).finished();
  const LpProblem lp = LpProblem::make(A, Vec::Ones(1), c, lo, hi);
  const Vec x0 = (Vec(3) << 1, 0.5, -0.5).finished();
  // 1/(u-x0): 1/3, 2; 1/(x0-l): 1, 2/3; u-l: 4; |c|: 3
  EXPECT_DOUBLE_EQ(dataStat(lp, x0), 4.0);
}
