#include "lwipm/error.hpp"
#include "lwipm/lewis.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace lwipm;

namespace {

Vec exactWeights(const Mat& A, double p, double eps = 1e-12) {
  return computeInitialWeight(A, p, eps, WeightMode::Exact, 0);
}

}  // namespace

TEST(Potential, IdentityIsZero) {
  for (double p : {0.5, 1.0, 3.0}) EXPECT_NEAR(volumetricPotential(Mat::Identity(3, 3), Vec::Ones(3), p), 0.0, 1e-14);
}

TEST(Potential, TwoByOneByHand) {
  EXPECT_NEAR(volumetricPotential(Mat::Ones(2, 1), Vec::Constant(2, 0.5), 1.0), std::log(4.0), 1e-14);
}

TEST(Potential, RejectsPEqualTwo) {
  EXPECT_THROW(volumetricPotential(Mat::Identity(2, 2), Vec::Ones(2), 2.0), Error);
}

TEST(Potential, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const Mat A = oracle::gaussian(8, 3, rng);
    const Vec w = oracle::uniformVec(8, 0.2, 1.0, rng);
    for (double p : {0.5, 1.0, 3.0}) {
      const Vec g = volumetricGradient(A, w, p);
      const Vec fd = oracle::centralGradient([&](const Vec& v) { return volumetricPotential(A, v, p); }, w, 1e-5);
      EXPECT_LT((g - fd).norm(), 1e-6 * g.norm()) << "p " << p;
    }
  }
}

TEST(Potential, GradientSquareAndStationary) {
  std::mt19937_64 rng(22);
  const Mat S = oracle::gaussian(3, 3, rng);
  EXPECT_LT((volumetricGradient(S, Vec::Ones(3), 1.0) + Vec::Ones(3)).norm(), 1e-12);
  const Mat A = oracle::gaussian(12, 3, rng);
  const double eps = 1e-8;
  for (double p : {0.5, 1.0, 3.0}) {
    const Vec w = computeInitialWeight(A, p, eps, WeightMode::Exact, 0);
    EXPECT_LE((Vec::Ones(12) + volumetricGradient(A, w, p)).cwiseAbs().maxCoeff(), 2.0 * eps);
  }
}

TEST(Residual, Examples) {
  EXPECT_NEAR(lewisResidual(Mat::Ones(3, 1), Vec::Constant(3, 1.0 / 3.0), 1.0), 0.0, 1e-14);
  EXPECT_NEAR(lewisResidual(Mat::Ones(3, 1), Vec::Constant(3, 1.0 / 3.0), 3.0), 0.0, 1e-14);
  std::mt19937_64 rng(23);
  const Mat A = oracle::gaussian(10, 3, rng);
  const Vec w = exactWeights(A, 1.0);
  EXPECT_LT(lewisResidual(A, w, 1.0), 1e-10);
  const Vec w2 = 2.0 * w;
  const double r = lewisResidual(A, w2, 1.0);
  EXPECT_GT(r, 0.1);
  EXPECT_NEAR(r, oracle::fixedPointResidual(A, w2, 1.0), 1e-10);
}

TEST(ExactWeight, StationaryAtFixedPoint) {
  std::mt19937_64 rng(24);
  const Mat A = oracle::gaussian(15, 3, rng);
  for (double p : {0.5, 1.0, 3.0}) {
    const Vec wp = exactWeights(A, p);
    const Vec w = computeExactWeight(A, p, wp, 1e-8);
    EXPECT_LE(lewisResidual(A, w, p), 1e-8);
  }
}

TEST(ExactWeight, SymmetricColumn) {
  const Vec w0 = (Vec(4) << 0.252, 0.248, 0.25, 0.25).finished();
  const Vec w = computeExactWeight(Mat::Ones(4, 1), 1.0, w0, 1e-8);
  EXPECT_LE((w - Vec::Constant(4, 0.25)).cwiseAbs().maxCoeff() / 0.25, 1e-8);
}

TEST(ExactWeight, RandomFromInitial) {
  std::mt19937_64 rng(25);
  const Mat A = oracle::gaussian(20, 4, rng);
  const Vec w0 = computeInitialWeight(A, 1.0, 1e-3, WeightMode::Exact, 0);
  const Vec w = computeExactWeight(A, 1.0, w0, 1e-8);
  EXPECT_LE(lewisResidual(A, w, 1.0), 1e-7);
  EXPECT_LE(oracle::fixedPointResidual(A, w, 1.0), 1e-7);
}

TEST(ExactWeight, FarStartNotConverged) {
  std::mt19937_64 rng(26);
  const Mat A = oracle::gaussian(20, 4, rng);
  Vec w0 = exactWeights(A, 1.0);
  w0(0) *= 50.0;
  try {
    computeExactWeight(A, 1.0, w0, 1e-10);
    FAIL() << "expected NotConverged";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotConverged);
  }
}

TEST(ExactWeight, IterationCountFormula) {
  const double T = std::ceil(32.0 * (0.5 + 2.0) * std::log(8.0 * 4.0 * 3.0 / 1e-8));
  EXPECT_EQ(exactWeightIterations(4, 1.0, 1e-8), Index(T));
  EXPECT_NEAR(exactWeightRadius(1.0), 1.0 / 60.0, 1e-15);
}

TEST(ExactWeight, ContractionRateInsideBasin) {
  std::mt19937_64 rng(27);
  for (double p : {0.5, 1.0, 3.0}) {
    const Mat A = oracle::gaussian(20, 4, rng);
    const Vec wp = exactWeights(A, p);
    const double r = exactWeightRadius(p);
    const Vec w0 = (wp.array() * (1.0 + 0.5 * r * oracle::uniformVec(20, -1, 1, rng).array())).matrix();
    const double L = std::max(4.0, 8.0 / p);
    const double rate = 1.0 - 1.0 / (16.0 * (p / 2.0 + 2.0 / p));
    auto dist = [&](const Vec& w) { return ((w - wp).array().square() / wp.array()).sum(); };
    Vec w = w0;
    for (int k = 0; k < 40; ++k) {
      const double before = dist(w);
      if (before < 1e-26) break;
      const Vec sigma = lewisScores(A, w, p);
      const Vec next = w - (w0 - (w0.array() / w.array() * sigma.array()).matrix()) / L;
      w = next.cwiseMax((1.0 - r) * w0).cwiseMin((1.0 + r) * w0);
      EXPECT_LE(dist(w), before * rate * (1.0 + 1e-6)) << "p " << p << " step " << k;
    }
  }
}

TEST(ApxWeight, ExactScoresAgreeWithExact) {
  std::mt19937_64 rng(28);
  const Mat A = oracle::gaussian(20, 3, rng);
  const Vec wp = exactWeights(A, 1.0);
  const Vec w0 = (wp.array() * (1.0 + 1e-7 * oracle::uniformVec(20, -1, 1, rng).array())).matrix();
  LewisOptions opt;
  opt.exactScores = true;
  const Vec a = computeApxWeight(A, 1.0, w0, 1e-4, 0, opt);
  const Vec e = computeExactWeight(A, 1.0, w0, 1e-4);
  EXPECT_LE((a.array() / e.array() - 1.0).abs().maxCoeff(), 2e-4);
  EXPECT_LE((a.array() / wp.array() - 1.0).abs().maxCoeff(), 1e-4);
}

TEST(ApxWeight, PerturbedStartSketched) {
  std::mt19937_64 rng(29);
  const Mat A = oracle::gaussian(50, 5, rng);
  const Vec wp = exactWeights(A, 1.0);
  int good = 0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    const Vec w0 = (wp.array() * (1.0 + 1e-4 * oracle::uniformVec(50, -1, 1, rng).array())).matrix();
    try {
      const Vec w = computeApxWeight(A, 1.0, w0, 1e-3, std::uint64_t(s));
      if ((w.array() / wp.array() - 1.0).abs().maxCoeff() <= 1e-3) ++good;
    } catch (const Error&) {
    }
  }
  EXPECT_GE(good, seeds * 95 / 100);
}

TEST(ApxWeight, Preconditions) {
  try {
    computeApxWeight(Mat::Identity(3, 3), 5.0, Vec::Ones(3), 0.1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidP);
  }
  // p = 1: cap is 2/p - |1 - 2/p| = 1
  EXPECT_THROW(computeApxWeight(Mat::Identity(3, 3), 1.0, Vec::Ones(3), 1.0, 0), Error);
}

TEST(InitialWeight, PTwoIsLeverage) {
  std::mt19937_64 rng(30);
  const Mat A = oracle::gaussian(12, 3, rng);
  EXPECT_LT((computeInitialWeight(A, 2.0, 1e-8, WeightMode::Exact, 0) - oracle::leverage(A, Vec::Ones(12)))
                .cwiseAbs()
                .maxCoeff(),
            1e-10);
}

TEST(InitialWeight, ConstantColumnUniform) {
  const Index m = 9;
  const double p = 1.0 - 1.0 / std::log(4.0 * m);
  const Vec w = computeInitialWeight(Mat::Ones(m, 1), p, 1e-10, WeightMode::Exact, 0);
  EXPECT_LT((w - Vec::Constant(m, 1.0 / m)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(InitialWeight, ApproxModeNeedsSmallP) {
  EXPECT_THROW(computeInitialWeight(Mat::Identity(3, 3), 4.5, 0.1, WeightMode::Approx, 0), Error);
}

TEST(InitialWeight, MassAndRange) {
  std::mt19937_64 rng(31);
  for (double p : {0.5, 1.0, 3.0, 6.0}) {
    const Mat A = oracle::gaussian(25, 4, rng);
    const double eps = 1e-8;
    const Vec w = computeInitialWeight(A, p, eps, WeightMode::Exact, 0);
    EXPECT_NEAR(w.sum(), 4.0, 4.0 * eps) << "p " << p;
    EXPECT_GT(w.minCoeff(), 0.0);
    EXPECT_LE(w.maxCoeff(), 1.0 + eps);
    EXPECT_LE(lewisResidual(A, w, p), 3.0 * eps);
  }
}

TEST(InitialWeight, ApproxModeClose) {
  std::mt19937_64 rng(32);
  const Mat A = oracle::gaussian(20, 3, rng);
  const Vec w = computeInitialWeight(A, 1.0, 0.05, WeightMode::Approx, 7);
  const Vec wp = exactWeights(A, 1.0);
  EXPECT_LE((w.array() / wp.array() - 1.0).abs().maxCoeff(), 0.05);
}

TEST(Rounding, ScoresAtHigherExponentBounded) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 5; ++trial) {
    const Mat A = oracle::gaussian(20, 3, rng);
    for (auto [p, r] : {std::pair{0.5, 1.0}, std::pair{1.0, 3.0}, std::pair{0.5, 4.0}}) {
      const Vec w = exactWeights(A, p);
      const double alpha = 2.0 / p - 2.0 / r;
      const double bound = 2.0 * std::pow(20.0, alpha / (1.0 + alpha)) + 1e-6;
      EXPECT_LE((lewisScores(A, w, r).array() / w.array()).maxCoeff(), bound);
    }
  }
}

TEST(Rounding, EllipsoidContainsBox) {
  std::mt19937_64 rng(34);
  const Mat A = oracle::gaussian(20, 3, rng);
  for (double p : {0.5, 1.0, 3.0}) {
    const Vec w = exactWeights(A, p);
    const Mat E = A.transpose() * w.asDiagonal() * A;
    for (int k = 0; k < 200; ++k) {
      Vec x = oracle::gaussianVec(3, rng);
      x /= (A * x).cwiseAbs().maxCoeff();
      EXPECT_LE(x.dot(E * x), 3.0 + 1e-8);
    }
  }
}

TEST(Jacobian, ZeroDirection) {
  std::mt19937_64 rng(35);
  const Mat A = oracle::gaussian(10, 3, rng);
  EXPECT_EQ(lewisJacobianApply(A, Vec::Ones(10), Vec::Zero(10), 1.0).norm(), 0.0);
}

TEST(Jacobian, MatchesFixedPointRecomputation) {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 5; ++trial) {
    const Mat A = oracle::gaussian(10, 3, rng);
    const Vec v = oracle::uniformVec(10, 0.5, 2.0, rng);
    const Vec h = oracle::gaussianVec(10, rng);
    for (double p : {0.5, 1.0, 3.0}) {
      const double t = 1e-6;
      const Vec w0 = exactWeights(v.asDiagonal() * A, p, 1e-13);
      const Vec w1 = exactWeights(Vec(v + t * h).asDiagonal() * A, p, 1e-13);
      const Vec fd = (w1 - w0) / t;
      const Vec J = lewisJacobianApply(A, v, h, p);
      EXPECT_LT((J - fd).norm(), 1e-4 * J.norm()) << "p " << p;
    }
  }
}

TEST(Jacobian, Stability) {
  std::mt19937_64 rng(37);
  const Mat A = oracle::gaussian(10, 3, rng);
  const Vec v = oracle::uniformVec(10, 0.5, 2.0, rng);
  for (double p : {0.5, 1.0, 3.0}) {
    const Vec w = exactWeights(v.asDiagonal() * A, p);
    auto wnorm = [&](const Vec& x) { return std::sqrt(x.cwiseAbs2().dot(w)); };
    for (int k = 0; k < 100; ++k) {
      const Vec h = oracle::gaussianVec(10, rng);
      const Vec J = lewisJacobianApplyAt(A, v, w, h, p);
      EXPECT_LE(wnorm(J.cwiseQuotient(w)), p * wnorm(h.cwiseQuotient(v)) + 1e-8);
    }
  }
}
