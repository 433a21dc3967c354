#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>

namespace lwipm {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Index = Eigen::Index;

// QR works on the scaled matrix itself, so small leverage scores keep their
// relative accuracy; the normal equations only give absolute accuracy.
// Auto tries Cholesky and falls back to QR when pivots fall below rankTol.
enum class Backend { Cholesky, QR, Auto };

struct FactorOptions {
  Backend backend = Backend::QR;
  // Cholesky: pivot < rankTol * max pivot => RankDeficient
  double rankTol = 1e-12;
  // QR: |R_jj| < qrRankTol * max |R_jj| => RankDeficient
  double qrRankTol = 1e-13;
};

// Solver for (A^T D A) y = q. Implementations must be immutable once built.
class NormalSolver {
 public:
  virtual ~NormalSolver() = default;
  virtual Index dim() const = 0;
  virtual Mat solve(const Mat& rhs) const = 0;
  // G^{-1} rhs for some factor G with G G^T = A^T D A
  virtual Mat whiten(const Mat& rhs) const = 0;
  virtual double conditionEstimate() const = 0;
};

struct NormalFactor {
  std::shared_ptr<const NormalSolver> solver;
  Mat A;
  Vec d;

  Index m() const { return A.rows(); }
  Index n() const { return A.cols(); }
  double conditionEstimate() const { return solver->conditionEstimate(); }
};

struct SketchOptions {
  double cjl = 24.0;
  // 0 means no cap on the number of sketch vectors
  Index maxVectors = 0;
};

struct ProjectionBundle {
  Vec sigma;
  Mat projSquared;  // P o P
  Mat lap;          // Sigma - P o P
  Mat normLap;      // Sigma^{-1/2} lap Sigma^{-1/2}
};

void checkMatrix(const Mat& A, bool requireNonzeroRows = true);
void checkScale(const Vec& d, Index m);

NormalFactor factorNormalEquations(const Mat& A, const Vec& d, const FactorOptions& opt = {});
Vec solveNormal(const NormalFactor& f, const Vec& rhs);

// sigma(D^{1/2} A)
Vec leverageScores(const NormalFactor& f);
Vec leverageScores(const Mat& A, const Vec& d, const FactorOptions& opt = {});

Index sketchSize(Index m, double eps, const SketchOptions& opt = {});
// +-1 with equal probability, a pure function of (seed, j, i)
double sketchSign(std::uint64_t seed, std::uint64_t j, std::uint64_t i);
Vec sketchedLeverageScores(const NormalFactor& f, double eps, std::uint64_t seed,
                           const SketchOptions& opt = {});
Vec sketchedLeverageScores(const Mat& A, const Vec& d, double eps, std::uint64_t seed,
                           const SketchOptions& opt = {}, const FactorOptions& fopt = {});

// Dense m x m quantities; diagnostic and barrier paths only.
ProjectionBundle projectionBundle(const Mat& A, const Vec& d, const FactorOptions& opt = {});

std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t salt);

}  // namespace lwipm
