#pragma once

#include "lwipm/linalg.hpp"

#include <cstdint>
#include <limits>

namespace lwipm {

enum class WeightMode { Exact, Approx };

struct LewisOptions {
  FactorOptions factor;
  // The worst-case sketch size (C_jl log m / delta^2) is astronomically large for
  // small delta, so approximate mode caps it here.
  SketchOptions sketch{24.0, 2048};
  // approximate mode with exact scores in place of the sketch
  bool exactScores = false;
  // clamp radius for approximate mode; <= 0 selects p^2 (4-p) / 2^20
  double apxRadius = 0.0;
  // stop once the fixed-point residual already certifies eps after rounding
  bool earlyExit = true;
  // 0 keeps the worst-case iteration count
  Index maxIterations = 0;
};

struct LewisStats {
  Index iterations = 0;
  Index factorizations = 0;
  Index homotopySteps = 0;
  double residual = std::numeric_limits<double>::quiet_NaN();
};

// sigma(W^{1/2 - 1/p} A)
Vec lewisScores(const Mat& A, const Vec& w, double p, const FactorOptions& opt = {});

double volumetricPotential(const Mat& A, const Vec& w, double p);
Vec volumetricGradient(const Mat& A, const Vec& w, double p);
double lewisResidual(const Mat& A, const Vec& w, double p);

double exactWeightRadius(double p);
double apxWeightRadius(double p);
Index exactWeightIterations(Index n, double p, double eps);
Index apxWeightIterations(Index n, double p, double eps);
// one step of the fixed-point map: (a_i^T (A^T W^{1-2/p} A)^{-1} a_i)^{p/2}
Vec roundWeights(const Mat& A, const Vec& w, double p, const FactorOptions& opt = {});

Vec computeExactWeight(const Mat& A, double p, const Vec& w0, double eps,
                       const LewisOptions& opt = {}, LewisStats* stats = nullptr);
Vec computeApxWeight(const Mat& A, double p, const Vec& w0, double eps, std::uint64_t seed,
                     const LewisOptions& opt = {}, LewisStats* stats = nullptr);
Vec computeInitialWeight(const Mat& A, double pTarget, double eps, WeightMode mode,
                         std::uint64_t seed, const LewisOptions& opt = {},
                         LewisStats* stats = nullptr);
// Homotopy in p starting from known weights at pFrom.
Vec continueHomotopy(const Mat& A, double pFrom, const Vec& wFrom, double pTarget, double eps,
                     WeightMode mode, std::uint64_t seed, const LewisOptions& opt = {},
                     LewisStats* stats = nullptr);

// J_w(v) h where w = w_p(V A).
Vec lewisJacobianApply(const Mat& A, const Vec& v, const Vec& h, double p, double eps = 1e-12);
Vec lewisJacobianApplyAt(const Mat& A, const Vec& v, const Vec& w, const Vec& h, double p);

}  // namespace lwipm
