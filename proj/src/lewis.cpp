#include "lwipm/lewis.hpp"

#include "lwipm/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace lwipm {

namespace {

void checkP(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw Error(Errc::InvalidP, "p must be positive");
}

void checkWeights(const Vec& w, Index m) {
  if (w.size() != m) throw Error(Errc::InvalidArgument, "weight length mismatch");
  for (Index i = 0; i < m; ++i)
    if (!(w(i) > 0.0) || !std::isfinite(w(i)))
      throw Error(Errc::InvalidArgument, "weights must be positive and finite");
}

// w^{1-2/p}, rescaled so the largest entry is 1; sigma is invariant to the scale.
Vec rowScale(const Vec& w, double p) {
  const double e = 1.0 - 2.0 / p;
  Vec lg = e * w.array().log().matrix();
  const double top = lg.maxCoeff();
  return (lg.array() - top).exp().matrix();
}

double fixedPointResidual(const Vec& sigma, const Vec& w) {
  return (sigma.array() / w.array() - 1.0).abs().maxCoeff();
}

// Residual level below which one rounding step lands within eps of w_p.
double stopTolerance(double p, double eps) {
  double c = 1.0;
  if (p > 2.0) c = p < 4.0 ? 4.0 / p - 1.0 : 0.25;
  return 0.9 * eps * c;
}

Vec medianClamp(const Vec& lo, const Vec& x, const Vec& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

Vec roundFrom(const Vec& sigma, const Vec& w, double p) {
  return (sigma.array().pow(p / 2.0) * w.array().pow(1.0 - p / 2.0)).matrix();
}

std::string fmtSci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void finish(const Mat& A, const Vec& w, double p, double eps, const LewisOptions& opt,
            LewisStats* stats) {
  const double res = fixedPointResidual(lewisScores(A, w, p, opt.factor), w);
  if (stats) {
    stats->factorizations += 1;
    stats->residual = res;
  }
  if (!(res <= 3.0 * eps))
    throw Error(Errc::NotConverged, "fixed-point residual " + fmtSci(res) +
                                        " exceeds 3*eps");
}

}  // namespace

Vec lewisScores(const Mat& A, const Vec& w, double p, const FactorOptions& opt) {
  checkP(p);
  checkWeights(w, A.rows());
  return leverageScores(A, rowScale(w, p), opt);
}

double volumetricPotential(const Mat& A, const Vec& w, double p) {
  checkP(p);
  if (p == 2.0) throw Error(Errc::InvalidP, "potential undefined at p = 2");
  checkMatrix(A, false);
  checkWeights(w, A.rows());
  const double e = 1.0 - 2.0 / p;
  const Vec d = w.array().pow(e).matrix();
  const Mat N = A.transpose() * d.asDiagonal() * A;
  Eigen::LDLT<Mat> ldlt(N);
  const Vec D = ldlt.vectorD();
  if (ldlt.info() != Eigen::Success || !(D.minCoeff() > 0.0))
    throw Error(Errc::RankDeficient, "normal matrix not positive definite");
  return -D.array().log().sum() / e;
}

Vec volumetricGradient(const Mat& A, const Vec& w, double p) {
  if (p == 2.0) throw Error(Errc::InvalidP, "potential undefined at p = 2");
  return -(lewisScores(A, w, p).array() / w.array()).matrix();
}

double lewisResidual(const Mat& A, const Vec& w, double p) {
  return fixedPointResidual(lewisScores(A, w, p), w);
}

double exactWeightRadius(double p) { return p / (20.0 * (p + 2.0)); }

double apxWeightRadius(double p) { return p * p * (4.0 - p) / 1048576.0; }

Index exactWeightIterations(Index n, double p, double eps) {
  const double T = std::ceil(32.0 * (p / 2.0 + 2.0 / p) *
                             std::log(8.0 * double(n) * (1.0 + 2.0 / p) / eps));
  return std::max<Index>(1, static_cast<Index>(std::min(T, 1e9)));
}

Index apxWeightIterations(Index n, double p, double eps) {
  const double T = std::ceil(80.0 * (p / 2.0 + 2.0 / p) * std::log(p * double(n) / (32.0 * eps)));
  return std::max<Index>(1, static_cast<Index>(std::min(T, 1e9)));
}

Vec roundWeights(const Mat& A, const Vec& w, double p, const FactorOptions& opt) {
  return roundFrom(lewisScores(A, w, p, opt), w, p);
}

Vec computeExactWeight(const Mat& A, double p, const Vec& w0, double eps,
                       const LewisOptions& opt, LewisStats* stats) {
  checkP(p);
  checkMatrix(A);
  checkWeights(w0, A.rows());
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::InvalidTolerance, "eps must lie in (0,1)");

  const double r = exactWeightRadius(p);
  const double L = std::max(4.0, 8.0 / p);
  const Index T = opt.maxIterations > 0 ? opt.maxIterations
                                        : exactWeightIterations(A.cols(), p, eps);
  const double tol = stopTolerance(p, eps);
  const Vec lo = (1.0 - r) * w0;
  const Vec hi = (1.0 + r) * w0;

  Vec w = w0;
  Vec sigma = lewisScores(A, w, p, opt.factor);
  Index factorizations = 1;
  Index it = 0;
  for (Index k = 1; k < T; ++k) {
    if (opt.earlyExit && fixedPointResidual(sigma, w) <= tol) break;
    const Vec step = w0 - (w0.array() / w.array() * sigma.array()).matrix();
    w = medianClamp(lo, w - step / L, hi);
    sigma = lewisScores(A, w, p, opt.factor);
    ++factorizations;
    ++it;
  }
  const Vec out = roundFrom(sigma, w, p);
  if (stats) {
    stats->iterations += it;
    stats->factorizations += factorizations;
  }
  finish(A, out, p, eps, opt, stats);
  return out;
}

Vec computeApxWeight(const Mat& A, double p, const Vec& w0, double eps, std::uint64_t seed,
                     const LewisOptions& opt, LewisStats* stats) {
  checkP(p);
  if (!(p < 4.0)) throw Error(Errc::InvalidP, "approximate weights need p in (0,4)");
  checkMatrix(A);
  checkWeights(w0, A.rows());
  const double cap = 2.0 / p - std::abs(1.0 - 2.0 / p);
  if (!(eps > 0.0 && eps < 1.0 && eps < cap))
    throw Error(Errc::InvalidTolerance, "eps outside (0, min(1, 2/p - |1-2/p|))");

  const double r = opt.apxRadius > 0.0 ? opt.apxRadius : apxWeightRadius(p);
  const double L = std::max(4.0, 8.0 / p);
  const double delta = (4.0 - p) * eps / 256.0;
  const double sketchEps = std::min(0.99, -std::expm1(-delta));
  const Index T = opt.maxIterations > 0 ? opt.maxIterations : apxWeightIterations(A.cols(), p, eps);
  const double tol = stopTolerance(p, eps);
  const Vec lo = (1.0 - r) * w0;
  const Vec hi = (1.0 + r) * w0;

  Vec w = w0;
  Index it = 0;
  Index factorizations = 0;
  for (Index j = 1; j < T; ++j) {
    Vec sigma;
    if (opt.exactScores) {
      sigma = lewisScores(A, w, p, opt.factor);
      if (opt.earlyExit && fixedPointResidual(sigma, w) <= tol) {
        ++factorizations;
        break;
      }
    } else {
      const NormalFactor f = factorNormalEquations(A, rowScale(w, p), opt.factor);
      // exact check for the early exit; costs no extra factorization
      if (opt.earlyExit && fixedPointResidual(leverageScores(f), w) <= tol) {
        ++factorizations;
        break;
      }
      sigma = sketchedLeverageScores(f, sketchEps, mixSeed(seed, static_cast<std::uint64_t>(j)),
                                     opt.sketch);
    }
    ++factorizations;
    const Vec step = w0 - (w0.array() / w.array() * sigma.array()).matrix();
    w = medianClamp(lo, w - step / L, hi);
    ++it;
  }
  const Vec out = roundWeights(A, w, p, opt.factor);
  if (stats) {
    stats->iterations += it;
    stats->factorizations += factorizations + 1;
  }
  finish(A, out, p, eps, opt, stats);
  return out;
}

Vec continueHomotopy(const Mat& A, double pFrom, const Vec& wFrom, double pTarget, double eps,
                     WeightMode mode, std::uint64_t seed, const LewisOptions& opt,
                     LewisStats* stats) {
  checkP(pFrom);
  checkP(pTarget);
  checkMatrix(A);
  checkWeights(wFrom, A.rows());
  if (mode == WeightMode::Approx && !(pTarget < 4.0 && pFrom < 4.0))
    throw Error(Errc::InvalidP, "approximate weights need p in (0,4)");
  const double m = double(A.rows());
  const double n = double(A.cols());
  const double scale = std::sqrt(n) * std::log(m * std::exp(2.0) / n);

  // The approximate-mode radius p^2(4-p)/2^20 would need ~10^5 homotopy steps;
  // unless overridden, steps and clamps use the exact-mode radius instead.
  // Intermediate tolerances sit below the sketch noise, so those steps use exact scores.
  LewisOptions aopt = opt;
  auto solve = [&](double p, const Vec& w0, double tol, std::uint64_t salt) {
    if (mode == WeightMode::Exact) return computeExactWeight(A, p, w0, tol, opt, stats);
    if (opt.apxRadius <= 0.0) aopt.apxRadius = exactWeightRadius(p);
    aopt.exactScores = opt.exactScores || salt != 0;
    return computeApxWeight(A, p, w0, tol, mixSeed(seed, salt), aopt, stats);
  };

  double p = pFrom;
  Vec w = wFrom;
  std::uint64_t step = 0;
  while (p != pTarget) {
    const double r = mode == WeightMode::Approx && opt.apxRadius > 0.0 ? opt.apxRadius
                                                                      : exactWeightRadius(p);
    const double h = std::min(2.0, p) / scale * r;
    const double pn = std::clamp(pTarget, p - h, p + h);
    const Vec warm = w.array().pow(pn / p).matrix();
    w = solve(pn, warm, r / 4.0, ++step);
    p = pn;
    if (stats) stats->homotopySteps += 1;
  }
  return solve(pTarget, w, eps, 0);
}

Vec computeInitialWeight(const Mat& A, double pTarget, double eps, WeightMode mode,
                         std::uint64_t seed, const LewisOptions& opt, LewisStats* stats) {
  checkP(pTarget);
  checkMatrix(A);
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::InvalidTolerance, "eps must lie in (0,1)");
  if (mode == WeightMode::Approx && !(pTarget < 4.0))
    throw Error(Errc::InvalidP, "approximate weights need p in (0,4)");
  const Vec sigma = leverageScores(A, Vec::Ones(A.rows()), opt.factor);
  if (stats) stats->factorizations += 1;
  if (pTarget == 2.0) {
    if (stats) stats->residual = 0.0;
    return sigma;
  }
  return continueHomotopy(A, 2.0, sigma, pTarget, eps, mode, seed, opt, stats);
}

Vec lewisJacobianApplyAt(const Mat& A, const Vec& v, const Vec& w, const Vec& h, double p) {
  checkP(p);
  if (p == 2.0) throw Error(Errc::InvalidP, "Jacobian diagnostic needs p != 2");
  checkWeights(v, A.rows());
  checkWeights(w, A.rows());
  if (h.size() != A.rows()) throw Error(Errc::InvalidArgument, "direction length mismatch");
  const Mat VA = v.asDiagonal() * A;
  const ProjectionBundle pb = projectionBundle(VA, rowScale(w, p));
  Mat M = -(1.0 - 2.0 / p) * pb.lap;
  M.diagonal() += w;
  const Vec rhs = pb.lap * (h.array() / v.array()).matrix();
  const Vec y = M.partialPivLu().solve(rhs);
  return 2.0 * (w.array() * y.array()).matrix();
}

Vec lewisJacobianApply(const Mat& A, const Vec& v, const Vec& h, double p, double eps) {
  checkWeights(v, A.rows());
  const Mat VA = v.asDiagonal() * A;
  const Vec w = computeInitialWeight(VA, p, eps, WeightMode::Exact, 0);
  return lewisJacobianApplyAt(A, v, w, h, p);
}

}  // namespace lwipm
