#include "lwipm/lewisbarrier.hpp"

#include "lwipm/error.hpp"
#include "lwipm/lewis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace lwipm {

namespace {

struct Scaled {
  Mat Ax;
  Vec sigma;
};

Scaled scaledSystem(const Mat& A, const Vec& b, const Vec& x, double q, double eps) {
  checkMatrix(A, false);
  if (b.size() != A.rows() || x.size() != A.cols())
    throw Error(Errc::InvalidArgument, "dimension mismatch");
  if (!(q > 0.0) || !std::isfinite(q)) throw Error(Errc::InvalidP, "q must be positive");
  const Vec s = A * x - b;
  for (Index i = 0; i < s.size(); ++i)
    if (!(s(i) > 0.0)) throw Error(Errc::OutOfDomain, "x is not strictly inside A x > b");
  Scaled out;
  out.Ax = s.cwiseInverse().asDiagonal() * A;
  if (q == 2.0)
    out.sigma = leverageScores(out.Ax, Vec::Ones(A.rows()));
  else
    out.sigma = computeInitialWeight(out.Ax, q, eps, WeightMode::Exact, 0);
  return out;
}

double logdetSpd(const Mat& M) {
  Eigen::LDLT<Mat> ldlt(M);
  const Vec D = ldlt.vectorD();
  if (ldlt.info() != Eigen::Success || !(D.minCoeff() > 0.0))
    throw Error(Errc::RankDeficient, "matrix not positive definite");
  return D.array().log().sum();
}

}  // namespace

double defaultBarrierQ(Index m) { return std::max(4.0, std::log(double(m))); }

double selfConcordanceParameter(double q, Index m) {
  return std::pow(q + 2.0, 1.5) * std::pow(double(m), 1.0 / (q + 2.0)) +
         4.0 * std::pow(std::max(q, 2.0), 2.5);
}

double psiValue(const Mat& A, const Vec& b, const Vec& x, double q, double eps) {
  const Scaled sc = scaledSystem(A, b, x, q, eps);
  const double e = 1.0 - 2.0 / q;
  const Vec d = sc.sigma.array().pow(e).matrix();
  const Mat M = sc.Ax.transpose() * d.asDiagonal() * sc.Ax;
  return 0.5 * (logdetSpd(M) - e * double(A.cols()));
}

Vec psiGradient(const Mat& A, const Vec& b, const Vec& x, double q, double eps) {
  const Scaled sc = scaledSystem(A, b, x, q, eps);
  return -sc.Ax.transpose() * sc.sigma;
}

BarrierEval psiHessian(const Mat& A, const Vec& b, const Vec& x, double q, double eps) {
  const Scaled sc = scaledSystem(A, b, x, q, eps);
  const double e = 1.0 - 2.0 / q;
  BarrierEval out;
  out.q = q;
  out.sigma = sc.sigma;

  const ProjectionBundle pb = projectionBundle(sc.Ax, sc.sigma.array().pow(e).matrix());
  Eigen::SelfAdjointEigenSolver<Mat> es(pb.normLap);
  const Vec lam = es.eigenvalues().cwiseMax(0.0);
  const Vec nu = (2.0 * lam.array() / (1.0 - e * lam.array())).matrix();
  out.nMin = nu.minCoeff();
  out.nMax = nu.maxCoeff();
  Mat N = es.eigenvectors() * nu.asDiagonal() * es.eigenvectors().transpose();

  const Vec rs = sc.sigma.cwiseSqrt();
  Mat IN = N;
  IN.diagonal().array() += 1.0;
  const Mat B = rs.asDiagonal() * sc.Ax;
  out.hess = B.transpose() * IN * B;
  out.hess = 0.5 * (out.hess + out.hess.transpose());
  out.grad = -sc.Ax.transpose() * sc.sigma;

  const Vec d = sc.sigma.array().pow(e).matrix();
  out.psi = 0.5 * (logdetSpd(sc.Ax.transpose() * d.asDiagonal() * sc.Ax) - e * double(A.cols()));

  const Mat L = B.transpose() * B;
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(out.hess, L);
  if (ges.info() != Eigen::Success) throw Error(Errc::RankDeficient, "sandwich eigensolve failed");
  out.sandwichMin = ges.eigenvalues().minCoeff();
  out.sandwichMax = ges.eigenvalues().maxCoeff();
  out.force = out.grad.dot(out.hess.ldlt().solve(out.grad));
  return out;
}

bool sandwichHolds(const BarrierEval& e, double tol) {
  return e.sandwichMin >= 1.0 - tol && e.sandwichMax <= 1.0 + e.q + tol * (1.0 + e.q) &&
         e.nMin >= -tol && e.nMax <= e.q + tol * e.q;
}

bool forceBoundHolds(const BarrierEval& e, Index n, double tol) {
  return e.force <= double(n) + tol;
}

ProbeResult selfConcordanceProbe(const Mat& A, const Vec& b, const Vec& x, const Vec& h, double q,
                                 double eps, double fdStep, double tol) {
  if (h.size() != A.cols()) throw Error(Errc::InvalidArgument, "direction length mismatch");
  const BarrierEval at = psiHessian(A, b, x, q, eps);
  ProbeResult r;
  r.hNorm = std::sqrt(h.dot(at.hess * h));
  if (!(r.hNorm > 0.0)) throw Error(Errc::InvalidArgument, "direction has zero Hessian norm");
  const Vec u = h / r.hNorm;
  const Mat Hp = psiHessian(A, b, x + fdStep * u, q, eps).hess;
  const Mat Hm = psiHessian(A, b, x - fdStep * u, q, eps).hess;
  const double d3 = (u.dot(Hp * u) - u.dot(Hm * u)) / (2.0 * fdStep);
  r.ratio = std::abs(d3);
  r.bound = 2.0 * selfConcordanceParameter(q, A.rows());
  r.ok = r.ratio <= r.bound * (1.0 + tol);
  return r;
}

}  // namespace lwipm
