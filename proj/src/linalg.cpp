#include "lwipm/linalg.hpp"

#include "lwipm/error.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace lwipm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Jacobi-equilibrated LDLT of A^T D A.
class CholeskySolver final : public NormalSolver {
 public:
  CholeskySolver(const Mat& B, const FactorOptions& opt) {
    const Index n = B.cols();
    Mat N = B.transpose() * B;
    scale_.resize(n);
    for (Index j = 0; j < n; ++j) {
      if (!(N(j, j) > 0.0)) throw Error(Errc::RankDeficient, "zero column in normal matrix");
      scale_(j) = 1.0 / std::sqrt(N(j, j));
    }
    N = scale_.asDiagonal() * N * scale_.asDiagonal();
    ldlt_.compute(N);
    const Vec D = ldlt_.vectorD();
    const double dmax = D.maxCoeff();
    const double dmin = D.minCoeff();
    if (ldlt_.info() != Eigen::Success || !(dmax > 0.0) || !(dmin > opt.rankTol * dmax))
      throw Error(Errc::RankDeficient, "pivot ratio " + sci(dmin / dmax) + " below tolerance " +
                                           sci(opt.rankTol));
    cond_ = dmax / dmin;
    sqrtD_ = D.cwiseSqrt();
  }

  Index dim() const override { return scale_.size(); }

  Mat solve(const Mat& rhs) const override {
    Mat y = scale_.asDiagonal() * rhs;
    y = ldlt_.solve(y);
    return scale_.asDiagonal() * y;
  }

  Mat whiten(const Mat& rhs) const override {
    Mat y = scale_.asDiagonal() * rhs;
    y = ldlt_.transpositionsP() * y;
    ldlt_.matrixL().solveInPlace(y);
    return sqrtD_.cwiseInverse().asDiagonal() * y;
  }

  double conditionEstimate() const override { return cond_; }

 private:
  Vec scale_;
  Vec sqrtD_;
  Eigen::LDLT<Mat> ldlt_;
  double cond_ = 1.0;
};

class QrSolver final : public NormalSolver {
 public:
  QrSolver(const Mat& B, const FactorOptions& opt) : qr_(B) {
    const Index n = B.cols();
    const Vec r = qr_.matrixR().topLeftCorner(n, n).diagonal().cwiseAbs();
    const double rmax = r.maxCoeff();
    const double rmin = r.minCoeff();
    if (!(rmax > 0.0) || !(rmin > opt.qrRankTol * rmax))
      throw Error(Errc::RankDeficient, "R diagonal ratio " + sci(rmin / rmax) +
                                           " below tolerance " + sci(opt.qrRankTol));
    cond_ = (rmax / rmin) * (rmax / rmin);
    n_ = n;
    R_ = qr_.matrixR().topLeftCorner(n, n).template triangularView<Eigen::Upper>();
  }

  Index dim() const override { return n_; }

  Mat solve(const Mat& rhs) const override {
    Mat y = whiten(rhs);
    R_.triangularView<Eigen::Upper>().solveInPlace(y);
    return qr_.colsPermutation() * y;
  }

  Mat whiten(const Mat& rhs) const override {
    Mat y = qr_.colsPermutation().transpose() * rhs;
    R_.triangularView<Eigen::Upper>().transpose().solveInPlace(y);
    return y;
  }

  double conditionEstimate() const override { return cond_; }

 private:
  Eigen::ColPivHouseholderQR<Mat> qr_;
  Mat R_;
  Index n_ = 0;
  double cond_ = 1.0;
};

Mat scaledRows(const Mat& A, const Vec& d) { return d.cwiseSqrt().asDiagonal() * A; }

}  // namespace

std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t salt) {
  return splitmix64(seed ^ splitmix64(salt + 0x632be59bd9b4e019ULL));
}

void checkMatrix(const Mat& A, bool requireNonzeroRows) {
  if (A.cols() < 1 || A.rows() < A.cols())
    throw Error(Errc::InvalidArgument, "matrix must satisfy m >= n >= 1");
  if (!A.allFinite()) throw Error(Errc::InvalidArgument, "matrix has non-finite entries");
  if (requireNonzeroRows) {
    for (Index i = 0; i < A.rows(); ++i)
      if (A.row(i).cwiseAbs().maxCoeff() == 0.0)
        throw Error(Errc::RankDeficient, "row " + std::to_string(i) + " is zero");
  }
}

void checkScale(const Vec& d, Index m) {
  if (d.size() != m) throw Error(Errc::InvalidArgument, "scale length mismatch");
  for (Index i = 0; i < m; ++i)
    if (!(d(i) > 0.0) || !std::isfinite(d(i)))
      throw Error(Errc::InvalidArgument, "scale entries must be positive and finite");
}

NormalFactor factorNormalEquations(const Mat& A, const Vec& d, const FactorOptions& opt) {
  checkMatrix(A, false);
  checkScale(d, A.rows());
  const Mat B = scaledRows(A, d);
  NormalFactor f;
  if (opt.backend == Backend::QR) {
    f.solver = std::make_shared<QrSolver>(B, opt);
  } else if (opt.backend == Backend::Cholesky) {
    f.solver = std::make_shared<CholeskySolver>(B, opt);
  } else {
    try {
      f.solver = std::make_shared<CholeskySolver>(B, opt);
    } catch (const Error& e) {
      if (e.code() != Errc::RankDeficient) throw;
      f.solver = std::make_shared<QrSolver>(B, opt);
    }
  }
  f.A = A;
  f.d = d;
  return f;
}

Vec solveNormal(const NormalFactor& f, const Vec& rhs) {
  if (rhs.size() != f.n()) throw Error(Errc::InvalidArgument, "rhs length mismatch");
  return f.solver->solve(rhs);
}

Vec leverageScores(const NormalFactor& f) {
  const Mat X = f.solver->whiten(scaledRows(f.A, f.d).transpose());
  return X.colwise().squaredNorm().transpose();
}

Vec leverageScores(const Mat& A, const Vec& d, const FactorOptions& opt) {
  return leverageScores(factorNormalEquations(A, d, opt));
}

Index sketchSize(Index m, double eps, const SketchOptions& opt) {
  const double k = std::ceil(opt.cjl * std::log(static_cast<double>(std::max<Index>(m, 2))) /
                             (eps * eps));
  Index kk = k > 1e12 ? Index(1e12) : static_cast<Index>(k);
  if (opt.maxVectors > 0 && kk > opt.maxVectors) kk = opt.maxVectors;
  return std::max<Index>(kk, 1);
}

double sketchSign(std::uint64_t seed, std::uint64_t j, std::uint64_t i) {
  const std::uint64_t h = splitmix64(splitmix64(seed ^ splitmix64(j)) ^ (i * 0xd6e8feb86659fd93ULL));
  return (h >> 63) ? 1.0 : -1.0;
}

Vec sketchedLeverageScores(const NormalFactor& f, double eps, std::uint64_t seed,
                           const SketchOptions& opt) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::InvalidTolerance, "eps must lie in (0,1)");
  const Index m = f.m();
  const Index k = sketchSize(m, eps, opt);
  const Mat B = scaledRows(f.A, f.d);
  const double s = 1.0 / std::sqrt(static_cast<double>(k));
  Vec out = Vec::Zero(m);
  constexpr Index block = 256;
  Mat Q;
  for (Index j0 = 0; j0 < k; j0 += block) {
    const Index nb = std::min(block, k - j0);
    Q.resize(m, nb);
    for (Index j = 0; j < nb; ++j)
      for (Index i = 0; i < m; ++i)
        Q(i, j) = s * sketchSign(seed, static_cast<std::uint64_t>(j0 + j), static_cast<std::uint64_t>(i));
    const Mat P = B * f.solver->solve(B.transpose() * Q);
    out += P.rowwise().squaredNorm();
  }
  return out;
}

Vec sketchedLeverageScores(const Mat& A, const Vec& d, double eps, std::uint64_t seed,
                           const SketchOptions& opt, const FactorOptions& fopt) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::InvalidTolerance, "eps must lie in (0,1)");
  return sketchedLeverageScores(factorNormalEquations(A, d, fopt), eps, seed, opt);
}

ProjectionBundle projectionBundle(const Mat& A, const Vec& d, const FactorOptions& opt) {
  const NormalFactor f = factorNormalEquations(A, d, opt);
  const Mat X = f.solver->whiten(scaledRows(A, d).transpose());
  const Mat P = X.transpose() * X;
  ProjectionBundle pb;
  pb.sigma = P.diagonal();
  pb.projSquared = P.cwiseProduct(P);
  pb.lap = -pb.projSquared;
  pb.lap.diagonal() += pb.sigma;
  Vec is(pb.sigma.size());
  for (Index i = 0; i < is.size(); ++i) is(i) = pb.sigma(i) > 0.0 ? 1.0 / std::sqrt(pb.sigma(i)) : 0.0;
  pb.normLap = is.asDiagonal() * pb.lap * is.asDiagonal();
  return pb;
}

}  // namespace lwipm
