#include "lwipm/pathfollow.hpp"

#include "lwipm/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace lwipm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logm(Index m) { return std::log(double(std::max<Index>(m, 2))); }

Vec scaledMatrixRows(const Vec& d2) { return d2.cwiseSqrt().cwiseInverse(); }

}  // namespace

LpProblem LpProblem::make(Mat A, Vec b, Vec c, Vec lower, Vec upper) {
  checkMatrix(A, false);
  const Index m = A.rows();
  if (b.size() != A.cols() || c.size() != m || lower.size() != m || upper.size() != m)
    throw Error(Errc::InvalidArgument, "LP dimensions do not match");
  if (!b.allFinite() || !c.allFinite())
    throw Error(Errc::InvalidArgument, "b and c must be finite");
  LpProblem lp;
  lp.barriers.reserve(m);
  for (Index i = 0; i < m; ++i) lp.barriers.push_back(IntervalBarrier::fromBounds(lower(i), upper(i)));
  lp.A = std::move(A);
  lp.b = std::move(b);
  lp.c = std::move(c);
  lp.lower = std::move(lower);
  lp.upper = std::move(upper);
  return lp;
}

LpProblem LpProblem::withCost(const Vec& cost) const {
  if (cost.size() != m()) throw Error(Errc::InvalidArgument, "cost length mismatch");
  LpProblem out = *this;
  out.c = cost;
  return out;
}

bool isInterior(const LpProblem& lp, const Vec& x) {
  if (x.size() != lp.m()) return false;
  for (Index i = 0; i < lp.m(); ++i)
    if (!lp.barriers[size_t(i)].contains(x(i))) return false;
  return true;
}

double equalityResidual(const LpProblem& lp, const Vec& x) {
  return (lp.A.transpose() * x - lp.b).cwiseAbs().maxCoeff();
}

double dataStat(const LpProblem& lp, const Vec& x0) {
  double U = 0.0;
  bool any = false;
  for (Index i = 0; i < lp.m(); ++i) {
    const double l = lp.lower(i), u = lp.upper(i);
    if (std::isfinite(u)) {
      U = std::max(U, 1.0 / (u - x0(i)));
      any = true;
    }
    if (std::isfinite(l)) {
      U = std::max(U, 1.0 / (x0(i) - l));
      any = true;
    }
    if (std::isfinite(u) && std::isfinite(l)) U = std::max(U, u - l);
  }
  if (!any) return lp.c.cwiseAbs().maxCoeff() + 1.0;
  return std::max(U, lp.c.cwiseAbs().maxCoeff());
}

BarrierVectors evalBarriers(const LpProblem& lp, const Vec& x) {
  const Index m = lp.m();
  BarrierVectors bv{Vec(m), Vec(m), Vec(m), Vec(m)};
  for (Index i = 0; i < m; ++i) {
    const BarrierValue v = barrierEval(lp.barriers[size_t(i)], x(i));
    bv.phi(i) = v.phi;
    bv.d1(i) = v.d1;
    bv.d2(i) = v.d2;
    bv.d3(i) = v.d3;
  }
  return bv;
}

PathConfig PathConfig::make(Index m, Index n, Profile profile) {
  PathConfig c;
  const double md = double(m), nd = double(n);
  c.profile = profile;
  c.p = 1.0 - 1.0 / std::log(4.0 * md);
  c.c0 = nd / (2.0 * md);
  c.c1 = 1.5 * nd;
  c.cs = 4.0;
  c.ck = 2.0 * std::log(4.0 * md);
  c.Cnorm = 24.0 * std::sqrt(c.cs) * c.ck;
  c.K = 1.0 / (16.0 * c.ck);
  c.Rcent = c.K / (48.0 * c.ck * std::log(36.0 * c.c1 * c.cs * c.ck * md));
  c.alpha = c.Rcent / (1600.0 * std::sqrt(nd) * logm(m) * logm(m));
  c.epsChase = 1.0 / (2.0 * c.ck);
  c.threshold = c.Rcent;
  c.polishStall = 5;
  if (profile == Profile::Practical) {
    c.catchUp = true;
    c.gateT = true;
    c.gateStall = 25;
    c.Rcent = 0.05;
    c.alpha = 1.0 / (20.0 * std::sqrt(c.c1));
    c.threshold = 0.05;
  }
  return c;
}

double PathConfig::cGamma() const { return 1.0 + std::sqrt(2.0 * cs) / Cnorm; }

double PathConfig::mu() const { return epsChase / (12.0 * Rcent); }

double mixedNorm(const Vec& v, const Vec& w, double Cnorm) {
  if (v.size() == 0) return 0.0;
  return v.cwiseAbs().maxCoeff() + Cnorm * std::sqrt((w.array() * v.array().square()).sum());
}

Vec lewisOfScaled(const LpProblem& lp, const Vec& x, const PathConfig& cfg, std::uint64_t seed,
                  const Vec* warm, LewisStats* stats) {
  const BarrierVectors bv = evalBarriers(lp, x);
  const Mat Ax = scaledMatrixRows(bv.d2).asDiagonal() * lp.A;
  const double p = cfg.p;
  if (cfg.weightMode == WeightMode::Approx) {
    const double tol = std::min(0.5 * cfg.Rcent, 0.25);
    if (warm) return computeApxWeight(Ax, p, *warm, tol, seed, cfg.lewis, stats);
    return computeInitialWeight(Ax, p, tol, WeightMode::Approx, seed, cfg.lewis, stats);
  }
  auto exact = [&](double eps) -> Vec {
    if (warm && p < 4.0) {
      // Fixed-point rounding steps contract for p < 4 and bring the warm start
      // into the basin of the exact iteration.
      Vec w = *warm;
      for (int it = 0; it < 200; ++it) {
        const Vec sigma = lewisScores(Ax, w, p, cfg.lewis.factor);
        if (stats) {
          ++stats->iterations;
          ++stats->factorizations;
        }
        const double res = (sigma.array() / w.array() - 1.0).abs().maxCoeff();
        if (!std::isfinite(res)) break;
        if (res <= 0.5 * eps) {
          try {
            return computeExactWeight(Ax, p, w, eps, cfg.lewis, stats);
          } catch (const Error& e) {
            if (e.code() != Errc::NotConverged) throw;
            break;
          }
        }
        w = (sigma.array().pow(p / 2.0) * w.array().pow(1.0 - p / 2.0)).matrix();
      }
    }
    return computeInitialWeight(Ax, p, eps, WeightMode::Exact, seed, cfg.lewis, stats);
  };
  // Near the boundary the scaled rows span many orders of magnitude and the
  // residual can floor above weightEps; relax by 100x at most twice.
  double eps = cfg.weightEps;
  for (int attempt = 0;; ++attempt) {
    try {
      return exact(eps);
    } catch (const Error& e) {
      if (e.code() != Errc::NotConverged || attempt == 2 || eps * 100.0 >= 1.0) throw;
      eps *= 100.0;
    }
  }
}

Vec weightFunction(const LpProblem& lp, const Vec& x, const PathConfig& cfg, std::uint64_t seed,
                   const Vec* warm) {
  if (!isInterior(lp, x)) throw Error(Errc::OutOfDomain, "weight function needs an interior point");
  return (lewisOfScaled(lp, x, cfg, seed, warm).array() + cfg.c0).matrix();
}

NewtonResult newtonStepAndCentrality(const LpProblem& lp, const PathState& state,
                                     const PathConfig& cfg) {
  if (!isInterior(lp, state.x)) throw Error(Errc::OutOfDomain, "iterate left the domain");
  const BarrierVectors bv = evalBarriers(lp, state.x);
  const Vec& w = state.w;
  const Vec grad = state.t * lp.c + (w.array() * bv.d1.array()).matrix();
  const Vec d = (w.array() * bv.d2.array()).cwiseInverse().matrix();
  const NormalFactor f = factorNormalEquations(lp.A, d, cfg.lewis.factor);
  Vec eta = solveNormal(f, lp.A.transpose() * d.cwiseProduct(grad));
  Vec r = grad - lp.A * eta;
  eta += solveNormal(f, lp.A.transpose() * d.cwiseProduct(r));
  r = grad - lp.A * eta;

  NewtonResult out;
  const Vec ws = (w.array() * bv.d2.array().sqrt()).matrix();
  out.residual = (r.array() / ws.array()).matrix();
  out.h = -(r.array() * d.array()).matrix();
  out.report.deltaHat = mixedNorm(out.residual, w, cfg.Cnorm);
  out.report.stepInfNorm = out.residual.cwiseAbs().maxCoeff();
  out.report.eta = std::move(eta);
  return out;
}

double mixedBallNorm(const Vec& x, const Vec& l) {
  return x.norm() + (x.array() / l.array()).abs().maxCoeff();
}

Vec projectMixedBall(const Vec& a, const Vec& l) {
  const Index m = a.size();
  if (l.size() != m) throw Error(Errc::InvalidArgument, "cap length mismatch");
  for (Index i = 0; i < m; ++i)
    if (!(l(i) > 0.0)) throw Error(Errc::InvalidArgument, "caps must be positive");
  Vec x = Vec::Zero(m);
  if (m == 0 || a.cwiseAbs().maxCoeff() == 0.0) return x;

  std::vector<Index> ord(static_cast<size_t>(m));
  std::iota(ord.begin(), ord.end(), Index(0));
  std::vector<double> rho(static_cast<size_t>(m));
  for (Index i = 0; i < m; ++i) rho[size_t(i)] = std::abs(a(i)) / l(i);
  std::stable_sort(ord.begin(), ord.end(),
                   [&](Index i, Index j) { return rho[size_t(i)] > rho[size_t(j)]; });

  // suffix sums of a^2 in sorted order, prefix sums of |a| l and l^2
  std::vector<double> tailSq(static_cast<size_t>(m) + 1, 0.0);
  for (Index k = m - 1; k >= 0; --k) {
    const double ak = a(ord[size_t(k)]);
    tailSq[size_t(k)] = tailSq[size_t(k) + 1] + ak * ak;
  }

  double bestVal = -kInf, bestT = 0.0;
  Index bestK = 0;
  double Ak = 0.0, Sk = 0.0;
  for (Index k = 0; k <= m; ++k) {
    if (k > 0) {
      const Index i = ord[size_t(k) - 1];
      Ak += std::abs(a(i)) * l(i);
      Sk += l(i) * l(i);
    }
    const double B = std::sqrt(tailSq[size_t(k)]);
    const double tmax = 1.0 / (1.0 + std::sqrt(Sk));
    auto g = [&](double t) {
      const double q = std::max(0.0, (1.0 - t) * (1.0 - t) - t * t * Sk);
      return Ak * t + B * std::sqrt(q);
    };
    auto consider = [&](double t) {
      const double v = g(t);
      if (v > bestVal) {
        bestVal = v;
        bestT = t;
        bestK = k;
      }
    };
    if (B == 0.0) {
      if (k > 0) consider(tmax);
      continue;
    }
    // t / lambda(t) is increasing; this clamp set is valid for t/lambda in [rho_{k+1}, rho_k]
    auto tau = [&](double r) {
      if (std::isinf(r)) return tmax;
      return r / (r + std::sqrt(B * B + r * r * Sk));
    };
    const double rhoHi = k == 0 ? kInf : rho[size_t(ord[size_t(k) - 1])];
    const double rhoLo = k == m ? 0.0 : rho[size_t(ord[size_t(k)])];
    const double lo = tau(rhoLo), hi = tau(rhoHi);
    if (hi < lo) continue;
    consider(lo);
    consider(hi);
    // stationary points of A t + B sqrt((1-t)^2 - t^2 S)
    const double A2 = Ak * Ak, B2 = B * B, s1 = Sk - 1.0;
    const double qa = A2 * (1.0 - Sk) - B2 * s1 * s1;
    const double qb = -2.0 * A2 - 2.0 * B2 * s1;
    const double qc = A2 - B2;
    std::vector<double> roots;
    if (std::abs(qa) < 1e-300) {
      if (qb != 0.0) roots.push_back(-qc / qb);
    } else {
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double qq = -0.5 * (qb + std::copysign(sq, qb));
        roots.push_back(qq / qa);
        if (qq != 0.0) roots.push_back(qc / qq);
      }
    }
    for (double t : roots)
      if (t > lo && t < hi) consider(t);
  }

  const double t = bestT;
  for (Index k = 0; k < bestK; ++k) {
    const Index i = ord[size_t(k)];
    x(i) = std::copysign(t * l(i), a(i));
  }
  const double B = std::sqrt(tailSq[size_t(bestK)]);
  if (B > 0.0) {
    double Sk = 0.0;
    for (Index k = 0; k < bestK; ++k) Sk += l(ord[size_t(k)]) * l(ord[size_t(k)]);
    const double q = std::max(0.0, (1.0 - t) * (1.0 - t) - t * t * Sk);
    const double lam = std::sqrt(q) / B;
    for (Index k = bestK; k < m; ++k) {
      const Index i = ord[size_t(k)];
      x(i) = lam * a(i);
    }
  }
  return x;
}

ChasingConfig ChasingConfig::make(double eps, double Rnoise, double tau) {
  if (!(eps > 0.0 && eps < 0.2)) throw Error(Errc::InvalidArgument, "chasing eps must lie in (0,1/5)");
  if (!(Rnoise > 0.0)) throw Error(Errc::InvalidArgument, "noise radius must be positive");
  ChasingConfig c;
  c.eps = eps;
  c.Rnoise = Rnoise;
  c.mu = eps / (12.0 * Rnoise);
  c.tau = tau;
  return c;
}

double logChasingPotential(const Vec& v, double mu) {
  const double M = mu * v.cwiseAbs().maxCoeff();
  const double s = ((mu * v.array() - M).exp() + (-mu * v.array() - M).exp()).sum();
  return M + std::log(s);
}

double chasingPotential(const Vec& v, double mu) { return std::exp(logChasingPotential(v, mu)); }

Vec chasingGradientScaled(const Vec& v, double mu) {
  const double M = mu * v.cwiseAbs().maxCoeff();
  return (mu * ((mu * v.array() - M).exp() - (-mu * v.array() - M).exp())).matrix();
}

Vec chasingStep(const Vec& xLog, const Vec& zObs, double ballRadius, const Vec& w,
                const ChasingConfig& cfg, double Cnorm) {
  const Vec g = chasingGradientScaled(xLog - zObs, cfg.mu);
  if (g.cwiseAbs().maxCoeff() == 0.0 || ballRadius <= 0.0) return Vec::Zero(xLog.size());
  const Vec sw = w.cwiseSqrt();
  const Vec a = (g.array() / sw.array()).matrix();
  const Vec l = Cnorm * sw;
  const Vec y = projectMixedBall(a, l);
  return (-(1.0 + cfg.eps) * (ballRadius / Cnorm) * (y.array() / sw.array())).matrix();
}

namespace {

PathState centerFrom(const LpProblem& lp, const PathState& state, const NewtonResult& nr,
                     const PathConfig& cfg, std::uint64_t seed, LewisStats* ls = nullptr) {
  const double delta = nr.report.deltaHat;
  PathState out;
  out.t = state.t;
  out.x = state.x + nr.h;
  if (!isInterior(lp, out.x))
    throw Error(Errc::CenteringDiverged, "Newton step left the domain (deltaHat " +
                                             std::to_string(delta) + ")");
  const Vec* warm = state.lewisCache.size() == lp.m() ? &state.lewisCache : nullptr;
  out.lewisCache = lewisOfScaled(lp, out.x, cfg, seed, warm, ls);
  const Vec z = (out.lewisCache.array() + cfg.c0).log().matrix();
  const Vec logw = state.w.array().log().matrix();
  const ChasingConfig cc = ChasingConfig::make(cfg.epsChase, cfg.Rcent);
  const double radius = (1.0 - 6.0 / (7.0 * cfg.ck)) * delta;
  Vec step = z - logw;
  // the chasing step is only needed when the target is outside the ball
  if (!cfg.catchUp || mixedNorm(step, state.w, cfg.Cnorm) > radius)
    step = chasingStep(logw, z, radius, state.w, cc, cfg.Cnorm);
  out.w = (logw + step).array().exp().matrix();

  out.last = nr.report;
  out.last.weightMoveNorm = mixedNorm(step, state.w, cfg.Cnorm);
  const Vec gap = logw + step - z;
  out.last.phiPotential = logChasingPotential(gap, cc.mu);
  out.last.weightGap = gap.cwiseAbs().maxCoeff();
  return out;
}

bool unboundedDomain(const LpProblem& lp) {
  for (Index i = 0; i < lp.m(); ++i)
    if (!std::isfinite(lp.lower(i)) || !std::isfinite(lp.upper(i))) return true;
  return false;
}

// Practical phase 1 when some bound is infinite: the t -> t1 path has no limit
// there (iterates run off along recession directions), so instead stay at
// t = 1 and move the cost from d to c, re-centering between moves.
PathState costHomotopy(const LpProblem& lp, PathState state, const Vec& d, const PathConfig& cfg,
                       std::uint64_t seed, PathStats& st) {
  state.t = 1.0;
  auto cost = [&](double s) { return lp.withCost(d + s * (lp.c - d)); };
  auto logD = [&](const PathState& s) -> Vec {
    const BarrierVectors bv = evalBarriers(lp, s.x);
    return (-(s.w.array() * bv.d2.array()).log()).matrix();
  };
  Vec prevLogD = logD(state);
  double s = 0.0, ds = 0.05;
  LpProblem cur = cost(s);
  while (true) {
    NewtonResult nr = newtonStepAndCentrality(cur, state, cfg);
    if (nr.report.deltaHat <= cfg.threshold) {
      if (s == 1.0) break;
      const double sn = std::min(1.0, s + ds);
      LpProblem next = cost(sn);
      NewtonResult trial = newtonStepAndCentrality(next, state, cfg);
      if (trial.report.deltaHat > 2.0 * cfg.threshold) {
        ds *= 0.5;
        if (ds < 1e-12) throw Error(Errc::CenteringDiverged, "cost homotopy stalled");
        continue;
      }
      s = sn;
      ds *= 2.0;
      cur = std::move(next);
      nr = std::move(trial);
    }
    if (st.iterations >= cfg.iterationCap) throw Error(Errc::IterationCap, "iteration cap reached");
    const double ath = (lp.A.transpose() * nr.h).cwiseAbs().maxCoeff();
    const double scale = 1.0 + lp.A.transpose().cwiseAbs().rowwise().sum().maxCoeff() *
                                   nr.h.cwiseAbs().maxCoeff();
    st.maxNullspaceError = std::max(st.maxNullspaceError, ath / scale);
    LewisStats ls;
    state = centerFrom(cur, state, nr, cfg, mixSeed(seed, std::uint64_t(st.iterations)), &ls);
    st.lewisIterations += ls.iterations;
    st.factorizations += ls.factorizations + 1;
    ++st.iterations;
    st.deltaHatHistory.push_back(nr.report.deltaHat);
    const Vec ld = logD(state);
    const double drift = (ld - prevLogD).cwiseAbs().maxCoeff();
    prevLogD = ld;
    st.maxDrift = std::max(st.maxDrift, drift);
    if (drift > 0.1) ++st.driftViolations;
    st.maxWeightGap = std::max(st.maxWeightGap, state.last.weightGap);
    if (state.last.weightGap > cfg.K) ++st.weightGapViolations;
  }
  st.finalDeltaHat = newtonStepAndCentrality(lp, state, cfg).report.deltaHat;
  return state;
}

}  // namespace

PathState centeringInexact(const LpProblem& lp, const PathState& state, double Kbound,
                           const PathConfig& cfg, std::uint64_t seed) {
  const NewtonResult nr = newtonStepAndCentrality(lp, state, cfg);
  PathState out = centerFrom(lp, state, nr, cfg, seed);
  const NewtonResult post = newtonStepAndCentrality(lp, out, cfg);
  out.last.postDeltaHat = post.report.deltaHat;
  (void)Kbound;  // reported through last.weightGap; checked by callers
  const double cg = cfg.cGamma();
  if (post.report.deltaHat > cg * cg * nr.report.deltaHat && post.report.deltaHat > cfg.threshold)
    throw Error(Errc::CenteringDiverged,
                "deltaHat grew from " + std::to_string(nr.report.deltaHat) + " to " +
                    std::to_string(post.report.deltaHat));
  return out;
}

PathState pathFollowing(const LpProblem& lp, PathState state, double tStart, double tEnd,
                        double eps, const PathConfig& cfg, std::uint64_t seed, PathStats* stats) {
  if (!(tStart > 0.0) || !(tEnd > 0.0)) throw Error(Errc::InvalidArgument, "t must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::InvalidTolerance, "eps must lie in (0,1)");
  PathStats local;
  PathStats& st = stats ? *stats : local;
  const auto start = std::chrono::steady_clock::now();
  state.t = tStart;

  auto logD = [&](const PathState& s) -> Vec {
    const BarrierVectors bv = evalBarriers(lp, s.x);
    return (-(s.w.array() * bv.d2.array()).log()).matrix();
  };
  Vec prevLogD = logD(state);

  auto guard = [&]() {
    if (st.iterations >= cfg.iterationCap)
      throw Error(Errc::IterationCap, "iteration cap reached");
    if (cfg.wallClockBudget > 0.0) {
      const double el =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (el > cfg.wallClockBudget) throw Error(Errc::IterationCap, "wall-clock budget exceeded");
    }
  };

  auto step = [&](const NewtonResult& nr) {
    guard();
    const double ath = (lp.A.transpose() * nr.h).cwiseAbs().maxCoeff();
    const double scale = 1.0 + lp.A.transpose().cwiseAbs().rowwise().sum().maxCoeff() *
                                   nr.h.cwiseAbs().maxCoeff();
    st.maxNullspaceError = std::max(st.maxNullspaceError, ath / scale);
    LewisStats ls;
    state = centerFrom(lp, state, nr, cfg, mixSeed(seed, std::uint64_t(st.iterations)), &ls);
    st.lewisIterations += ls.iterations;
    st.factorizations += ls.factorizations + 1;
    ++st.iterations;
    st.deltaHatHistory.push_back(nr.report.deltaHat);
    const Vec ld = logD(state);
    const double drift = (ld - prevLogD).cwiseAbs().maxCoeff();
    prevLogD = ld;
    st.maxDrift = std::max(st.maxDrift, drift);
    if (drift > 0.1) ++st.driftViolations;
    st.maxWeightGap = std::max(st.maxWeightGap, state.last.weightGap);
    if (state.last.weightGap > cfg.K) ++st.weightGapViolations;
  };

  double lastDelta = -1.0;
  Index gated = 0;
  while (true) {
    const NewtonResult nr = newtonStepAndCentrality(lp, state, cfg);
    if (state.t == tEnd) break;
    const double dh = nr.report.deltaHat;
    if (lastDelta >= 0.0 && dh > 1e3 * std::max(lastDelta, cfg.threshold))
      throw Error(Errc::CenteringDiverged, "deltaHat blew up to " + std::to_string(dh));
    step(nr);
    lastDelta = dh;
    if (cfg.gateT && dh > cfg.threshold) {
      // deltaHat can sit above the gate at the rounding floor of large costs
      if (cfg.gateStall <= 0 || ++gated < cfg.gateStall) continue;
      ++st.gateOverrides;
    }
    gated = 0;
    state.t = std::clamp(tEnd, (1.0 - cfg.alpha) * state.t, (1.0 + cfg.alpha) * state.t);
    ++st.tSteps;
  }

  const double rounds = std::ceil(4.0 * cfg.ck * std::log(1.0 / eps));
  double best = kInf;
  Index stalled = 0;
  for (Index i = 0; i < Index(rounds); ++i) {
    const NewtonResult nr = newtonStepAndCentrality(lp, state, cfg);
    if (nr.report.deltaHat <= eps) break;
    // rounding in the slacks puts a floor under deltaHat near the boundary
    if (nr.report.deltaHat < 0.5 * best) {
      best = nr.report.deltaHat;
      stalled = 0;
    } else if (cfg.polishStall > 0 && ++stalled >= cfg.polishStall) {
      break;
    }
    step(nr);
    ++st.polishSteps;
  }
  st.finalDeltaHat = newtonStepAndCentrality(lp, state, cfg).report.deltaHat;
  return state;
}

LpResult lpSolve(const LpProblem& lp, const Vec& x0, double eps, const PathConfig& cfg,
                 std::uint64_t seed) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::InvalidTolerance, "eps must lie in (0,1)");
  if (x0.size() != lp.m() || !isInterior(lp, x0))
    throw Error(Errc::Infeasible, "x0 is not strictly interior");
  const double eqScale = 1.0 + lp.b.cwiseAbs().maxCoeff();
  if (equalityResidual(lp, x0) > 1e-8 * eqScale)
    throw Error(Errc::Infeasible, "x0 violates A^T x = b");

  const Index m = lp.m();
  const double lm = logm(m);
  LpResult res;
  res.U = dataStat(lp, x0);
  res.t1 = 1.0 / (std::pow(2.0, 27) * std::pow(double(m), 1.5) * res.U * res.U * std::pow(lm, 4));
  res.t2 = 2.0 * double(m) / eps;
  res.eps1 = 1.0 / (std::pow(2.0, 18) * std::pow(lm, 3));
  res.eps2 = eps / (8.0 * res.U * res.U);

  PathConfig initCfg = cfg;
  initCfg.weightEps = std::min(cfg.weightEps, 1.0 / (std::pow(2.0, 16) * std::pow(lm, 3)));
  PathState st;
  st.x = x0;
  st.lewisCache = lewisOfScaled(lp, x0, initCfg, mixSeed(seed, 0xfeed), nullptr);
  st.w = (st.lewisCache.array() + cfg.c0).matrix();
  const BarrierVectors bv = evalBarriers(lp, x0);
  const Vec d = -(st.w.array() * bv.d1.array()).matrix();

  double tFrom = res.t1;
  if (cfg.profile == Profile::Practical && unboundedDomain(lp)) {
    st = costHomotopy(lp, st, d, cfg, mixSeed(seed, 1), res.phase1);
    tFrom = 1.0;
  } else {
    const LpProblem phase1 = lp.withCost(d);
    st = pathFollowing(phase1, st, 1.0, res.t1, res.eps1, cfg, mixSeed(seed, 1), &res.phase1);
  }
  st = pathFollowing(lp, st, tFrom, res.t2, res.eps2, cfg, mixSeed(seed, 2), &res.phase2);
  res.x = st.x;
  res.w = st.w;
  res.t = st.t;
  res.objective = lp.c.dot(st.x);
  res.eta = newtonStepAndCentrality(lp, st, cfg).report.eta;
  return res;
}

DualResult dualSolve(const LpProblem& lp, const Vec& x0, double eps, const PathConfig& cfg,
                     std::uint64_t seed) {
  for (Index i = 0; i < lp.m(); ++i)
    if (lp.lower(i) != 0.0 || std::isfinite(lp.upper(i)))
      throw Error(Errc::InvalidArgument, "dual extraction needs lower = 0, upper = +inf");
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::InvalidTolerance, "eps must lie in (0,1)");
  if (x0.size() != lp.m() || !isInterior(lp, x0))
    throw Error(Errc::Infeasible, "x0 is not strictly interior");
  if (equalityResidual(lp, x0) > 1e-8 * (1.0 + lp.b.cwiseAbs().maxCoeff()))
    throw Error(Errc::Infeasible, "x0 violates A^T x = b");

  const Index m = lp.m();
  const double lm = logm(m);
  const double U = dataStat(lp, x0);
  const double t1 = 1.0 / (std::pow(2.0, 27) * std::pow(double(m), 1.5) * U * U * std::pow(lm, 4));
  const double eps1 = 1.0 / (std::pow(2.0, 18) * std::pow(lm, 3));
  const double tEnd = 3.0 * double(lp.n()) / eps;

  PathConfig initCfg = cfg;
  initCfg.weightEps = std::min(cfg.weightEps, 1.0 / (std::pow(2.0, 16) * std::pow(lm, 3)));
  PathState st;
  st.x = x0;
  st.lewisCache = lewisOfScaled(lp, x0, initCfg, mixSeed(seed, 0xfeed), nullptr);
  st.w = (st.lewisCache.array() + cfg.c0).matrix();
  const BarrierVectors bv = evalBarriers(lp, x0);
  const Vec d = -(st.w.array() * bv.d1.array()).matrix();
  double tFrom = t1;
  if (cfg.profile == Profile::Practical) {
    PathStats ps;
    st = costHomotopy(lp, st, d, cfg, mixSeed(seed, 1), ps);
    tFrom = 1.0;
  } else {
    st = pathFollowing(lp.withCost(d), st, 1.0, t1, eps1, cfg, mixSeed(seed, 1));
  }
  st = pathFollowing(lp, st, tFrom, tEnd, std::min(eps1, 0.25), cfg, mixSeed(seed, 2));

  DualResult out;
  const NewtonResult nr = newtonStepAndCentrality(lp, st, cfg);
  out.t = st.t;
  out.y = nr.report.eta / st.t;
  out.x = st.x;
  out.dualObjective = lp.b.dot(out.y);
  out.primalObjective = lp.c.dot(st.x);
  return out;
}

}  // namespace lwipm
