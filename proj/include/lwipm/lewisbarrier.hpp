#pragma once

#include "lwipm/linalg.hpp"

namespace lwipm {

// Lewis weight barrier for {x : A x > b}, evaluated through converged weights
// sigma_x = w_q(A_x) with A_x = S_x^{-1} A.

double defaultBarrierQ(Index m);  // ln m, at least 4
// (q+2)^{3/2} m^{1/(q+2)} + 4 max(q,2)^{5/2}
double selfConcordanceParameter(double q, Index m);

struct BarrierEval {
  double psi = 0.0;
  Vec grad;
  Mat hess;
  Vec sigma;
  double q = 0.0;
  // spectrum of N_x = 2 Lbar (I - (1-2/q) Lbar)^{-1}
  double nMin = 0.0, nMax = 0.0;
  // generalized eigenvalues of hess against A_x^T Sigma A_x; should lie in [1, 1+q]
  double sandwichMin = 0.0, sandwichMax = 0.0;
  double force = 0.0;  // grad^T hess^{-1} grad
};

double psiValue(const Mat& A, const Vec& b, const Vec& x, double q, double eps = 1e-8);
Vec psiGradient(const Mat& A, const Vec& b, const Vec& x, double q, double eps = 1e-8);
BarrierEval psiHessian(const Mat& A, const Vec& b, const Vec& x, double q, double eps = 1e-8);

bool sandwichHolds(const BarrierEval& e, double tol = 1e-8);
bool forceBoundHolds(const BarrierEval& e, Index n, double tol = 1e-6);

struct ProbeResult {
  double ratio = 0.0;  // |D^3 psi[h,h,h]| / |h|_H^3
  double bound = 0.0;  // 2 v_q
  double hNorm = 0.0;  // |h|_H of the direction as supplied
  bool ok = false;     // ratio <= bound * (1 + tol)
};

ProbeResult selfConcordanceProbe(const Mat& A, const Vec& b, const Vec& x, const Vec& h, double q,
                                 double eps = 1e-8, double fdStep = 1e-4, double tol = 0.05);

}  // namespace lwipm
