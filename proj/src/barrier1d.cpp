#include "lwipm/barrier1d.hpp"

#include "lwipm/error.hpp"

#include <cmath>
#include <numbers>

namespace lwipm {

IntervalBarrier IntervalBarrier::fromBounds(double l, double u) {
  if (std::isnan(l) || std::isnan(u) || !(l < u))
    throw Error(Errc::InvalidArgument, "interval needs l < u");
  const bool lf = std::isfinite(l);
  const bool uf = std::isfinite(u);
  if (!lf && !uf) throw Error(Errc::InvalidArgument, "interval cannot be all of R");
  IntervalBarrier b;
  b.l = l;
  b.u = u;
  b.kind = lf && uf ? BarrierKind::Trig : (lf ? BarrierKind::LowerLog : BarrierKind::UpperLog);
  return b;
}

double IntervalBarrier::a() const { return std::numbers::pi / (u - l); }

double IntervalBarrier::b() const { return -(std::numbers::pi / 2.0) * (u + l) / (u - l); }

BarrierValue barrierEval(const IntervalBarrier& bar, double x) {
  if (!bar.contains(x)) throw Error(Errc::OutOfDomain, "point outside barrier interval");
  switch (bar.kind) {
    case BarrierKind::LowerLog: {
      const double s = x - bar.l;
      return {-std::log(s), -1.0 / s, 1.0 / (s * s), -2.0 / (s * s * s)};
    }
    case BarrierKind::UpperLog: {
      const double s = bar.u - x;
      // d/dx (u-x)^{-2} = +2 (u-x)^{-3}
      return {-std::log(s), 1.0 / s, 1.0 / (s * s), 2.0 / (s * s * s)};
    }
    case BarrierKind::Trig: {
      const double a = bar.a();
      const double th = a * x + bar.b();
      const double c = std::max(std::cos(th), 1e-300);
      const double s = std::sin(th);
      return {-std::log(c), a * s / c, a * a / (c * c), 2.0 * a * a * a * s / (c * c * c)};
    }
  }
  return {0, 0, 0, 0};
}

}  // namespace lwipm
