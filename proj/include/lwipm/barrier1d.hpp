#pragma once

#include <limits>

namespace lwipm {

enum class BarrierKind { LowerLog, UpperLog, Trig };

struct IntervalBarrier {
  BarrierKind kind = BarrierKind::LowerLog;
  double l = 0.0;
  double u = std::numeric_limits<double>::infinity();

  // Picks the kind from which ends are finite.
  static IntervalBarrier fromBounds(double l, double u);
  double a() const;  // Trig only
  double b() const;
  bool contains(double x) const { return x > l && x < u; }
};

struct BarrierValue {
  double phi;
  double d1;
  double d2;
  double d3;
};

BarrierValue barrierEval(const IntervalBarrier& bar, double x);

}  // namespace lwipm
