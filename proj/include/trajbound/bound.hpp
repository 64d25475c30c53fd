#pragma once

#include <cstddef>

#include "trajbound/fbm.hpp"

namespace trajbound {

struct BoundInputs {
  double diam = 0.0;  // diameter of the loss-evaluation set; 0 only for a degenerate trajectory
  std::size_t m = 1;  // training set size
  HurstParam h{0.5};
  double zeta = 1.0;  // loss upper bound
  double beta = 0.0;  // hypothesis-set stability
  double tau = 0.05;  // failure probability
  double empirical_risk = 0.0;
};

struct BoundReport {
  double rademacher_term = 0.0;     // 24 zeta diam / m * sqrt(ln 4 / H)
  double concentration_term = 0.0;  // (zeta + 2 beta m) sqrt(ln(1/tau) / (2m))
  double total = 0.0;
  bool clamped = false;  // the Hurst estimate was clamped into (0, 1)
};

// 12 diam / m * sqrt(ln 4 / H), natural logarithm.
double rademacher_bound(double diam, std::size_t m, HurstParam h);

BoundReport full_bound(const BoundInputs& inputs);

struct ClampedHurst {
  HurstParam h;
  bool clamped;
};

// Maps a raw estimate into (0, 1): values >= 1 become 0.999, values <= 0 become 0.001.
ClampedHurst clamp_hurst(double raw);

}  // namespace trajbound
