#pragma once

#include <vector>

#include "trajbound/fractal.hpp"

namespace trajbound {

// Enclosing ball; every input point lies within radius * (1 + eps) of center.
struct Ball {
  std::vector<double> center;
  double radius = 0.0;
  double eps = 0.0;
  std::size_t iterations = 0;

  double diameter() const noexcept { return 2.0 * radius; }
};

// Badoiu-Clarkson core-set iteration, capped at ceil(1/eps^2) steps. Stops
// earlier once the farthest distance is within (1 + eps) of the dual lower
// bound on the optimal radius, so radius <= (1 + eps) R* on return.
Ball miniball_core_set(const PointCloud& cloud, double eps = 1e-3);

// Exact minimum enclosing ball (Welzl with move-to-front), d <= 3, n <= 1e4.
Ball exact_ball_welzl(const PointCloud& cloud);

// Two-sweep farthest-point heuristic; never exceeds the true diameter.
double diameter_lower_bound(const PointCloud& cloud);

}  // namespace trajbound
