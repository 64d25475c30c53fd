#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "trajbound/fbm.hpp"
#include "trajbound/fractal.hpp"

namespace trajbound {

namespace drift {
struct Zero {};
// mu(w) = rate * w
struct Linear {
  double rate = 1.0;
};
// mu(w) = a w^3 - b w per coordinate, the gradient of a/4 w^4 - b/2 w^2
struct DoubleWell {
  double a = 1.0;
  double b = 1.0;
};
}  // namespace drift

using Drift = std::variant<drift::Zero, drift::Linear, drift::DoubleWell>;

struct SdeConfig {
  Drift drift = drift::Zero{};
  double sigma = 1.0;
  HurstParam h{0.5};
  double dt = 1e-3;
  std::size_t steps = 1000;
  std::vector<double> w0{0.0};
  std::uint64_t seed = 0;
  FgnMethod noise = FgnMethod::davies_harte;
};

// Euler-Maruyama: W_{k+1} = W_k - mu(W_k) dt + sigma dt^H xi_k, where xi is the
// fGn of sample_fbm_multi with the same seed. Returns (steps+1) x d.
FbmPath integrate(const SdeConfig& config);

// Zero drift, sigma = 1, dt = 1/steps; box dimension over the trajectory scaling regime.
BoxDimEstimate trajectory_dimension_experiment(HurstParam h, std::size_t d = 3, std::size_t steps = 100000,
                                               std::uint64_t seed = 0);

}  // namespace trajbound
