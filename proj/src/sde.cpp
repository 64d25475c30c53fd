#include "trajbound/sde.hpp"

#include <cmath>
#include <string>

#include "trajbound/error.hpp"
#include "trajbound/stats.hpp"

namespace trajbound {

namespace {

constexpr double kDriftLimit = 1e6;

struct DriftEval {
  double operator()(drift::Zero, double) const { return 0.0; }
  double operator()(drift::Linear l, double w) const { return l.rate * w; }
  double operator()(drift::DoubleWell dw, double w) const { return dw.a * w * w * w - dw.b * w; }
};

}  // namespace

FbmPath integrate(const SdeConfig& config) {
  const std::size_t d = config.w0.size();
  if (d == 0) throw DomainError("integrate: initial point must have dimension >= 1");
  if (config.steps < 1) throw DomainError("integrate: steps must be >= 1");
  if (!(config.dt > 0.0) || !std::isfinite(config.dt)) throw DomainError("integrate: dt must be positive");
  if (!(config.sigma >= 0.0)) throw DomainError("integrate: sigma must be non-negative");

  const bool noisy = config.sigma > 0.0;
  const double scale = std::pow(config.dt, config.h.value());

  // Integrate the displacement from w0 so that zero drift reproduces w0 + B exactly.
  FbmPath out{config.h, config.dt, config.seed, SeriesMatrix(config.steps + 1, d)};
  std::vector<double> disp(d, 0.0);
  std::vector<double> increments;
  if (noisy) {
    // Same per-component seeds as sample_fbm_multi.
    increments.resize(config.steps * d);
    for (std::size_t c = 0; c < d; ++c) {
      const auto xi = sample_fgn(config.steps, config.h, config.noise, derive_seed(config.seed, c));
      for (std::size_t k = 0; k < config.steps; ++k) increments[k * d + c] = xi[k];
    }
  }
  for (std::size_t c = 0; c < d; ++c) out.values(0, c) = config.w0[c] + disp[c];
  for (std::size_t k = 0; k < config.steps; ++k) {
    for (std::size_t c = 0; c < d; ++c) {
      const double w = config.w0[c] + disp[c];
      const double mu = std::visit([w](auto kind) { return DriftEval{}(kind, w); }, config.drift);
      if (!std::isfinite(mu) || std::abs(mu) > kDriftLimit) {
        throw DivergenceError("integrate: drift magnitude exceeded 1e6", k);
      }
      double next = disp[c] - mu * config.dt;
      if (noisy) next += config.sigma * (scale * increments[k * d + c]);
      disp[c] = next;
      out.values(k + 1, c) = config.w0[c] + disp[c];
    }
  }
  return out;
}

BoxDimEstimate trajectory_dimension_experiment(HurstParam h, std::size_t d, std::size_t steps, std::uint64_t seed) {
  if (!(1.0 / h.value() < static_cast<double>(d))) {
    throw DomainError("trajectory_dimension_experiment: need 1/H < d");
  }
  SdeConfig config;
  config.drift = drift::Zero{};
  config.sigma = 1.0;
  config.h = h;
  config.dt = 1.0 / static_cast<double>(steps);
  config.steps = steps;
  config.w0.assign(d, 0.0);
  config.seed = seed;
  const FbmPath path = integrate(config);
  const PointCloud cloud(path.values);
  const auto [lo, hi] = trajectory_scaling_regime(cloud);
  return estimate_boxdim(cloud, lo, hi);
}

}  // namespace trajbound
