#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace trajbound {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares y = intercept + slope * x. Requires >= 2 points with distinct x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> v);

// Pearson correlation; empty when either column has zero variance or fewer than two points.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

// splitmix64 finalizer applied to (seed, index); used for per-component seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace trajbound
