#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "trajbound/series.hpp"

namespace trajbound {

// n points of common dimension d, stored row-major.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(SeriesMatrix points);
  PointCloud(std::size_t n, std::size_t d, std::vector<double> coords);

  std::size_t size() const noexcept { return points_.rows(); }
  std::size_t dim() const noexcept { return points_.cols(); }
  std::span<const double> point(std::size_t i) const { return points_.row(i); }
  const SeriesMatrix& matrix() const noexcept { return points_; }

  // Largest per-coordinate extent (max - min).
  double max_extent() const;

 private:
  SeriesMatrix points_;
};

struct ScalePoint {
  double delta = 0.0;
  std::size_t count = 0;
};

struct BoxDimEstimate {
  double dim_hat = 0.0;
  double r_squared = 0.0;
  std::vector<ScalePoint> scales;  // ascending delta
  std::size_t projected_dim = 0;   // 0 when counted in the native dimension
  std::uint64_t projection_seed = 0;
};

struct BoxDimOptions {
  std::size_t n_scales = 12;
  // Target dimension for a random orthogonal projection. 0 = automatic
  // (project to 16 when the cloud lives in more than 64 dimensions).
  std::size_t project_dim = 0;
  std::uint64_t projection_seed = 0;
};

// Occupied cells of the delta-grid anchored at the coordinate-wise minimum.
std::size_t box_count(const PointCloud& cloud, double delta);

BoxDimEstimate estimate_boxdim(const PointCloud& cloud, double delta_min, double delta_max,
                               const BoxDimOptions& options = {});

// [0.001 D, 0.1 D] with D the largest coordinate extent.
std::pair<double, double> auto_scaling_regime(const PointCloud& cloud);

// Scaling regime for an ordered trajectory: the automatic regime with its lower
// end raised to `resolution_factor` times the median step length (capped at
// 0.01 D), so cells never resolve individual samples.
std::pair<double, double> trajectory_scaling_regime(const PointCloud& path, double resolution_factor = 4.0);

// Projects onto `target_dim` random orthonormal directions drawn from `seed`.
PointCloud random_orthogonal_projection(const PointCloud& cloud, std::size_t target_dim, std::uint64_t seed);

}  // namespace trajbound
