#include "trajbound/fractal.hpp"

#include <Eigen/Core>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "trajbound/error.hpp"
#include "trajbound/stats.hpp"

namespace trajbound {

namespace {

constexpr std::size_t kHighDimension = 64;
constexpr std::size_t kProjectedDimension = 16;
constexpr double kMaxCellIndex = 4.0e18;

}  // namespace

PointCloud::PointCloud(SeriesMatrix points) : points_(std::move(points)) {
  points_.validate(1);
}

PointCloud::PointCloud(std::size_t n, std::size_t d, std::vector<double> coords)
    : PointCloud(SeriesMatrix(n, d, std::move(coords))) {}

double PointCloud::max_extent() const {
  double extent = 0.0;
  for (std::size_t c = 0; c < dim(); ++c) {
    double lo = points_(0, c), hi = lo;
    for (std::size_t i = 1; i < size(); ++i) {
      lo = std::min(lo, points_(i, c));
      hi = std::max(hi, points_(i, c));
    }
    extent = std::max(extent, hi - lo);
  }
  return extent;
}

std::size_t box_count(const PointCloud& cloud, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("box_count: delta must be positive");
  const std::size_t n = cloud.size();
  const std::size_t d = cloud.dim();
  std::vector<double> lo(d);
  for (std::size_t c = 0; c < d; ++c) {
    lo[c] = cloud.point(0)[c];
    for (std::size_t i = 1; i < n; ++i) lo[c] = std::min(lo[c], cloud.point(i)[c]);
  }
  std::vector<std::int64_t> cells(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = cloud.point(i);
    for (std::size_t c = 0; c < d; ++c) {
      const double idx = std::floor((p[c] - lo[c]) / delta);
      if (idx > kMaxCellIndex) throw DomainError("box_count: delta too small for the cloud extent");
      cells[i * d + c] = static_cast<std::int64_t>(idx);
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(cells.begin() + a * d, cells.begin() + (a + 1) * d,
                                        cells.begin() + b * d, cells.begin() + (b + 1) * d);
  };
  std::sort(order.begin(), order.end(), less);
  std::size_t count = n == 0 ? 0 : 1;
  for (std::size_t k = 1; k < n; ++k) {
    if (less(order[k - 1], order[k])) ++count;
  }
  return count;
}

BoxDimEstimate estimate_boxdim(const PointCloud& cloud, double delta_min, double delta_max,
                               const BoxDimOptions& options) {
  if (cloud.size() < 2) throw DomainError("estimate_boxdim: need at least two points");
  if (!(delta_min > 0.0) || !(delta_max > delta_min)) {
    throw DomainError("estimate_boxdim: require 0 < delta_min < delta_max");
  }
  if (options.n_scales < 3) throw DomainError("estimate_boxdim: need at least 3 scales");

  BoxDimEstimate est;
  std::size_t target = options.project_dim;
  if (target == 0 && cloud.dim() > kHighDimension) target = kProjectedDimension;
  const bool project = target != 0 && target < cloud.dim();
  const PointCloud projected =
      project ? random_orthogonal_projection(cloud, target, options.projection_seed) : PointCloud{};
  const PointCloud& counted = project ? projected : cloud;
  if (project) {
    est.projected_dim = target;
    est.projection_seed = options.projection_seed;
  }

  const double log_lo = std::log(delta_min);
  const double log_hi = std::log(delta_max);
  std::vector<double> x, y;
  for (std::size_t k = 0; k < options.n_scales; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(options.n_scales - 1);
    const double delta = k + 1 == options.n_scales ? delta_max : std::exp(log_lo + t * (log_hi - log_lo));
    const std::size_t count = box_count(counted, delta);
    est.scales.push_back({delta, count});
    x.push_back(-std::log(delta));
    y.push_back(std::log(static_cast<double>(count)));
  }
  const bool constant = std::all_of(est.scales.begin(), est.scales.end(),
                                    [&](const ScalePoint& s) { return s.count == est.scales.front().count; });
  if (constant) {
    throw EstimationError("estimate_boxdim: occupied-cell count is " + std::to_string(est.scales.front().count) +
                          " at every scale");
  }
  const LinearFit fit = fit_line(x, y);
  est.dim_hat = std::max(0.0, fit.slope);
  est.r_squared = fit.r_squared;
  return est;
}

std::pair<double, double> auto_scaling_regime(const PointCloud& cloud) {
  const double extent = cloud.max_extent();
  if (!(extent > 0.0)) throw EstimationError("auto_scaling_regime: cloud has zero extent");
  return {1e-3 * extent, 0.1 * extent};
}

std::pair<double, double> trajectory_scaling_regime(const PointCloud& path, double resolution_factor) {
  auto [lo, hi] = auto_scaling_regime(path);
  if (path.size() < 2) return {lo, hi};
  std::vector<double> steps(path.size() - 1);
  for (std::size_t i = 1; i < path.size(); ++i) {
    double s = 0.0;
    const auto a = path.point(i - 1);
    const auto b = path.point(i);
    for (std::size_t c = 0; c < path.dim(); ++c) s += (b[c] - a[c]) * (b[c] - a[c]);
    steps[i - 1] = std::sqrt(s);
  }
  const auto mid = steps.begin() + static_cast<std::ptrdiff_t>(steps.size() / 2);
  std::nth_element(steps.begin(), mid, steps.end());
  const double resolution = resolution_factor * *mid;
  lo = std::min(std::max(lo, resolution), 0.1 * hi);
  return {lo, hi};
}

PointCloud random_orthogonal_projection(const PointCloud& cloud, std::size_t target_dim, std::uint64_t seed) {
  const std::size_t d = cloud.dim();
  if (target_dim == 0 || target_dim > d) throw DomainError("random_orthogonal_projection: bad target dimension");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd gauss(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(target_dim));
  for (Eigen::Index j = 0; j < gauss.cols(); ++j)
    for (Eigen::Index i = 0; i < gauss.rows(); ++i) gauss(i, j) = normal(gen);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
  const Eigen::MatrixXd basis =
      qr.householderQ() * Eigen::MatrixXd::Identity(gauss.rows(), gauss.cols());

  const std::size_t n = cloud.size();
  std::vector<double> out(n * target_dim);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Map<const Eigen::VectorXd> p(cloud.point(i).data(), static_cast<Eigen::Index>(d));
    const Eigen::VectorXd q = basis.transpose() * p;
    std::copy(q.data(), q.data() + q.size(), out.begin() + static_cast<std::ptrdiff_t>(i * target_dim));
  }
  return PointCloud(n, target_dim, std::move(out));
}

}  // namespace trajbound
