#include "trajbound/ball.hpp"

#include <Eigen/Core>
#include <Eigen/LU>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <list>
#include <random>
#include <string>

#include "trajbound/error.hpp"

namespace trajbound {

namespace {

constexpr std::size_t kGramMinDim = 8;
constexpr std::size_t kGramMaxPoints = 4096;
constexpr std::size_t kRefreshInterval = 1024;
constexpr std::size_t kWelzlMaxDim = 3;
constexpr std::size_t kWelzlMaxPoints = 10000;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::size_t argmax_lowest(const Eigen::VectorXd& v) {
  std::size_t best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v(i) > v(static_cast<Eigen::Index>(best))) best = static_cast<std::size_t>(i);
  return best;
}

// Centers are convex combinations sum_i w_i p_i of the input points, so the
// iteration only needs squared distances to the current combination. Two
// backends supply them: explicit coordinates (low d) and a Gram matrix of the
// points translated by p_0 (high d, O(n) per step after an O(n^2 d) setup).
class CoordinateBackend {
 public:
  explicit CoordinateBackend(const PointCloud& cloud)
      : points_(Eigen::Map<const RowMatrix>(cloud.matrix().data().data(),
                                            static_cast<Eigen::Index>(cloud.size()),
                                            static_cast<Eigen::Index>(cloud.dim()))),
        center_(points_.row(0).transpose()) {}

  void squared_distances(Eigen::VectorXd& out) const {
    out = (points_.rowwise() - center_.transpose()).rowwise().squaredNorm();
  }
  void step_towards(std::size_t f, double t) {
    center_ += t * (points_.row(static_cast<Eigen::Index>(f)).transpose() - center_);
  }
  void refresh(const Eigen::VectorXd&) {}

 private:
  Eigen::Map<const RowMatrix> points_;
  Eigen::VectorXd center_;
};

class GramBackend {
 public:
  explicit GramBackend(const PointCloud& cloud) {
    const auto n = static_cast<Eigen::Index>(cloud.size());
    const auto d = static_cast<Eigen::Index>(cloud.dim());
    const Eigen::Map<const RowMatrix> pts(cloud.matrix().data().data(), n, d);
    const RowMatrix shifted = pts.rowwise() - pts.row(0);
    gram_ = Eigen::MatrixXd::Zero(n, n);
    gram_.selfadjointView<Eigen::Lower>().rankUpdate(shifted);
    gram_ = gram_.selfadjointView<Eigen::Lower>();
    diag_ = gram_.diagonal();
    gw_ = gram_.col(0);
    wgw_ = gram_(0, 0);
  }

  void squared_distances(Eigen::VectorXd& out) const {
    out = (diag_ - 2.0 * gw_).array() + wgw_;
    out = out.cwiseMax(0.0);
  }
  void step_towards(std::size_t f, double t) {
    const auto fi = static_cast<Eigen::Index>(f);
    wgw_ = (1 - t) * (1 - t) * wgw_ + 2 * t * (1 - t) * gw_(fi) + t * t * gram_(fi, fi);
    gw_ = (1 - t) * gw_ + t * gram_.col(fi);
  }
  // Removes drift accumulated by the incremental updates.
  void refresh(const Eigen::VectorXd& weights) {
    gw_ = gram_ * weights;
    wgw_ = weights.dot(gw_);
  }

 private:
  Eigen::MatrixXd gram_;
  Eigen::VectorXd diag_;
  Eigen::VectorXd gw_;
  double wgw_ = 0.0;
};

template <class Backend>
Eigen::VectorXd badoiu_clarkson(Backend& backend, std::size_t n, double eps, std::size_t& iterations) {
  const double cap_real = std::ceil(1.0 / (eps * eps));
  const std::size_t cap = cap_real > 1e12 ? std::size_t{1000000000000} : static_cast<std::size_t>(cap_real);
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  weights(0) = 1.0;
  Eigen::VectorXd dist2(static_cast<Eigen::Index>(n));
  iterations = 0;
  for (std::size_t k = 1; k <= cap; ++k) {
    backend.squared_distances(dist2);
    const std::size_t far = argmax_lowest(dist2);
    const double radius = std::sqrt(dist2(static_cast<Eigen::Index>(far)));
    const double dual = std::max(0.0, weights.dot(dist2));
    if (radius <= (1.0 + eps) * std::sqrt(dual)) break;
    const double t = 1.0 / static_cast<double>(k + 1);
    weights *= 1.0 - t;
    weights(static_cast<Eigen::Index>(far)) += t;
    backend.step_towards(far, t);
    if (k % kRefreshInterval == 0) backend.refresh(weights);
    iterations = k;
  }
  return weights;
}

// Smallest ball with every support point on its boundary.
Ball ball_through(const std::vector<std::vector<double>>& support, std::size_t d) {
  Ball b;
  if (support.empty()) {
    b.center.assign(d, 0.0);
    b.radius = -1.0;
    return b;
  }
  const auto& p0 = support.front();
  b.center = p0;
  if (support.size() == 1) return b;
  const auto k = static_cast<Eigen::Index>(support.size() - 1);
  Eigen::MatrixXd v(static_cast<Eigen::Index>(d), k);
  for (Eigen::Index j = 0; j < k; ++j)
    for (std::size_t c = 0; c < d; ++c)
      v(static_cast<Eigen::Index>(c), j) = support[static_cast<std::size_t>(j) + 1][c] - p0[c];
  const Eigen::MatrixXd a = 2.0 * v.transpose() * v;
  const Eigen::VectorXd rhs = v.colwise().squaredNorm().transpose();
  const Eigen::VectorXd lambda = a.completeOrthogonalDecomposition().solve(rhs);
  const Eigen::VectorXd offset = v * lambda;
  for (std::size_t c = 0; c < d; ++c) b.center[c] += offset(static_cast<Eigen::Index>(c));
  b.radius = offset.norm();
  return b;
}

bool contains(const Ball& b, const std::vector<double>& p) {
  if (b.radius < 0.0) return false;
  double s = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) s += (p[c] - b.center[c]) * (p[c] - b.center[c]);
  return std::sqrt(s) <= b.radius * (1.0 + 1e-12) + 1e-15;
}

using PointList = std::list<std::vector<double>>;

Ball move_to_front(PointList& points, PointList::iterator end, std::vector<std::vector<double>>& support,
                   std::size_t d) {
  Ball ball = ball_through(support, d);
  if (support.size() == d + 1) return ball;
  for (auto it = points.begin(); it != end;) {
    auto next = std::next(it);
    if (!contains(ball, *it)) {
      support.push_back(*it);
      ball = move_to_front(points, it, support, d);
      support.pop_back();
      points.splice(points.begin(), points, it);
    }
    it = next;
  }
  return ball;
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
  return std::sqrt(s);
}

std::size_t farthest_from(const PointCloud& cloud, std::span<const double> origin, double& dist) {
  std::size_t best = 0;
  dist = -1.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double di = distance(cloud.point(i), origin);
    if (di > dist) {
      dist = di;
      best = i;
    }
  }
  return best;
}

}  // namespace

Ball miniball_core_set(const PointCloud& cloud, double eps) {
  if (cloud.size() == 0) throw DomainError("miniball_core_set: empty cloud");
  if (!(eps > 0.0)) throw DomainError("miniball_core_set: eps must be positive");
  const std::size_t n = cloud.size();
  const std::size_t d = cloud.dim();

  Ball ball;
  ball.eps = eps;
  Eigen::VectorXd weights;
  if (d >= kGramMinDim && n <= kGramMaxPoints) {
    GramBackend backend(cloud);
    weights = badoiu_clarkson(backend, n, eps, ball.iterations);
  } else {
    CoordinateBackend backend(cloud);
    weights = badoiu_clarkson(backend, n, eps, ball.iterations);
  }

  // Materialize the center relative to p_0 and measure the radius directly.
  ball.center.assign(d, 0.0);
  const auto p0 = cloud.point(0);
  for (std::size_t i = 1; i < n; ++i) {
    const double w = weights(static_cast<Eigen::Index>(i));
    if (w == 0.0) continue;
    const auto p = cloud.point(i);
    for (std::size_t c = 0; c < d; ++c) ball.center[c] += w * (p[c] - p0[c]);
  }
  for (std::size_t c = 0; c < d; ++c) ball.center[c] += p0[c];
  for (std::size_t i = 0; i < n; ++i) ball.radius = std::max(ball.radius, distance(cloud.point(i), ball.center));
  return ball;
}

Ball exact_ball_welzl(const PointCloud& cloud) {
  const std::size_t d = cloud.dim();
  if (d > kWelzlMaxDim) {
    throw UnsupportedDimension("exact_ball_welzl: dimension " + std::to_string(d) + " > 3");
  }
  if (cloud.size() == 0 || cloud.size() > kWelzlMaxPoints) {
    throw DomainError("exact_ball_welzl: need 1..10000 points");
  }
  std::vector<std::vector<double>> pts;
  pts.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) pts.emplace_back(cloud.point(i).begin(), cloud.point(i).end());
  std::mt19937_64 gen(0x5eedULL);
  std::shuffle(pts.begin(), pts.end(), gen);
  PointList list(pts.begin(), pts.end());
  std::vector<std::vector<double>> support;
  Ball ball = move_to_front(list, list.end(), support, d);
  // Re-measure so the containment invariant holds to rounding.
  double r = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) r = std::max(r, distance(cloud.point(i), ball.center));
  ball.radius = r;
  ball.eps = 0.0;
  return ball;
}

double diameter_lower_bound(const PointCloud& cloud) {
  if (cloud.size() < 2) throw DomainError("diameter_lower_bound: need at least two points");
  double dist = 0.0;
  const std::size_t p = farthest_from(cloud, cloud.point(0), dist);
  farthest_from(cloud, cloud.point(p), dist);
  return dist;
}

}  // namespace trajbound
